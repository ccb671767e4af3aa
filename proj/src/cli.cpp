#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "peup/reports.hpp"

namespace peup::reports {
namespace {

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing output file '" + path + "'");
}

std::string format_or(const RunConfig& config, const char* fallback) {
  return config.format.empty() ? fallback : config.format;
}

template <class Row>
int report_violations(const std::vector<Row>& rows, std::ostream& err, auto&& report_of) {
  int violations = 0;
  for (const auto& row : rows) {
    const auto& report = report_of(row);
    if (!report.exact_bounds_ok()) {
      ++violations;
      err << "bound violation: member " << row.index << " (seed " << row.member_seed
          << "): pointwise margin " << format_number(report.pointwise_min_margin) << ", structural violations "
          << report.structural.bound_violations << ", period-average error "
          << format_number(report.structural.period_average_rel_error) << "\n";
    }
  }
  return violations;
}

int dispatch(const std::string& command, RunConfig config, std::ostream& out, std::ostream& err) {
  if (command == "verify") {
    const auto rows = run_verify(config);
    const auto format = format_or(config, "csv");
    write_output(config.output, format == "json" ? verify_json(config, rows) : verify_csv(config, rows), out);
    return report_violations(rows, err, [](const VerifyRow& r) -> const UncertaintyReport& { return r.report; }) == 0
               ? kSuccess
               : kBoundViolation;
  }
  if (command == "angular") {
    const auto rows = run_angular(config);
    const auto format = format_or(config, "csv");
    write_output(config.output, format == "json" ? angular_json(config, rows) : angular_csv(config, rows), out);
    return report_violations(rows, err,
                             [](const AngularRow& r) -> const UncertaintyReport& { return r.report.base; }) == 0
               ? kSuccess
               : kBoundViolation;
  }
  if (command == "profile") {
    if (config.count != 1) throw ConfigError("profile needs a single-state payload (count = 1)");
    const auto domain = make_domain(config);
    const auto state = make_state(make_ensemble(config), domain).front();
    const int resolution = config.profile_resolution > 0 ? config.profile_resolution : config.grid_points;
    const auto profile = minimize_V(state, resolution);
    const auto format = format_or(config, "csv");
    write_output(config.output, format == "json" ? profile_json(config, profile) : profile_csv(config, profile), out);
    if (!profile.converged) err << "warning: degenerate minimum, best scan point reported\n";
    return kSuccess;
  }
  // extremal
  if (format_or(config, "json") != "json") throw ConfigError("extremal writes JSON only");
  const auto report = run_extremal(config);
  write_output(config.output, extremal_json(report), out);
  if (!report.result.success) {
    err << "search failure: every restart stayed below the denominator floor\n";
    return kSearchFailure;
  }
  int status = kSuccess;
  if (std::abs(report.reevaluated_ratio - report.result.nu_star) > 1e-8) {
    err << "re-evaluation mismatch: " << format_number(report.reevaluated_ratio) << " vs nu* "
        << format_number(report.result.nu_star) << "\n";
    status = kBoundViolation;
  }
  if (report.oracle && report.oracle->below_threshold > 0) {
    err << "random oracle found " << report.oracle->below_threshold << " admissible states below nu* - margin\n";
    status = kBoundViolation;
  }
  return status;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Judge-variance uncertainty relations on a periodic domain"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"verify", "profile", "extremal", "angular"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_path, "output file (stdout when omitted)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "overrides the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    auto config = load_config(config_path);
    if (!out_path.empty()) config.output = out_path;
    if (!format.empty()) config.format = format;
    if (seed) config.seed = *seed;
    return dispatch(command, std::move(config), out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace peup::reports
