#include "peup/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "peup/parallel.hpp"

namespace peup::reports {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "length",     "grid_points",    "hbar",         "kind",      "n",
    "center",     "sigma",          "band_limit",   "coefficients", "count",
    "seed",       "profile_resolution", "restarts", "max_iterations", "tolerance",
    "denominator_floor", "oracle_samples", "oracle_margin", "output", "format"};

const std::set<std::string> kKinds = {"momentum_eigenstate", "wrapped_gaussian", "band_limited_random",
                                      "fourier_ansatz"};

template <class T>
T read_number(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  const auto& value = object.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!value.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string("'") + key + "' must be finite");
    return v;
  } else {
    if (!value.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (value.is_number_unsigned()) return value.get<T>();
      const auto v = value.get<long long>();
      if (v < 0) throw ConfigError(std::string("'") + key + "' must be nonnegative");
      return static_cast<T>(v);
    } else {
      const auto v = value.get<long long>();
      if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
        throw ConfigError(std::string("'") + key + "' is out of range");
      }
      return static_cast<T>(v);
    }
  }
}

std::string read_string(const json& object, const char* key, const std::string& fallback) {
  if (!object.contains(key)) return fallback;
  if (!object.at(key).is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return object.at(key).get<std::string>();
}

std::string bool_text(bool value) { return value ? "true" : "false"; }

// Minimal JSON emitter with fixed number formatting, so output is
// byte-stable across runs.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& name) {
    separator();
    out_ << quote(name) << ": ";
    pending_key_ = true;
    return *this;
  }
  JsonWriter& number(double value) { return raw(std::isfinite(value) ? format_number(value) : "null"); }
  JsonWriter& integer(long long value) { return raw(std::to_string(value)); }
  JsonWriter& unsigned_integer(std::uint64_t value) { return raw(std::to_string(value)); }
  JsonWriter& boolean(bool value) { return raw(bool_text(value)); }
  JsonWriter& string(const std::string& value) { return raw(quote(value)); }
  JsonWriter& pair(double re, double im) {
    separator();
    out_ << "[" << format_number(re) << ", " << format_number(im) << "]";
    return *this;
  }

  std::string str() const { return out_.str() + "\n"; }

 private:
  JsonWriter& open(char bracket) {
    separator();
    out_ << bracket;
    first_.push_back(true);
    return *this;
  }
  JsonWriter& close(char bracket) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ << bracket;
    return *this;
  }
  JsonWriter& raw(const std::string& text) {
    separator();
    out_ << text;
    return *this;
  }
  void separator() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (first_.empty()) return;
    if (!first_.back()) out_ << ",";
    first_.back() = false;
    newline();
  }
  void newline() {
    out_ << "\n";
    for (std::size_t i = 0; i < first_.size(); ++i) out_ << "  ";
  }
  static std::string quote(const std::string& text) {
    std::string quoted = "\"";
    for (char c : text) {
      if (c == '"' || c == '\\') quoted += '\\';
      quoted += c;
    }
    return quoted + "\"";
  }

  std::ostringstream out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

std::string csv_header_comments(const RunConfig& config, double length) {
  std::ostringstream out;
  out << "# length=" << format_number(length) << "\n";
  out << "# grid_points=" << config.grid_points << "\n";
  out << "# hbar=" << format_number(config.hbar) << "\n";
  out << "# kind=" << config.kind << "\n";
  out << "# seed=" << config.seed << "\n";
  return out.str();
}

void write_config_fields(JsonWriter& writer, const RunConfig& config, double length) {
  writer.key("length").number(length);
  writer.key("grid_points").integer(config.grid_points);
  writer.key("hbar").number(config.hbar);
  writer.key("kind").string(config.kind);
  writer.key("seed").unsigned_integer(config.seed);
}

const char* kReportColumns =
    "index,member_seed,delta_x,delta_x_sq,gamma_star,mean_p,delta_p,delta_p_sq,product,heisenberg_rhs,"
    "eup_factor,ratio,pointwise_min_margin,bound_violations,period_average_rel_error,minimum_converged,"
    "heisenberg_violated,saturated,aliasing_warning";

void report_csv_fields(std::ostringstream& out, std::size_t index, std::uint64_t seed, const UncertaintyReport& r) {
  out << index << "," << seed << "," << format_number(r.delta_x) << "," << format_number(r.delta_x_sq) << ","
      << format_number(r.gamma_star) << "," << format_number(r.mean_p) << "," << format_number(r.delta_p) << ","
      << format_number(r.delta_p_sq) << "," << format_number(r.product) << "," << format_number(r.heisenberg_rhs)
      << "," << format_number(r.eup_factor) << "," << (r.ratio ? format_number(*r.ratio) : "undefined") << ","
      << format_number(r.pointwise_min_margin) << "," << r.structural.bound_violations << ","
      << format_number(r.structural.period_average_rel_error) << "," << bool_text(r.minimum_converged) << ","
      << bool_text(r.heisenberg_violated) << "," << bool_text(r.saturated) << "," << bool_text(r.aliasing_warning);
}

void report_json_fields(JsonWriter& writer, std::size_t index, std::uint64_t seed, const UncertaintyReport& r) {
  writer.key("index").integer(static_cast<long long>(index));
  writer.key("member_seed").unsigned_integer(seed);
  writer.key("delta_x").number(r.delta_x);
  writer.key("delta_x_sq").number(r.delta_x_sq);
  writer.key("gamma_star").number(r.gamma_star);
  writer.key("mean_p").number(r.mean_p);
  writer.key("delta_p").number(r.delta_p);
  writer.key("delta_p_sq").number(r.delta_p_sq);
  writer.key("product").number(r.product);
  writer.key("heisenberg_rhs").number(r.heisenberg_rhs);
  writer.key("eup_factor").number(r.eup_factor);
  writer.key("ratio");
  if (r.ratio) {
    writer.number(*r.ratio);
  } else {
    writer.number(std::numeric_limits<double>::quiet_NaN());
  }
  writer.key("pointwise_min_margin").number(r.pointwise_min_margin);
  writer.key("bound_violations").integer(r.structural.bound_violations);
  writer.key("period_average_rel_error").number(r.structural.period_average_rel_error);
  writer.key("minimum_converged").boolean(r.minimum_converged);
  writer.key("heisenberg_violated").boolean(r.heisenberg_violated);
  writer.key("saturated").boolean(r.saturated);
  writer.key("aliasing_warning").boolean(r.aliasing_warning);
}

std::uint64_t seed_of_member(const RunConfig& config, std::size_t index) {
  return config.kind == "band_limited_random" ? member_seed(config.seed, index) : config.seed;
}

int resolution_for(const RunConfig& config) {
  return config.profile_resolution > 0 ? config.profile_resolution : config.grid_points;
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  return buffer;
}

RunConfig config_from_json(const json& object) {
  if (!object.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig config;
  if (object.contains("length")) config.length = read_number<double>(object, "length", 1.0);
  config.grid_points = read_number<int>(object, "grid_points", config.grid_points);
  config.hbar = read_number<double>(object, "hbar", config.hbar);
  config.kind = read_string(object, "kind", config.kind);
  config.n = read_number<int>(object, "n", config.n);
  config.center = read_number<double>(object, "center", config.center);
  config.sigma = read_number<double>(object, "sigma", config.sigma);
  config.band_limit = read_number<int>(object, "band_limit", config.band_limit);
  if (object.contains("coefficients")) {
    const auto& list = object.at("coefficients");
    if (!list.is_array()) throw ConfigError("'coefficients' must be an array of [re, im] pairs");
    for (const auto& entry : list) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw ConfigError("'coefficients' entries must be [re, im] number pairs");
      }
      config.coefficients.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  config.count = read_number<int>(object, "count", config.count);
  config.seed = read_number<std::uint64_t>(object, "seed", config.seed);
  config.profile_resolution = read_number<int>(object, "profile_resolution", config.profile_resolution);
  config.restarts = read_number<int>(object, "restarts", config.restarts);
  config.max_iterations = read_number<int>(object, "max_iterations", config.max_iterations);
  config.tolerance = read_number<double>(object, "tolerance", config.tolerance);
  config.denominator_floor = read_number<double>(object, "denominator_floor", config.denominator_floor);
  config.oracle_samples = read_number<long long>(object, "oracle_samples", config.oracle_samples);
  config.oracle_margin = read_number<double>(object, "oracle_margin", config.oracle_margin);
  config.output = read_string(object, "output", config.output);
  config.format = read_string(object, "format", config.format);

  if (!kKinds.contains(config.kind)) throw ConfigError("unknown state kind '" + config.kind + "'");
  if (config.format != "" && config.format != "csv" && config.format != "json") {
    throw ConfigError("format must be csv or json");
  }
  if (config.count < 1) throw ConfigError("count must be >= 1");
  if (config.oracle_samples < 0) throw ConfigError("oracle_samples must be >= 0");
  if (!(config.oracle_margin >= 0.0)) throw ConfigError("oracle_margin must be >= 0");
  if (config.profile_resolution != 0 && config.profile_resolution < config.grid_points) {
    throw ConfigError("profile_resolution must be 0 or >= grid_points");
  }
  try {
    const auto domain = make_domain(config);
    if (config.restarts < 1) throw ConfigError("restarts must be >= 1");
    if (config.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(config.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(config.denominator_floor > 0.0)) throw ConfigError("denominator_floor must be positive");
    if (config.kind == "wrapped_gaussian" && !(config.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (config.kind == "band_limited_random" && config.band_limit > domain.grid_points() / 4) {
      throw ConfigError("band_limit must be <= grid_points / 4");
    }
    if (config.kind == "momentum_eigenstate" && std::abs(config.n) > domain.grid_points() / 4) {
      throw ConfigError("|n| must be <= grid_points / 4");
    }
    if (config.kind == "fourier_ansatz") {
      if (config.coefficients.size() % 2 == 0) throw ConfigError("fourier_ansatz needs 2m + 1 coefficients");
      if (static_cast<int>(config.coefficients.size() / 2) > domain.grid_points() / 4) {
        throw ConfigError("fourier_ansatz band exceeds grid_points / 4");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

json config_to_json(const RunConfig& config) {
  json object;
  if (config.length) object["length"] = *config.length;
  object["grid_points"] = config.grid_points;
  object["hbar"] = config.hbar;
  object["kind"] = config.kind;
  object["n"] = config.n;
  object["center"] = config.center;
  object["sigma"] = config.sigma;
  object["band_limit"] = config.band_limit;
  if (!config.coefficients.empty()) {
    json list = json::array();
    for (const auto& c : config.coefficients) list.push_back({c.real(), c.imag()});
    object["coefficients"] = list;
  }
  object["count"] = config.count;
  object["seed"] = config.seed;
  object["profile_resolution"] = config.profile_resolution;
  object["restarts"] = config.restarts;
  object["max_iterations"] = config.max_iterations;
  object["tolerance"] = config.tolerance;
  object["denominator_floor"] = config.denominator_floor;
  object["oracle_samples"] = config.oracle_samples;
  object["oracle_margin"] = config.oracle_margin;
  if (!config.output.empty()) object["output"] = config.output;
  if (!config.format.empty()) object["format"] = config.format;
  return object;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json object;
  try {
    in >> object;
  } catch (const json::exception& e) {
    throw ConfigError("malformed config '" + path + "': " + e.what());
  }
  return config_from_json(object);
}

PeriodicDomain make_domain(const RunConfig& config, double default_length) {
  return PeriodicDomain(config.length.value_or(default_length), config.grid_points, config.hbar);
}

EnsembleSpec make_ensemble(const RunConfig& config) {
  EnsembleSpec spec;
  spec.count = config.count;
  spec.seed = config.seed;
  if (config.kind == "momentum_eigenstate") {
    spec.kind = MomentumEigenstate{config.n};
  } else if (config.kind == "wrapped_gaussian") {
    spec.kind = WrappedGaussian{config.center, config.sigma};
  } else if (config.kind == "band_limited_random") {
    spec.kind = BandLimitedRandom{config.band_limit};
  } else if (config.kind == "fourier_ansatz") {
    spec.kind = FourierAnsatz{config.coefficients};
  } else {
    throw ConfigError("unknown state kind '" + config.kind + "'");
  }
  return spec;
}

SearchConfig make_search_config(const RunConfig& config) {
  SearchConfig search;
  search.band_limit = config.band_limit;
  search.restarts = config.restarts;
  search.max_iterations = config.max_iterations;
  search.tolerance = config.tolerance;
  search.denominator_floor = config.denominator_floor;
  search.seed = config.seed;
  return search;
}

std::string verify_csv(const RunConfig& config, const std::vector<VerifyRow>& rows) {
  std::ostringstream out;
  out << csv_header_comments(config, rows.empty() ? config.length.value_or(1.0) : rows.front().report.length);
  out << kReportColumns << "\n";
  for (const auto& row : rows) {
    report_csv_fields(out, row.index, row.member_seed, row.report);
    out << "\n";
  }
  return out.str();
}

std::string verify_json(const RunConfig& config, const std::vector<VerifyRow>& rows) {
  JsonWriter writer;
  writer.begin_object();
  write_config_fields(writer, config, rows.empty() ? config.length.value_or(1.0) : rows.front().report.length);
  writer.key("rows").begin_array();
  for (const auto& row : rows) {
    writer.begin_object();
    report_json_fields(writer, row.index, row.member_seed, row.report);
    writer.end_object();
  }
  writer.end_array();
  writer.end_object();
  return writer.str();
}

std::string angular_csv(const RunConfig& config, const std::vector<AngularRow>& rows) {
  std::ostringstream out;
  out << csv_header_comments(config, 2.0 * std::numbers::pi);
  out << kReportColumns << ",delta_phi,delta_lz,eta,judge_rhs,judge_margin\n";
  for (const auto& row : rows) {
    report_csv_fields(out, row.index, row.member_seed, row.report.base);
    out << "," << format_number(row.report.delta_phi) << "," << format_number(row.report.delta_lz) << ","
        << format_number(row.report.eta) << "," << format_number(row.report.judge_rhs) << ","
        << format_number(row.report.judge_margin) << "\n";
  }
  return out.str();
}

std::string angular_json(const RunConfig& config, const std::vector<AngularRow>& rows) {
  JsonWriter writer;
  writer.begin_object();
  write_config_fields(writer, config, 2.0 * std::numbers::pi);
  writer.key("rows").begin_array();
  for (const auto& row : rows) {
    writer.begin_object();
    report_json_fields(writer, row.index, row.member_seed, row.report.base);
    writer.key("delta_phi").number(row.report.delta_phi);
    writer.key("delta_lz").number(row.report.delta_lz);
    writer.key("eta").number(row.report.eta);
    writer.key("judge_rhs").number(row.report.judge_rhs);
    writer.key("judge_margin").number(row.report.judge_margin);
    writer.end_object();
  }
  writer.end_array();
  writer.end_object();
  return writer.str();
}

std::string profile_csv(const RunConfig& config, const VarianceProfile& profile) {
  std::ostringstream out;
  out << csv_header_comments(config, profile.length);
  out << "# gamma_star=" << format_number(profile.gamma_star) << "\n";
  out << "# delta_x_sq=" << format_number(profile.delta_x_sq) << "\n";
  out << "# minimum_converged=" << bool_text(profile.converged) << "\n";
  out << "gamma,V,Vp,Vpp\n";
  for (std::size_t i = 0; i < profile.gamma.size(); ++i) {
    out << format_number(profile.gamma[i]) << "," << format_number(profile.V[i]) << ","
        << format_number(profile.Vp[i]) << "," << format_number(profile.Vpp[i]) << "\n";
  }
  return out.str();
}

std::string profile_json(const RunConfig& config, const VarianceProfile& profile) {
  JsonWriter writer;
  writer.begin_object();
  write_config_fields(writer, config, profile.length);
  writer.key("gamma_star").number(profile.gamma_star);
  writer.key("delta_x_sq").number(profile.delta_x_sq);
  writer.key("minimum_converged").boolean(profile.converged);
  const std::pair<const char*, const std::vector<double>*> columns[] = {
      {"gamma", &profile.gamma}, {"V", &profile.V}, {"Vp", &profile.Vp}, {"Vpp", &profile.Vpp}};
  for (const auto& [name, values] : columns) {
    writer.key(name).begin_array();
    for (double v : *values) writer.number(v);
    writer.end_array();
  }
  writer.end_object();
  return writer.str();
}

std::string extremal_json(const ExtremalReport& report) {
  const auto& result = report.result;
  JsonWriter writer;
  writer.begin_object();
  writer.key("success").boolean(result.success);
  writer.key("nu_star").number(result.nu_star);
  writer.key("band_limit").integer(report.search.band_limit);
  writer.key("extremal_coefficients").begin_array();
  for (const auto& c : result.extremal_coefficients) writer.pair(c.real(), c.imag());
  writer.end_array();
  writer.key("trace").begin_array();
  for (double v : result.trace) writer.number(v);
  writer.end_array();
  writer.key("diagnostics").begin_object();
  writer.key("evaluations").integer(result.evaluations);
  writer.key("floor_exclusions").integer(result.floor_exclusions);
  writer.key("denominator_floor").number(report.search.denominator_floor);
  writer.key("extremal_denominator").number(result.extremal_denominator);
  writer.key("nu_above_10x_floor").number(result.nu_above_10x_floor);
  writer.key("restarts").integer(report.search.restarts);
  writer.key("seed").unsigned_integer(report.search.seed);
  writer.end_object();
  writer.key("reevaluated_ratio").number(report.reevaluated_ratio);
  writer.key("reevaluation_error").number(std::abs(report.reevaluated_ratio - result.nu_star));
  if (report.oracle) {
    writer.key("oracle").begin_object();
    writer.key("samples").integer(report.oracle_samples);
    writer.key("threshold").number(report.oracle_threshold);
    writer.key("best_ratio").number(report.oracle->best_ratio);
    writer.key("admissible").integer(report.oracle->admissible);
    writer.key("excluded").integer(report.oracle->excluded);
    writer.key("below_threshold").integer(report.oracle->below_threshold);
    writer.end_object();
  }
  writer.key("comparison").begin_object();
  writer.key("order_unity").boolean(report.comparison.consistent_with_order_unity);
  writer.key("judge_eta_0_15").boolean(report.comparison.consistent_with_judge_eta);
  writer.key("statement").string(report.comparison.statement);
  writer.end_object();
  writer.end_object();
  return writer.str();
}

std::vector<VerifyRow> run_verify(const RunConfig& config) {
  const auto domain = make_domain(config);
  const auto states = make_state(make_ensemble(config), domain);
  std::vector<VerifyRow> rows(states.size());
  const int resolution = resolution_for(config);
  parallel_for(states.size(), [&](std::size_t i) {
    rows[i].index = i;
    rows[i].member_seed = seed_of_member(config, i);
    rows[i].report = make_report(states[i], resolution);
  });
  return rows;
}

std::vector<AngularRow> run_angular(const RunConfig& config) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (config.length && std::abs(*config.length - two_pi) > 1e-12 * two_pi) {
    throw ConfigError("angular subcommand needs length = 2 pi");
  }
  const auto domain = make_domain(config, two_pi);
  const auto states = make_state(make_ensemble(config), domain);
  std::vector<AngularRow> rows(states.size());
  const int resolution = resolution_for(config);
  parallel_for(states.size(), [&](std::size_t i) {
    rows[i].index = i;
    rows[i].member_seed = seed_of_member(config, i);
    rows[i].report = angular_case_report(states[i], kJudgeEta, resolution);
  });
  return rows;
}

ExtremalReport run_extremal(const RunConfig& config) {
  const auto domain = make_domain(config);
  ExtremalReport report;
  report.search = make_search_config(config);
  try {
    report.search.validate(domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  report.result = search(domain, report.search);
  if (!report.result.success) return report;
  report.reevaluated_ratio = reevaluate(report.result, domain, report.search);
  report.comparison = compare_with_reported_constants(report.result.nu_star);
  if (config.oracle_samples > 0) {
    report.oracle_samples = config.oracle_samples;
    report.oracle_threshold = report.result.nu_star - config.oracle_margin;
    report.oracle = random_search_oracle(domain, report.search, config.oracle_samples,
                                         member_seed(config.seed, 0xC0FFEE), report.oracle_threshold);
  }
  return report;
}

}  // namespace peup::reports
