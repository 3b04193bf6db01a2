#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kantorovich/errors.hpp"
#include "kantorovich/experiment.hpp"

namespace kantorovich {

/// Bad command line: unknown flag, malformed value or invalid selector. Exit status 2.
class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// --help was given; carries the formatted help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("invalid number '" + s + "' for " + what);
  }
}

inline long long parse_integer(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("invalid integer '" + s + "' for " + what);
  }
}

inline std::vector<double> parse_real_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_real(part, what));
  if (out.empty()) throw UsageError("empty list for " + what);
  return out;
}

inline GridSpec parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("--grid expects a:b:n, got '" + s + "'");
  GridSpec g{parse_real(parts[0], "--grid"), parse_real(parts[1], "--grid"),
             static_cast<int>(parse_integer(parts[2], "--grid"))};
  if (!(g.a < g.b)) throw UsageError("--grid requires a < b, got '" + s + "'");
  if (g.n < 2) throw UsageError("--grid requires n >= 2, got '" + s + "'");
  return g;
}

inline Window parse_window(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw UsageError("--window expects a:b, got '" + s + "'");
  Window w{parse_real(parts[0], "--window"), parse_real(parts[1], "--window")};
  if (!(w.a < w.b)) throw UsageError("--window requires a < b, got '" + s + "'");
  return w;
}

inline Truncation parse_truncation(const std::string& s) {
  if (s == "exact") return ExactSupport{};
  if (s.rfind("K=", 0) == 0) {
    const long long K = parse_integer(s.substr(2), "--trunc");
    if (K < 1) throw UsageError("--trunc K must be >= 1");
    return HalfWidth{K};
  }
  throw UsageError("--trunc expects 'exact' or 'K=<int>', got '" + s + "'");
}

inline OperatorKind parse_operator(const std::string& s) {
  if (s == "generalized") return OperatorKind::Generalized;
  if (s == "kantorovich") return OperatorKind::Kantorovich;
  if (s == "modified") return OperatorKind::Modified;
  throw UsageError("unknown operator '" + s + "' (valid: generalized, kantorovich, modified)");
}

// Values as strings, whichever source they came from.
struct RawOptions {
  std::optional<std::string> kernel, signals, operators, w, alpha, grid, trunc, metrics, window, out, beta,
      grid_density;
};

inline std::string json_to_option(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_real(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ',';
      out += json_to_option(v[k]);
    }
    return out;
  }
  throw UsageError("config file: unsupported value " + v.dump());
}

// Fields of the JSON config use the ExperimentConfig names.
inline RawOptions read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + path + "': expected an object");
  RawOptions raw;
  for (const auto& [key, value] : doc.items()) {
    if (key == "kernel") raw.kernel = json_to_option(value);
    else if (key == "signals") raw.signals = json_to_option(value);
    else if (key == "operators") raw.operators = json_to_option(value);
    else if (key == "w_list") raw.w = json_to_option(value);
    else if (key == "alpha") raw.alpha = json_to_option(value);
    else if (key == "grid") {
      if (value.is_object()) {
        raw.grid = json_to_option(value.at("a")) + ":" + json_to_option(value.at("b")) + ":" +
                   json_to_option(value.at("n"));
      } else {
        raw.grid = json_to_option(value);
      }
    } else if (key == "truncation") raw.trunc = json_to_option(value);
    else if (key == "metrics") raw.metrics = json_to_option(value);
    else if (key == "window") {
      if (value.is_array() && value.size() == 2) {
        raw.window = json_to_option(value[0]) + ":" + json_to_option(value[1]);
      } else {
        raw.window = json_to_option(value);
      }
    } else if (key == "output_path") raw.out = json_to_option(value);
    else if (key == "betas") raw.beta = json_to_option(value);
    else if (key == "grid_density") raw.grid_density = json_to_option(value);
    else throw UsageError("config file '" + path + "': unknown field '" + key + "'");
  }
  return raw;
}

inline void apply(ExperimentConfig& config, const RawOptions& raw) {
  if (raw.kernel) {
    try {
      (void)make_kernel(*raw.kernel);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    config.kernel = *raw.kernel;
  }
  if (raw.signals) {
    config.signals = split(*raw.signals, ',');
    for (const std::string& s : config.signals) {
      if (s != "f1" && s != "f2" && (s.size() < 2 || s[0] != '@')) {
        throw UsageError("invalid signal '" + s + "' (valid: f1 | f2 | @file)");
      }
    }
  }
  if (raw.operators) {
    config.operators.clear();
    for (const std::string& s : split(*raw.operators, ',')) config.operators.push_back(parse_operator(s));
  }
  if (raw.w) {
    config.w_list = parse_real_list(*raw.w, "--w");
    for (double w : config.w_list) {
      if (!(w > 0.0)) throw UsageError("--w values must be positive");
    }
  }
  if (raw.alpha) {
    config.alpha = parse_real(*raw.alpha, "--alpha");
    if (!(config.alpha > 0.0)) throw UsageError("--alpha must be positive");
  }
  if (raw.grid) config.grid = parse_grid(*raw.grid);
  if (raw.trunc) config.truncation = parse_truncation(*raw.trunc);
  if (raw.metrics) {
    config.metrics = split(*raw.metrics, ',');
    for (const std::string& m : config.metrics) {
      if (m != "sup" && m != "sup_cont" && m != "l1" && m != "l2" && m != "llogl" && m != "exp") {
        throw UsageError("unknown metric '" + m + "' (valid: " + std::string(kMetricNames) + ")");
      }
    }
  }
  if (raw.window) config.window = parse_window(*raw.window);
  if (raw.out) config.output_path = *raw.out;
  if (raw.beta) {
    config.betas = parse_real_list(*raw.beta, "--beta");
    for (double b : config.betas) {
      if (!(b > 0.0)) throw UsageError("--beta values must be positive");
    }
  }
  if (raw.grid_density) {
    const long long d = parse_integer(*raw.grid_density, "--grid-density");
    if (d < 1) throw UsageError("--grid-density must be >= 1");
    config.grid_density = static_cast<int>(d);
  }
}

}  // namespace detail

/// Parses `<prog> compare|converge|diagnose [flags]`. Values from --config are
/// applied first; flags given on the command line take precedence.
inline ExperimentConfig parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"Sampling Kantorovich operator experiments"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help", "Show help");

  detail::RawOptions cli;
  std::string config_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--kernel", cli.kernel, std::string("Kernel: ") + std::string(kKernelSelectors));
    sub->add_option("--w", cli.w, "Comma-separated sampling rates");
    sub->add_option("--trunc", cli.trunc, "Truncation: exact | K=<int>");
    sub->add_option("--out", cli.out, "Output CSV path");
    sub->add_option("--config", config_path, "JSON config file (command line wins)");
  };
  const auto add_series = [&](CLI::App* sub) {
    sub->add_option("--signal", cli.signals, "Comma-separated signals: f1 | f2 | @file");
    sub->add_option("--operators", cli.operators, "Comma-separated: generalized, kantorovich, modified");
    sub->add_option("--alpha", cli.alpha, "Warp exponent of the modified operator (default 0.5)");
    sub->add_option("--grid", cli.grid, "Evaluation grid a:b:n");
    sub->add_option("--metrics", cli.metrics, std::string("Comma-separated metrics: ") + std::string(kMetricNames));
    sub->add_option("--window", cli.window, "Metric window a:b (default: grid range)");
  };

  CLI::App* compare = app.add_subcommand("compare", "Evaluate operators on a grid and write pointwise CSVs");
  add_common(compare);
  add_series(compare);
  CLI::App* converge = app.add_subcommand("converge", "Error metrics as a function of w");
  add_common(converge);
  add_series(converge);
  CLI::App* diagnose = app.add_subcommand("diagnose", "Kernel admissibility diagnostics");
  add_common(diagnose);
  diagnose->add_option("--beta", cli.beta, "Comma-separated moment exponents");
  diagnose->add_option("--grid-density", cli.grid_density, "Points in [0, 1) for the suprema");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig config;
  if (compare->parsed()) {
    config.command = Command::Compare;
  } else if (converge->parsed()) {
    config.command = Command::Converge;
    config.w_list = {5.0, 10.0, 20.0, 40.0};
    config.metrics = {"sup", "l1"};
  } else {
    config.command = Command::Diagnose;
    config.kernel = "fejer";
    config.w_list = {5.0, 10.0, 20.0, 40.0};
    config.output_path = "diagnostics.csv";
  }
  if (!config_path.empty()) detail::apply(config, detail::read_config_file(config_path));
  detail::apply(config, cli);
  if (config.truncation && std::holds_alternative<ExactSupport>(*config.truncation) &&
      !make_kernel(config.kernel).compact()) {
    throw UsageError("--trunc exact needs a compactly supported kernel, got " + config.kernel);
  }
  return config;
}

inline ExperimentConfig parse_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return parse_cli(args);
}

}  // namespace kantorovich
