#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kantorovich/errors.hpp"
#include "kantorovich/kernels.hpp"
#include "kantorovich/operators.hpp"
#include "kantorovich/orlicz.hpp"
#include "kantorovich/signal_file.hpp"
#include "kantorovich/signals.hpp"

namespace kantorovich {

enum class Command { Compare, Converge, Diagnose };

inline constexpr std::string_view kKernelSelectors = "fejer | jackson:<n>[:<stretch>] | bspline:<n>";
inline constexpr std::string_view kMetricNames = "sup, sup_cont, l1, l2, llogl, exp";

/// Scales at which the llogl and exp modular errors are reported.
inline constexpr double kModularLambdas[] = {0.1, 0.5, 1.0};

struct ExperimentConfig {
  Command command = Command::Compare;
  std::string kernel = "bspline:3";
  std::vector<std::string> signals{"f1"};  // f1 | f2 | @path
  std::vector<OperatorKind> operators{OperatorKind::Kantorovich, OperatorKind::Modified};
  std::vector<double> w_list{5.0};
  double alpha = 0.5;
  GridSpec grid{-3.0, 3.0, 601};
  std::optional<Truncation> truncation;  // unset: exact for compact kernels, K = 1000 otherwise
  std::vector<std::string> metrics{"sup", "l1", "l2"};
  std::optional<Window> window;  // unset: the grid range
  std::string output_path = "results.csv";
  // diagnose
  std::vector<double> betas{0.5, 1.0, 2.0};
  int grid_density = 1000;
  // sup_cont excludes grid points closer than this to a breakpoint of g
  double continuity_radius = 0.25;
};

struct ResultRow {
  std::string signal;
  std::string kernel;
  std::string op;
  double w = 0.0;
  double alpha = 0.0;
  std::string metric;
  double value = 0.0;
};

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Compact %g form for labels such as "beta=0.5".
inline std::string format_label(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

inline KernelSpec make_kernel(const std::string& selector) {
  const auto fail = [&]() -> KernelSpec {
    throw ConfigError("invalid kernel selector '" + selector + "' (valid: " + std::string(kKernelSelectors) + ")");
  };
  std::vector<std::string> parts;
  std::stringstream ss(selector);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty()) return fail();
  try {
    std::size_t used = 0;
    if (parts[0] == "fejer" && parts.size() == 1) return KernelSpec::fejer();
    if (parts[0] == "bspline" && parts.size() == 2) {
      const int n = std::stoi(parts[1], &used);
      if (used != parts[1].size()) return fail();
      return KernelSpec::bspline(n);
    }
    if (parts[0] == "jackson" && (parts.size() == 2 || parts.size() == 3)) {
      const int n = std::stoi(parts[1], &used);
      if (used != parts[1].size()) return fail();
      double stretch = 1.0;
      if (parts.size() == 3) {
        stretch = std::stod(parts[2], &used);
        if (used != parts[2].size()) return fail();
      }
      return KernelSpec::jackson(n, stretch);
    }
  } catch (const std::logic_error&) {
    return fail();
  }
  return fail();
}

/// A resolved input signal and the label used in file names and rows.
struct NamedSignal {
  std::string label;
  PiecewiseSignal signal;
};

inline NamedSignal resolve_signal(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') {
    PiecewiseSignal s = load_signal_file(spec.substr(1));
    std::string label = s.name().empty() ? "signal" : s.name();
    return {label, std::move(s)};
  }
  return {spec, builtin_signal(spec)};
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "signal,kernel,operator,w,alpha,metric,value\n";
  for (const ResultRow& r : rows) {
    out << r.signal << ',' << r.kernel << ',' << r.op << ',' << format_real(r.w) << ',' << format_real(r.alpha)
        << ',' << r.metric << ',' << format_real(r.value) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

namespace detail {

inline void validate_config(const ExperimentConfig& config) {
  if (config.signals.empty()) throw ConfigError("config: no signals");
  if (config.operators.empty()) throw ConfigError("config: no operators");
  if (config.w_list.empty()) throw ConfigError("config: empty w list");
  for (double w : config.w_list) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("config: w values must be positive");
  }
  if (!(config.alpha > 0.0)) throw ConfigError("config: alpha must be positive");
  config.grid.validate();
  if (config.window && !(config.window->a < config.window->b)) throw ConfigError("config: window requires a < b");
  for (const std::string& m : config.metrics) {
    if (m != "sup" && m != "sup_cont" && m != "l1" && m != "l2" && m != "llogl" && m != "exp") {
      throw ConfigError("config: unknown metric '" + m + "' (valid: " + std::string(kMetricNames) + ")");
    }
  }
}

inline OperatorParams make_params(const KernelSpec& kernel, const ExperimentConfig& config, OperatorKind kind,
                                  double w) {
  OperatorParams p;
  p.kind = kind;
  p.w = w;
  p.alpha = config.alpha;
  p.truncation = config.truncation.value_or(default_truncation(kernel));
  p.validate(kernel);
  return p;
}

inline bool has_metric(const ExperimentConfig& config, std::string_view m) {
  return std::find(config.metrics.begin(), config.metrics.end(), m) != config.metrics.end();
}

// Metric rows of one approximation, restricted to the configured window.
inline std::vector<std::pair<std::string, double>> metric_values(const ExperimentConfig& config,
                                                                 const PiecewiseSignal& reference,
                                                                 const std::vector<GridValue>& values) {
  std::vector<GridValue> inside;
  const Window win = config.window.value_or(Window{config.grid.a, config.grid.b});
  for (const GridValue& v : values) {
    if (v.y >= win.a && v.y <= win.b) inside.push_back(v);
  }
  if (inside.empty()) throw ConfigError("config: metric window contains no grid points");

  MetricRequest req;
  req.sup = has_metric(config, "sup");
  if (has_metric(config, "l1")) req.p_values.push_back(1.0);
  if (has_metric(config, "l2")) req.p_values.push_back(2.0);
  if (has_metric(config, "llogl")) {
    for (double lam : kModularLambdas) req.modulars.push_back({EtaFunction::log_power(1.0, 1.0), lam});
  }
  if (has_metric(config, "exp")) {
    for (double lam : kModularLambdas) req.modulars.push_back({EtaFunction::exponential(1.0), lam});
  }
  if (has_metric(config, "sup_cont")) req.continuity_radius = config.continuity_radius;
  const ErrorReport report = error_metrics(reference, inside, req);

  std::vector<std::pair<std::string, double>> out;
  for (const std::string& m : config.metrics) {
    if (m == "sup") out.emplace_back("sup", report.sup_error);
    if (m == "sup_cont") out.emplace_back("sup_cont", *report.sup_continuity_error);
    if (m == "l1") out.emplace_back("l1", report.lp_errors.at(1.0));
    if (m == "l2") out.emplace_back("l2", report.lp_errors.at(2.0));
    if (m == "llogl" || m == "exp") {
      const std::string prefix = m == "llogl" ? "logpower" : "exp";
      for (const ModularError& e : report.modular_errors) {
        if (e.eta.rfind(prefix, 0) == 0) out.emplace_back(m + "@" + format_real(e.lambda), e.value);
      }
    }
  }
  return out;
}

inline std::string pointwise_path(const std::string& out_path, const std::string& signal, double w) {
  std::string dir;
  std::string stem = out_path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    dir = stem.substr(0, slash + 1);
    stem = stem.substr(slash + 1);
  }
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  char wbuf[40];
  std::snprintf(wbuf, sizeof wbuf, "%g", w);
  return dir + stem + "." + signal + ".w" + wbuf + ".csv";
}

inline std::string_view column_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Generalized: return "tchi_w";
    case OperatorKind::Kantorovich: return "s_w";
    case OperatorKind::Modified: return "t_w";
  }
  return "?";
}

inline std::string_view error_column_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Generalized: return "abs_err_tchi";
    case OperatorKind::Kantorovich: return "abs_err_s";
    case OperatorKind::Modified: return "abs_err_t";
  }
  return "?";
}

// Operators in canonical column order regardless of the order requested.
inline std::vector<OperatorKind> ordered_operators(const std::vector<OperatorKind>& requested) {
  std::vector<OperatorKind> out;
  for (OperatorKind k : {OperatorKind::Generalized, OperatorKind::Kantorovich, OperatorKind::Modified}) {
    if (std::find(requested.begin(), requested.end(), k) != requested.end()) out.push_back(k);
  }
  return out;
}

}  // namespace detail

struct CompareResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> pointwise_files;
};

/// Evaluates the requested operators for every (signal, w) pair, writes one
/// pointwise CSV per pair next to the output path and the metric rows to the
/// output path itself.
inline CompareResult run_compare(const ExperimentConfig& config) {
  detail::validate_config(config);
  const KernelSpec kernel = make_kernel(config.kernel);
  const std::vector<OperatorKind> ops = detail::ordered_operators(config.operators);
  CompareResult result;

  for (const std::string& spec : config.signals) {
    const NamedSignal named = resolve_signal(spec);
    for (double w : config.w_list) {
      std::vector<std::vector<GridValue>> columns;
      for (OperatorKind kind : ops) {
        columns.push_back(eval_on_grid(kernel, named.signal, detail::make_params(kernel, config, kind, w), config.grid));
      }

      const std::string path = detail::pointwise_path(config.output_path, named.label, w);
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot write '" + path + "'");
      out << "y,g";
      for (OperatorKind kind : ops) out << ',' << detail::column_name(kind);
      for (OperatorKind kind : ops) out << ',' << detail::error_column_name(kind);
      out << '\n';
      for (int k = 0; k < config.grid.n; ++k) {
        const double y = columns.front()[k].y;
        const double g = named.signal(y);
        out << format_real(y) << ',' << format_real(g);
        for (const auto& col : columns) out << ',' << format_real(col[k].value);
        for (const auto& col : columns) out << ',' << format_real(std::abs(col[k].value - g));
        out << '\n';
      }
      if (!out) throw IoError("write failed for '" + path + "'");
      result.pointwise_files.push_back(path);

      for (std::size_t j = 0; j < ops.size(); ++j) {
        for (const auto& [metric, value] : detail::metric_values(config, named.signal, columns[j])) {
          result.rows.push_back({named.label, kernel.name(), std::string(operator_name(ops[j])), w, config.alpha,
                                 metric, value});
        }
      }
    }
  }
  emit_csv(result.rows, config.output_path);
  return result;
}

/// Metric-vs-w table for every (signal, operator, metric) series, followed by
/// a "<metric>:monotone_decay" row (1 when strictly decreasing in w, or when
/// every value is below 1e-12).
inline std::vector<ResultRow> run_convergence(const ExperimentConfig& config) {
  detail::validate_config(config);
  if (config.w_list.size() < 3) throw ConfigError("converge: needs at least three w values");
  if (!std::is_sorted(config.w_list.begin(), config.w_list.end()) ||
      std::adjacent_find(config.w_list.begin(), config.w_list.end()) != config.w_list.end()) {
    throw ConfigError("converge: w values must be strictly increasing");
  }
  const KernelSpec kernel = make_kernel(config.kernel);
  std::vector<ResultRow> rows;

  for (const std::string& spec : config.signals) {
    const NamedSignal named = resolve_signal(spec);
    for (OperatorKind kind : detail::ordered_operators(config.operators)) {
      std::vector<std::vector<std::pair<std::string, double>>> per_w;
      for (double w : config.w_list) {
        const auto values = eval_on_grid(kernel, named.signal, detail::make_params(kernel, config, kind, w), config.grid);
        per_w.push_back(detail::metric_values(config, named.signal, values));
        for (const auto& [metric, value] : per_w.back()) {
          rows.push_back({named.label, kernel.name(), std::string(operator_name(kind)), w, config.alpha, metric, value});
        }
      }
      for (std::size_t m = 0; m < per_w.front().size(); ++m) {
        bool decreasing = true;
        bool negligible = true;
        for (std::size_t k = 0; k < per_w.size(); ++k) {
          negligible = negligible && per_w[k][m].second <= 1e-12;
          if (k > 0 && !(per_w[k][m].second < per_w[k - 1][m].second)) decreasing = false;
        }
        rows.push_back({named.label, kernel.name(), std::string(operator_name(kind)), config.w_list.back(),
                        config.alpha, per_w.front()[m].first + ":monotone_decay",
                        (decreasing || negligible) ? 1.0 : 0.0});
      }
    }
  }
  emit_csv(rows, config.output_path);
  return rows;
}

struct DiagnosticRow {
  std::string quantity;
  std::string parameter;
  double value = 0.0;
};

struct DiagnoseReport {
  std::string kernel;
  std::vector<DiagnosticRow> rows;
  std::string text;
};

inline constexpr double kTailProbePoint = 0.3;
inline constexpr double kTailProbeGamma = 0.5;

/// Admissibility diagnostics: partition defect, mu_0, beta-moments with their
/// K -> 2K stability, the tail sums over |wy - i| > gamma w and, for compact
/// kernels, the exact-support index count.
inline DiagnoseReport run_diagnose(const ExperimentConfig& config) {
  const KernelSpec kernel = make_kernel(config.kernel);
  if (config.grid_density < 1) throw ConfigError("diagnose: grid density must be >= 1");
  std::int64_t K = kDefaultHalfWidth;
  if (config.truncation) {
    if (auto* h = std::get_if<HalfWidth>(&*config.truncation)) K = h->K;
  }
  DiagnoseReport report;
  report.kernel = kernel.name();
  auto& rows = report.rows;
  const std::string kparam = "K=" + std::to_string(K);

  rows.push_back({"partition_defect", kparam, partition_defect(kernel, config.grid_density, K)});
  const double mu0 = absolute_moment0(kernel, config.grid_density, K);
  rows.push_back({"mu0", kparam, mu0});
  for (double beta : config.betas) {
    const MomentEstimate m = moment_estimate(kernel, beta, config.grid_density, K);
    const std::string bp = "beta=" + format_label(beta) + ";" + kparam;
    rows.push_back({"moment", bp, m.value});
    rows.push_back({"moment_2K", bp, m.value_doubled});
    rows.push_back({"moment_relative_change", bp, m.relative_change});
    rows.push_back({"moment_divergent", bp, m.divergent ? 1.0 : 0.0});
  }
  for (double w : config.w_list) {
    rows.push_back({"tail_sum", "w=" + format_label(w) + ";y=" + format_label(kTailProbePoint) +
                                    ";gamma=" + format_label(kTailProbeGamma),
                    kernel_tail_sum(kernel, w, kTailProbePoint, kTailProbeGamma, K)});
  }
  if (auto f = fourier_unity_defect(kernel, 50)) rows.push_back({"fourier_unity_defect", "terms=50", *f});
  if (auto r = kernel.radius()) {
    const IndexRange range = detail::shift_range(kernel, 0.0, K);
    rows.push_back({"support_radius", "", *r});
    rows.push_back({"exact_support_terms_at_0", "", static_cast<double>(range.size())});
  }

  std::ostringstream text;
  text << "kernel " << report.kernel << " (grid density " << config.grid_density << ")\n";
  for (const DiagnosticRow& r : rows) {
    text << "  " << r.quantity;
    if (!r.parameter.empty()) text << " [" << r.parameter << "]";
    text << " = " << format_real(r.value) << '\n';
  }
  report.text = text.str();

  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + config.output_path + "'");
  out << "kernel,quantity,parameter,value\n";
  for (const DiagnosticRow& r : rows) {
    out << report.kernel << ',' << r.quantity << ',' << r.parameter << ',' << format_real(r.value) << '\n';
  }
  if (!out) throw IoError("write failed for '" + config.output_path + "'");
  return report;
}

}  // namespace kantorovich
