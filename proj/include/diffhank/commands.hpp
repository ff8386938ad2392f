#pragma once

// Subcommand bodies shared by the command-line tool and the tests. Each returns
// the primary document (report or CSV) plus a secondary human/summary stream.

#include <optional>
#include <string>
#include <vector>

#include "diffhank/criteria.hpp"
#include "diffhank/discrete_operator.hpp"
#include "diffhank/io.hpp"

namespace diffhank {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

struct CommandOutput {
  std::string primary;
  std::string secondary;
};

inline CommandOutput cmd_analyze(const JobConfig& cfg) {
  const auto report = classify(cfg.measure, cfg.weight);
  return {to_json(report).dump(2) + "\n", report_table(report)};
}

struct SpectrumOptions {
  std::size_t top = 10;
  bool sweep = false;
  double rank_tol = 1e-8;
};

inline CommandOutput cmd_spectrum(const JobConfig& cfg, const SpectrumOptions& opt) {
  if (opt.top < 1) throw std::invalid_argument("--top must be >= 1");
  const auto rule = build_rule(cfg.grid);
  const auto spec = singular_values(assemble_kernel(cfg.measure, cfg.weight, rule));
  json summary = {{"grid", to_json(cfg.grid)},
                  {"size", spec.size()},
                  {"norms", to_json(norms(spec))},
                  {"numerical_rank", numerical_rank(spec, opt.rank_tol)},
                  {"rank_tolerance", opt.rank_tol}};
  if (cfg.measure.is_positive() && cfg.measure.on_negative_axis()) {
    const auto trace = trace_oracle(cfg.measure, cfg.weight, rule);
    const double sum = norms(spec).nuclear;
    summary["trace_oracle"] = {{"quadrature", trace.value},
                               {"analytic", trace.analytic ? json(*trace.analytic) : json(nullptr)},
                               {"sum_sigma", sum},
                               {"relative_gap", trace.value == 0.0
                                                    ? std::abs(sum)
                                                    : std::abs(sum - trace.value) / trace.value}};
  }
  if (opt.sweep) summary["sweep"] = to_json(sigma1_sweep(cfg.measure, cfg.weight, cfg.grid));
  summary["caveat"] =
      "discrete norms are finite by construction; compare them with analytic certificates "
      "only where the criteria predict finiteness";
  return {spectrum_csv(spec, opt.top), summary.dump(2) + "\n"};
}

inline CommandOutput cmd_impulse(const JobConfig& cfg, const std::vector<double>& times) {
  for (double t : times)
    if (!(t > 0.0)) throw std::invalid_argument("--times must be positive");
  return {impulse_csv(cfg.measure, times), {}};
}

inline CommandOutput cmd_transfer(const JobConfig& cfg, const std::vector<complex>& points) {
  for (const auto& s : points)
    if (!(s.real() > 0.0)) throw std::invalid_argument("--points must have positive real part");
  return {transfer_csv(cfg.measure, points), {}};
}

inline CommandOutput cmd_bounds(const JobConfig& cfg, std::size_t degree) {
  const auto rule = build_rule(cfg.grid);
  if (degree >= rule.size())
    throw std::invalid_argument("--degree " + std::to_string(degree) +
                                " must be below the grid size " + std::to_string(rule.size()));
  const auto spec = singular_values(assemble_kernel(cfg.measure, cfg.weight, rule));
  const auto b = reduction_bounds(spec, degree);
  json doc = to_json(b);
  doc["spectrum_size"] = spec.size();
  return {doc.dump(2) + "\n", {}};
}

}  // namespace diffhank
