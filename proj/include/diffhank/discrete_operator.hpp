#pragma once

// Nystrom discretization of the weighted Hankel operator on a composite
// quadrature rule, its singular spectrum, norm estimates, the trace oracle and
// model-reduction error bounds.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "diffhank/measure.hpp"
#include "diffhank/quadrature.hpp"
#include "diffhank/transforms.hpp"

namespace diffhank {

/// M[i][j] = sqrt(d_i) w(t_i) h(t_i + t_j) w(t_j) sqrt(d_j). `imag` is empty when
/// h is real on every node sum.
struct KernelMatrix {
  Eigen::MatrixXd real;
  Eigen::MatrixXd imag;
  GridSpec grid;

  bool is_real() const { return imag.size() == 0; }
  Eigen::Index dim() const { return real.rows(); }
};

/// Z[k][i] = sqrt(w_k) w(t_i) e^{p_k t_i} sqrt(d_i) for a positive atomic measure;
/// Z^T Z reproduces the kernel matrix.
struct EmbeddingMatrix {
  Eigen::MatrixXd values;
  GridSpec grid;
};

/// Descending, nonnegative singular values.
class SingularSpectrum {
 public:
  SingularSpectrum() = default;
  explicit SingularSpectrum(std::vector<double> sigma, GridSpec grid = {})
      : sigma_(std::move(sigma)), grid_(grid) {
    for (std::size_t k = 0; k < sigma_.size(); ++k) {
      if (!(sigma_[k] >= 0.0) || !std::isfinite(sigma_[k]))
        throw std::invalid_argument("singular spectrum: values must be finite and nonnegative");
      if (k > 0 && sigma_[k] > sigma_[k - 1])
        throw std::invalid_argument("singular spectrum: values are not descending");
    }
  }

  const std::vector<double>& values() const { return sigma_; }
  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return sigma_.size(); }
  double operator[](std::size_t k) const { return sigma_[k]; }
  double largest() const { return sigma_.empty() ? 0.0 : sigma_.front(); }

 private:
  std::vector<double> sigma_;
  GridSpec grid_;
};

struct OperatorNorms {
  double operator_norm = 0.0;
  double hilbert_schmidt = 0.0;
  double nuclear = 0.0;
};

struct ReductionBounds {
  std::size_t degree = 0;
  double lower = 0.0;
  double upper = 0.0;
};

inline KernelMatrix assemble_kernel(const Measure& measure, const PowerWeight& weight,
                                    const QuadratureRule& rule) {
  require_valid(measure);
  require_valid(weight);
  const auto& t = rule.nodes();
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = std::sqrt(rule.weights()[i]) * weight(t[i]);

  KernelMatrix km;
  km.grid = rule.spec();
  km.real = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd imag = Eigen::MatrixXd::Zero(n, n);
  bool complex_valued = false;
  // each entry is computed independently from its own node sum
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const complex h = impulse_response(measure, t[i] + t[j]);
      if (!std::isfinite(h.real()) || !std::isfinite(h.imag()) || std::abs(h) > 1e300)
        throw NumericalError("assemble_kernel: impulse response overflows at t = " +
                             std::to_string(t[i] + t[j]));
      const double s = g[i] * g[j];
      km.real(i, j) = km.real(j, i) = s * h.real();
      if (h.imag() != 0.0) {
        complex_valued = true;
        imag(i, j) = imag(j, i) = s * h.imag();
      }
    }
  }
  if (!km.real.allFinite() || !imag.allFinite())
    throw NumericalError("assemble_kernel: non-finite kernel entry");
  if (complex_valued) km.imag = std::move(imag);
  return km;
}

inline EmbeddingMatrix assemble_embedding(const Measure& measure, const PowerWeight& weight,
                                          const QuadratureRule& rule) {
  require_valid(measure);
  require_valid(weight);
  if (!measure.densities().empty())
    throw std::invalid_argument("assemble_embedding: measure must be purely atomic");
  if (!measure.is_positive() || !measure.on_negative_axis())
    throw std::invalid_argument(
        "assemble_embedding: atoms must be positive and on the negative axis");
  const auto& t = rule.nodes();
  const auto& atoms = measure.atoms();
  EmbeddingMatrix z;
  z.grid = rule.spec();
  z.values.resize(static_cast<Eigen::Index>(atoms.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double root_w = std::sqrt(atoms[k].weight.real());
    const double x = atoms[k].location.real();
    for (std::size_t i = 0; i < t.size(); ++i)
      z.values(k, i) = root_w * weight(t[i]) * std::exp(x * t[i]) * std::sqrt(rule.weights()[i]);
  }
  return z;
}

namespace detail {

inline SingularSpectrum to_spectrum(std::vector<double> s, const GridSpec& grid) {
  for (double& v : s) v = std::abs(v);
  std::sort(s.begin(), s.end(), std::greater<>());
  return SingularSpectrum(std::move(s), grid);
}

}  // namespace detail

/// Full descending spectrum. Symmetric real kernels use absolute eigenvalues.
inline SingularSpectrum singular_values(const KernelMatrix& m) {
  if (m.dim() == 0) return SingularSpectrum({}, m.grid);
  if (!m.real.allFinite() || (!m.is_real() && !m.imag.allFinite()))
    throw NumericalError("singular_values: non-finite matrix entries");
  std::vector<double> s;
  if (m.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("singular_values: eigenvalue iteration did not converge");
    s.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  } else {
    Eigen::MatrixXcd c(m.dim(), m.dim());
    c.real() = m.real;
    c.imag() = m.imag;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(c);
    if (svd.info() != Eigen::Success)
      throw NumericalError("singular_values: SVD did not converge");
    const auto& sv = svd.singularValues();
    s.assign(sv.data(), sv.data() + sv.size());
  }
  return detail::to_spectrum(std::move(s), m.grid);
}

inline SingularSpectrum singular_values(const EmbeddingMatrix& z) {
  if (z.values.size() == 0) return SingularSpectrum({}, z.grid);
  if (!z.values.allFinite()) throw NumericalError("singular_values: non-finite matrix entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z.values);
  if (svd.info() != Eigen::Success) throw NumericalError("singular_values: SVD did not converge");
  const auto& sv = svd.singularValues();
  return detail::to_spectrum(std::vector<double>(sv.data(), sv.data() + sv.size()), z.grid);
}

/// Eigenvalues of the symmetric kernel matrix in descending order (signed).
inline std::vector<double> eigenvalues(const KernelMatrix& m) {
  if (!m.is_real()) throw std::invalid_argument("eigenvalues: kernel matrix is complex");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigenvalues: eigenvalue iteration did not converge");
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Operator, Hilbert-Schmidt and nuclear norms of the discretized operator. These
/// approximate the continuous norms only where the criteria predict finiteness.
inline OperatorNorms norms(const SingularSpectrum& spec) {
  OperatorNorms out;
  out.operator_norm = spec.largest();
  double sq = 0.0, sum = 0.0;
  for (double s : spec.values()) {
    sq += s * s;
    sum += s;
  }
  out.hilbert_schmidt = std::sqrt(sq);
  out.nuclear = sum;
  return out;
}

/// Count of sigma_k >= tol_rel * sigma_1.
inline std::size_t numerical_rank(const SingularSpectrum& spec, double tol_rel) {
  if (!(tol_rel > 0.0 && tol_rel < 1.0))
    throw std::invalid_argument("numerical_rank: tol_rel must lie in (0, 1)");
  const double top = spec.largest();
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(spec.values().begin(), spec.values().end(),
                                                [&](double s) { return s >= tol_rel * top; }));
}

inline ReductionBounds reduction_bounds(const SingularSpectrum& spec, std::size_t k) {
  if (k >= spec.size())
    throw std::invalid_argument("reduction_bounds: degree " + std::to_string(k) +
                                " must be below the spectrum length " +
                                std::to_string(spec.size()));
  ReductionBounds b;
  b.degree = k;
  b.lower = spec[k];
  // sum the tail smallest-first
  for (std::size_t j = spec.size(); j-- > k;) b.upper += spec[j];
  return b;
}

struct TraceOracle {
  double value = 0.0;                 // quadrature of w(t)^2 h(2t)
  std::optional<double> analytic;     // int ||psi_p||^2 dmu when available in closed form
  double discrepancy = 0.0;           // |value - analytic| / analytic
};

/// Trace of the positive operator, int_0^inf w(t)^2 h(2t) dt, on the rule. For a
/// positive measure on the axis this is the nuclear norm.
inline TraceOracle trace_oracle(const Measure& measure, const PowerWeight& weight,
                                const QuadratureRule& rule) {
  require_valid(measure);
  require_valid(weight);
  if (!measure.is_positive() || !measure.on_negative_axis())
    throw std::invalid_argument(
        "trace_oracle: requires a positive measure supported on the negative axis");
  TraceOracle out;
  const auto& t = rule.nodes();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double w = weight(t[i]);
    out.value += rule.weights()[i] * w * w * impulse_response(measure, 2.0 * t[i]).real();
  }
  const auto moment = abs_moment(measure, 2.0 * weight.alpha + 1.0);
  if (moment.finite) {
    const double q = 2.0 * weight.alpha + 1.0;
    const double a = weight.scale * weight.scale * std::tgamma(q) / std::pow(2.0, q) * moment.value;
    out.analytic = a;
    out.discrepancy = a == 0.0 ? std::abs(out.value) : std::abs(out.value - a) / a;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Range refinement: a falsifiable signature of unbounded operators (sigma_1
// grows like a power of the truncation range).

struct GrowthDiagnostic {
  std::vector<double> range_ratios;  // t_max / t_min at each step
  std::vector<double> values;
  double power_exponent = 0.0;       // slope of log(value) vs log(ratio)
  double log_slope = 0.0;            // slope of value vs log(ratio)
};

namespace detail {

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

inline GridSpec widened(GridSpec g, int step) {
  const double f = std::pow(2.0, 0.5 * step);
  g.t_min /= f;
  g.t_max *= f;
  return g;
}

template <class F>
GrowthDiagnostic sweep(const GridSpec& base, int steps, F&& evaluate) {
  GrowthDiagnostic out;
  std::vector<double> logr, logv;
  for (int s = 0; s <= steps; ++s) {
    const auto g = widened(base, s);
    const double v = evaluate(build_rule(g));
    out.range_ratios.push_back(g.t_max / g.t_min);
    out.values.push_back(v);
    logr.push_back(std::log(g.t_max / g.t_min));
    logv.push_back(std::log(std::abs(v)));
  }
  out.power_exponent = ls_slope(logr, logv);
  out.log_slope = ls_slope(logr, out.values);
  return out;
}

}  // namespace detail

/// sigma_1 under `steps` doublings of t_max / t_min at fixed panels and order.
inline GrowthDiagnostic sigma1_sweep(const Measure& measure, const PowerWeight& weight,
                                     const GridSpec& base, int steps = 3) {
  return detail::sweep(base, steps, [&](const QuadratureRule& rule) {
    return singular_values(assemble_kernel(measure, weight, rule)).largest();
  });
}

/// Quadrature of |h| over the rule under the same range doublings.
inline GrowthDiagnostic abs_impulse_sweep(const Measure& measure, const GridSpec& base,
                                          int steps = 3) {
  return detail::sweep(base, steps, [&](const QuadratureRule& rule) {
    return rule.integrate([&](double t) { return std::abs(impulse_response(measure, t)); });
  });
}

}  // namespace diffhank
