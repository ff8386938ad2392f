#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace diffhank {

/// Raised when a numerical procedure cannot deliver its contract (no
/// convergence, overflow, non-finite data).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], increasing
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order via Newton iteration on P_n.
inline GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const int n = order;
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

struct GridSpec {
  double t_min = 1e-24;
  double t_max = 1e24;
  int panels = 72;
  int order = 16;
};

/// Composite Gauss-Legendre rule on geometric panels of (t_min, t_max).
class QuadratureRule {
 public:
  QuadratureRule(GridSpec spec, std::vector<double> boundaries, std::vector<double> nodes,
                 std::vector<double> weights)
      : spec_(spec),
        boundaries_(std::move(boundaries)),
        nodes_(std::move(nodes)),
        weights_(std::move(weights)) {}

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& boundaries() const { return boundaries_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  GridSpec spec_;
  std::vector<double> boundaries_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline QuadratureRule build_rule(double t_min, double t_max, int panels, int order) {
  if (!(t_min > 0.0) || !(t_min < t_max) || !std::isfinite(t_max))
    throw std::invalid_argument("build_rule: require 0 < t_min < t_max < inf");
  if (panels < 1) throw std::invalid_argument("build_rule: panels must be >= 1");
  if (order < 2) throw std::invalid_argument("build_rule: order must be >= 2");
  std::vector<double> bounds(panels + 1);
  const double log_lo = std::log(t_min), log_hi = std::log(t_max);
  for (int k = 0; k <= panels; ++k)
    bounds[k] = std::exp(log_lo + (log_hi - log_lo) * k / panels);
  bounds.front() = t_min;
  bounds.back() = t_max;
  const auto gl = gauss_legendre(order);
  std::vector<double> nodes, weights;
  nodes.reserve(static_cast<std::size_t>(panels) * order);
  weights.reserve(nodes.capacity());
  for (int k = 0; k < panels; ++k) {
    const double half = 0.5 * (bounds[k + 1] - bounds[k]);
    const double mid = 0.5 * (bounds[k + 1] + bounds[k]);
    for (int j = 0; j < order; ++j) {
      nodes.push_back(mid + half * gl.nodes[j]);
      weights.push_back(half * gl.weights[j]);
    }
  }
  return {GridSpec{t_min, t_max, panels, order}, std::move(bounds), std::move(nodes),
          std::move(weights)};
}

inline QuadratureRule build_rule(const GridSpec& g) {
  return build_rule(g.t_min, g.t_max, g.panels, g.order);
}

inline QuadratureRule default_rule() { return build_rule(GridSpec{}); }

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 7/15.

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class R>
struct Segment {
  double a, b;
  R value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
auto gk15(F& f, double a, double b) {
  using R = decltype(f(a));
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const R fc = f(c);
  R kron = fc * kWgk[7];
  R gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const R s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return std::pair<R, double>{kron, magnitude(kron - gauss)};
}

}  // namespace detail

template <class R>
struct IntegrationResult {
  R value{};
  double error = 0.0;
  bool converged = true;
};

/// Globally adaptive G7/K15 over [a, b] with optional initial breakpoints.
template <class F>
auto integrate_adaptive(F&& f, std::vector<double> breakpoints, double rel_tol = 1e-13,
                        double abs_tol = 0.0, int max_segments = 4000) {
  using R = decltype(f(0.0));
  using Seg = detail::Segment<R>;
  std::priority_queue<Seg> queue;
  R total{};
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    if (!(a < b)) continue;
    auto [v, e] = detail::gk15(f, a, b);
    total += v;
    err += e;
    queue.push({a, b, v, e});
  }
  IntegrationResult<R> out;
  int count = static_cast<int>(queue.size());
  while (!queue.empty() && err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (count >= max_segments) {
      out.converged = false;
      break;
    }
    const Seg s = queue.top();
    const double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b)) {
      out.converged = false;
      break;
    }
    queue.pop();
    auto [v1, e1] = detail::gk15(f, s.a, mid);
    auto [v2, e2] = detail::gk15(f, mid, s.b);
    total += (v1 + v2) - s.value;
    err += (e1 + e2) - s.error;
    queue.push({s.a, mid, v1, e1});
    queue.push({mid, s.b, v2, e2});
    count += 1;
  }
  // resum to shed the drift of incremental updates
  R resum{};
  err = 0.0;
  while (!queue.empty()) {
    resum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  out.value = resum;
  out.error = err;
  if (!std::isfinite(detail::magnitude(resum))) out.converged = false;
  return out;
}

template <class F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0) {
  return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, rel_tol, abs_tol);
}

/// Asymptotic hints for integrate_ray. `scale` is where the integrand changes
/// character; the powers describe g(r) ~ r^p at r -> 0 (used when lo == 0) and
/// r -> inf (used when hi == inf; -inf marks faster-than-algebraic decay).
struct RayHints {
  double scale = 1.0;
  double power_at_zero = 0.0;
  double power_at_infinity = -std::numeric_limits<double>::infinity();
};

/// Integral of g over [lo, hi] with 0 <= lo < hi <= inf. Endpoint power
/// singularities are removed by graded substitutions, the infinite tail by
/// r = b / v. Throws NumericalError when the error estimate stays large.
template <class F>
auto integrate_ray(F&& g, double lo, double hi, const RayHints& hints, double rel_tol = 1e-13) {
  using R = decltype(g(1.0));
  if (!(lo >= 0.0) || !(lo < hi)) throw std::invalid_argument("integrate_ray: bad range");
  const double scale = hints.scale > 0.0 ? hints.scale : 1.0;
  R total{};
  double error = 0.0;
  bool ok = true;
  auto accumulate = [&](const auto& res) {
    total += res.value;
    error += res.error;
    ok = ok && res.converged;
  };

  double a = lo;
  if (lo == 0.0) {
    const double rho = std::min(hi, scale);
    const double e = hints.power_at_zero;
    const double m = e < 0.0 ? 1.0 / (e + 1.0) : 1.0;
    auto mapped = [&](double w) -> R {
      const double r = rho * std::pow(w, m);
      if (r == 0.0) return R{};
      return g(r) * (rho * m * std::pow(w, m - 1.0));
    };
    accumulate(integrate_adaptive(mapped, 0.0, 1.0, rel_tol));
    a = rho;
  }
  if (a < hi) {
    const double b = std::isinf(hi) ? std::max(a, 8.0 * scale) : hi;
    if (a < b) {
      std::vector<double> breaks{a};
      while (breaks.back() * 2.0 < b && breaks.size() < 400) breaks.push_back(breaks.back() * 2.0);
      breaks.push_back(b);
      accumulate(integrate_adaptive(g, std::move(breaks), rel_tol));
    }
    if (std::isinf(hi)) {
      const double p = hints.power_at_infinity;
      // after r = b / v the integrand behaves like v^(-p - 2) near v = 0
      const double ev = -p - 2.0;
      const double m = (std::isfinite(p) && ev < 0.0) ? 1.0 / (ev + 1.0) : 1.0;
      auto mapped = [&](double w) -> R {
        const double v = std::pow(w, m);
        if (v == 0.0) return R{};
        const double r = b / v;
        if (std::isinf(r)) return R{};
        return g(r) * (b / (v * v) * m * std::pow(w, m - 1.0));
      };
      accumulate(integrate_adaptive(mapped, 0.0, 1.0, rel_tol));
    }
  }
  const double mag = detail::magnitude(total);
  if (!std::isfinite(mag) || (!ok && error > 1e-8 * std::max(mag, 1e-300)))
    throw NumericalError("integrate_ray: quadrature did not converge");
  return total;
}

}  // namespace diffhank
