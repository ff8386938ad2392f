#pragma once

// Measures on the open left half-plane: point masses plus densities on the
// negative real axis. Densities are described in the radial coordinate
// r = |x| = -x, so a support (a, b) on the axis becomes r in (-b, -a).

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace diffhank {

using complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
  complex location;
  complex weight;
};

/// coeff * |x|^exponent on (lower, upper), lower may be -inf, upper <= 0.
struct PowerLawDensity {
  double coeff = 1.0;
  double exponent = 0.0;
  double lower = -kInf;
  double upper = 0.0;

  double r_min() const { return -upper; }
  double r_max() const { return -lower; }
  bool touches_origin() const { return upper == 0.0; }
  bool reaches_infinity() const { return std::isinf(lower); }
  double density(double r) const { return coeff * std::pow(r, exponent); }
};

/// Piecewise-linear density through (nodes[i], values[i]) on [nodes.front(), nodes.back()].
struct SampledDensity {
  std::vector<double> nodes;
  std::vector<double> values;

  double lower() const { return nodes.front(); }
  double upper() const { return nodes.back(); }
  bool touches_origin() const { return nodes.back() == 0.0; }

  // Slope of the density with respect to r = -x on the segment touching the
  // origin. Only meaningful when touches_origin().
  double slope_at_origin() const {
    const auto n = nodes.size();
    return (values[n - 2] - values[n - 1]) / (nodes[n - 1] - nodes[n - 2]);
  }
};

using Density = std::variant<PowerLawDensity, SampledDensity>;

struct Violation {
  std::string component;
  std::string reason;
};

/// Immutable measure. The positivity and axis flags are derived from the data.
class Measure {
 public:
  Measure() = default;
  Measure(std::vector<Atom> atoms, std::vector<Density> densities)
      : atoms_(std::move(atoms)), densities_(std::move(densities)) {
    compute_flags();
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Density>& densities() const { return densities_; }
  bool is_positive() const { return is_positive_; }
  bool on_negative_axis() const { return on_negative_axis_; }
  bool empty() const { return atoms_.empty() && densities_.empty(); }

  /// Copy with every weight and coefficient multiplied by `factor`.
  Measure scaled(double factor) const {
    auto atoms = atoms_;
    for (auto& a : atoms) a.weight *= factor;
    auto densities = densities_;
    for (auto& d : densities) {
      if (auto* p = std::get_if<PowerLawDensity>(&d)) {
        p->coeff *= factor;
      } else {
        for (auto& v : std::get<SampledDensity>(d).values) v *= factor;
      }
    }
    return {std::move(atoms), std::move(densities)};
  }

 private:
  void compute_flags() {
    is_positive_ = true;
    on_negative_axis_ = true;
    for (const auto& a : atoms_) {
      if (a.location.imag() != 0.0) on_negative_axis_ = false;
      if (a.weight.imag() != 0.0 || !(a.weight.real() > 0.0)) is_positive_ = false;
    }
    for (const auto& d : densities_) {
      if (const auto* p = std::get_if<PowerLawDensity>(&d)) {
        if (!(p->coeff >= 0.0)) is_positive_ = false;
      } else {
        for (double v : std::get<SampledDensity>(d).values)
          if (!(v >= 0.0)) is_positive_ = false;
      }
    }
  }

  std::vector<Atom> atoms_;
  std::vector<Density> densities_;
  bool is_positive_ = true;
  bool on_negative_axis_ = true;
};

/// Structural admissibility check. Empty result means the measure is valid.
inline std::vector<Violation> validate(const Measure& measure) {
  std::vector<Violation> out;
  const auto& atoms = measure.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto name = "atoms[" + std::to_string(i) + "]";
    const auto& a = atoms[i];
    if (!std::isfinite(a.location.real()) || !std::isfinite(a.location.imag()) ||
        !(a.location.real() < 0.0))
      out.push_back({name, "location not in open left half-plane"});
    if (!std::isfinite(a.weight.real()) || !std::isfinite(a.weight.imag()))
      out.push_back({name, "weight is not finite"});
    else if (a.weight == complex{})
      out.push_back({name, "weight is zero"});
  }
  const auto& densities = measure.densities();
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const auto name = "densities[" + std::to_string(i) + "]";
    if (const auto* p = std::get_if<PowerLawDensity>(&densities[i])) {
      if (!std::isfinite(p->coeff) || p->coeff == 0.0)
        out.push_back({name, "coefficient must be finite and nonzero"});
      if (!std::isfinite(p->exponent)) out.push_back({name, "exponent is not finite"});
      if (std::isnan(p->lower) || std::isnan(p->upper) || p->lower == kInf ||
          !std::isfinite(p->upper) || !(p->lower < p->upper) || p->upper > 0.0)
        out.push_back({name, "support must satisfy -inf <= a < b <= 0"});
      else if (p->upper == 0.0 && !(p->exponent > -1.0))
        out.push_back({name, "non-integrable at origin"});
      continue;
    }
    const auto& s = std::get<SampledDensity>(densities[i]);
    if (s.nodes.size() < 2) {
      out.push_back({name, "at least two nodes required"});
      continue;
    }
    if (s.nodes.size() != s.values.size()) {
      out.push_back({name, "nodes and values differ in length"});
      continue;
    }
    bool finite = true;
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
      finite = finite && std::isfinite(s.nodes[k]) && std::isfinite(s.values[k]);
    if (!finite) {
      out.push_back({name, "nodes and values must be finite"});
      continue;
    }
    bool increasing = true;
    for (std::size_t k = 1; k < s.nodes.size(); ++k)
      increasing = increasing && s.nodes[k - 1] < s.nodes[k];
    if (!increasing) out.push_back({name, "nodes must be strictly increasing"});
    if (s.nodes.back() > 0.0) out.push_back({name, "support must lie in (-inf, 0]"});
    if (s.nodes.back() == 0.0 && s.values.back() != 0.0)
      out.push_back({name, "value at the origin must be zero"});
  }
  return out;
}

inline void require_valid(const Measure& measure) {
  const auto violations = validate(measure);
  if (violations.empty()) return;
  std::string msg = "invalid measure:";
  for (const auto& v : violations) msg += " " + v.component + ": " + v.reason + ";";
  throw std::invalid_argument(msg);
}

namespace detail {

// Integral of r^(k-1) over [r0, r1], k possibly zero (logarithm). r0 may be
// zero when k > 0, r1 may be infinite when k < 0.
inline double power_integral(double k, double r0, double r1) {
  if (k == 0.0) return std::log(r1 / r0);
  const double hi = std::isinf(r1) ? 0.0 : std::pow(r1, k);
  const double lo = r0 == 0.0 ? 0.0 : std::pow(r0, k);
  return (hi - lo) / k;
}

// Mass of a power law in radial coordinates over [r0, r1] (already clipped).
inline double power_law_mass(const PowerLawDensity& p, double r0, double r1) {
  if (!(r0 < r1)) return 0.0;
  const double k = p.exponent + 1.0;
  if (r0 == 0.0 && k <= 0.0) return p.coeff > 0 ? kInf : -kInf;
  if (std::isinf(r1) && k >= 0.0) return p.coeff > 0 ? kInf : -kInf;
  return p.coeff * power_integral(k, r0, r1);
}

// Exact integral of the linear interpolant over [x_lo, x_hi] (axis coordinates).
inline double sampled_mass(const SampledDensity& s, double x_lo, double x_hi) {
  const double lo = std::max(x_lo, s.lower());
  const double hi = std::min(x_hi, s.upper());
  if (!(lo < hi)) return 0.0;
  auto interp = [&](std::size_t k, double x) {
    const double t = (x - s.nodes[k]) / (s.nodes[k + 1] - s.nodes[k]);
    return s.values[k] + t * (s.values[k + 1] - s.values[k]);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) {
    const double a = std::max(lo, s.nodes[k]);
    const double b = std::min(hi, s.nodes[k + 1]);
    if (!(a < b)) continue;
    total += 0.5 * (b - a) * (interp(k, a) + interp(k, b));
  }
  return total;
}

}  // namespace detail

/// mu((x_lo, x_hi]) for a measure supported on the negative real axis.
inline double box_mass(const Measure& measure, double x_lo, double x_hi) {
  if (!measure.on_negative_axis())
    throw std::invalid_argument("box_mass: measure has atoms off the real axis");
  if (!(x_lo < x_hi) || x_hi > 0.0)
    throw std::invalid_argument("box_mass: interval must satisfy x_lo < x_hi <= 0");
  double total = 0.0;
  for (const auto& a : measure.atoms()) {
    if (a.weight.imag() != 0.0)
      throw std::invalid_argument("box_mass: atom weights must be real");
    const double x = a.location.real();
    if (x_lo < x && x <= x_hi) total += a.weight.real();
  }
  for (const auto& d : measure.densities()) {
    if (const auto* p = std::get_if<PowerLawDensity>(&d)) {
      const double lo = std::max(x_lo, p->lower);
      const double hi = std::min(x_hi, p->upper);
      if (lo < hi) total += detail::power_law_mass(*p, -hi, -lo);
    } else {
      total += detail::sampled_mass(std::get<SampledDensity>(d), x_lo, x_hi);
    }
  }
  return total;
}

struct MomentResult {
  bool finite = true;
  double value = 0.0;
};

namespace detail {

// Integral of |A + B r| r^(-q) over [r0, r1] where A + B r keeps one sign.
inline MomentResult linear_moment(double A, double B, double r0, double r1, double q) {
  if (r0 == 0.0) {
    // A is the density value at the origin
    if (A != 0.0 && 1.0 - q <= 0.0) return {false, kInf};
    if (B != 0.0 && 2.0 - q <= 0.0) return {false, kInf};
  }
  double v = 0.0;
  if (A != 0.0) v += A * power_integral(1.0 - q, r0, r1);
  if (B != 0.0) v += B * power_integral(2.0 - q, r0, r1);
  return {true, std::abs(v)};
}

}  // namespace detail

/// Integral of |Re p|^(-q) d|mu|(p). Divergence of power-law parts is decided by
/// exponent arithmetic; sampled parts are integrated exactly per segment.
inline MomentResult abs_moment(const Measure& measure, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("abs_moment: q must be positive");
  MomentResult out;
  for (const auto& a : measure.atoms())
    out.value += std::abs(a.weight) / std::pow(std::abs(a.location.real()), q);
  for (const auto& d : measure.densities()) {
    if (const auto* p = std::get_if<PowerLawDensity>(&d)) {
      const double e = p->exponent - q;
      if ((p->touches_origin() && !(e > -1.0)) || (p->reaches_infinity() && !(e < -1.0)))
        return {false, kInf};
      out.value += std::abs(p->coeff) * detail::power_integral(e + 1.0, p->r_min(), p->r_max());
      continue;
    }
    const auto& s = std::get<SampledDensity>(d);
    for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) {
      // radial coordinates: r runs from -nodes[k+1] up to -nodes[k]
      const double r0 = -s.nodes[k + 1], r1 = -s.nodes[k];
      const double f0 = s.values[k + 1], f1 = s.values[k];
      const double B = (f1 - f0) / (r1 - r0);
      const double A = f0 - B * r0;
      std::vector<std::pair<double, double>> pieces{{r0, r1}};
      if (f0 * f1 < 0.0) {
        const double root = r0 + (r1 - r0) * f0 / (f0 - f1);
        pieces = {{r0, root}, {root, r1}};
      }
      for (auto [a, b] : pieces) {
        const auto m = detail::linear_moment(A, B, a, b, q);
        if (!m.finite) return m;
        out.value += m.value;
      }
    }
  }
  return out;
}

}  // namespace diffhank
