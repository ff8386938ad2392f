#pragma once

// Fourier-Borel transform h(t) = int e^{tp} dmu(p) (impulse response),
// Stieltjes transform G(s) = int dmu(p) / (s - p) (transfer function), and the
// closed-form weighted exponential norms ||t^alpha e^{pt}||^2.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "diffhank/measure.hpp"
#include "diffhank/quadrature.hpp"

namespace diffhank {

/// w(t) = scale * t^alpha.
struct PowerWeight {
  double scale = 1.0;
  double alpha = 0.0;

  double operator()(double t) const { return scale * std::pow(t, alpha); }

  /// The t^{-1/4} weight with the 1/sqrt(pi) kernel prefactor split evenly.
  static PowerWeight glover() { return {std::pow(std::numbers::pi, -0.25), -0.25}; }
};

inline void require_valid(const PowerWeight& w) {
  if (!(w.scale > 0.0) || !std::isfinite(w.scale))
    throw std::invalid_argument("weight.scale must be positive and finite");
  if (!(w.alpha > -0.5) || !std::isfinite(w.alpha))
    throw std::invalid_argument("weight.alpha must exceed -1/2");
}

namespace detail {

// Integrals of (f0 + m u) e^{-t u} over u in [0, L]; series near tL = 0.
inline double exp_moment0(double t, double L) {
  const double x = t * L;
  if (x < 0.5) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 25; ++k) {
      term *= -x / (k + 1);
      sum += term;
    }
    return L * sum;
  }
  return -std::expm1(-x) / t;
}

inline double exp_moment1(double t, double L) {
  const double x = t * L;
  if (x < 0.5) {
    // sum_k (-x)^k (k+1)/(k+2)!
    double fact = 2.0, sum = 0.5, pw = 1.0;
    for (int k = 1; k < 25; ++k) {
      pw *= -x;
      fact *= (k + 2);
      sum += pw * (k + 1) / fact;
    }
    return L * L * sum;
  }
  return (1.0 - std::exp(-x) * (1.0 + x)) / (t * t);
}

inline double sampled_impulse(const SampledDensity& s, double t) {
  double total = 0.0;
  // walk from the segment nearest the origin outward so the sum can stop early
  for (std::size_t k = s.nodes.size() - 1; k >= 1; --k) {
    const double r0 = -s.nodes[k];
    const double L = s.nodes[k] - s.nodes[k - 1];
    const double decay = t * r0;
    if (decay > 746.0) break;
    const double f0 = s.values[k];
    const double m = (s.values[k - 1] - s.values[k]) / L;
    total += std::exp(-decay) * (f0 * exp_moment0(t, L) + m * exp_moment1(t, L));
  }
  return total;
}

inline complex log1p_complex(complex w) {
  if (std::abs(w) < 0.1) {
    complex term = w, sum = w;
    for (int k = 2; k < 30; ++k) {
      term *= -w;
      sum += term / static_cast<double>(k);
    }
    return sum;
  }
  return std::log(1.0 + w);
}

inline complex sampled_transfer(const SampledDensity& s, complex z0) {
  static const GaussLegendre gl = gauss_legendre(10);
  complex total{};
  for (std::size_t k = s.nodes.size() - 1; k >= 1; --k) {
    const double r0 = -s.nodes[k];
    const double L = s.nodes[k] - s.nodes[k - 1];
    const double f0 = s.values[k];
    const double m = (s.values[k - 1] - s.values[k]) / L;
    const complex z = z0 + r0;
    if (std::abs(z) > 2.0 * L) {
      complex seg{};
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double u = 0.5 * L * (gl.nodes[j] + 1.0);
        seg += gl.weights[j] * (f0 + m * u) / (z + u);
      }
      total += 0.5 * L * seg;
    } else {
      total += m * L + (f0 - m * z) * log1p_complex(L / z);
    }
  }
  return total;
}

inline double power_law_impulse(const PowerLawDensity& p, double t) {
  if (p.touches_origin() && p.reaches_infinity())
    return p.coeff * std::tgamma(p.exponent + 1.0) * std::pow(t, -(p.exponent + 1.0));
  const double beta = p.exponent;
  auto g = [beta, t](double r) { return std::pow(r, beta) * std::exp(-t * r); };
  RayHints hints{1.0 / t, beta, -kInf};
  return p.coeff * integrate_ray(g, p.r_min(), p.r_max(), hints);
}

}  // namespace detail

/// h(t) for t > 0.
inline complex impulse_response(const Measure& measure, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("impulse_response: t must be positive and finite");
  complex h{};
  for (const auto& a : measure.atoms()) h += a.weight * std::exp(t * a.location);
  for (const auto& d : measure.densities()) {
    if (const auto* p = std::get_if<PowerLawDensity>(&d))
      h += detail::power_law_impulse(*p, t);
    else
      h += detail::sampled_impulse(std::get<SampledDensity>(d), t);
  }
  return h;
}

struct TransferValue {
  bool finite = true;
  complex value{};
  std::string reason;
};

/// G(s) for Re s > 0; reports divergence of the Stieltjes integral instead of
/// regularizing it.
inline TransferValue transfer_function(const Measure& measure, complex s) {
  if (!(s.real() > 0.0) || !std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw std::invalid_argument("transfer_function: Re s must be positive");
  TransferValue out;
  for (const auto& a : measure.atoms()) out.value += a.weight / (s - a.location);
  for (std::size_t i = 0; i < measure.densities().size(); ++i) {
    const auto& d = measure.densities()[i];
    if (const auto* sd = std::get_if<SampledDensity>(&d)) {
      out.value += detail::sampled_transfer(*sd, s);
      continue;
    }
    const auto& p = std::get<PowerLawDensity>(d);
    const double beta = p.exponent;
    if (p.reaches_infinity() && beta >= 0.0) {
      out.finite = false;
      out.reason = "densities[" + std::to_string(i) +
                   "]: Stieltjes integral diverges at infinity (exponent >= 0)";
      out.value = complex{kInf, 0.0};
      return out;
    }
    if (p.touches_origin() && p.reaches_infinity()) {
      // int_0^inf r^beta / (s + r) dr = pi s^beta / sin(pi (beta + 1)), -1 < beta < 0
      out.value += p.coeff * std::numbers::pi * std::pow(s, beta) /
                   std::sin(std::numbers::pi * (beta + 1.0));
      continue;
    }
    auto g = [beta, s](double r) -> complex { return std::pow(r, beta) / (s + r); };
    RayHints hints{std::abs(s), beta, beta - 1.0};
    out.value += p.coeff * integrate_ray(g, p.r_min(), p.r_max(), hints);
  }
  return out;
}

/// ||w(t) e^{pt}||^2 = scale^2 Gamma(2 alpha + 1) / (2 |Re p|)^(2 alpha + 1).
inline double psi_norm_sq(complex p, const PowerWeight& w) {
  if (!(p.real() < 0.0)) throw std::invalid_argument("psi_norm_sq: Re p must be negative");
  require_valid(w);
  const double k = 2.0 * w.alpha + 1.0;
  return w.scale * w.scale * std::tgamma(k) / std::pow(-2.0 * p.real(), k);
}

/// Leading algebraic behaviour of |h|: h ~ t^(-blowup_at_zero) as t -> 0 and
/// h ~ t^(-decay_at_infinity) as t -> inf (inf when the decay is exponential).
struct ImpulseAsymptotics {
  double blowup_at_zero = 0.0;
  bool log_at_zero = false;
  double decay_at_infinity = kInf;
};

inline ImpulseAsymptotics impulse_asymptotics(const Measure& measure) {
  // leading coefficients grouped by exponent; cancelled groups are skipped
  std::map<double, double> at_zero, at_inf;
  ImpulseAsymptotics out;
  for (const auto& d : measure.densities()) {
    if (const auto* p = std::get_if<PowerLawDensity>(&d)) {
      const double e = p->exponent + 1.0;
      if (p->reaches_infinity()) {
        if (e > 0.0)
          at_zero[e] += p->coeff * std::tgamma(e);
        else if (e == 0.0)
          out.log_at_zero = true;
      }
      if (p->touches_origin()) at_inf[e] += p->coeff * std::tgamma(e);
    } else {
      const auto& s = std::get<SampledDensity>(d);
      if (s.touches_origin()) {
        const double m = s.slope_at_origin();
        if (m != 0.0) at_inf[2.0] += m;
      }
    }
  }
  for (auto it = at_zero.rbegin(); it != at_zero.rend(); ++it) {
    if (it->second != 0.0) {
      out.blowup_at_zero = it->first;
      break;
    }
  }
  for (const auto& [e, c] : at_inf) {
    if (c != 0.0) {
      out.decay_at_infinity = e;
      break;
    }
  }
  return out;
}

}  // namespace diffhank
