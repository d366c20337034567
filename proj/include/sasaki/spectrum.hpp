#pragma once

// Analytic spectrum of Δ₀ on the round unit S^m and a small-t fit of its heat
// trace against a0 + a2 t + a4 t².

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sasaki/error.hpp"
#include "sasaki/heat.hpp"
#include "sasaki/space_forms.hpp"

namespace sasaki {

struct SpectrumEntry {
  double eigenvalue = 0.0;
  double multiplicity = 0.0;
};

/// (2k+m−1)(k+m−2)! / (k!(m−1)!), exact in double while C(k+m−2, k) < 2^53.
inline double sphere_multiplicity(std::size_t m, std::size_t k) {
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double c = binomial(k + m - 2, k);
  if (c < 0x1.0p53) return (2.0 * kd + md - 1.0) * c / (md - 1.0);
  const double log_mult = std::log(2.0 * kd + md - 1.0) + std::lgamma(kd + md - 1.0) - std::lgamma(kd + 1.0) -
                          std::lgamma(md);
  return std::exp(log_mult);
}

/// λ_k = k(k+m−1) with multiplicities, k = 0..k_max.
inline std::vector<SpectrumEntry> sphere_spectrum(std::size_t m, std::size_t k_max) {
  if (m < 2) throw Error(ErrorKind::DimensionTooSmall, "sphere spectrum needs m >= 2");
  std::vector<SpectrumEntry> out;
  out.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    out.push_back({kd * (kd + static_cast<double>(m) - 1.0), sphere_multiplicity(m, k)});
  }
  return out;
}

inline double heat_trace(std::span<const SpectrumEntry> spectrum, double t) {
  double sum = 0.0;
  for (const auto& e : spectrum) sum += e.multiplicity * std::exp(-t * e.eigenvalue);
  return sum;
}

/// Σ_{k > k_max} mult_k e^{−tλ_k}, summed until the terms underflow.
inline double sphere_trace_tail(std::size_t m, std::size_t k_max, double t) {
  double tail = 0.0;
  for (std::size_t k = k_max + 1; k < k_max + 1000000; ++k) {
    const double kd = static_cast<double>(k);
    const double term = sphere_multiplicity(m, k) * std::exp(-t * kd * (kd + static_cast<double>(m) - 1.0));
    tail += term;
    if (term <= tail * 1e-17 || term == 0.0) {
      // Terms decrease monotonically once past the maximum of mult·e^{−tλ}.
      const double next = sphere_multiplicity(m, k + 1) *
                          std::exp(-t * (kd + 1.0) * (kd + static_cast<double>(m)));
      if (next <= term) break;
    }
  }
  return tail;
}

/// Heat-invariant densities of Δ₀ on the round unit S^m:
/// τ = m(m−1), |ρ|² = m(m−1)², |R|² = 2m(m−1).
struct RoundSphereInvariants {
  double a0 = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
};

inline RoundSphereInvariants round_sphere_heat_invariants(std::size_t m) {
  const double md = static_cast<double>(m);
  const double tau = md * (md - 1.0);
  const double rho2 = md * (md - 1.0) * (md - 1.0);
  const double r2 = 2.0 * md * (md - 1.0);
  const double scale = heat_normalisation(m) * round_sphere_volume(m);
  return {scale, scale * tau / 6.0, scale * (5.0 * tau * tau - 2.0 * rho2 + 2.0 * r2) / 360.0};
}

inline constexpr double kTailBound = 1e-12;

struct HeatTraceFit {
  std::size_t m = 0;
  std::size_t k_max = 0;
  double a0 = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
  RoundSphereInvariants geometric;
  double rel_err_a0 = 0.0;
  double rel_err_a2 = 0.0;
  double rel_err_a4 = 0.0;
  double tail = 0.0;  // relative truncation tail at min(t_grid)
};

/// Fits t^{m/2} Tr e^{−tΔ₀} ≈ a0 + a2 t + a4 t² by least squares with
/// relative weights.
inline HeatTraceFit heat_trace_fit(std::size_t m, std::span<const double> t_grid, std::size_t k_max) {
  if (t_grid.size() < 3) throw Error(ErrorKind::IllConditionedFit, "need at least 3 grid points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw Error(ErrorKind::IllConditionedFit, "t grid must be strictly positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw Error(ErrorKind::IllConditionedFit, "t grid must be strictly increasing");
  }
  const double tmin = t_grid.front();
  const double tmax = t_grid.back();
  if (tmax / tmin < 10.0) throw Error(ErrorKind::IllConditionedFit, "t grid spans less than one decade");

  const auto spectrum = sphere_spectrum(m, k_max);
  HeatTraceFit fit;
  fit.m = m;
  fit.k_max = k_max;
  fit.tail = sphere_trace_tail(m, k_max, tmin) / heat_trace(spectrum, tmin);
  if (!(fit.tail < kTailBound))
    throw Error(ErrorKind::TailTooLarge, "relative truncation tail " + std::to_string(fit.tail));

  const auto n = static_cast<Eigen::Index>(t_grid.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  const double half_m = 0.5 * static_cast<double>(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    const double f = std::pow(t, half_m) * heat_trace(spectrum, t);
    const double w = 1.0 / f;
    A(i, 0) = w;
    A(i, 1) = w * t;
    A(i, 2) = w * t * t;
    y(i) = 1.0;
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  fit.a0 = coef(0);
  fit.a2 = coef(1);
  fit.a4 = coef(2);
  fit.geometric = round_sphere_heat_invariants(m);
  fit.rel_err_a0 = std::abs(fit.a0 / fit.geometric.a0 - 1.0);
  fit.rel_err_a2 = std::abs(fit.a2 / fit.geometric.a2 - 1.0);
  fit.rel_err_a4 = std::abs(fit.a4 / fit.geometric.a4 - 1.0);
  return fit;
}

/// `count` log-spaced points from tmin to tmax inclusive.
inline std::vector<double> log_grid(double tmin, double tmax, std::size_t count) {
  std::vector<double> g(count);
  const double l0 = std::log(tmin);
  const double l1 = std::log(tmax);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1));
  g.front() = tmin;
  g.back() = tmax;
  return g;
}

}  // namespace sasaki
