#pragma once

// Heat-trace invariants of the Hodge Laplacians Δ_p, p ∈ {0,1,2}.
//
// Δ_p = −(Tr ∇² + E) with E = Σ_ab e^a ∧ ι_{e_b} Ω_ab (Weitzenböck), where
// Ω_ab = R(e_a,e_b) acts on Λ^p as a derivation and (Ω_ab ω)_k = −R_abkl ω_l
// on 1-forms. Densities (before the (4π)^{−m/2} factor):
//
//   d0 = Tr I
//   d2 = (1/6)   Tr(6E + τI)
//   d4 = (1/360) Tr(60τE + 180E² + 30 Σ_ab Ω_ab Ω_ab + (5τ² − 2|ρ|² + 2|R|²) I)
//
// The E_{;kk} and τ_{;kk} terms are omitted: they vanish on homogeneous spaces
// and integrate to zero on closed manifolds.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sasaki/error.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/random.hpp"
#include "sasaki/space_forms.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

/// Orthonormal basis e^I of Λ^p(R^m): multi-indices i_1 < … < i_p in
/// lexicographic order, stored as bit masks.
class FormBasis {
 public:
  FormBasis(std::size_t m, std::size_t p) : m_(m), p_(p), lookup_(std::size_t{1} << m, -1) {
    if (m > 20) throw Error(ErrorKind::InconsistentDimensions, "exterior algebra limited to m <= 20");
    if (p > m) return;
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    while (true) {
      std::uint32_t mask = 0;
      for (auto i : idx) mask |= (1u << i);
      lookup_[mask] = static_cast<int>(masks_.size());
      masks_.push_back(mask);
      // Next combination in lexicographic order.
      std::size_t k = p;
      while (k > 0 && idx[k - 1] == m - p + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < p; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  std::size_t size() const noexcept { return masks_.size(); }
  std::size_t degree() const noexcept { return p_; }
  std::size_t dim() const noexcept { return m_; }
  std::uint32_t mask(std::size_t i) const { return masks_[i]; }
  int index_of(std::uint32_t mask) const { return lookup_[mask]; }

  /// (−1)^{#{i ∈ mask : i < a}}
  static double sign_before(std::uint32_t mask, std::size_t a) {
    const std::uint32_t below = mask & ((1u << a) - 1u);
    return (__builtin_popcount(below) % 2) ? -1.0 : 1.0;
  }

 private:
  std::size_t m_;
  std::size_t p_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> lookup_;
};

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

struct LaplaceTypeData {
  int p = 0;
  std::size_t m = 0;
  std::size_t fiber_dim = 0;
  Eigen::MatrixXd E;
  std::vector<Eigen::MatrixXd> omega;  // omega[i*m+j] = Ω_ij on Λ^p

  const Eigen::MatrixXd& Omega(std::size_t i, std::size_t j) const { return omega[i * m + j]; }
};

namespace detail {

/// Matrix of the derivation induced on Λ^p by w ∈ End(Λ¹), w(k,l) = ⟨w e^l, e^k⟩.
inline Eigen::MatrixXd derivation_on_forms(const FormBasis& basis, const Eigen::MatrixXd& w) {
  const std::size_t N = basis.size();
  const std::size_t m = basis.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t col = 0; col < N; ++col) {
    const std::uint32_t I = basis.mask(col);
    for (std::size_t l = 0; l < m; ++l) {
      if (!(I & (1u << l))) continue;
      // e^I = s_l e^l ∧ e^{I∖l}
      const std::uint32_t rest = I & ~(1u << l);
      const double s_l = FormBasis::sign_before(I, l);
      for (std::size_t k = 0; k < m; ++k) {
        const double coeff = w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
        if (coeff == 0.0 || (rest & (1u << k))) continue;
        const std::uint32_t J = rest | (1u << k);
        const double s_k = FormBasis::sign_before(rest, k);
        out(basis.index_of(J), static_cast<Eigen::Index>(col)) += coeff * s_l * s_k;
      }
    }
  }
  return out;
}

/// Matrix of e^a ∧ ι_{e_b} on Λ^p.
inline Eigen::MatrixXd wedge_interior(const FormBasis& basis, std::size_t a, std::size_t b) {
  const std::size_t N = basis.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t col = 0; col < N; ++col) {
    const std::uint32_t I = basis.mask(col);
    if (!(I & (1u << b))) continue;
    const std::uint32_t rest = I & ~(1u << b);
    const double s_b = FormBasis::sign_before(I, b);
    if (rest & (1u << a)) continue;
    const double s_a = FormBasis::sign_before(rest, a);
    out(basis.index_of(rest | (1u << a)), static_cast<Eigen::Index>(col)) += s_a * s_b;
  }
  return out;
}

}  // namespace detail

/// Endomorphism E and bundle curvature Ω of Δ_p at one point.
inline LaplaceTypeData weitzenboeck_data(int p, const CurvaturePoint& curv) {
  if (p < 0 || p > 2) throw Error(ErrorKind::UnsupportedDegree, "p must be 0, 1 or 2, got " + std::to_string(p));
  const std::size_t m = curv.dim;
  const FormBasis basis(m, static_cast<std::size_t>(p));
  const std::size_t N = basis.size();
  const auto Ni = static_cast<Eigen::Index>(N);
  LaplaceTypeData d;
  d.p = p;
  d.m = m;
  d.fiber_dim = N;
  d.E = Eigen::MatrixXd::Zero(Ni, Ni);
  d.omega.assign(m * m, Eigen::MatrixXd::Zero(Ni, Ni));
  if (p == 0) return d;

  const Tensor4& R = curv.riemann;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Eigen::MatrixXd w(m, m);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = -R(i, j, k, l);
      d.omega[i * m + j] = detail::derivation_on_forms(basis, w);
    }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d.E += detail::wedge_interior(basis, a, b) * d.omega[a * m + b];
  return d;
}

struct HeatDensity {
  double d0 = 0.0;
  double d2 = 0.0;
  double d4 = 0.0;
};

inline HeatDensity heat_density(const LaplaceTypeData& data, const CurvaturePoint& curv) {
  if (data.m != curv.dim || data.omega.size() != data.m * data.m ||
      static_cast<std::size_t>(data.E.rows()) != data.fiber_dim)
    throw Error(ErrorKind::InconsistentDimensions, "Laplace-type data does not match the curvature point");
  const double N = static_cast<double>(data.fiber_dim);
  const double tau = curv.tau;
  const double trE = data.E.trace();
  const double trE2 = (data.E * data.E).trace();
  double trOmega2 = 0.0;
  for (const auto& om : data.omega) trOmega2 += (om * om).trace();
  HeatDensity h;
  h.d0 = N;
  h.d2 = (6.0 * trE + tau * N) / 6.0;
  h.d4 = (60.0 * tau * trE + 180.0 * trE2 + 30.0 * trOmega2 +
          N * (5.0 * tau * tau - 2.0 * curv.norm_ricci_sq + 2.0 * curv.norm_riemann_sq)) /
         360.0;
  return h;
}

struct HeatCoefficients {
  double a0 = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
  std::size_t m = 0;
  int p = 0;
};

inline double heat_normalisation(std::size_t m) { return std::pow(4.0 * std::numbers::pi, -0.5 * static_cast<double>(m)); }

/// a_n = (4π)^{−m/2} d_n(base point) Vol(M) on a homogeneous compact model space.
inline HeatCoefficients heat_coefficients(const ModelSpace& space, int p) {
  if (!space.compact()) throw Error(ErrorKind::NoncompactSpace, to_string(space.kind) + " has no finite volume");
  const CurvaturePoint curv = curvature_at(space.structure.metric, space.base_point);
  const HeatDensity d = heat_density(weitzenboeck_data(p, curv), curv);
  const double scale = heat_normalisation(space.dim()) * *space.total_volume;
  return {d.d0 * scale, d.d2 * scale, d.d4 * scale, space.dim(), p};
}

// ---------------------------------------------------------------------------
// Universal constants

struct AlgebraicCurvature {
  std::size_t m = 0;
  Tensor4 riemann;
  Eigen::MatrixXd ricci;
  double tau = 0.0;

  CurvaturePoint to_curvature_point() const { return curvature_from_riemann(riemann); }
};

/// Random tensor with the symmetries of a curvature tensor: antisymmetrised in
/// each pair, symmetrised under pair exchange, then the first-Bianchi part
/// (totally antisymmetric) projected out.
inline AlgebraicCurvature random_algebraic_curvature(std::size_t m, std::uint64_t seed) {
  if (m < 2) throw Error(ErrorKind::DimensionTooSmall, "algebraic curvature needs m >= 2");
  Rng rng(seed);
  Tensor4 t(m);
  for (auto& v : t.data()) v = rng.normal();

  Tensor4 a(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          a(i, j, k, l) = 0.25 * (t(i, j, k, l) - t(j, i, k, l) - t(i, j, l, k) + t(j, i, l, k));
  Tensor4 s(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) s(i, j, k, l) = 0.5 * (a(i, j, k, l) + a(k, l, i, j));
  Tensor4 r(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          r(i, j, k, l) = s(i, j, k, l) - (s(i, j, k, l) + s(j, k, i, l) + s(k, i, j, l)) / 3.0;

  const CurvaturePoint c = curvature_from_riemann(r);
  return {m, c.riemann, c.ricci, c.tau};
}

struct UniversalConstants {
  std::size_t m = 0;
  int p = 0;
  double c1 = 0.0;  // τ²
  double c2 = 0.0;  // |ρ|²
  double c3 = 0.0;  // |R|²
  double residual = 0.0;
  std::size_t samples = 0;
};

inline constexpr double kSpanTolerance = 1e-8;

/// Least-squares fit of the a₄ density of Δ_p on random algebraic curvature
/// tensors onto (τ², |ρ|², |R|²). Sample k uses seed + k.
inline UniversalConstants universal_constants(std::size_t m, int p, std::size_t samples,
                                              std::uint64_t seed = kDefaultSeed) {
  if (samples < 10) throw Error(ErrorKind::RankDeficientDesign, "need at least 10 samples");
  const auto n = static_cast<Eigen::Index>(samples);
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const CurvaturePoint c = random_algebraic_curvature(m, seed + s).to_curvature_point();
    const auto row = static_cast<Eigen::Index>(s);
    A(row, 0) = c.tau * c.tau;
    A(row, 1) = c.norm_ricci_sq;
    A(row, 2) = c.norm_riemann_sq;
    b(row) = heat_density(weitzenboeck_data(p, c), c).d4;
  }
  // Normal equations, pivoted QR.
  const Eigen::MatrixXd AtA = A.transpose() * A;
  const Eigen::VectorXd Atb = A.transpose() * b;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(AtA);
  qr.setThreshold(1e-12);
  if (qr.rank() < 3)
    throw Error(ErrorKind::RankDeficientDesign, "sampled moment matrix has rank " + std::to_string(qr.rank()));
  const Eigen::VectorXd x = qr.solve(Atb);

  UniversalConstants u;
  u.m = m;
  u.p = p;
  u.c1 = x(0);
  u.c2 = x(1);
  u.c3 = x(2);
  u.samples = samples;
  u.residual = (A * x - b).norm() / std::max(b.norm(), 1e-300);
  if (!(u.residual < kSpanTolerance))
    throw Error(ErrorKind::SpanViolation, "regression residual " + std::to_string(u.residual));
  return u;
}

struct IndependenceReport {
  std::size_t m = 0;
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();  // rows p = 1, 2; columns (c2, c3)
  Eigen::Vector2d singular_values = Eigen::Vector2d::Zero();
  int rank = 0;

  bool pass() const { return rank == 2; }
};

/// Numerical rank with threshold 1e−10 · σ_max.
inline IndependenceReport independence_rank(const Eigen::Matrix2d& mat) {
  IndependenceReport r;
  r.matrix = mat;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(mat);
  r.singular_values = svd.singularValues();
  const double thr = 1e-10 * r.singular_values(0);
  r.rank = 0;
  for (int i = 0; i < 2; ++i)
    if (r.singular_values(i) > thr) ++r.rank;
  return r;
}

inline IndependenceReport independence_check(std::size_t m, std::size_t samples = 24,
                                             std::uint64_t seed = kDefaultSeed) {
  if (m < 5) throw Error(ErrorKind::DimensionTooSmall, "independence check needs m >= 5");
  const UniversalConstants u1 = universal_constants(m, 1, samples, seed);
  const UniversalConstants u2 = universal_constants(m, 2, samples, seed);
  Eigen::Matrix2d mat;
  mat << u1.c2, u1.c3, u2.c2, u2.c3;
  IndependenceReport r = independence_rank(mat);
  r.m = m;
  return r;
}

}  // namespace sasaki
