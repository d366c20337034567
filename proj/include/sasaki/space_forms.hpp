#pragma once

// Sasakian model spaces and the space-form comparison tensors K and T_c = R − K.
//
// Catalogue:
//   standard sphere S^{2n+1}   graph chart over the upper hemisphere, c = 1
//   D-homothetic deformation   η' = aη, ξ' = ξ/a, φ' = φ, g' = ag + a(a−1)η⊗η,
//                              c' = (c+3)/a − 3, volume scales by a^{n+1}
//   Heisenberg group           η = ½(dz − Σ y_i dx_i), ξ = 2∂z,
//                              g = η⊗η + ¼Σ(dx_i² + dy_i²), c = −3, noncompact

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sasaki/contact.hpp"
#include "sasaki/error.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/jet.hpp"
#include "sasaki/random.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

enum class SpaceKind { StandardSphere, DeformedSphere, Heisenberg };

inline std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::StandardSphere: return "sphere";
    case SpaceKind::DeformedSphere: return "deformed_sphere";
    case SpaceKind::Heisenberg: return "heisenberg";
  }
  return "unknown";
}

struct ModelSpace {
  SpaceKind kind = SpaceKind::StandardSphere;
  std::size_t n = 0;
  double a = 1.0;
  ContactStructure structure;
  std::vector<double> base_point;
  std::optional<double> total_volume;

  std::size_t dim() const noexcept { return 2 * n + 1; }
  bool compact() const noexcept { return total_volume.has_value(); }

  /// φ-sectional curvature the builder was constructed to have.
  double nominal_c() const { return kind == SpaceKind::Heisenberg ? -3.0 : 4.0 / a - 3.0; }
};

/// Closed-form data of a Sasakian space form of dimension m and φ-sectional
/// curvature c.
struct SpaceFormParams {
  std::size_t m = 0;
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double d = 0.0;
  double norm_riemann_sq = 0.0;
};

inline SpaceFormParams space_form_params(std::size_t m, double c) {
  const double md = static_cast<double>(m);
  SpaceFormParams p;
  p.m = m;
  p.c = c;
  p.alpha = 0.25 * ((md + 1.0) * c + 3.0 * md - 5.0);
  p.beta = -0.25 * (md + 1.0) * (c - 1.0);
  p.tau = 0.25 * (md - 1.0) * ((md + 1.0) * c + 3.0 * md - 1.0);
  p.d = 0.5 * (md - 1.0) * (md + 1.0) * c * c + (md - 1.0) * (3.0 * md - 1.0) * c -
        0.5 * (md - 1.0) * (3.0 * md - 1.0);
  p.norm_riemann_sq = 0.5 * (md - 1.0) * ((md + 1.0) * c * c + 3.0 * md - 1.0);
  return p;
}

/// Vol(S^m) = 2π^{(m+1)/2} / Γ((m+1)/2).
inline double round_sphere_volume(std::size_t m) {
  const double h = 0.5 * static_cast<double>(m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

// ---------------------------------------------------------------------------
// Builders

/// Standard structure on the unit S^{2n+1} ⊂ C^{n+1} in the graph chart
/// u ↦ (u, √(1−|u|²)), with ξ = Jp and φ = −(J·)ᵀ. Accepts n ≥ 1 so that the
/// 3-dimensional case can be checked; model-space builders require n ≥ 2.
inline ContactStructure sphere_structure(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::DimensionTooSmall, "sphere structure needs n >= 1");
  const std::size_t m = 2 * n + 1;
  ContactStructure cs;
  cs.metric.dim = m;
  cs.metric.in_domain = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s < 1.0;
  };
  cs.metric.components = [m](std::span<const double> x) {
    const JetVector u = coordinate_jets(x);
    Jet3 s(m);
    for (const auto& ui : u) s += ui * ui;
    const Jet3 inv = reciprocal(1.0 - s);
    JetMatrix g;
    g.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Jet3 gij = u[i] * u[j] * inv;
        if (i == j) gij += 1.0;
        g.push_back(std::move(gij));
      }
    return g;
  };
  cs.fields = [m](std::span<const double> x) {
    const JetVector u = coordinate_jets(x);
    Jet3 s(m);
    for (const auto& ui : u) s += ui * ui;
    const Jet3 w = sqrt(1.0 - s);
    const std::size_t amb = m + 1;

    JetVector p(u);
    p.push_back(w);
    auto J = [amb](const JetVector& v) {
      JetVector r(v.size());
      for (std::size_t k = 0; 2 * k + 1 < amb; ++k) {
        r[2 * k] = -v[2 * k + 1];
        r[2 * k + 1] = v[2 * k];
      }
      return r;
    };
    auto dot = [m](const JetVector& a, const JetVector& b) {
      Jet3 r(m);
      for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
      return r;
    };
    // ∂_i p = e_i + ∂_i w e_m
    std::vector<JetVector> dp(m, JetVector(amb, Jet3(m)));
    for (std::size_t i = 0; i < m; ++i) {
      dp[i][i] = Jet3(m, 1.0);
      dp[i][m] = -(u[i] / w);
    }

    const JetVector jp = J(p);
    ContactFields f;
    f.xi.assign(jp.begin(), jp.begin() + static_cast<std::ptrdiff_t>(m));
    f.eta.reserve(m);
    for (std::size_t i = 0; i < m; ++i) f.eta.push_back(dot(jp, dp[i]));
    f.phi.assign(m * m, Jet3(m));
    for (std::size_t j = 0; j < m; ++j) {
      const JetVector jdp = J(dp[j]);
      const Jet3 normal = dot(jdp, p);
      for (std::size_t i = 0; i < m; ++i) f.phi[i * m + j] = normal * u[i] - jdp[i];
    }
    return f;
  };
  return cs;
}

/// Heisenberg group in global coordinates (x_1..x_n, y_1..y_n, z).
inline ContactStructure heisenberg_structure(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::DimensionTooSmall, "Heisenberg structure needs n >= 1");
  const std::size_t m = 2 * n + 1;
  auto eta_jets = [n, m](const JetVector& u) {
    JetVector eta(m, Jet3(m));
    for (std::size_t i = 0; i < n; ++i) eta[i] = -0.5 * u[n + i];
    eta[2 * n] = Jet3(m, 0.5);
    return eta;
  };
  ContactStructure cs;
  cs.metric.dim = m;
  cs.metric.components = [m, n, eta_jets](std::span<const double> x) {
    const JetVector eta = eta_jets(coordinate_jets(x));
    JetMatrix g;
    g.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Jet3 gij = eta[i] * eta[j];
        if (i == j && i < 2 * n) gij += 0.25;
        g.push_back(std::move(gij));
      }
    return g;
  };
  cs.fields = [m, n, eta_jets](std::span<const double> x) {
    const JetVector u = coordinate_jets(x);
    ContactFields f;
    f.eta = eta_jets(u);
    f.xi.assign(m, Jet3(m));
    f.xi[2 * n] = Jet3(m, 2.0);
    f.phi.assign(m * m, Jet3(m));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t xi_idx = i;
      const std::size_t yi_idx = n + i;
      f.phi[yi_idx * m + xi_idx] = Jet3(m, -1.0);  // φ∂x_i = −∂y_i
      f.phi[xi_idx * m + yi_idx] = Jet3(m, 1.0);   // φ∂y_i = ∂x_i + y_i ∂z
      f.phi[(2 * n) * m + yi_idx] = u[yi_idx];
    }
    return f;
  };
  return cs;
}

/// η' = aη, ξ' = ξ/a, φ' = φ, g' = ag + a(a−1)η⊗η.
inline ContactStructure d_homothetic_deform(const ContactStructure& base, double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::NonPositiveParameter, "deformation parameter must be > 0");
  const std::size_t m = base.dim();
  ContactStructure cs;
  cs.metric.dim = m;
  cs.metric.in_domain = base.metric.in_domain;
  cs.metric.components = [base, a, m](std::span<const double> x) {
    JetMatrix g = base.metric.components(x);
    const JetVector eta = base.fields(x).eta;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Jet3& gij = g[i * m + j];
        gij *= a;
        gij += (a * (a - 1.0)) * (eta[i] * eta[j]);
      }
    return g;
  };
  cs.fields = [base, a](std::span<const double> x) {
    ContactFields f = base.fields(x);
    for (auto& e : f.eta) e *= a;
    for (auto& v : f.xi) v *= (1.0 / a);
    return f;
  };
  return cs;
}

namespace detail {

inline void require_sasakian_at_base(const ModelSpace& s) {
  const StructurePoint sp = structure_at(s.structure, s.base_point);
  for (const auto& r : sasakian_residuals(sp))
    if (!(r.value < 1e-8))
      throw Error(ErrorKind::ConsistencyFailure,
                  "model space fails the Sasakian test at its base point (" + r.name + ")");
}

}  // namespace detail

inline ModelSpace build_standard_sphere(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "model spaces need n >= 2 (m >= 5)");
  ModelSpace s;
  s.kind = SpaceKind::StandardSphere;
  s.n = n;
  s.a = 1.0;
  s.structure = sphere_structure(n);
  s.base_point.assign(2 * n + 1, 0.0);
  s.total_volume = round_sphere_volume(2 * n + 1);
  detail::require_sasakian_at_base(s);
  return s;
}

inline ModelSpace build_heisenberg(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionTooSmall, "model spaces need n >= 2 (m >= 5)");
  ModelSpace s;
  s.kind = SpaceKind::Heisenberg;
  s.n = n;
  s.a = 1.0;
  s.structure = heisenberg_structure(n);
  s.base_point.assign(2 * n + 1, 0.0);
  s.total_volume = std::nullopt;
  detail::require_sasakian_at_base(s);
  return s;
}

inline ModelSpace d_homothetic_deform(const ModelSpace& space, double a) {
  ModelSpace s = space;
  s.structure = d_homothetic_deform(space.structure, a);
  s.a = space.a * a;
  if (space.kind != SpaceKind::Heisenberg) s.kind = SpaceKind::DeformedSphere;
  if (space.total_volume)
    s.total_volume = *space.total_volume * std::pow(a, static_cast<double>(space.n + 1));
  detail::require_sasakian_at_base(s);
  return s;
}

/// Deterministic chart points: inside the ball of radius 0.5 for spheres,
/// inside [−1, 1]^m for Heisenberg. The base point is not included.
inline std::vector<std::vector<double>> sample_points(const ModelSpace& space, std::size_t count,
                                                      std::uint64_t seed = kDefaultSeed) {
  Rng rng(seed);
  const std::size_t m = space.dim();
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    std::vector<double> x(m);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    if (space.kind != SpaceKind::Heisenberg) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      if (r2 >= 1.0) continue;
      for (auto& v : x) v *= 0.5;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Comparison tensors

/// K_ijkl built from the orthonormal-frame φ_ij and η_i.
inline Tensor4 k_tensor(const Eigen::MatrixXd& phi, const Eigen::VectorXd& eta, double c) {
  const std::size_t m = static_cast<std::size_t>(phi.rows());
  if (eta.size() != phi.rows() || phi.cols() != phi.rows())
    throw Error(ErrorKind::InconsistentDimensions, "phi must be m×m and eta of length m");
  auto P = [&](std::size_t a, std::size_t b) { return phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); };
  auto e = [&](std::size_t a) { return eta(static_cast<Eigen::Index>(a)); };
  auto d = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  const double w0 = (c + 3.0) / 4.0;
  const double w1 = (c - 1.0) / 4.0;
  Tensor4 K(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          K(i, j, k, l) = w0 * (d(j, k) * d(i, l) - d(i, k) * d(j, l)) +
                          w1 * (P(k, i) * P(j, l) - P(k, j) * P(i, l) + 2.0 * P(j, i) * P(k, l)) +
                          w1 * (e(i) * e(k) * d(j, l) - e(j) * e(k) * d(i, l) + d(i, k) * e(j) * e(l) -
                                d(j, k) * e(i) * e(l));
  return K;
}

inline Tensor4 k_tensor(const ContactStructure& cs, std::span<const double> point, double c) {
  const StructurePoint sp = structure_at(cs, point);
  return k_tensor(sp.phi, sp.eta, c);
}

/// |K|² on a Sasakian structure: (m−1)/2 {(m+1)c² + 3m − 1}.
inline double k_norm_sq_closed(std::size_t m, double c) { return space_form_params(m, c).norm_riemann_sq; }

/// R·K on a Sasakian manifold: 2cτ − ½(m−1)(3m−1)(c−1).
inline double rk_contraction_closed(std::size_t m, double c, double tau) {
  const double md = static_cast<double>(m);
  return 2.0 * c * tau - 0.5 * (md - 1.0) * (3.0 * md - 1.0) * (c - 1.0);
}

/// |T_c|² on a Sasakian manifold: |R|² − 4cτ + d.
inline double t_c_norm_closed(std::size_t m, double c, double norm_riemann_sq, double tau) {
  return norm_riemann_sq - 4.0 * c * tau + space_form_params(m, c).d;
}

struct TcAnalysis {
  double c = 0.0;
  double t_norm_sq = 0.0;         // |R − K|², brute force
  double t_norm_sq_closed = 0.0;  // |R|² − 4cτ + d
  double k_norm_sq = 0.0;
  double k_norm_sq_closed = 0.0;
  double rk = 0.0;
  double rk_closed = 0.0;
  double lemma2 = 0.0;
  double lemma2_closed = 0.0;
};

/// Brute-force and closed-form evaluations of |T_c|² and its ingredients.
/// Throws ConsistencyFailure if |T_c|² disagrees between the two routes by more
/// than `tol` relative to max(1, |R|²).
inline TcAnalysis t_c_analysis(const CurvaturePoint& curv, const Eigen::MatrixXd& phi, const Eigen::VectorXd& eta,
                               double c, double tol = 1e-8) {
  const std::size_t m = curv.dim;
  const Tensor4 K = k_tensor(phi, eta, c);
  TcAnalysis t;
  t.c = c;
  t.t_norm_sq = contract_norm_sq(curv.riemann - K);
  t.t_norm_sq_closed = t_c_norm_closed(m, c, curv.norm_riemann_sq, curv.tau);
  t.k_norm_sq = contract_norm_sq(K);
  t.k_norm_sq_closed = k_norm_sq_closed(m, c);
  t.rk = full_contraction(curv.riemann, K);
  t.rk_closed = rk_contraction_closed(m, c, curv.tau);
  t.lemma2 = lemma2_contraction(curv.riemann, phi);
  const double md = static_cast<double>(m);
  t.lemma2_closed = 6.0 * curv.tau - 6.0 * (md - 1.0) * (md - 1.0);
  const double scale = std::max(1.0, curv.norm_riemann_sq);
  if (std::abs(t.t_norm_sq - t.t_norm_sq_closed) > tol * scale)
    throw Error(ErrorKind::ConsistencyFailure, "|T_c|^2 brute force " + std::to_string(t.t_norm_sq) +
                                                   " vs closed form " + std::to_string(t.t_norm_sq_closed));
  return t;
}

inline double t_c_norm(const CurvaturePoint& curv, const Eigen::MatrixXd& phi, const Eigen::VectorXd& eta, double c,
                       double tol = 1e-8) {
  return t_c_analysis(curv, phi, eta, c, tol).t_norm_sq;
}

inline double t_c_norm(const StructurePoint& sp, double c, double tol = 1e-8) {
  return t_c_norm(sp.curvature, sp.phi, sp.eta, c, tol);
}

/// R(X, φX, φX, X) for the unit projection of X (frame components) onto ξ^⊥.
inline double phi_sectional(const CurvaturePoint& curv, const Eigen::MatrixXd& phi, const Eigen::VectorXd& eta,
                            const Eigen::VectorXd& X) {
  if (X.size() != eta.size()) throw Error(ErrorKind::InconsistentDimensions, "direction has wrong length");
  Eigen::VectorXd v = X - eta.dot(X) * eta;
  const double norm = v.norm();
  if (norm < 1e-10) throw Error(ErrorKind::DegenerateDirection, "direction is parallel to xi");
  v /= norm;
  const Eigen::VectorXd w = phi.transpose() * v;  // (φv)_b = Σ_a v_a φ_ab
  const std::size_t m = curv.dim;
  const Tensor4& R = curv.riemann;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          s += R(i, j, k, l) * v(static_cast<Eigen::Index>(i)) * w(static_cast<Eigen::Index>(j)) *
               w(static_cast<Eigen::Index>(k)) * v(static_cast<Eigen::Index>(l));
  return s;
}

inline double phi_sectional(const StructurePoint& sp, const Eigen::VectorXd& X) {
  return phi_sectional(sp.curvature, sp.phi, sp.eta, X);
}

}  // namespace sasaki
