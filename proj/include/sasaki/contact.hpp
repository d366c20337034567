#pragma once

// Contact metric structures (η, g, φ, ξ) on a chart, their defining identities,
// the Sasakian test, the η-Einstein decomposition and the contraction chain
// R_ijkl{φ_ki φ_jl − φ_kj φ_il + 2φ_ji φ_kl} = 6τ − 6(m−1)².
//
// Exterior derivative convention: dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y])),
// i.e. dη_ij = ½(∂_i η_j − ∂_j η_i). With it the unit sphere and the
// Heisenberg group satisfy dη(X,Y) = g(X,φY) exactly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sasaki/error.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

struct ContactFields {
  JetVector eta;  // η_i
  JetVector xi;   // ξ^i
  JetMatrix phi;  // phi[i*m+j] = φ^i_j
};

struct ContactStructure {
  MetricField metric;
  std::function<ContactFields(std::span<const double>)> fields;

  std::size_t dim() const noexcept { return metric.dim; }
};

/// Structure tensors and their covariant derivatives in the orthonormal frame
/// at one point, together with the curvature there.
struct StructurePoint {
  PointGeometry geometry;
  CurvaturePoint curvature;
  Eigen::VectorXd eta;         // η(e_a)
  Eigen::VectorXd xi;          // θ^a(ξ)
  Eigen::MatrixXd phi_op;      // θ^a(φ e_b): φ as an operator on frame components
  Eigen::MatrixXd phi;         // φ_ab = g(φ e_a, e_b)
  Eigen::MatrixXd deta;        // dη(e_a, e_b)
  Tensor3 nabla_phi;           // ∇_a φ_bc
  Eigen::MatrixXd nabla_eta;   // ∇_a η_b = g(∇_{e_a}ξ, e_b)

  std::size_t dim() const noexcept { return curvature.dim; }
};

inline StructurePoint structure_at(const ContactStructure& cs, std::span<const double> x, const Tolerances& tol = {},
                                   const std::optional<Eigen::MatrixXd>& basis = std::nullopt) {
  const std::size_t m = cs.dim();
  StructurePoint sp;
  sp.geometry = geometry_at(cs.metric, x, tol, basis);
  sp.curvature = curvature_at(sp.geometry);
  const ContactFields f = cs.fields(x);
  if (f.eta.size() != m || f.xi.size() != m || f.phi.size() != m * m)
    throw Error(ErrorKind::InconsistentDimensions, "contact fields do not match the chart dimension");

  const Eigen::MatrixXd& F = sp.geometry.frame.frame;
  const Eigen::MatrixXd& C = sp.geometry.frame.coframe;
  const Eigen::VectorXd eta_c = jet_values(f.eta);
  const Eigen::VectorXd xi_c = jet_values(f.xi);
  const Eigen::MatrixXd phi_c = jet_values(f.phi, m);

  sp.eta = F * eta_c;
  sp.xi = C * xi_c;
  sp.phi_op = C * phi_c * F.transpose();
  sp.phi = sp.phi_op.transpose();

  Eigen::MatrixXd deta_c(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      deta_c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          0.5 * (f.eta[j].grad(i) - f.eta[i].grad(j));
  sp.deta = F * deta_c * F.transpose();

  sp.nabla_phi = covariant_derivative_11(sp.geometry, f.phi);
  sp.nabla_eta = covariant_derivative_vector(sp.geometry, f.xi);
  return sp;
}

struct Residual {
  std::string name;
  double value = 0.0;
};

/// Worst residual per identity over the evaluated points.
struct ResidualReport {
  double tolerance = 0.0;
  std::vector<Residual> worst;
  std::vector<std::vector<Residual>> per_point;

  bool pass() const {
    return std::all_of(worst.begin(), worst.end(), [&](const Residual& r) { return r.value < tolerance; });
  }

  double get(const std::string& name) const {
    for (const auto& r : worst)
      if (r.name == name) return r.value;
    throw Error(ErrorKind::ConsistencyFailure, "no residual named " + name);
  }

  void add_point(std::vector<Residual> point) {
    if (worst.empty()) {
      worst = point;
    } else {
      for (std::size_t i = 0; i < point.size(); ++i) worst[i].value = std::max(worst[i].value, point[i].value);
    }
    per_point.push_back(std::move(point));
  }
};

namespace detail {

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

template <class Fn>
ResidualReport over_points(const ContactStructure& cs, std::span<const std::vector<double>> points, double tol,
                           Fn per_point) {
  ResidualReport rep;
  rep.tolerance = tol;
  for (const auto& x : points) rep.add_point(per_point(structure_at(cs, x)));
  return rep;
}

}  // namespace detail

/// Algebraic identities of an almost contact metric structure plus
/// dη(X,Y) = g(X,φY), all in the orthonormal frame.
inline std::vector<Residual> contact_metric_residuals(const StructurePoint& sp) {
  const auto m = static_cast<Eigen::Index>(sp.dim());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd& P = sp.phi_op;
  return {
      {"eta_of_xi", std::abs(sp.eta.dot(sp.xi) - 1.0)},
      {"eta_is_metric_dual_of_xi", (sp.eta - sp.xi).cwiseAbs().maxCoeff()},
      {"phi_squared", detail::max_abs(P * P + I - sp.xi * sp.eta.transpose())},
      {"phi_xi", P.size() ? (P * sp.xi).cwiseAbs().maxCoeff() : 0.0},
      {"eta_phi", P.size() ? (sp.eta.transpose() * P).cwiseAbs().maxCoeff() : 0.0},
      {"metric_compatibility", detail::max_abs(P.transpose() * P - I + sp.eta * sp.eta.transpose())},
      {"d_eta", detail::max_abs(sp.deta - P)},
  };
}

inline ResidualReport verify_contact_metric(const ContactStructure& cs, std::span<const std::vector<double>> points,
                                            double tol) {
  return detail::over_points(cs, points, tol, [](const StructurePoint& sp) { return contact_metric_residuals(sp); });
}

/// (∇_Xφ)Y − g(X,Y)ξ + η(Y)X and ∇_Xξ + φX over frame vectors.
inline std::vector<Residual> sasakian_residuals(const StructurePoint& sp) {
  const std::size_t m = sp.dim();
  double nphi = 0.0;
  double nxi = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      for (std::size_t k = 0; k < m; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double expected = (i == j ? sp.eta(kk) : 0.0) - sp.eta(jj) * (i == k ? 1.0 : 0.0);
        nphi = std::max(nphi, std::abs(sp.nabla_phi(i, j, k) - expected));
      }
      nxi = std::max(nxi, std::abs(sp.nabla_eta(ii, jj) + sp.phi(ii, jj)));
    }
  return {{"nabla_phi", nphi}, {"nabla_xi", nxi}};
}

inline ResidualReport verify_sasakian(const ContactStructure& cs, std::span<const std::vector<double>> points,
                                      double tol) {
  return detail::over_points(cs, points, tol, [](const StructurePoint& sp) { return sasakian_residuals(sp); });
}

/// Frame form of the Sasakian identities: ∇φ, ∇η, R(·,·)ξ and ρ(ξ,ξ) = m−1.
inline std::vector<Residual> structure_identity_residuals(const StructurePoint& sp) {
  auto out = sasakian_residuals(sp);
  const std::size_t m = sp.dim();
  const Tensor4& R = sp.curvature.riemann;
  double rxi = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < m; ++k) lhs += R(i, j, k, l) * sp.eta(static_cast<Eigen::Index>(k));
        const double rhs = sp.eta(static_cast<Eigen::Index>(j)) * (i == l ? 1.0 : 0.0) -
                           sp.eta(static_cast<Eigen::Index>(i)) * (j == l ? 1.0 : 0.0);
        rxi = std::max(rxi, std::abs(lhs - rhs));
      }
  const double rho_xi_xi = sp.eta.dot(sp.curvature.ricci * sp.eta);
  out.push_back({"curvature_xi", rxi});
  out.push_back({"ricci_xi_xi", std::abs(rho_xi_xi - static_cast<double>(m - 1))});
  return out;
}

inline ResidualReport verify_structure_identities(const StructurePoint& sp, double tol) {
  ResidualReport rep;
  rep.tolerance = tol;
  rep.add_point(structure_identity_residuals(sp));
  return rep;
}

/// |S_{α,β}|² with S = ρ − αg − βη⊗η, by direct contraction.
inline double s_tensor_norm_sq(const Eigen::MatrixXd& ricci, const Eigen::VectorXd& eta, double alpha, double beta) {
  const auto m = ricci.rows();
  const Eigen::MatrixXd S = ricci - alpha * Eigen::MatrixXd::Identity(m, m) - beta * eta * eta.transpose();
  return S.squaredNorm();
}

inline double eta_einstein_gamma(std::size_t m, double alpha, double beta) {
  const double md = static_cast<double>(m);
  return md * alpha * alpha + 2.0 * alpha * beta + beta * beta - 2.0 * (md - 1.0) * beta;
}

/// Closed form |ρ|² − 2ατ + γ, valid on Sasakian manifolds.
inline double s_norm_closed_form(std::size_t m, double norm_ricci_sq, double tau, double alpha, double beta) {
  return norm_ricci_sq - 2.0 * alpha * tau + eta_einstein_gamma(m, alpha, beta);
}

struct EtaEinsteinReport {
  double alpha = 0.0;
  double beta = 0.0;
  double s_norm_sq = 0.0;            // direct contraction
  double s_norm_sq_closed = 0.0;     // |ρ|² − 2ατ + γ
  double gamma = 0.0;
  double tau = 0.0;
  double threshold = 0.0;
  bool is_eta_einstein = false;
  bool consistent = false;           // direct and closed forms agree
  bool advisory = false;             // m < 5: α, β need not be constant
};

inline double eta_einstein_alpha(std::size_t m, double tau) { return tau / static_cast<double>(m - 1) - 1.0; }
inline double eta_einstein_beta(std::size_t m, double tau) {
  return static_cast<double>(m) - tau / static_cast<double>(m - 1);
}

/// S_{α,β} with the only (α, β) that can make it vanish on a Sasakian
/// manifold: α = τ/(m−1) − 1, β = m − τ/(m−1).
inline EtaEinsteinReport eta_einstein_decompose(const CurvaturePoint& curv, const Eigen::VectorXd& eta,
                                                double tol = 1e-8) {
  const std::size_t m = curv.dim;
  if (m < 2) throw Error(ErrorKind::DimensionTooSmall, "eta-Einstein decomposition needs m >= 2");
  EtaEinsteinReport r;
  r.tau = curv.tau;
  r.alpha = eta_einstein_alpha(m, curv.tau);
  r.beta = eta_einstein_beta(m, curv.tau);
  r.gamma = eta_einstein_gamma(m, r.alpha, r.beta);
  const double rho_sq = curv.ricci.squaredNorm();
  r.s_norm_sq = s_tensor_norm_sq(curv.ricci, eta, r.alpha, r.beta);
  r.s_norm_sq_closed = s_norm_closed_form(m, rho_sq, curv.tau, r.alpha, r.beta);
  r.threshold = tol * std::max(1.0, rho_sq);
  r.is_eta_einstein = r.s_norm_sq < r.threshold;
  r.consistent = std::abs(r.s_norm_sq - r.s_norm_sq_closed) < r.threshold;
  r.advisory = m < 5;
  return r;
}

inline EtaEinsteinReport eta_einstein_decompose(const StructurePoint& sp, double tol = 1e-8) {
  return eta_einstein_decompose(sp.curvature, sp.eta, tol);
}

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

struct ChainReport {
  std::vector<ChainLink> links;
  double final_contraction = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  /// The printed left side −R_ilaj φ_ai φ_jl of the (98) link, kept for reference.
  double printed_98_lhs = 0.0;

  bool pass() const {
    return std::all_of(links.begin(), links.end(), [&](const ChainLink& l) { return l.residual < tolerance; });
  }
  const ChainLink& link(const std::string& name) const {
    for (const auto& l : links)
      if (l.name == name) return l;
    throw Error(ErrorKind::ConsistencyFailure, "no chain link named " + name);
  }
};

namespace detail {

// Σ_ijkl R_{σ(ijkl)} A_{..} B_{..} where the index maps are given by callables
// returning R, A, B entries for (i,j,k,l).
template <class Fn>
double sum4(std::size_t m, Fn fn) {
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) s += fn(i, j, k, l);
  return s;
}

}  // namespace detail

/// R_ijkl{φ_ki φ_jl − φ_kj φ_il + 2φ_ji φ_kl}.
inline double lemma2_contraction(const Tensor4& R, const Eigen::MatrixXd& P) {
  auto p = [&](std::size_t a, std::size_t b) { return P(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); };
  return detail::sum4(R.dim(), [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return R(i, j, k, l) * (p(k, i) * p(j, l) - p(k, j) * p(i, l) + 2.0 * p(j, i) * p(k, l));
  });
}

/// Every link of the proof that the contraction above equals 6τ − 6(m−1)².
inline ChainReport lemma2_chain(const CurvaturePoint& curv, const Eigen::MatrixXd& phi, const Eigen::VectorXd& eta,
                                double tol) {
  const std::size_t m = curv.dim;
  const Tensor4& R = curv.riemann;
  const Eigen::MatrixXd& rho = curv.ricci;
  const double tau = curv.tau;
  const double md = static_cast<double>(m);
  auto p = [&](std::size_t a, std::size_t b) {
    return phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  auto rh = [&](std::size_t a, std::size_t b) {
    return rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  using detail::sum4;
  ChainReport rep;
  rep.tolerance = tol;
  const double scale = std::max(1.0, std::abs(tau) + (md - 1.0) * (md - 1.0));
  auto add = [&](std::string name, double lhs, double rhs) {
    rep.links.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs) / scale});
  };

  // (4.1): R_ijkl φ_ki φ_jl = ½(R_ijkl − R_kjil)φ_ki φ_jl = ½(R_ijkl + R_jkil)φ_ki φ_jl = −½ R_kijl φ_ki φ_jl
  const double a1 = sum4(m, [&](auto i, auto j, auto k, auto l) { return R(i, j, k, l) * p(k, i) * p(j, l); });
  const double a2 = sum4(m, [&](auto i, auto j, auto k, auto l) {
    return 0.5 * (R(i, j, k, l) - R(k, j, i, l)) * p(k, i) * p(j, l);
  });
  const double a3 = sum4(m, [&](auto i, auto j, auto k, auto l) {
    return 0.5 * (R(i, j, k, l) + R(j, k, i, l)) * p(k, i) * p(j, l);
  });
  const double a4 = sum4(m, [&](auto i, auto j, auto k, auto l) { return -0.5 * R(k, i, j, l) * p(k, i) * p(j, l); });
  add("4.1a", a1, a2);
  add("4.1b", a2, a3);
  add("4.1c", a3, a4);

  // (4.2)
  const double b1 = sum4(m, [&](auto i, auto j, auto k, auto l) { return -R(i, j, k, l) * p(k, j) * p(i, l); });
  const double b2 = sum4(m, [&](auto i, auto j, auto k, auto l) { return -0.5 * R(j, k, i, l) * p(j, k) * p(i, l); });
  const double c1 = sum4(m, [&](auto i, auto j, auto k, auto l) { return R(i, j, k, l) * p(j, i) * p(k, l); });
  const double c2 = sum4(m, [&](auto i, auto j, auto k, auto l) { return -R(i, j, k, l) * p(i, j) * p(k, l); });
  add("4.2a", b1, b2);
  add("4.2b", c1, c2);

  // (4.3)
  const double full = lemma2_contraction(R, phi);
  const double rphiphi = sum4(m, [&](auto i, auto j, auto k, auto l) { return R(i, j, k, l) * p(i, j) * p(k, l); });
  add("4.3", full, -3.0 * rphiphi);

  // (61): −R_lija φ_ai − ρ_la φ_ja = (m−2)φ_lj, worst entry.
  double worst61 = 0.0;
  Eigen::MatrixXd lhs61(m, m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < m; ++a) v -= R(l, i, j, a) * p(a, i);
      for (std::size_t a = 0; a < m; ++a) v -= rh(l, a) * p(j, a);
      lhs61(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = v;
      worst61 = std::max(worst61, std::abs(v - (md - 2.0) * p(l, j)));
    }
  rep.links.push_back({"61", worst61, 0.0, worst61 / scale});

  // (29): transvect with φ_lj.
  const double lhs29 = (lhs61.array() * phi.array()).sum();
  add("29a", lhs29, (md - 2.0) * phi.squaredNorm());
  add("29b", (md - 2.0) * phi.squaredNorm(), (md - 1.0) * (md - 2.0));

  // (98): −R_lija φ_ai φ_lj = −ρ_la(g_la − η_l η_a) + (m−1)(m−2) = −τ + (m−1)².
  const double lhs98 = sum4(m, [&](auto l, auto i, auto j, auto a) { return -R(l, i, j, a) * p(a, i) * p(l, j); });
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) -
                               eta * eta.transpose();
  const double mid98 = -(rho.array() * proj.array()).sum() + (md - 1.0) * (md - 2.0);
  add("98a", lhs98, mid98);
  add("98b", mid98, -tau + (md - 1.0) * (md - 1.0));
  rep.printed_98_lhs =
      sum4(m, [&](auto i, auto l, auto a, auto j) { return -R(i, l, a, j) * p(a, i) * p(j, l); });

  // (97): ½ R_jkil φ_jk φ_il = −τ + (m−1)².
  const double lhs97 = sum4(m, [&](auto j, auto k, auto i, auto l) { return 0.5 * R(j, k, i, l) * p(j, k) * p(i, l); });
  add("97", lhs97, -tau + (md - 1.0) * (md - 1.0));

  // (4.13)
  rep.final_contraction = full;
  rep.expected = 6.0 * tau - 6.0 * (md - 1.0) * (md - 1.0);
  add("4.13", full, rep.expected);
  return rep;
}

inline ChainReport lemma2_chain(const StructurePoint& sp, double tol) {
  return lemma2_chain(sp.curvature, sp.phi, sp.eta, tol);
}

}  // namespace sasaki
