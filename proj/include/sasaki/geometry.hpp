#pragma once

// Pointwise Riemannian geometry of a single-chart metric.
//
// Sign conventions:
//   R(X,Y)Z   = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z
//   R_ijkl    = g(R(e_i,e_j)e_k, e_l)
//   ρ_ij      = R_ikkj,  τ = R_ijji
// so the unit sphere has R_ijkl = δ_jk δ_il − δ_ik δ_jl and τ = m(m−1).
// Curvature is reported in the orthonormal frame obtained by Gram–Schmidt on
// the coordinate basis in index order.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sasaki/error.hpp"
#include "sasaki/jet.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

using JetVector = std::vector<Jet3>;
/// Row-major m×m matrix of jets.
using JetMatrix = std::vector<Jet3>;
using ChartPredicate = std::function<bool(std::span<const double>)>;

struct Tolerances {
  double positive_definite = 1e-12;
  double identity = 1e-8;
};

struct MetricField {
  std::size_t dim = 0;
  std::function<JetMatrix(std::span<const double>)> components;
  /// Open chart domain; empty means all of R^m.
  ChartPredicate in_domain;
};

inline void check_chart_point(std::size_t dim, const ChartPredicate& in_domain, std::span<const double> x) {
  if (x.size() != dim)
    throw Error(ErrorKind::InconsistentDimensions,
                "chart point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(dim));
  for (double v : x)
    if (!std::isfinite(v)) throw Error(ErrorKind::EvaluationDomain, "non-finite chart coordinate");
  if (in_domain && !in_domain(x)) throw Error(ErrorKind::EvaluationDomain, "point outside the chart domain");
}

/// Jets of the independent coordinates at x.
inline JetVector coordinate_jets(std::span<const double> x) {
  JetVector u;
  u.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u.push_back(Jet3::variable(x.size(), i, x[i]));
  return u;
}

/// Metric value and its first two coordinate derivatives at one point.
struct MetricSample {
  std::vector<double> point;
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  Tensor3 dg;   // dg(a,i,j)    = ∂_a g_ij
  Tensor4 d2g;  // d2g(a,b,i,j) = ∂_a∂_b g_ij
};

inline MetricSample sample_metric(const MetricField& metric, std::span<const double> x, const Tolerances& tol = {}) {
  check_chart_point(metric.dim, metric.in_domain, x);
  const std::size_t m = metric.dim;
  const JetMatrix comps = metric.components(x);
  if (comps.size() != m * m) throw Error(ErrorKind::InconsistentDimensions, "metric must have m*m components");

  MetricSample s;
  s.point.assign(x.begin(), x.end());
  s.g.resize(m, m);
  s.dg = Tensor3(m);
  s.d2g = Tensor4(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Jet3& c = comps[i * m + j];
      s.g(i, j) = c.value();
      for (std::size_t a = 0; a < m; ++a) {
        s.dg(a, i, j) = c.grad(a);
        for (std::size_t b = 0; b < m; ++b) s.d2g(a, b, i, j) = c.hess(a, b);
      }
    }
  s.g = 0.5 * (s.g + s.g.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.g, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > tol.positive_definite))
    throw Error(ErrorKind::NonPositiveDefiniteMetric, "smallest metric eigenvalue " + std::to_string(smallest));
  s.g_inv = s.g.inverse();
  return s;
}

/// Γ^k_ij and ∂_a Γ^k_ij.
struct Connection {
  Tensor3 gamma;   // gamma(k,i,j)
  Tensor4 dgamma;  // dgamma(a,k,i,j)
};

inline Connection connection_from(const MetricSample& s) {
  const std::size_t m = static_cast<std::size_t>(s.g.rows());
  // Christoffel symbols of the first kind and their derivatives.
  Tensor3 first(m);
  Tensor4 dfirst(m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        first(l, i, j) = 0.5 * (s.dg(i, j, l) + s.dg(j, i, l) - s.dg(l, i, j));
        for (std::size_t a = 0; a < m; ++a)
          dfirst(a, l, i, j) = 0.5 * (s.d2g(a, i, j, l) + s.d2g(a, j, i, l) - s.d2g(a, l, i, j));
      }

  Connection c{Tensor3(m), Tensor4(m)};
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < m; ++l) v += s.g_inv(k, l) * first(l, i, j);
        c.gamma(k, i, j) = v;
      }
  // ∂_a Γ^k_ij = g^kl (∂_a Γ_lij − ∂_a g_lc Γ^c_ij)
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          double v = 0.0;
          for (std::size_t l = 0; l < m; ++l) {
            double inner = dfirst(a, l, i, j);
            for (std::size_t cc = 0; cc < m; ++cc) inner -= s.dg(a, l, cc) * c.gamma(cc, i, j);
            v += s.g_inv(k, l) * inner;
          }
          c.dgamma(a, k, i, j) = v;
        }
  return c;
}

/// Levi-Civita connection coefficients Γ^k_ij at x, indexed (k,i,j).
inline Tensor3 christoffel(const MetricField& metric, std::span<const double> x, const Tolerances& tol = {}) {
  return connection_from(sample_metric(metric, x, tol)).gamma;
}

struct FrameData {
  std::vector<double> base_point;
  Eigen::MatrixXd frame;    // row a = coordinate components of e_a
  Eigen::MatrixXd coframe;  // row a = coordinate components of θ^a; coframe · frameᵀ = I
};

/// Gram–Schmidt with respect to g on the rows of `basis` (default: coordinate
/// basis), processed in index order.
inline FrameData make_frame(const MetricSample& s, const std::optional<Eigen::MatrixXd>& basis = std::nullopt) {
  const Eigen::Index m = s.g.rows();
  const Eigen::MatrixXd start = basis ? *basis : Eigen::MatrixXd::Identity(m, m);
  if (start.rows() != m || start.cols() != m)
    throw Error(ErrorKind::InconsistentDimensions, "frame basis must be m×m");
  FrameData f;
  f.base_point = s.point;
  f.frame.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    Eigen::VectorXd v = start.row(a).transpose();
    // Modified Gram–Schmidt, two passes for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < a; ++c) {
        const Eigen::VectorXd e = f.frame.row(c).transpose();
        v -= (e.dot(s.g * v)) * e;
      }
    const double norm = std::sqrt(v.dot(s.g * v));
    if (!(norm > 0.0)) throw Error(ErrorKind::ConsistencyFailure, "degenerate frame basis");
    f.frame.row(a) = (v / norm).transpose();
  }
  f.coframe = f.frame.transpose().inverse();
  return f;
}

/// T_abcd = F_a^i F_b^j F_c^k F_d^l T_ijkl.
inline Tensor4 to_frame(const Tensor4& t, const Eigen::MatrixXd& frame) {
  const std::size_t m = t.dim();
  Tensor4 cur = t;
  for (int slot = 0; slot < 4; ++slot) {
    Tensor4 next(m);
    for (std::size_t i0 = 0; i0 < m; ++i0)
      for (std::size_t i1 = 0; i1 < m; ++i1)
        for (std::size_t i2 = 0; i2 < m; ++i2)
          for (std::size_t a = 0; a < m; ++a) {
            double v = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
              // Contract the leading slot and rotate it to the back.
              v += frame(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) * cur(i, i0, i1, i2);
            }
            next(i0, i1, i2, a) = v;
          }
    cur = std::move(next);
  }
  return cur;
}

struct CurvaturePoint {
  std::size_t dim = 0;
  Tensor3 gamma;     // Γ^k_ij, coordinate frame (empty for purely algebraic input)
  Tensor4 riemann;   // R_ijkl, orthonormal frame
  Eigen::MatrixXd ricci;
  double tau = 0.0;
  double norm_ricci_sq = 0.0;
  double norm_riemann_sq = 0.0;
  FrameData frame;
};

/// Fills ρ, τ, |ρ|², |R|² from an orthonormal-frame curvature tensor.
inline CurvaturePoint curvature_from_riemann(Tensor4 riemann) {
  CurvaturePoint c;
  const std::size_t m = riemann.dim();
  c.dim = m;
  c.ricci = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) v += riemann(i, k, k, j);
      c.ricci(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  c.tau = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) c.tau += riemann(i, j, j, i);
  c.norm_ricci_sq = c.ricci.squaredNorm();
  c.norm_riemann_sq = contract_norm_sq(riemann);
  c.riemann = std::move(riemann);
  return c;
}

/// Coordinate-frame R_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l).
inline Tensor4 coordinate_riemann(const MetricSample& s, const Connection& conn) {
  const std::size_t m = static_cast<std::size_t>(s.g.rows());
  Tensor4 up(m);  // up(l,i,j,k) = R^l_ijk
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          double v = conn.dgamma(i, l, j, k) - conn.dgamma(j, l, i, k);
          for (std::size_t a = 0; a < m; ++a)
            v += conn.gamma(l, i, a) * conn.gamma(a, j, k) - conn.gamma(l, j, a) * conn.gamma(a, i, k);
          up(l, i, j, k) = v;
        }
  Tensor4 low(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          double v = 0.0;
          for (std::size_t a = 0; a < m; ++a) v += up(a, i, j, k) * s.g(a, l);
          low(i, j, k, l) = v;
        }
  return low;
}

/// Everything derived from the metric at one point.
struct PointGeometry {
  MetricSample sample;
  Connection connection;
  FrameData frame;
};

inline PointGeometry geometry_at(const MetricField& metric, std::span<const double> x, const Tolerances& tol = {},
                                 const std::optional<Eigen::MatrixXd>& basis = std::nullopt) {
  PointGeometry p;
  p.sample = sample_metric(metric, x, tol);
  p.connection = connection_from(p.sample);
  p.frame = make_frame(p.sample, basis);
  return p;
}

inline CurvaturePoint curvature_at(const PointGeometry& p) {
  CurvaturePoint c = curvature_from_riemann(to_frame(coordinate_riemann(p.sample, p.connection), p.frame.frame));
  c.gamma = p.connection.gamma;
  c.frame = p.frame;
  return c;
}

/// Curvature in the orthonormal frame at x. `basis` optionally replaces the
/// coordinate basis as the Gram–Schmidt input.
inline CurvaturePoint curvature_at(const MetricField& metric, std::span<const double> x, const Tolerances& tol = {},
                                   const std::optional<Eigen::MatrixXd>& basis = std::nullopt) {
  return curvature_at(geometry_at(metric, x, tol, basis));
}

inline Eigen::MatrixXd jet_values(const JetMatrix& jets, std::size_t m) {
  Eigen::MatrixXd v(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) v(i, j) = jets[i * m + j].value();
  return v;
}

inline Eigen::VectorXd jet_values(const JetVector& jets) {
  Eigen::VectorXd v(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) v(static_cast<Eigen::Index>(i)) = jets[i].value();
  return v;
}

/// ∇_i φ_jk = g((∇_{e_i}φ)e_j, e_k) for a (1,1) field with components
/// field[i*m+j] = φ^i_j, returned in the orthonormal frame.
inline Tensor3 covariant_derivative_11(const PointGeometry& p, const JetMatrix& field) {
  const std::size_t m = static_cast<std::size_t>(p.sample.g.rows());
  if (field.size() != m * m) throw Error(ErrorKind::InconsistentDimensions, "(1,1) field must have m*m components");
  const auto& G = p.connection.gamma;
  Tensor3 coord(m);  // coord(a,i,j) = (∇_a φ)^i_j
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double v = field[i * m + j].grad(a);
        for (std::size_t k = 0; k < m; ++k)
          v += G(i, a, k) * field[k * m + j].value() - G(k, a, j) * field[i * m + k].value();
        coord(a, i, j) = v;
      }
  const Eigen::MatrixXd& F = p.frame.frame;
  const Eigen::MatrixXd gF = p.sample.g * F.transpose();  // column r = g e_r
  Tensor3 out(m);
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t s = 0; s < m; ++s) {
        double v = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
          const double fa = F(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(a));
          if (fa == 0.0) continue;
          for (std::size_t j = 0; j < m; ++j) {
            const double fj = F(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
            if (fj == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i)
              v += fa * fj * coord(a, i, j) * gF(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s));
          }
        }
        out(q, r, s) = v;
      }
  return out;
}

inline Tensor3 covariant_derivative_11(const MetricField& metric, std::span<const double> x, const JetMatrix& field,
                                       const Tolerances& tol = {}) {
  return covariant_derivative_11(geometry_at(metric, x, tol), field);
}

/// g(∇_{e_i}V, e_j) for a vector field with components field[i] = V^i.
inline Eigen::MatrixXd covariant_derivative_vector(const PointGeometry& p, const JetVector& field) {
  const std::size_t m = static_cast<std::size_t>(p.sample.g.rows());
  if (field.size() != m) throw Error(ErrorKind::InconsistentDimensions, "vector field must have m components");
  Eigen::MatrixXd coord(m, m);  // coord(a,i) = (∇_a V)^i
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < m; ++i) {
      double v = field[i].grad(a);
      for (std::size_t k = 0; k < m; ++k) v += p.connection.gamma(i, a, k) * field[k].value();
      coord(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) = v;
    }
  const Eigen::MatrixXd& F = p.frame.frame;
  return F * coord * p.sample.g * F.transpose();
}

}  // namespace sasaki
