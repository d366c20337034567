#pragma once

// Replays the inference "equal heat invariants ⇒ same η-Einstein / space-form
// status" on integrated invariant vectors.
//
// Isospectrality is represented only through the five integrated invariants
// {1[M], τ[M], τ²[M], |ρ|²[M], |R|²[M]}: two inputs count as isospectral when
// these agree to a relative tolerance.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sasaki/contact.hpp"
#include "sasaki/error.hpp"
#include "sasaki/heat.hpp"
#include "sasaki/space_forms.hpp"

namespace sasaki {

struct InvariantVector {
  std::size_t m = 0;
  double vol = 0.0;
  double tau_int = 0.0;
  double tau2_int = 0.0;
  double rho2_int = 0.0;
  double riem2_int = 0.0;
};

/// |a − b| relative to max(1, |a|, |b|).
inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_relative_gap(const InvariantVector& a, const InvariantVector& b) {
  if (a.m != b.m) return 1.0;
  return std::max({relative_gap(a.vol, b.vol), relative_gap(a.tau_int, b.tau_int),
                   relative_gap(a.tau2_int, b.tau2_int), relative_gap(a.rho2_int, b.rho2_int),
                   relative_gap(a.riem2_int, b.riem2_int)});
}

/// Density × volume.
inline InvariantVector geometric_invariants(const CurvaturePoint& curv, double vol) {
  if (!(vol > 0.0)) throw Error(ErrorKind::ZeroVolume, "volume must be positive");
  return {curv.dim, vol, curv.tau * vol, curv.tau * curv.tau * vol, curv.norm_ricci_sq * vol,
          curv.norm_riemann_sq * vol};
}

/// τ = (4π)^{m/2} Vol⁻¹ {m a₂(Δ₀) − a₂(Δ₁)} (pointwise τ on constant-τ spaces).
inline double recover_tau_from_a2(double a2_p0, double a2_p1, double vol, std::size_t m) {
  if (!(vol > 0.0)) throw Error(ErrorKind::ZeroVolume, "volume must be positive");
  return (static_cast<double>(m) * a2_p0 - a2_p1) / (heat_normalisation(m) * vol);
}

/// The universal constants for p = 0, 1, 2 at each requested dimension.
class ConstantsTable {
 public:
  ConstantsTable() = default;

  static ConstantsTable compute(std::span<const std::size_t> dims, std::size_t samples = 24,
                                std::uint64_t seed = kDefaultSeed) {
    ConstantsTable t;
    for (std::size_t m : dims)
      for (int p = 0; p <= 2; ++p) t.insert(universal_constants(m, p, samples, seed));
    return t;
  }

  void insert(const UniversalConstants& u) { table_[{u.m, u.p}] = u; }

  const UniversalConstants& at(std::size_t m, int p) const {
    auto it = table_.find({m, p});
    if (it == table_.end())
      throw Error(ErrorKind::InconsistentDimensions,
                  "no universal constants for m=" + std::to_string(m) + ", p=" + std::to_string(p));
    return it->second;
  }

  bool contains(std::size_t m, int p) const { return table_.count({m, p}) > 0; }

  std::vector<UniversalConstants> rows() const {
    std::vector<UniversalConstants> out;
    for (const auto& [key, value] : table_) out.push_back(value);
    return out;
  }

 private:
  std::map<std::pair<std::size_t, int>, UniversalConstants> table_;
};

/// Heat coefficients that carry the invariant vector.
struct HeatInputs {
  std::size_t m = 0;
  double a0_p0 = 0.0;
  double a2_p0 = 0.0;
  double a2_p1 = 0.0;
  double a4_p1 = 0.0;
  double a4_p2 = 0.0;
};

inline HeatInputs heat_inputs(const ModelSpace& space) {
  const HeatCoefficients h0 = heat_coefficients(space, 0);
  const HeatCoefficients h1 = heat_coefficients(space, 1);
  const HeatCoefficients h2 = heat_coefficients(space, 2);
  return {space.dim(), h0.a0, h0.a2, h1.a2, h1.a4, h2.a4};
}

/// Recovers the invariant vector from heat coefficients: Vol from a₀(Δ₀), τ[M]
/// from a₂(Δ₀), a₂(Δ₁); τ²[M] = τ[M]²/Vol (constant scalar curvature); then
/// (|ρ|²[M], |R|²[M]) from the 2×2 system a₄(Δ₁), a₄(Δ₂) after removing the τ² terms.
inline InvariantVector invert_heat_coefficients(const HeatInputs& h, const ConstantsTable& constants) {
  const std::size_t m = h.m;
  const double norm = heat_normalisation(m);
  InvariantVector v;
  v.m = m;
  v.vol = h.a0_p0 / norm;
  if (!(v.vol > 0.0)) throw Error(ErrorKind::ZeroVolume, "a0 yields a non-positive volume");
  v.tau_int = recover_tau_from_a2(h.a2_p0, h.a2_p1, v.vol, m) * v.vol;
  v.tau2_int = v.tau_int * v.tau_int / v.vol;

  const UniversalConstants& u1 = constants.at(m, 1);
  const UniversalConstants& u2 = constants.at(m, 2);
  Eigen::Matrix2d A;
  A << u1.c2, u1.c3, u2.c2, u2.c3;
  if (!independence_rank(A).pass())
    throw Error(ErrorKind::SingularSystem, "p = 1, 2 constants are dependent at m=" + std::to_string(m));
  Eigen::Vector2d rhs;
  rhs << h.a4_p1 / norm - u1.c1 * v.tau2_int, h.a4_p2 / norm - u2.c1 * v.tau2_int;
  const Eigen::Vector2d sol = A.fullPivLu().solve(rhs);
  v.rho2_int = sol(0);
  v.riem2_int = sol(1);
  return v;
}

struct InvariantRoutes {
  InvariantVector geometric;
  InvariantVector spectral;
  double max_rel_gap = 0.0;
};

inline constexpr double kRouteTolerance = 1e-8;

inline InvariantRoutes invariant_routes(const ModelSpace& space, const ConstantsTable& constants) {
  if (space.dim() < 5) throw Error(ErrorKind::DimensionTooSmall, "invariant vectors need m >= 5");
  if (!space.compact()) throw Error(ErrorKind::NoncompactSpace, to_string(space.kind) + " has no finite volume");
  InvariantRoutes r;
  r.geometric = geometric_invariants(curvature_at(space.structure.metric, space.base_point), *space.total_volume);
  r.spectral = invert_heat_coefficients(heat_inputs(space), constants);
  r.max_rel_gap = max_relative_gap(r.geometric, r.spectral);
  return r;
}

/// Invariant vector recovered from heat coefficients, cross-checked against
/// the direct geometric route.
inline InvariantVector invariant_vector(const ModelSpace& space, const ConstantsTable& constants) {
  const InvariantRoutes r = invariant_routes(space, constants);
  if (!(r.max_rel_gap < kRouteTolerance))
    throw Error(ErrorKind::ConsistencyFailure,
                "geometric and heat-coefficient routes differ by " + std::to_string(r.max_rel_gap));
  return r.spectral;
}

// ---------------------------------------------------------------------------
// Verdicts

enum class VerdictKind {
  matched,
  mismatch_at_a0,
  mismatch_at_a2,
  mismatch_at_a4,
  eta_einstein_transferred,
  space_form_transferred,
};

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::matched: return "matched";
    case VerdictKind::mismatch_at_a0: return "mismatch_at_a0";
    case VerdictKind::mismatch_at_a2: return "mismatch_at_a2";
    case VerdictKind::mismatch_at_a4: return "mismatch_at_a4";
    case VerdictKind::eta_einstein_transferred: return "eta_einstein_transferred";
    case VerdictKind::space_form_transferred: return "space_form_transferred";
  }
  return "unknown";
}

struct Verdict {
  VerdictKind kind = VerdictKind::matched;
  /// Quantities compared and residuals, in evaluation order.
  std::vector<std::pair<std::string, double>> details;
  /// For mismatches: name of the first failing invariant.
  std::string first_mismatch;

  bool transferred() const {
    return kind == VerdictKind::eta_einstein_transferred || kind == VerdictKind::space_form_transferred;
  }
  bool is_mismatch() const {
    return kind == VerdictKind::mismatch_at_a0 || kind == VerdictKind::mismatch_at_a2 ||
           kind == VerdictKind::mismatch_at_a4;
  }
  std::optional<double> get(const std::string& key) const {
    for (const auto& [k, v] : details)
      if (k == key) return v;
    return std::nullopt;
  }
};

namespace detail {

/// Compares the invariant vectors order by order (a₀: m, Vol; a₂: τ; a₄: τ², |ρ|², |R|²),
/// appending every comparison to `v.details`. Returns true if all agree; otherwise
/// sets v.kind to the first failing order.
inline bool compare_invariants(const InvariantVector& l, const InvariantVector& r, double tol, Verdict& v) {
  struct Item {
    const char* name;
    double left;
    double right;
    VerdictKind order;
  };
  const Item items[] = {
      {"m", static_cast<double>(l.m), static_cast<double>(r.m), VerdictKind::mismatch_at_a0},
      {"vol", l.vol, r.vol, VerdictKind::mismatch_at_a0},
      {"tau_int", l.tau_int, r.tau_int, VerdictKind::mismatch_at_a2},
      {"tau2_int", l.tau2_int, r.tau2_int, VerdictKind::mismatch_at_a4},
      {"rho2_int", l.rho2_int, r.rho2_int, VerdictKind::mismatch_at_a4},
      {"riem2_int", l.riem2_int, r.riem2_int, VerdictKind::mismatch_at_a4},
  };
  bool ok = true;
  for (const auto& it : items) {
    const double gap = relative_gap(it.left, it.right);
    v.details.emplace_back(std::string("left.") + it.name, it.left);
    v.details.emplace_back(std::string("right.") + it.name, it.right);
    v.details.emplace_back(std::string("gap.") + it.name, gap);
    if (!(gap < tol) && ok) {
      ok = false;
      v.kind = it.order;
      v.first_mismatch = it.name;
    }
  }
  // Scalar curvature densities, the quantity compared at order a₂.
  v.details.emplace_back("left.tau", l.tau_int / l.vol);
  v.details.emplace_back("right.tau", r.tau_int / r.vol);
  return ok;
}

inline void require_dimension(const InvariantVector& inv) {
  if (inv.m < 5) throw Error(ErrorKind::DimensionTooSmall, "classification needs m >= 5");
  if (!(inv.vol > 0.0)) throw Error(ErrorKind::ZeroVolume, "invariant vector has non-positive volume");
}

}  // namespace detail

inline constexpr double kVerdictTolerance = 1e-8;

/// η-Einstein transfer: given inv1 from an η-Einstein Sasakian manifold with
/// coefficients (α₁, β₁), decides whether inv2 forces ∫|S_{α₂,β₂}|² = 0.
inline Verdict classify_eta_einstein(const InvariantVector& inv1, const InvariantVector& inv2, double alpha1,
                                     double beta1, double tol = kVerdictTolerance) {
  detail::require_dimension(inv1);
  detail::require_dimension(inv2);
  const std::size_t m = inv1.m;
  const double gamma1 = eta_einstein_gamma(m, alpha1, beta1);
  const double s1 = inv1.rho2_int - 2.0 * alpha1 * inv1.tau_int + gamma1 * inv1.vol;
  if (!(std::abs(s1) < tol * std::max(1.0, std::abs(inv1.rho2_int))))
    throw Error(ErrorKind::HypothesisViolation,
                "left input is not eta-Einstein with the given (alpha, beta): integral of |S|^2 = " +
                    std::to_string(s1));

  Verdict v;
  v.details.emplace_back("left.s_int", s1);
  if (!detail::compare_invariants(inv1, inv2, tol, v)) return v;

  const double tau2 = inv2.tau_int / inv2.vol;
  const double alpha2 = eta_einstein_alpha(m, tau2);
  const double beta2 = eta_einstein_beta(m, tau2);
  const double gamma2 = eta_einstein_gamma(inv2.m, alpha2, beta2);
  const double s2 = inv2.rho2_int - 2.0 * alpha2 * inv2.tau_int + gamma2 * inv2.vol;
  v.details.emplace_back("alpha1", alpha1);
  v.details.emplace_back("beta1", beta1);
  v.details.emplace_back("alpha2", alpha2);
  v.details.emplace_back("beta2", beta2);
  v.details.emplace_back("gamma2", gamma2);
  v.details.emplace_back("right.s_int", s2);
  const bool coefficients_agree = relative_gap(alpha1, alpha2) < tol && relative_gap(beta1, beta2) < tol;
  v.details.emplace_back("coefficients_agree", coefficients_agree ? 1.0 : 0.0);
  const bool vanishes = std::abs(s2) < tol * std::max(1.0, std::abs(inv2.rho2_int));
  v.kind = (vanishes && coefficients_agree) ? VerdictKind::eta_einstein_transferred : VerdictKind::matched;
  return v;
}

/// Space-form transfer with φ-sectional curvature c via ∫|T_c|² = ∫|R|² − 4cτ + d·Vol.
/// If the left input is not itself a space form with this c the claim is
/// refused: kind `matched` with the residuals in the details.
inline Verdict classify_space_form(const InvariantVector& inv1, const InvariantVector& inv2, double c,
                                   double tol = kVerdictTolerance) {
  detail::require_dimension(inv1);
  detail::require_dimension(inv2);
  Verdict v;
  if (!detail::compare_invariants(inv1, inv2, tol, v)) return v;

  const double d = space_form_params(inv1.m, c).d;
  const double t1 = inv1.riem2_int - 4.0 * c * inv1.tau_int + d * inv1.vol;
  const double t2 = inv2.riem2_int - 4.0 * c * inv2.tau_int + d * inv2.vol;
  v.details.emplace_back("c", c);
  v.details.emplace_back("d", d);
  v.details.emplace_back("left.t_int", t1);
  v.details.emplace_back("right.t_int", t2);
  v.details.emplace_back("right.t_density", t2 / inv2.vol);
  const bool hypothesis = std::abs(t1) < tol * std::max(1.0, std::abs(inv1.riem2_int));
  v.details.emplace_back("left_hypothesis_holds", hypothesis ? 1.0 : 0.0);
  const bool vanishes = std::abs(t2) < tol * std::max(1.0, std::abs(inv2.riem2_int));
  v.kind = (hypothesis && vanishes) ? VerdictKind::space_form_transferred : VerdictKind::matched;
  return v;
}

}  // namespace sasaki
