#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sasaki/classifier.hpp"

using namespace sasaki;

namespace {

const double kPi3 = std::pow(std::numbers::pi, 3);

const ConstantsTable& table() {
  static const ConstantsTable t = [] {
    const std::size_t dims[] = {5, 7};
    return ConstantsTable::compute(dims);
  }();
  return t;
}

std::vector<ModelSpace> compact_spaces() {
  const ModelSpace s5 = build_standard_sphere(2);
  return {s5, build_standard_sphere(3), d_homothetic_deform(s5, 0.5), d_homothetic_deform(s5, 2.0),
          d_homothetic_deform(s5, 3.0), d_homothetic_deform(build_standard_sphere(3), 2.0)};
}

void expect_rel(double a, double b, double tol = 1e-10) {
  EXPECT_LE(std::abs(a - b), tol * std::max(1.0, std::abs(b))) << a << " vs " << b;
}

}  // namespace

TEST(InvariantVector, SphereFive) {
  const InvariantVector v = invariant_vector(build_standard_sphere(2), table());
  EXPECT_EQ(v.m, 5u);
  expect_rel(v.vol, kPi3);
  expect_rel(v.tau_int, 20 * kPi3);
  expect_rel(v.tau2_int, 400 * kPi3);
  expect_rel(v.rho2_int, 80 * kPi3);
  expect_rel(v.riem2_int, 40 * kPi3);
}

TEST(InvariantVector, DeformedSphere) {
  const InvariantVector v = invariant_vector(d_homothetic_deform(build_standard_sphere(2), 2.0), table());
  expect_rel(v.vol, 8 * kPi3);
  expect_rel(v.tau_int, 64 * kPi3);
}

TEST(InvariantVector, RoutesAgreeOnAllCompactSpaces) {
  for (const auto& s : compact_spaces()) {
    const InvariantRoutes r = invariant_routes(s, table());
    EXPECT_LT(r.max_rel_gap, 1e-8);
    // Cauchy–Schwarz, with equality for constant τ.
    EXPECT_GE(r.spectral.tau2_int * r.spectral.vol, r.spectral.tau_int * r.spectral.tau_int * (1 - 1e-10));
  }
}

TEST(InvariantVector, Refusals) {
  const auto check = [](auto fn, ErrorKind kind) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind);
    }
  };
  check([] { invariant_vector(build_heisenberg(2), table()); }, ErrorKind::NoncompactSpace);
  ConstantsTable singular;
  singular.insert({5, 0, 5 / 360.0, -2 / 360.0, 2 / 360.0, 0.0, 24});
  singular.insert({5, 1, 1.0, 1.0, 2.0, 0.0, 24});
  singular.insert({5, 2, 1.0, 1.0, 2.0, 0.0, 24});
  check([&] { invariant_vector(build_standard_sphere(2), singular); }, ErrorKind::SingularSystem);
}

TEST(InvariantVector, FlatStandIn) {
  // τ = ρ = R = 0: the inversion returns zeros and the given volume.
  const double V = 3.5;
  HeatInputs h;
  h.m = 5;
  h.a0_p0 = heat_normalisation(5) * V;
  h.a2_p0 = h.a2_p1 = h.a4_p1 = h.a4_p2 = 0.0;
  const InvariantVector v = invert_heat_coefficients(h, table());
  expect_rel(v.vol, V);
  EXPECT_EQ(v.tau_int, 0.0);
  EXPECT_EQ(v.tau2_int, 0.0);
  EXPECT_NEAR(v.rho2_int, 0.0, 1e-14);
  EXPECT_NEAR(v.riem2_int, 0.0, 1e-14);
}

TEST(RecoverTau, Examples) {
  const ModelSpace s5 = build_standard_sphere(2);
  const HeatCoefficients h0 = heat_coefficients(s5, 0), h1 = heat_coefficients(s5, 1);
  expect_rel(recover_tau_from_a2(h0.a2, h1.a2, *s5.total_volume, 5), 20.0);
  EXPECT_EQ(recover_tau_from_a2(0.0, 0.0, 2.0, 5), 0.0);

  // Heisenberg densities with unit volume.
  const ModelSpace h = build_heisenberg(2);
  const CurvaturePoint c = curvature_at(h.structure.metric, h.base_point);
  const double norm = heat_normalisation(5);
  const double a20 = norm * heat_density(weitzenboeck_data(0, c), c).d2;
  const double a21 = norm * heat_density(weitzenboeck_data(1, c), c).d2;
  expect_rel(recover_tau_from_a2(a20, a21, 1.0, 5), -4.0);

  try {
    recover_tau_from_a2(1.0, 1.0, 0.0, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVolume);
  }
}

TEST(ClassifyEtaEinstein, SelfPairsTransfer) {
  for (const auto& s : compact_spaces()) {
    const InvariantVector v = invariant_vector(s, table());
    const double tau = v.tau_int / v.vol;
    const Verdict r =
        classify_eta_einstein(v, v, eta_einstein_alpha(s.dim(), tau), eta_einstein_beta(s.dim(), tau));
    EXPECT_EQ(r.kind, VerdictKind::eta_einstein_transferred) << to_string(s.kind) << " a=" << s.a;
  }
}

TEST(ClassifyEtaEinstein, Coefficients) {
  const InvariantVector s5 = invariant_vector(build_standard_sphere(2), table());
  const Verdict a = classify_eta_einstein(s5, s5, 4.0, 0.0);
  EXPECT_EQ(a.kind, VerdictKind::eta_einstein_transferred);
  expect_rel(*a.get("alpha2"), 4.0);
  EXPECT_NEAR(*a.get("beta2"), 0.0, 1e-10);

  const InvariantVector d = invariant_vector(d_homothetic_deform(build_standard_sphere(2), 2.0), table());
  const Verdict b = classify_eta_einstein(d, d, 1.0, 3.0);
  EXPECT_EQ(b.kind, VerdictKind::eta_einstein_transferred);
  expect_rel(*b.get("alpha2"), 1.0);
  expect_rel(*b.get("beta2"), 3.0);
}

TEST(ClassifyEtaEinstein, MismatchedPair) {
  const InvariantVector s5 = invariant_vector(build_standard_sphere(2), table());
  const InvariantVector d = invariant_vector(d_homothetic_deform(build_standard_sphere(2), 2.0), table());
  const Verdict v = classify_eta_einstein(s5, d, 4.0, 0.0);
  EXPECT_TRUE(v.is_mismatch());
  EXPECT_FALSE(v.transferred());
  // Volumes differ already (π³ vs 8π³); the scalar curvatures compared at a₂ are 20 vs 8.
  EXPECT_EQ(v.kind, VerdictKind::mismatch_at_a0);
  EXPECT_EQ(v.first_mismatch, "vol");
  expect_rel(*v.get("left.tau"), 20.0);
  expect_rel(*v.get("right.tau"), 8.0);
  EXPECT_GT(*v.get("gap.tau_int"), 1e-8);
}

TEST(ClassifyEtaEinstein, MismatchAtA2WhenOnlyTauDiffers) {
  InvariantVector a = invariant_vector(build_standard_sphere(2), table());
  InvariantVector b = a;
  b.tau_int *= 0.4;
  const Verdict v = classify_eta_einstein(a, b, 4.0, 0.0);
  EXPECT_EQ(v.kind, VerdictKind::mismatch_at_a2);
  EXPECT_EQ(v.first_mismatch, "tau_int");
  b = a;
  b.riem2_int *= 1.1;
  EXPECT_EQ(classify_eta_einstein(a, b, 4.0, 0.0).kind, VerdictKind::mismatch_at_a4);
}

TEST(ClassifyEtaEinstein, HypothesisAndDimension) {
  const InvariantVector s5 = invariant_vector(build_standard_sphere(2), table());
  try {
    classify_eta_einstein(s5, s5, 3.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolation);
  }
  InvariantVector small = s5;
  small.m = 3;
  try {
    classify_eta_einstein(small, small, 4.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionTooSmall);
  }
}

TEST(ClassifySpaceForm, NominalCTransfers) {
  for (const auto& s : compact_spaces()) {
    const InvariantVector v = invariant_vector(s, table());
    EXPECT_EQ(classify_space_form(v, v, s.nominal_c()).kind, VerdictKind::space_form_transferred);
  }
}

TEST(ClassifySpaceForm, ShiftedCRefusedWithClosedFormResidual) {
  for (const auto& s : compact_spaces()) {
    const InvariantVector v = invariant_vector(s, table());
    const double tau = v.tau_int / v.vol;
    const double riem = v.riem2_int / v.vol;
    for (double shift : {-1.0, 1.0}) {
      const double c = s.nominal_c() + shift;
      const Verdict r = classify_space_form(v, v, c);
      EXPECT_EQ(r.kind, VerdictKind::matched);
      EXPECT_EQ(*r.get("left_hypothesis_holds"), 0.0);
      const double closed = riem - 4 * c * tau + space_form_params(s.dim(), c).d;
      EXPECT_GT(closed, 0.0);
      expect_rel(*r.get("right.t_density"), closed, 1e-9);
    }
  }
  const InvariantVector s5 = invariant_vector(build_standard_sphere(2), table());
  const Verdict w = classify_space_form(s5, s5, -1.0);
  expect_rel(*w.get("right.t_density"), 48.0, 1e-9);
  expect_rel(*w.get("right.t_int"), 48.0 * kPi3, 1e-9);
}

TEST(Verdict, Deterministic) {
  const InvariantVector a = invariant_vector(build_standard_sphere(2), table());
  const InvariantVector b = invariant_vector(build_standard_sphere(2), table());
  const Verdict x = classify_space_form(a, b, 1.0), y = classify_space_form(a, b, 1.0);
  ASSERT_EQ(x.details.size(), y.details.size());
  for (std::size_t i = 0; i < x.details.size(); ++i) {
    EXPECT_EQ(x.details[i].first, y.details[i].first);
    EXPECT_EQ(x.details[i].second, y.details[i].second);
  }
}
