// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sasaki/sasaki.hpp"

using namespace sasaki;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct Named {
  std::string name;
  ModelSpace space;
};

std::vector<Named> model_spaces() {
  const ModelSpace s5 = build_standard_sphere(2);
  return {{"S5", s5},
          {"S7", build_standard_sphere(3)},
          {"S5(a=1/2)", d_homothetic_deform(s5, 0.5)},
          {"S5(a=2)", d_homothetic_deform(s5, 2.0)},
          {"S5(a=3)", d_homothetic_deform(s5, 3.0)},
          {"H5", build_heisenberg(2)}};
}

std::vector<std::vector<double>> ten_points(const ModelSpace& s) { return sample_points(s, 10, seed_from_env()); }

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, s] : model_spaces()) {
    const auto pts = ten_points(s);
    const ResidualReport c = verify_contact_metric(s.structure, pts, 1e-8);
    const ResidualReport k = verify_sasakian(s.structure, pts, 1e-8);
    for (const auto& r : c.worst) worst = std::max(worst, r.value);
    for (const auto& r : k.worst) worst = std::max(worst, r.value);
    o.require(c.pass(), name + " contact metric");
    o.require(k.pass(), name + " Sasakian");
  }
  o.detail = "worst residual " + fmt(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, s] : model_spaces())
    for (const auto& x : ten_points(s)) {
      const StructurePoint sp = structure_at(s.structure, x);
      const double v = sp.eta.dot(sp.curvature.ricci * sp.eta);
      worst = std::max(worst, std::abs(v - static_cast<double>(s.dim() - 1)));
    }
  o.require(worst < 1e-8, "rho(xi,xi) off by " + fmt(worst));
  if (o.pass) o.detail = "max |rho(xi,xi) - (m-1)| = " + fmt(worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst_link = 0.0;
  std::ostringstream vals;
  for (const auto& [name, s] : model_spaces()) {
    for (const auto& x : ten_points(s)) {
      const ChainReport r = lemma2_chain(structure_at(s.structure, x), 1e-8);
      for (const auto& l : r.links) worst_link = std::max(worst_link, l.residual);
      o.require(r.links.size() == 13 && r.pass(), name + " chain link failed");
    }
    const ChainReport b = lemma2_chain(structure_at(s.structure, s.base_point), 1e-8);
    vals << name << "=" << fmt(b.final_contraction) << " ";
  }
  const ModelSpace s5 = build_standard_sphere(2);
  auto contraction = [](const ModelSpace& s) {
    return lemma2_chain(structure_at(s.structure, s.base_point), 1e-8).final_contraction;
  };
  o.require(std::abs(contraction(s5) - 24.0) < 1e-8, "S5 != 24");
  o.require(std::abs(contraction(build_heisenberg(2)) + 120.0) < 1e-8, "H5 != -120");
  o.require(std::abs(contraction(d_homothetic_deform(s5, 2.0)) + 48.0) < 1e-8, "S5(a=2) != -48");
  o.detail = vals.str() + "worst link " + fmt(worst_link) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(seed_from_env());
  double worst = 0.0, worst_nominal = 0.0;
  for (const auto& [name, s] : model_spaces()) {
    const StructurePoint sp = structure_at(s.structure, s.base_point);
    for (int i = 0; i < 20; ++i) {
      const double c = rng.uniform(-6.0, 6.0);
      const TcAnalysis t = t_c_analysis(sp.curvature, sp.phi, sp.eta, c, std::numeric_limits<double>::infinity());
      worst = std::max({worst, rel(t.k_norm_sq, t.k_norm_sq_closed), rel(t.rk, t.rk_closed),
                        rel(t.t_norm_sq, t.t_norm_sq_closed)});
    }
    const double nominal = t_c_norm(sp, s.nominal_c());
    worst_nominal = std::max(worst_nominal, std::abs(nominal));
    o.require(std::abs(nominal) < 1e-8, name + " |T_c*|^2 = " + fmt(nominal));
  }
  o.require(worst < 1e-8, "closed form gap " + fmt(worst));
  o.detail = "closed-form gap " + fmt(worst) + ", max |T_c*|^2 " + fmt(worst_nominal) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, s] : model_spaces())
    for (const auto& x : ten_points(s)) {
      const StructurePoint sp = structure_at(s.structure, x);
      const double alpha = sp.curvature.tau / static_cast<double>(s.dim() - 1) - 1.0;
      const EtaEinsteinReport r = eta_einstein_decompose(sp);
      o.require(r.alpha == alpha, name + " alpha");
      worst = std::max(worst, r.s_norm_sq);
    }
  o.require(worst < 1e-8, "|S|^2 = " + fmt(worst));
  struct Case {
    std::size_t m;
    double c, alpha, beta;
  };
  for (const Case& k : {Case{5, 1.0, 4.0, 0.0}, Case{5, -3.0, -2.0, 6.0}, Case{7, 1.0, 6.0, 0.0}}) {
    const SpaceFormParams p = space_form_params(k.m, k.c);
    o.require(p.alpha == k.alpha && p.beta == k.beta,
              "closed form (c=" + fmt(k.c) + ", m=" + std::to_string(k.m) + ") gives (" + fmt(p.alpha) + ", " +
                  fmt(p.beta) + ")");
    o.require(eta_einstein_alpha(k.m, p.tau) == p.alpha && std::abs(eta_einstein_beta(k.m, p.tau) - p.beta) < 1e-15,
              "alpha/beta from tau");
  }
  o.detail = "max |S|^2 " + fmt(worst) + "; (alpha,beta) = (4,0), (-2,6), (6,0)" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t m : {5u, 7u})
    for (std::uint64_t s = 0; s < 20; ++s) {
      const CurvaturePoint c = random_algebraic_curvature(m, seed_from_env() + 1000 + s).to_curvature_point();
      const LaplaceTypeData d = weitzenboeck_data(1, c);
      const double lhs = 6.0 * d.E.trace() + c.tau * static_cast<double>(d.fiber_dim);
      worst = std::max(worst, std::abs(lhs - (static_cast<double>(m) - 6.0) * c.tau) / std::max(1.0, std::abs(c.tau)));
    }
  o.require(worst < 1e-10, "(m-6) trace gap " + fmt(worst));
  double gap = 0.0;
  for (std::size_t m : {5u, 7u}) {
    const UniversalConstants u = universal_constants(m, 0, 24, seed_from_env());
    gap = std::max({gap, std::abs(360 * u.c1 - 5.0) / 5.0, std::abs(360 * u.c2 + 2.0) / 2.0,
                    std::abs(360 * u.c3 - 2.0) / 2.0});
  }
  o.require(gap < 1e-8, "p=0 constants gap " + fmt(gap));
  o.detail = "trace gap " + fmt(worst) + ", (5,-2,2)/360 gap " + fmt(gap) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst_res = 0.0, worst_seed = 0.0;
  const std::uint64_t seed = seed_from_env();
  for (std::size_t m : {5u, 7u})
    for (int p = 0; p <= 2; ++p) {
      const UniversalConstants a = universal_constants(m, p, 24, seed);
      const UniversalConstants b = universal_constants(m, p, 24, seed + 7919);
      worst_res = std::max(worst_res, a.residual);
      worst_seed = std::max({worst_seed, rel(a.c1, b.c1), rel(a.c2, b.c2), rel(a.c3, b.c3)});
    }
  o.require(worst_res < 1e-8, "residual " + fmt(worst_res));
  o.require(worst_seed < 1e-8, "seed dependence " + fmt(worst_seed));
  std::string ranks;
  for (std::size_t m : {5u, 7u}) {
    const IndependenceReport r = independence_check(m, 24, seed);
    o.require(r.rank == 2, "rank at m=" + std::to_string(m) + " is " + std::to_string(r.rank));
    ranks += " m=" + std::to_string(m) + ":" + std::to_string(r.rank);
  }
  o.detail = "residual " + fmt(worst_res) + ", seed gap " + fmt(worst_seed) + ", rank" + ranks +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto grid = log_grid(1e-3, 1e-1, 40);
  std::string d;
  for (std::size_t m : {3u, 5u}) {
    const HeatTraceFit f = heat_trace_fit(m, grid, 400);
    o.require(f.rel_err_a0 < 1e-3, "S" + std::to_string(m) + " a0 error " + fmt(f.rel_err_a0));
    o.require(f.rel_err_a2 < 1e-2, "S" + std::to_string(m) + " a2 error " + fmt(f.rel_err_a2));
    d += "S" + std::to_string(m) + " a0 " + fmt(f.rel_err_a0) + " a2 " + fmt(f.rel_err_a2) + " ";
  }
  o.detail = d + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const std::size_t dims[] = {5, 7};
  const ConstantsTable table = ConstantsTable::compute(dims, 24, seed_from_env());
  for (const auto& [name, s] : model_spaces()) {
    if (!s.compact()) continue;
    const InvariantVector v = invariant_vector(s, table);
    const double tau = v.tau_int / v.vol;
    const Verdict e = classify_eta_einstein(v, v, eta_einstein_alpha(s.dim(), tau), eta_einstein_beta(s.dim(), tau));
    o.require(e.kind == VerdictKind::eta_einstein_transferred, name + " eta-Einstein self-pair");
    const Verdict f = classify_space_form(v, v, s.nominal_c());
    o.require(f.kind == VerdictKind::space_form_transferred, name + " space-form self-pair");
  }

  // S⁵ vs deformed S⁵: refused, with the a₂ comparison failing on τ = 20 vs 8.
  const ModelSpace s5 = build_standard_sphere(2);
  const InvariantVector a = invariant_vector(s5, table);
  const InvariantVector b = invariant_vector(d_homothetic_deform(s5, 2.0), table);
  const Verdict m = classify_eta_einstein(a, b, 4.0, 0.0);
  const double tl = *m.get("left.tau"), tr = *m.get("right.tau");
  o.require(m.is_mismatch() && !m.transferred(), "pair not refused");
  o.require(*m.get("gap.tau_int") > 1e-8 && std::abs(tl - 20.0) < 1e-8 && std::abs(tr - 8.0) < 1e-8,
            "a2 comparison tau " + fmt(tl) + " vs " + fmt(tr));

  const Verdict w = classify_space_form(a, a, -1.0);
  const double residual = *w.get("right.t_density");
  o.require(!w.transferred() && std::abs(residual - 48.0) < 1e-8 * 48.0, "wrong-c residual " + fmt(residual));
  o.detail = "pair refused (" + to_string(m.kind) + ", first mismatch " + m.first_mismatch + "; a2 tau " + fmt(tl) +
             " vs " + fmt(tr) + "); S5 c=-1 residual " + fmt(residual) + " per unit volume" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::string full_suite_reports(std::uint64_t seed) {
  std::string out;
  const std::vector<Manifest> manifests{{SpaceKind::StandardSphere, 2, 1.0}, {SpaceKind::StandardSphere, 3, 1.0},
                                        {SpaceKind::DeformedSphere, 2, 0.5}, {SpaceKind::DeformedSphere, 2, 2.0},
                                        {SpaceKind::DeformedSphere, 2, 3.0}, {SpaceKind::Heisenberg, 2, 1.0}};
  for (const auto& mf : manifests) {
    out += dump_json(verify_report(mf, 1e-8, seed));
    out += dump_json(heat_report(mf, {0, 1, 2}));
  }
  for (std::size_t m : {5u, 7u}) {
    out += dump_json(constants_report(m, 24, seed));
    out += dump_json(independence_report(m, 24, seed));
  }
  out += dump_json(spectrum_fit_report(3, 1e-3, 1e-1, 400));
  out += dump_json(spectrum_fit_report(5, 1e-3, 1e-1, 400));
  const Manifest s5{SpaceKind::StandardSphere, 2, 1.0}, d5{SpaceKind::DeformedSphere, 2, 2.0};
  out += dump_json(classify_report(s5, s5, "eta-einstein", std::nullopt, 1e-8, 24, seed));
  out += dump_json(classify_report(s5, d5, "eta-einstein", std::nullopt, 1e-8, 24, seed));
  out += dump_json(classify_report(s5, s5, "space-form", -1.0, 1e-8, 24, seed));
  return out;
}

Outcome criterion10() {
  Outcome o;
  const std::uint64_t seed = seed_from_env();
  const std::string first = full_suite_reports(seed);
  const std::string second = full_suite_reports(seed);
  o.require(first == second, "reports differ between runs");
  o.detail = std::to_string(first.size()) + " bytes identical across two runs, seed " + std::to_string(seed);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 = none
  };
  const std::vector<Criterion> criteria{
      {1, "structure suite", criterion1, 10.0},
      {2, "rho(xi,xi) = m-1", criterion2, 0.0},
      {3, "Lemma 2 chain", criterion3, 0.0},
      {4, "space-form identities", criterion4, 0.0},
      {5, "eta-Einstein", criterion5, 0.0},
      {6, "heat coefficients", criterion6, 0.0},
      {7, "universal constants", criterion7, 30.0},
      {8, "spectral cross-check", criterion8, 5.0},
      {9, "classification pipeline", criterion9, 0.0},
      {10, "determinism", criterion10, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += "; runtime " + fmt(secs) + " s exceeds " + fmt(c.time_limit) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("[criterion %d] %s - %s (%s; %.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
