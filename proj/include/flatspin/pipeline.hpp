#pragma once

// Orchestration shared by the CLI and the acceptance suite: synthesize a patch
// from a seed, re-verify a stored patch, and assess a pair of resolutions.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flatspin/config.hpp"
#include "flatspin/desitter.hpp"
#include "flatspin/patchio.hpp"
#include "flatspin/report.hpp"
#include "flatspin/suite.hpp"
#include "flatspin/synth.hpp"

namespace flatspin {

/// Documented exit code of each error class.
inline int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::input: return 2;
    case ErrorClass::hypothesis: return 3;
    case ErrorClass::numerical:
    case ErrorClass::algebra: return 4;
  }
  return 4;
}

struct Report {
  nlohmann::json hypotheses = nlohmann::json::object();
  std::vector<Check> checks;
};

struct Run {
  StoredPatch patch;
  Report report;
};

namespace budget {
inline constexpr double kConnection = 10.0;
inline constexpr double kLinkage = 10.0;
inline constexpr double kStored = 1e-9;
}  // namespace budget

namespace detail {

inline FlatSeed as_flat(const AnySeed& s) {
  if (const auto* r = std::get_if<SeedR31>(&s)) return *r;
  return std::get<SeedArc>(s);
}

/// build_alpha plus the independence and commutator hypotheses.
inline AlphaField validated_alpha(const FlatSeed& seed, const GridDomain& dom, nlohmann::json& hyp) {
  AlphaField a = build_alpha(seed, dom);
  const IndependenceReport ind = check_independence(a);
  hyp["independence"] = {{"min_abs_det", ind.min_abs_det},
                         {"threshold", ind.threshold},
                         {"worst", {ind.worst.i, ind.worst.j}},
                         {"passed", ind.passed()}};
  if (!ind.passed()) throw DependentFrame(ind.worst, "alpha1 and alpha2 are not independent");
  const CommutatorReport com = check_commutator(a);
  hyp["commutator"] = {{"max_residual", com.max_residual},
                       {"budget", com.budget},
                       {"worst", {com.worst.i, com.worst.j}},
                       {"passed", com.passed()}};
  if (!com.passed()) {
    throw CommutatorFailure("[alpha1, alpha2] = " + format_double(com.max_residual) + " exceeds budget " +
                            format_double(com.budget) + at_point(com.worst));
  }
  return a;
}

/// B^{-1} dB of B = A(conj_bar g) against -(f1^2 - f2^2) for omega theta.
inline Check linkage_check(const Field<CQuat>& g, const SeedSamples& s, const GridDomain& dom) {
  const ConnectionReport c = extract_connection(spinor_to_sl2(g), dom, &s.f);
  double offmax = 0.0;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    offmax = std::max({offmax, std::abs(c.theta(i, j)), std::abs(c.omega(i, j))});
  });
  const double S = std::max(1.0, offmax * offmax) * std::max(1.0, offmax);
  return make_check("sl2_linkage", c.linkage.value_or(0.0), budget::kLinkage * dom.h() * dom.h() * S,
                    budget::roundoff(S, dom.h(), 1));
}

/// Connection of a De Sitter patch against the seed 1-forms.
inline std::vector<Check> connection_checks(const Sl2Field& B, const SeedS21& seed, const GridDomain& dom) {
  const ConnectionReport c = extract_connection(B, dom);
  double dev = 0.0;
  double offmax = 0.0;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const Complex z = dom.point(i, j);
    const Complex th = expr::eval(seed.theta, z);
    const Complex om = expr::eval(seed.omega, z);
    offmax = std::max({offmax, std::abs(th), std::abs(om)});
    dev = std::max({dev, std::abs(c.theta(i, j) - th), std::abs(c.omega(i, j) - om)});
  });
  const double h2 = dom.h() * dom.h();
  const double S = std::max(1.0, offmax) * std::max(1.0, offmax * offmax);
  std::vector<Check> out;
  out.push_back(make_check("connection_diagonal", c.max_diagonal, c.budget,
                           budget::roundoff(std::max(1.0, offmax), dom.h(), 1)));
  out.push_back(make_check("connection_seed", dev, budget::kConnection * h2 * S,
                           budget::roundoff(S, dom.h(), 1)));
  return out;
}

inline Report flat_report(ImmersionPatch& p, const FlatSeed& seed, nlohmann::json hyp) {
  p.seed = sample_seed(seed, p.dom);
  Report r{std::move(hyp), flat_patch_checks(p)};
  r.checks.push_back(linkage_check(p.g, p.seed, p.dom));
  return r;
}

inline Report s21_report(const HermPatch& hp, const SeedS21& seed, nlohmann::json hyp) {
  Report r{std::move(hyp), s21_patch_checks(hp)};
  for (Check& c : connection_checks(hp.B, seed, hp.dom)) r.checks.push_back(std::move(c));
  return r;
}

}  // namespace detail

inline Run synthesize(const AnySeed& seed, const GridDomain& dom) {
  dom.validate();
  Run run;
  run.patch.dom = dom;
  run.patch.seed = seed;
  nlohmann::json hyp = nlohmann::json::object();
  if (const auto* s = std::get_if<SeedS21>(&seed)) {
    const HermPatch hp = synthesize_flat_s21(*s, dom);
    hyp["seed"] = {{"passed", true}};
    hyp["det_drift"] = hp.max_drift;
    run.patch.B = hp.B;
    run.patch.F = to_minkowski(hp.F);
    run.report = detail::s21_report(hp, *s, std::move(hyp));
    return run;
  }
  const FlatSeed flat = detail::as_flat(seed);
  const AlphaField a = detail::validated_alpha(flat, dom, hyp);
  const SpinFrameField sf = integrate_spin_frame(flat, dom);
  hyp["spin_drift"] = sf.max_drift;
  ImmersionPatch p = integrate_immersion(sf, a);
  hyp["reality_defect"] = p.reality_defect;
  run.patch.F = p.F;
  run.patch.g = p.g;
  run.report = detail::flat_report(p, flat, std::move(hyp));
  return run;
}

/// The suite on stored data: frames are rebuilt from g (or B), alpha from the seed.
inline Report verify_stored(const StoredPatch& sp) {
  nlohmann::json hyp = nlohmann::json::object();
  if (const auto* s = std::get_if<SeedS21>(&sp.seed)) {
    validate_s21(*s, sp.dom);
    hyp["seed"] = {{"passed", true}};
    HermPatch hp;
    hp.dom = sp.dom;
    hp.B = sp.B;
    hp.F = Field<Mat2C>(sp.dom);
    double stored = 0.0;
    double fmax = 0.0;
    for (std::size_t k = 0; k < sp.B.size(); ++k) {
      hp.F.values()[k] = desitter_point(sp.B.values()[k]);
      stored = std::max(stored, norm(herm_to_minkowski(hp.F.values()[k]) - sp.F.values()[k]));
      fmax = std::max(fmax, norm(sp.F.values()[k]));
    }
    hp.metric = induced_metric(sp.F, sp.dom);
    Report r = detail::s21_report(hp, *s, std::move(hyp));
    const double b = budget::kStored * std::max(1.0, fmax);
    r.checks.push_back(make_check("stored_F", stored, b, b));
    return r;
  }
  const FlatSeed flat = detail::as_flat(sp.seed);
  const AlphaField a = detail::validated_alpha(flat, sp.dom, hyp);
  ImmersionPatch p;
  p.dom = sp.dom;
  p.F = sp.F;
  p.a1 = a.a1;
  p.a2 = a.a2;
  const double defect = attach_frames(p, sp.g);
  hyp["reality_defect"] = defect;
  Report r = detail::flat_report(p, flat, std::move(hyp));
  r.checks.push_back(make_check("frame_reality", defect, kRealityEps, kRealityEps));
  return r;
}

/// Largest |F_coarse(i, j) - F_fine(k i, k j)|.
inline double shared_node_difference(const StoredPatch& coarse, const StoredPatch& fine, std::size_t k) {
  double m = 0.0;
  for (std::size_t j = 0; j < coarse.dom.ny; ++j) {
    for (std::size_t i = 0; i < coarse.dom.nx; ++i) {
      m = std::max(m, norm(coarse.F(i, j) - fine.F(k * i, k * j)));
    }
  }
  return m;
}

/// Verdict over one resolution or a coarse/fine pair. With a pair, the fine
/// checks carry empirical orders and both lists must pass.
struct Assessment {
  Report main;
  std::optional<Report> refined;
  std::size_t refine = 1;
  std::optional<double> oracle;

  [[nodiscard]] bool passed() const {
    return all_passed(main.checks) && (!refined || all_passed(refined->checks));
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j{{"hypotheses", main.hypotheses}, {"checks", flatspin::to_json(main.checks)}};
    if (refined) {
      j["refined"] = {{"refine", refine},
                      {"hypotheses", refined->hypotheses},
                      {"checks", flatspin::to_json(refined->checks)}};
      if (oracle) j["refined"]["max_shared_node_difference"] = *oracle;
    }
    j["passed"] = passed();
    return j;
  }
};

inline Assessment assess(Report main, std::optional<Report> fine = {}, std::size_t refine = 1,
                         std::optional<double> oracle = {}) {
  Assessment a{std::move(main), std::move(fine), refine, oracle};
  if (a.refined) attach_orders(a.refined->checks, a.main.checks, static_cast<double>(refine));
  return a;
}

inline bool same_grid_family(const GridDomain& coarse, const GridDomain& fine, std::size_t k) {
  return k >= 2 && coarse.refined(k) == fine;
}

}  // namespace flatspin
