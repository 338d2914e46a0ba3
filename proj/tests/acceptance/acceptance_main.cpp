// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Criteria can be selected by number on the command line; the
// default runs all of them and exits nonzero if any fail.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <vector>

#include "choquard/diagnostics.hpp"
#include "oracles.hpp"

using namespace choquard;

namespace {

struct Gate {
  std::string label;
  double value = 0.0;
  double bound = 0.0;
  bool less_than = true;  // value < bound (else value >= bound)
  bool pass() const { return less_than ? value < bound : value >= bound; }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Gate> gates;
  std::vector<std::string> notes;
  bool pass() const {
    for (const Gate& g : gates)
      if (!g.pass()) return false;
    return true;
  }
};

ProblemParams make_params(double p, double b, double delta = 0.0, int a = 1) {
  ProblemParams pp;
  pp.dim = 3;
  pp.alpha = 2.0;
  pp.p = p;
  pp.b = b;
  pp.a = a;
  pp.delta = delta;
  return pp;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

MinimizeOptions tight_options() {
  MinimizeOptions o;
  o.max_iter = 20000;
  o.j_rel_tol = 1e-13;
  o.j_window = 30;
  o.grad_tol = 1e-10;
  return o;
}

double l2_rel_diff(const SpectralField& a, const SpectralField& b) {
  double d2 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d2 += std::norm(a[i] - b[i]);
    n2 += std::norm(b[i]);
  }
  return std::sqrt(d2 / n2);
}

// ---------------------------------------------------------------------------
// 1. Exponent algebra.
// ---------------------------------------------------------------------------
CriterionResult criterion_1() {
  CriterionResult r{1, "exponent algebra"};
  ProblemParams pp = make_params(3.0, -0.1);
  CriticalExponents e = derive_exponents(pp);
  r.gates.push_back({"|p_mass - 7/3|", std::abs(e.p_mass - 7.0 / 3.0), 1e-12});
  r.gates.push_back({"|p_energy - 5|", std::abs(e.p_energy - 5.0), 1e-12});
  r.gates.push_back({"|sigma(p=3) - 1|", std::abs(*e.sigma - 1.0), 1e-12});

  ProblemParams pm = pp;
  pm.p = 7.0 / 3.0;
  const bool mass_ok = classify_regime(pm) == Regime::MassCritical &&
                       !derive_exponents(pm).sigma.has_value();
  pm.p = 7.0 / 3.0 - 1e-9;
  const bool sub_ok = classify_regime(pm) == Regime::MassSubcritical;
  pm.p = 7.0 / 3.0 + 1e-9;
  const bool inter_ok = classify_regime(pm) == Regime::InterCritical;
  pm.p = 2.0;
  const bool sub2_ok = classify_regime(pm) == Regime::MassSubcritical &&
                       derive_exponents(pm).gamma < 0.0;
  r.gates.push_back({"regime boundaries resolved", (mass_ok && sub_ok && inter_ok && sub2_ok) ? 1.0 : 0.0, 0.5, false});
  return r;
}

// ---------------------------------------------------------------------------
// 2. Riesz convolution oracle.
// ---------------------------------------------------------------------------
CriterionResult criterion_2() {
  CriterionResult r{2, "riesz convolution oracle"};
  {
    // closed-form Newtonian potential of a unit-mass gaussian (n=128, L=16)
    Grid g{3, 128, 16.0, true};
    const double s = 1.0;
    const double norm = std::pow(2.0 * pi * s * s, -1.5);
    SpectralField rho = sample(g, [&](const double* x) {
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      return cplx(norm * std::exp(-r2 / (2.0 * s * s)), 0.0);
    });
    SpectralField pot = riesz_convolve(rho, 2.0);
    const std::vector<double> ax = g.coords();
    double max_rel = 0.0;
    for_each_node(g, [&](std::size_t f, const int* idx) {
      double r2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        if (std::abs(ax[idx[d]]) > 0.5 * g.L) return;
        r2 += ax[idx[d]] * ax[idx[d]];
      }
      const double exact = oracles::gaussian_newton_potential(std::sqrt(r2), s);
      max_rel = std::max(max_rel, std::abs(pot[f].real() - exact) / exact);
    });
    r.gates.push_back({"gaussian potential max rel err (interior half-box)", max_rel, 1e-3});
  }
  {
    // direct O(M^2) kernel sum at n = 16
    Grid g{3, 16, 3.6, true};
    SpectralField u = gaussian_field(g, 1.6);
    std::vector<double> rho = abs_power(u, 2.0);
    std::vector<double> pot(g.size());
    riesz_convolver(g, 2.0)->apply(rho.data(), pot.data());
    std::vector<double> ref = oracles::brute_force_riesz(g, rho, 2.0);
    const std::vector<double> ax = g.coords();
    double scale = 0.0, max_rel = 0.0;
    for_each_node(g, [&](std::size_t f, const int* idx) {
      for (int d = 0; d < 3; ++d)
        if (std::abs(ax[idx[d]]) > 0.5 * g.L) return;
      scale = std::max(scale, std::abs(ref[f]));
    });
    for_each_node(g, [&](std::size_t f, const int* idx) {
      for (int d = 0; d < 3; ++d)
        if (std::abs(ax[idx[d]]) > 0.5 * g.L) return;
      max_rel = std::max(max_rel, std::abs(pot[f] - ref[f]) / scale);
    });
    r.gates.push_back({"pairwise kernel sum agreement (n=16)", max_rel, 1e-2});
  }
  {
    // nested-quadrature value of the pairing integral (n = 64)
    Grid g{3, 64, 6.0, true};
    ProblemParams pp = make_params(2.0, 0.0);
    SpectralField u = gaussian_field(g, 1.5);
    const double spectral = nonlocal_term(u, pp);
    std::vector<double> rho = abs_power(u, 2.0);
    const double direct = oracles::brute_force_pairing(g, rho, 2.0);
    r.gates.push_back({"pairing vs nested quadrature (n=64)", rel(spectral, direct), 1e-3});
  }
  return r;
}

// ---------------------------------------------------------------------------
// 3. Conservation: mass drift and the order of the energy drift.
// ---------------------------------------------------------------------------
CriterionResult criterion_3() {
  CriterionResult r{3, "conservation laws of the splitting"};
  Grid g{3, 32, 8.0, true};
  ProblemParams pp = make_params(7.0 / 3.0, -0.1, 0.0625, 1);  // delta = h^2

  SpectralField u0 = gaussian_field(g, 1.2, 1.1);
  {
    EvolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0 + 1e-9;  // 1000 steps
    cfg.save_every = 100;
    cfg.tail_fraction_max = 1.0;
    TrajectoryRecord tr = evolve(u0, pp, cfg);
    double drift = 0.0;
    for (const FunctionalReport& rep : tr.reports)
      drift = std::max(drift, rel(rep.mass, tr.reports.front().mass));
    r.gates.push_back({"mass drift over 1000 steps", drift, 1e-10});
  }
  {
    auto max_energy_drift = [&](double dt) {
      EvolveConfig cfg;
      cfg.dt = dt;
      cfg.t_max = 0.5;
      cfg.save_every = std::max(1, static_cast<int>(std::round(0.02 / dt)));
      cfg.tail_fraction_max = 1.0;
      TrajectoryRecord tr = evolve(u0, pp, cfg);
      double drift = 0.0;
      for (const FunctionalReport& rep : tr.reports)
        drift = std::max(drift, std::abs(rep.energy - tr.reports.front().energy));
      return drift;
    };
    const double d1 = max_energy_drift(4e-3);
    const double d2 = max_energy_drift(2e-3);
    const double d3 = max_energy_drift(1e-3);
    const double order1 = std::log2(d1 / d2), order2 = std::log2(d2 / d3);
    r.notes.push_back("energy drifts " + format_double(d1) + " / " + format_double(d2) + " / " +
                      format_double(d3) + ", orders " + format_double(order1) + ", " +
                      format_double(order2));
    r.gates.push_back({"dt-halving order (lower)", order2, 1.8, false});
    r.gates.push_back({"dt-halving order (upper)", order2, 2.2, true});
  }
  return r;
}

// ---------------------------------------------------------------------------
// 4. Ground state validity and refinement.
// ---------------------------------------------------------------------------
CriterionResult criterion_4() {
  CriterionResult r{4, "ground state validity"};
  struct Cfg {
    double p, L;
    const char* tag;
  };
  for (Cfg c : {Cfg{2.0, 18.0, "p=2"}, Cfg{7.0 / 3.0, 14.0, "p=7/3"}}) {
    ProblemParams pp = make_params(c.p, 0.0);
    Grid g{3, 64, c.L, true};
    GroundStateResult coarse = minimize_weinstein(pp, g, std::nullopt, tight_options());
    SpectralField vup = upsample2x(coarse.v);
    GroundStateResult fine = minimize_weinstein(pp, vup.grid(), vup, tight_options());

    const std::string t = c.tag;
    r.gates.push_back({t + " EL residual (n=64)", coarse.el_residual, 1e-3});
    r.gates.push_back({t + " EL residual (n=128)", fine.el_residual, 1e-3});
    r.gates.push_back({t + " pohozaev nonlocal (n=64)", coarse.pohozaev_nonlocal, 1e-4});
    r.gates.push_back({t + " pohozaev hb (n=64)", coarse.pohozaev_hb, 1e-4});
    r.gates.push_back({t + " c_gn two-route agreement (n=64)",
                       rel(coarse.c_gn_from_Q, coarse.c_gn), 1e-6});
    // refinement: each dilation residual halves, or both sit at the
    // floating-point floor far below the acceptance tolerance
    auto shrink_ok = [](double a, double b) { return 2.0 * b <= a || (a < 1e-9 && b < 1e-9); };
    r.gates.push_back({t + " refinement shrink",
                       (shrink_ok(coarse.pohozaev_nonlocal, fine.pohozaev_nonlocal) &&
                        shrink_ok(coarse.pohozaev_hb, fine.pohozaev_hb))
                           ? 1.0
                           : 0.0,
                       0.5, false});
    r.notes.push_back(t + ": c_gn = " + format_double(coarse.c_gn) + ", poh n=128 = (" +
                      format_double(fine.pohozaev_nonlocal) + ", " +
                      format_double(fine.pohozaev_hb) + ")");
  }
  {
    // informational: the b = -0.1 state carries a weak origin cusp whose
    // dilation identities converge only algebraically at desk resolution
    ProblemParams pp = make_params(7.0 / 3.0, -0.1);
    Grid g{3, 64, 12.0, true};
    GroundStateResult gs = minimize_weinstein(pp, g);
    r.notes.push_back("informational b=-0.1: el = " + format_double(gs.el_residual) +
                      ", pohozaev = (" + format_double(gs.pohozaev_nonlocal) + ", " +
                      format_double(gs.pohozaev_hb) + ")");
  }
  return r;
}

// ---------------------------------------------------------------------------
// 5. Threshold identities.
// ---------------------------------------------------------------------------
CriterionResult criterion_5() {
  CriterionResult r{5, "threshold identities"};
  ProblemParams pp = make_params(3.0, -0.1);
  for (double c_gn : {1.0, 0.0027885724, 0.75}) {
    Thresholds th = thresholds(c_gn, pp);
    const double coeff = (3.0 * pp.p - 3.0 - pp.alpha - 2.0) /
                         (2.0 * (3.0 * pp.p - 3.0 - pp.alpha));
    r.gates.push_back({"H = coeff K^2 (c_gn=" + format_double(c_gn) + ")",
                       rel(th.H, coeff * th.K * th.K), 1e-12});
    r.gates.push_back({"f(K) = H", std::abs(threshold_potential(th.K, c_gn, pp) - th.H) /
                                       std::max(th.H, 1e-300),
                       1e-12});
    r.gates.push_back({"f'(K) = 0", std::abs(threshold_potential_derivative(th.K, c_gn, pp)) /
                                        std::max(th.K, 1e-300),
                       1e-12});
  }
  // pinned evaluation at c_gn = 1: K = sqrt(3/2), H = 3/8
  Thresholds th1 = thresholds(1.0, pp);
  r.gates.push_back({"K(c_gn=1) = sqrt(1.5)", rel(th1.K, std::sqrt(1.5)), 1e-12});
  r.gates.push_back({"H(c_gn=1) = 0.375", rel(th1.H, 0.375), 1e-12});
  return r;
}

// ---------------------------------------------------------------------------
// Helpers for the dynamic criteria.
// ---------------------------------------------------------------------------
const GroundStateResult& gs_b0_masscrit() {
  static GroundStateResult gs = [] {
    Grid g{3, 64, 12.0, true};
    return minimize_weinstein(make_params(7.0 / 3.0, 0.0), g, std::nullopt, tight_options());
  }();
  return gs;
}

const GroundStateResult& gs_bneg_masscrit() {
  static GroundStateResult gs = [] {
    Grid g{3, 64, 9.0, true};
    return minimize_weinstein(make_params(7.0 / 3.0, -0.1), g, std::nullopt, tight_options());
  }();
  return gs;
}

// The b = -0.1 mass-critical bound state at n = 128 (half the cost of a cold
// minimization: coarse solve, band-limited upsampling, then polishing to the
// discrete fixed point).
SpectralField q_bneg_n128(double L) {
  ProblemParams pp = make_params(7.0 / 3.0, -0.1);
  Grid g64{3, 64, L, true};
  GroundStateResult coarse = minimize_weinstein(pp, g64, std::nullopt, tight_options());
  SpectralField q = upsample2x(coarse.Q);
  polish_bound_state(q, pp);
  return q;
}

const GroundStateResult& gs_b0_intercrit() {
  static GroundStateResult gs = [] {
    Grid g{3, 64, 12.0, true};
    return minimize_weinstein(make_params(3.0, 0.0), g, std::nullopt, tight_options());
  }();
  return gs;
}

const GroundStateResult& gs_bneg_intercrit() {
  static GroundStateResult gs = [] {
    Grid g{3, 64, 10.0, true};
    return minimize_weinstein(make_params(3.0, -0.1), g, std::nullopt, tight_options());
  }();
  return gs;
}

// ---------------------------------------------------------------------------
// 6. Virial identities along simulations.
// ---------------------------------------------------------------------------
CriterionResult criterion_6() {
  CriterionResult r{6, "virial identity along the flow"};
  {
    // (a) free spreading gaussian: nonlinearity off, b = 0
    Grid g{3, 32, 10.0, true};
    ProblemParams pp = make_params(2.0, 0.0);
    EvolveConfig cfg;
    cfg.nonlinearity_off = true;
    cfg.dt = 1e-3;
    cfg.t_max = 0.4;
    cfg.save_every = 20;
    TrajectoryRecord tr = evolve(gaussian_field(g, 1.0), pp, cfg);
    VirialConsistencyReport rep = virial_consistency_check(tr);
    r.gates.push_back({"(a) free gaussian rel mismatch", rep.max_rel_mismatch, 1e-2});
  }
  {
    // (b) standing wave: both sides vanish; absolute tolerance 1e-3 |Q|^2
    const GroundStateResult& gs = gs_b0_masscrit();
    ProblemParams pe = make_params(7.0 / 3.0, 0.0, 1e-8);
    EvolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 0.5;
    cfg.save_every = 25;
    TrajectoryRecord tr = evolve(gs.Q, pe, cfg);
    VirialConsistencyReport rep = virial_consistency_check(tr);
    r.gates.push_back({"(b) standing wave abs mismatch / |Q|^2",
                       rep.max_abs_mismatch / mass(gs.Q), 1e-3});
  }
  {
    // (c) focusing inter-critical run, pre-detection window
    const GroundStateResult& gs = gs_b0_intercrit();
    SpectralField u0 = gs.Q;
    u0 *= 1.2;
    ProblemParams pe = make_params(3.0, 0.0, 0.0);
    EvolveConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_max = 3.0;
    cfg.save_every = 10;
    cfg.tail_fraction_max = 1e-4;
    TrajectoryRecord tr = evolve(u0, pe, cfg);
    // truncate the window to the samples before detection
    TrajectoryRecord pre = tr;
    if (tr.outcome != Outcome::Completed && pre.times.size() > 6) {
      const std::size_t keep = pre.times.size() - 3;
      pre.times.resize(keep);
      pre.variance.resize(keep);
      pre.virial_rhs.resize(keep);
    }
    VirialConsistencyReport rep = virial_consistency_check(pre);
    r.notes.push_back("(c) outcome " + outcome_name(tr.outcome) + ", " +
                      std::to_string(pre.times.size()) + " pre-detection samples");
    r.gates.push_back({"(c) focusing run rel mismatch", rep.max_rel_mismatch, 1e-2});
  }
  {
    // mass-critical special case: variance parabola with curvature 16 E
    const Grid g{3, 48 == 48 ? 64 : 64, 10.0, true};
    ProblemParams pp = make_params(7.0 / 3.0, -0.1, 1e-6);
    ProblemParams p0 = pp;
    p0.delta = 0.0;
    SpectralField u0 = gaussian_field(g, 1.0, 1.0);
    double amp = 1.0;
    while (energy(u0, p0) >= -0.05) {
      amp *= 1.2;
      u0 = gaussian_field(g, 1.0, amp);
    }
    EvolveConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_max = 2.0;
    cfg.save_every = 20;
    TrajectoryRecord tr = evolve(u0, pp, cfg);
    // least-squares parabola through the pre-detection variance samples
    std::size_t keep = tr.times.size();
    if (tr.outcome != Outcome::Completed && keep > 6) keep -= 2;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < keep; ++i) {
      const double t = tr.times[i], v = tr.variance[i];
      s0 += 1;
      s1 += t;
      s2 += t * t;
      s3 += t * t * t;
      s4 += t * t * t * t;
      b0 += v;
      b1 += v * t;
      b2 += v * t * t;
    }
    // normal equations for v = c0 + c1 t + c2 t^2
    const double A[3][3] = {{s0, s1, s2}, {s1, s2, s3}, {s2, s3, s4}};
    double B[3] = {b0, b1, b2};
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
      M[i][3] = B[i];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int i = col + 1; i < 3; ++i)
        if (std::abs(M[i][col]) > std::abs(M[piv][col])) piv = i;
      std::swap(M[col], M[piv]);
      for (int i = 0; i < 3; ++i) {
        if (i == col) continue;
        const double f = M[i][col] / M[col][col];
        for (int j = col; j < 4; ++j) M[i][j] -= f * M[col][j];
      }
    }
    const double c2 = M[2][3] / M[2][2];
    const double e_flow = tr.reports.front().energy;
    r.notes.push_back("mass-critical parabola: c2 = " + format_double(c2) +
                      " vs 8E = " + format_double(8.0 * e_flow) + " (" +
                      std::to_string(keep) + " samples, outcome " + outcome_name(tr.outcome) +
                      ")");
    r.gates.push_back({"variance parabola curvature vs 8E", rel(c2, 8.0 * e_flow), 2e-2});
  }
  return r;
}

// ---------------------------------------------------------------------------
// 7. Pseudo-conformal tracking (b = -0.1, mass-critical).
// ---------------------------------------------------------------------------
CriterionResult criterion_7() {
  CriterionResult r{7, "pseudo-conformal tracking"};
  const double T = 1.0;

  auto track = [&](const SpectralField& Q, const ProblemParams& pp, double dt) {
    SpectralField u0 = exact_pseudoconformal(0.0, T, Q, pp);
    ProblemParams pe = pp;
    pe.delta = 1e-6;
    EvolveConfig cfg;
    cfg.dt = dt;
    cfg.t_max = 0.5 * T;
    cfg.save_every = static_cast<int>(std::round(0.05 / dt));
    cfg.tail_fraction_max = 1e-2;
    double max_err = 0.0;
    SaveCallback sink = [&](double t, const SpectralField& u, std::size_t) {
      if (t <= 0.0) return;
      SpectralField ref = exact_pseudoconformal(t, T, Q, pp);
      max_err = std::max(max_err, l2_rel_diff(u, ref));
    };
    TrajectoryRecord tr = evolve(u0, pe, cfg, std::nullopt, sink);
    return std::make_pair(max_err, rel(mass(u0), mass(Q)));
  };

  // pinned configuration: b = -0.1 at the best desk-scale resolution
  ProblemParams pp = make_params(7.0 / 3.0, -0.1, 0.0);
  SpectralField Q = q_bneg_n128(7.0);
  auto [err_b, mass_rel] = track(Q, pp, 1e-3);
  r.gates.push_back({"|u_T(0)| = |Q| mass equality", mass_rel, 1e-6});
  r.gates.push_back({"L2 tracking error on [0, T/2] (b=-0.1, n=128)", err_b, 1e-2});

  // control without the origin cusp: the tracking machinery itself
  {
    Grid g{3, 64, 9.0, true};
    ProblemParams p0 = make_params(7.0 / 3.0, 0.0, 0.0);
    GroundStateResult gs0 = minimize_weinstein(p0, g, std::nullopt, tight_options());
    auto [err_0, mass_0] = track(gs0.Q, p0, 1e-3);
    (void)mass_0;
    r.notes.push_back("b = 0 control tracks at " + format_double(err_0) +
                      "; the b = -0.1 state's r^{-0.113} origin cusp converges like h^0.7 "
                      "(measured 2.2e-2 at n=64, L=7), so the gap to 1e-2 closes around n~256");
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. Dichotomy reproduction (p = 3, b = -0.1).
// ---------------------------------------------------------------------------
CriterionResult criterion_8() {
  CriterionResult r{8, "dichotomy reproduction"};
  const GroundStateResult& gs = gs_bneg_intercrit();
  ProblemParams pp = make_params(3.0, -0.1, 0.0);
  Thresholds th = thresholds(gs.c_gn, pp);

  ProblemParams pe = pp;
  pe.delta = 1e-6;
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 1.5;
  cfg.save_every = 25;
  cfg.tail_fraction_max = 1e-3;  // the b < 0 profile carries a permanent cusp tail

  const std::vector<double> ladder = {0.6, 0.8, 0.9, 1.2, 1.4, 1.6};
  std::vector<DichotomyScanRow> rows = dichotomy_scan(gs.Q, ladder, pe, th, cfg);
  bool all_agree = true, all_below_H = true, sides_ok = true;
  for (const DichotomyScanRow& row : rows) {
    all_agree = all_agree && row.agreement;
    all_below_H = all_below_H && row.energy_mass_over_H < 1.0;
    sides_ok = sides_ok && row.ratio_side_constant;
    r.notes.push_back("c=" + format_double(row.c) + " ratio=" + format_double(row.ratio) +
                      " E*M^2s/H=" + format_double(row.energy_mass_over_H) + " " +
                      prediction_name(row.prediction) + " -> " + outcome_name(row.outcome) +
                      (row.agreement ? " [agree]" : " [DISAGREE]"));
  }
  r.gates.push_back({"all points below H", all_below_H ? 1.0 : 0.0, 0.5, false});
  r.gates.push_back({"ratio stays on its side", sides_ok ? 1.0 : 0.0, 0.5, false});
  r.gates.push_back({"prediction/simulation agreement", all_agree ? 1.0 : 0.0, 0.5, false});
  return r;
}

// ---------------------------------------------------------------------------
// 9. Positive-energy blowup data.
// ---------------------------------------------------------------------------
CriterionResult criterion_9() {
  CriterionResult r{9, "positive-energy blowup data"};
  Grid g{3, 64, 9.0, true};
  ProblemParams pp = make_params(7.0 / 3.0, -0.1, 0.0);
  SpectralField theta = radial_bump(g, 3.0, 1.0);
  const double e_target = 1.0;
  BlowupData bd = positive_energy_blowup_data(theta, e_target, pp);

  r.gates.push_back({"E(u0) hits the target", rel(bd.energy, e_target), 1e-3});
  const double margin =
      bd.momentum * bd.momentum - 2.0 * bd.energy * bd.variance0;
  r.gates.push_back({"variance-parabola condition strict", margin, 0.0, false});

  ProblemParams pe = pp;
  pe.delta = 1e-6;
  EvolveConfig cfg;
  cfg.dt = 2.5e-4;
  cfg.t_max = 2.0 * bd.predicted_vanishing;
  cfg.save_every = 20;
  cfg.tail_fraction_max = 1e-3;
  TrajectoryRecord tr = evolve(bd.u0, pe, cfg);
  r.notes.push_back("outcome " + outcome_name(tr.outcome) + " at t = " +
                    format_double(tr.detection_time) + ", parabola root at t = " +
                    format_double(bd.predicted_vanishing));
  r.gates.push_back({"blowup detected before the horizon",
                     tr.outcome != Outcome::Completed ? 1.0 : 0.0, 0.5, false});
  r.gates.push_back({"detection before the parabola root",
                     tr.outcome != Outcome::Completed ? tr.detection_time : 1e300,
                     bd.predicted_vanishing});
  // variance decreasing toward the vanishing window
  bool decreasing = tr.variance.size() >= 3;
  for (std::size_t i = 1; i + 1 < tr.variance.size() && decreasing; ++i)
    if (tr.variance[i] > tr.variance[0]) decreasing = false;
  r.gates.push_back({"variance decreases toward the window", decreasing ? 1.0 : 0.0, 0.5, false});
  return r;
}

// ---------------------------------------------------------------------------
// 10. Radial threshold comparison at b = +0.2.
// ---------------------------------------------------------------------------
CriterionResult criterion_10() {
  CriterionResult r{10, "radial thresholds at b > 0"};
  ProblemParams p_rad = make_params(3.0, 0.2);
  ProblemParams p_zero = make_params(3.0, 0.0);
  Grid g64{3, 64, 12.0, true};
  Grid g32{3, 32, 12.0, true};

  GroundStateResult rad64 = minimize_weinstein(p_rad, g64, std::nullopt, tight_options());
  GroundStateResult rad32 = minimize_weinstein(p_rad, g32, std::nullopt, tight_options());
  const GroundStateResult& zero64 = gs_b0_intercrit();
  GroundStateResult zero32 = minimize_weinstein(p_zero, g32, std::nullopt, tight_options());

  const double gap = zero64.c_gn - rad64.c_gn;  // expected strictly positive
  const double var_rad = std::abs(rad64.c_gn - rad32.c_gn);
  const double var_zero = std::abs(zero64.c_gn - zero32.c_gn);
  r.notes.push_back("c_gn(0) = " + format_double(zero64.c_gn) + ", c_gn(0.2, rad) = " +
                    format_double(rad64.c_gn) + ", refinement variations (" +
                    format_double(var_zero) + ", " + format_double(var_rad) + ")");
  r.gates.push_back({"radial variant flagged", rad64.radial_variant ? 1.0 : 0.0, 0.5, false});
  r.gates.push_back({"c_gn(b,rad) < c_gn(0) gap", gap, 0.0, false});
  r.gates.push_back({"gap exceeds 10x grid variation", gap, 10.0 * std::max(var_rad, var_zero),
                     false});

  Thresholds th_rad = thresholds(rad64.c_gn, p_rad, true);
  Thresholds th_zero = thresholds(zero64.c_gn, p_zero, false);
  r.gates.push_back({"K(b,rad) > K(b)", th_rad.K - th_zero.K, 0.0, false});
  r.gates.push_back({"H(b,rad) > H(b)", th_rad.H - th_zero.H, 0.0, false});
  return r;
}

// ---------------------------------------------------------------------------
// 11. Gradient correctness of the quotient parts.
// ---------------------------------------------------------------------------
CriterionResult criterion_11() {
  CriterionResult r{11, "variational gradients vs finite differences"};
  Grid g{3, 32, 8.0, true};
  ProblemParams pp = make_params(7.0 / 3.0, -0.1);
  SpectralField u = gaussian_field(g, 1.1);

  struct Part {
    const char* name;
    std::function<double(const SpectralField&)> value;
    SpectralField grad;
  };
  std::vector<Part> parts;
  parts.push_back({"mass", [&](const SpectralField& v) { return weinstein_parts(v, pp).m; },
                   grad_mass_part(u)});
  parts.push_back({"hb", [&](const SpectralField& v) { return weinstein_parts(v, pp).q; },
                   grad_hb_part(u, pp)});
  parts.push_back({"nonlocal", [&](const SpectralField& v) { return weinstein_parts(v, pp).P; },
                   grad_nonlocal_part(u, pp)});

  double worst = 0.0;
  int directions = 0;
  for (const Part& part : parts) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SpectralField w = random_smooth_field(g, seed, 2.0, true);
      const double eps = 1e-5;
      SpectralField up = u, um = u;
      up.axpy(eps, w);
      um.axpy(-eps, w);
      const double fd = (part.value(up) - part.value(um)) / (2.0 * eps);
      double directional = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        directional += part.grad[i].real() * w[i].real() + part.grad[i].imag() * w[i].imag();
      directional *= 2.0 * g.cell_volume();
      worst = std::max(worst, rel(directional, fd));
      ++directions;
    }
  }
  r.notes.push_back(std::to_string(directions) + " directions across the three parts");
  r.gates.push_back({"max relative gradient error", worst, 1e-6});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  self_test();
  std::map<int, std::function<CriterionResult()>> table = {
      {1, criterion_1}, {2, criterion_2},  {3, criterion_3},  {4, criterion_4},
      {5, criterion_5}, {6, criterion_6},  {7, criterion_7},  {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}, {11, criterion_11}};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, fn] : table) selected.push_back(id);

  int failures = 0;
  for (int id : selected) {
    auto it = table.find(id);
    if (it == table.end()) continue;
    CriterionResult res = it->second();
    const bool ok = res.pass();
    std::printf("criterion %2d [%s] %s\n", res.id, ok ? "PASS" : "FAIL", res.title.c_str());
    for (const Gate& gate : res.gates)
      std::printf("    %-48s %12.5e %s %.5e  [%s]\n", gate.label.c_str(), gate.value,
                  gate.less_than ? "<" : ">=", gate.bound, gate.pass() ? "ok" : "VIOLATED");
    for (const std::string& n : res.notes) std::printf("    note: %s\n", n.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%s: %zu criteria run, %d failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              selected.size(), failures);
  return failures == 0 ? 0 : 1;
}
