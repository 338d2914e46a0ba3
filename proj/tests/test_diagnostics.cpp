#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "choquard/diagnostics.hpp"
#include "oracles.hpp"

using namespace choquard;

static ProblemParams make_params(double p, double b, double delta) {
  ProblemParams pp;
  pp.dim = 3;
  pp.alpha = 2.0;
  pp.p = p;
  pp.b = b;
  pp.a = 1;
  pp.delta = delta;
  return pp;
}

TEST_CASE("localized weight profile constraints") {
  // psi(r) = r^2 up to 1, constant past 10, psi' <= 2r, psi'' <= 2
  CHECK(VirialWeight::psi(0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(VirialWeight::psi(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(VirialWeight::psi(10.0) == doctest::Approx(VirialWeight::psi(12.0)).epsilon(1e-14));
  double prev = VirialWeight::psi(0.0);
  for (int i = 1; i <= 24000; ++i) {
    const double r = 12.0 * i / 24000.0;
    CHECK(VirialWeight::psi_prime(r) <= 2.0 * r + 1e-12);
    CHECK(VirialWeight::psi_second(r) <= 2.0 + 1e-12);
    const double v = VirialWeight::psi(r);
    CHECK(v >= prev - 1e-12);  // nondecreasing
    prev = v;
  }
  // derivative consistency by finite differences
  for (double r : {0.7, 1.3, 4.0, 9.2}) {
    const double h = 1e-5;
    CHECK((VirialWeight::psi(r + h) - VirialWeight::psi(r - h)) / (2 * h) ==
          doctest::Approx(VirialWeight::psi_prime(r)).epsilon(1e-7));
    CHECK((VirialWeight::psi_prime(r + h) - VirialWeight::psi_prime(r - h)) / (2 * h) ==
          doctest::Approx(VirialWeight::psi_second(r)).epsilon(1e-6));
    CHECK((VirialWeight::psi_second(r + h) - VirialWeight::psi_second(r - h)) / (2 * h) ==
          doctest::Approx(VirialWeight::psi_third(r)).epsilon(1e-5));
    CHECK((VirialWeight::psi_third(r + h) - VirialWeight::psi_third(r - h)) / (2 * h) ==
          doctest::Approx(VirialWeight::psi_fourth(r)).epsilon(1e-4));
  }
  // 2 dim - Laplacian phi_R >= 0 at sampled radii
  const double R = 3.0;
  for (int i = 1; i <= 2000; ++i) {
    const double r = 12.0 * i / 2000.0;
    const double s = r / R;
    const double lap = VirialWeight::psi_second(s) +
                       2.0 * (R / r) * VirialWeight::psi_prime(s);
    CHECK(2.0 * 3.0 - lap >= -1e-12);
  }
}

TEST_CASE("variance and momentum basics") {
  Grid g{3, 64, 16.0, true};
  SpectralField u = gaussian_field(g, 1.0);
  auto [var, mom] = variance_and_momentum(u);
  CHECK(var == doctest::Approx(1.5 * std::pow(pi, 1.5)).epsilon(1e-6));
  CHECK(std::abs(mom) < 1e-12 * var);  // real field

  // quadratic phase shifts the momentum by -4 x variance; the modulated
  // field must stay band-limited (phase gradient 2r within k_max)
  Grid gs{3, 64, 8.0, true};
  SpectralField w = gaussian_field(gs, 1.0);
  {
    SpectralField noise = random_smooth_field(gs, 5, 1.5, false);
    for (std::size_t i = 0; i < gs.size(); ++i) w[i] *= 1.0 + 0.3 * noise[i];
  }
  auto [var_w, mom_w] = variance_and_momentum(w);
  SpectralField wp = sample(gs, [&](const double* x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return std::polar(1.0, -r2);
  });
  for (std::size_t i = 0; i < gs.size(); ++i) wp[i] *= w[i];
  auto [var_p, mom_p] = variance_and_momentum(wp);
  CHECK(var_p == doctest::Approx(var_w).epsilon(1e-10));
  CHECK(mom_p == doctest::Approx(mom_w - 4.0 * var_w).epsilon(1e-8));
}

TEST_CASE("mass-critical virial right side equals 16 energy") {
  Grid g{3, 16, 6.0, true};
  ProblemParams pp = make_params(7.0 / 3.0, -0.1, 0.0);
  for (std::uint64_t seed : {2ull, 6ull}) {
    SpectralField u = random_smooth_field(g, seed, 2.0, false);
    const double vr = virial_rhs_standard(u, pp);
    CHECK(vr == doctest::Approx(16.0 * energy(u, pp)).epsilon(1e-12));
  }
  // with delta > 0 the exact-algebra identity picks up the regularization gap
  pp.delta = 0.05;
  SpectralField u = random_smooth_field(g, 3, 2.0, false);
  const double vr = virial_rhs_standard(u, pp);
  const double gap = vr - 16.0 * energy(u, pp);
  // gap = -8 b delta int |u|^2/(x^2+delta)^2
  const std::vector<double> ax = g.coords();
  double ref = 0.0;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double den = r2 + pp.delta;
    ref += std::norm(u[f]) / (den * den);
  });
  ref *= -8.0 * pp.b * pp.delta * g.cell_volume();
  CHECK(gap == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("virial scaling in the field amplitude") {
  Grid g{3, 16, 6.0, true};
  ProblemParams pp = make_params(2.0, -0.1, 0.1);
  SpectralField u = random_smooth_field(g, 9, 2.0, false);
  SpectralField u2 = u;
  u2 *= 2.0;
  const double kin_part = 8.0 * gradient_squared(u) + virial_hardy_term(u, pp);
  const double nl_part = virial_rhs_standard(u, pp) - kin_part;
  const double expected = 4.0 * kin_part + std::pow(2.0, 2.0 * pp.p) * nl_part;
  CHECK(virial_rhs_standard(u2, pp) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("quadratic weight reduces to the standard identity") {
  Grid g{3, 16, 6.0, true};
  ProblemParams pp = make_params(2.5, 0.3, 0.2);
  SpectralField u = random_smooth_field(g, 4, 2.0, false);
  CHECK(virial_rhs_weighted(u, VirialWeight::quadratic(), pp) ==
        doctest::Approx(virial_rhs_standard(u, pp)).epsilon(1e-14));
}

TEST_CASE("pairwise nonlocal virial term against the multiplier route") {
  Grid g{3, 16, 4.5, true};
  ProblemParams pp = make_params(2.0, 0.0, 0.0);
  SpectralField u = gaussian_field(g, 1.6);
  const double coeff = -(4.0 * (3.0 - pp.alpha) / pp.p);
  const double reduced = coeff * nonlocal_term(u, pp);
  const double pairwise = nonlocal_virial_pairwise(u, VirialWeight::quadratic(), pp);
  CHECK(std::abs(pairwise - reduced) / std::abs(reduced) < 1e-2);
}

TEST_CASE("localized weight covering the support matches the standard value") {
  Grid g{3, 32, 10.0, true};
  ProblemParams pp = make_params(2.0, -0.1, 0.04);
  SpectralField u = radial_bump(g, 2.1, 1.0);
  const double standard = virial_rhs_standard(u, pp);
  const double localized = virial_rhs_weighted(u, VirialWeight::localized(2.5), pp);
  CHECK(std::abs(localized - standard) / std::abs(standard) < 1e-3);

  CHECK_THROWS_AS(virial_rhs_weighted(u, VirialWeight::localized(8.0), pp), ConfigError);
  Grid big{3, 64, 16.0, true};
  SpectralField ub = radial_bump(big, 2.1, 1.0);
  CHECK_THROWS_AS(virial_rhs_weighted(ub, VirialWeight::localized(4.0), pp), ConfigError);
}

TEST_CASE("virial consistency on the free spreading gaussian") {
  Grid g{3, 32, 10.0, true};
  ProblemParams pp = make_params(2.0, 0.0, 0.0);
  EvolveConfig cfg;
  cfg.nonlinearity_off = true;
  cfg.dt = 1e-3;
  cfg.t_max = 0.4;
  cfg.save_every = 20;
  TrajectoryRecord traj = evolve(gaussian_field(g, 1.0), pp, cfg);
  REQUIRE(traj.outcome == Outcome::Completed);
  VirialConsistencyReport rep = virial_consistency_check(traj);
  CHECK(rep.samples >= 5);
  CHECK(rep.max_rel_mismatch < 1e-4);
  // the free variance parabola has curvature 8 x kinetic
  CHECK(traj.virial_rhs.front() ==
        doctest::Approx(8.0 * traj.reports.front().kinetic).epsilon(1e-12));
}

TEST_CASE("virial consistency guards") {
  TrajectoryRecord traj;
  traj.times = {0.0, 0.1, 0.2};
  traj.variance = {1.0, 1.0, 1.0};
  traj.virial_rhs = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(virial_consistency_check(traj), ConfigError);
}

TEST_CASE("dichotomy classification logic") {
  Grid g{3, 16, 6.0, true};
  ProblemParams pp = make_params(3.0, -0.1, 0.01);
  SpectralField u = gaussian_field(g, 1.0, 0.8);
  FunctionalReport rep = functional_report(u, pp);
  const double sigma = 1.0;
  const double func = std::sqrt(rep.hb_norm_sq) * std::pow(rep.mass, 0.5 * sigma);
  const double em = rep.energy * std::pow(rep.mass, sigma);

  Thresholds th;
  th.c_gn = 1.0;
  th.K = func / 0.7;
  th.H = std::max(em, 0.0) * 2.0 + 1.0;
  DichotomyReport dr = classify_dichotomy(u, pp, th);
  CHECK(dr.prediction == DichotomyPrediction::Global);
  CHECK(dr.ratio == doctest::Approx(0.7).epsilon(1e-12));

  th.K = func / 1.3;
  dr = classify_dichotomy(u, pp, th);
  CHECK(dr.prediction == DichotomyPrediction::Blowup);

  th.H = em - std::abs(em);  // energy condition fails
  dr = classify_dichotomy(u, pp, th);
  CHECK(dr.prediction == DichotomyPrediction::OutsideTheorem);

  th.H = std::max(em, 0.0) * 2.0 + 1.0;
  th.K = func;  // equality within tolerance
  dr = classify_dichotomy(u, pp, th);
  CHECK(dr.prediction == DichotomyPrediction::OutsideTheorem);

  CHECK_THROWS_AS(classify_dichotomy(u, make_params(7.0 / 3.0, -0.1, 0.01), th), RegimeError);
}
