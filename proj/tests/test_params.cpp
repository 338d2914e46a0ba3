#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "choquard/params.hpp"
#include "oracles.hpp"

using namespace choquard;

static ProblemParams base_params() {
  ProblemParams p;
  p.dim = 3;
  p.alpha = 2.0;
  p.p = 2.0;
  p.b = -0.1;
  p.a = 1;
  p.delta = 0.0;
  return p;
}

TEST_CASE("standing assumptions validate") {
  ProblemParams p = base_params();
  CHECK(validate(p).passed());

  p.b = -0.25;  // boundary of the strict inequality at dim = 3
  ValidationReport rep = validate(p);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.violations[0].message.find("-0.25") != std::string::npos);
  CHECK(rep.violations[0].message.find("strict") != std::string::npos);

  p = base_params();
  p.p = 5.0;
  rep = validate(p);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.violations[0].message.find("p^b = 5") != std::string::npos);

  p = base_params();
  p.a = 0;
  CHECK_FALSE(validate(p).passed());
  p = base_params();
  p.delta = -1.0;
  CHECK_FALSE(validate(p).passed());
  p = base_params();
  p.dim = 2;
  CHECK_FALSE(validate(p).passed());
  p = base_params();
  p.alpha = 3.5;
  CHECK_FALSE(validate(p).passed());
}

TEST_CASE("critical exponents at dim 3, alpha 2") {
  ProblemParams p = base_params();
  CriticalExponents e = derive_exponents(p);
  CHECK(e.p_mass == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(e.p_energy == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(e.gamma == doctest::Approx(-0.5).epsilon(1e-13));
  REQUIRE(e.sigma.has_value());

  p.p = 3.0;
  e = derive_exponents(p);
  CHECK(e.gamma == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(*e.sigma == doctest::Approx(1.0).epsilon(1e-13));

  p.p = 7.0 / 3.0;
  e = derive_exponents(p);
  CHECK(std::abs(e.gamma) < 1e-12);
  CHECK_FALSE(e.sigma.has_value());
}

TEST_CASE("regime classification matches the gamma boundaries") {
  ProblemParams p = base_params();
  CHECK(classify_regime(p) == Regime::MassSubcritical);
  p.p = 7.0 / 3.0;
  CHECK(classify_regime(p) == Regime::MassCritical);
  p.p = 3.0;
  CHECK(classify_regime(p) == Regime::InterCritical);
  p.p = 7.0 / 3.0 + 1e-6;
  CHECK(classify_regime(p) == Regime::InterCritical);
  p.p = 7.0 / 3.0 - 1e-6;
  CHECK(classify_regime(p) == Regime::MassSubcritical);
}

TEST_CASE("p_mass < p_energy and gamma increases in p, all admissible params") {
  for (int dim = 3; dim <= 5; ++dim) {
    for (double alpha : {0.5 * (std::max(0.0, dim - 4.0) + dim), dim - 0.5}) {
      ProblemParams p = base_params();
      p.dim = dim;
      p.alpha = alpha;
      p.p = 2.0;
      CriticalExponents e = derive_exponents(p);
      CHECK(e.p_mass < e.p_energy);
      double prev = -1e9;
      for (double q = 2.0; q < e.p_energy - 1e-6; q += (e.p_energy - 2.0) / 16.0) {
        p.p = q;
        const double gamma = derive_exponents(p).gamma;
        CHECK(gamma > prev);
        prev = gamma;
      }
      // gamma hits 0 at p_mass and 1 at p_energy
      if (e.p_mass >= 2.0) {
        p.p = e.p_mass;
        CHECK(std::abs(derive_exponents(p).gamma) < 1e-12);
      }
      p.p = e.p_energy - 1e-13;
      CHECK(derive_exponents(p).gamma == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("riesz normalization against an independent gamma evaluation") {
  ProblemParams p = base_params();
  CHECK(p.riesz_normalization() == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
  for (int dim : {3, 4, 5}) {
    for (double alpha : {0.7, 1.3, 2.4}) {
      if (!(alpha > std::max(0.0, dim - 4.0))) continue;
      p.dim = dim;
      p.alpha = alpha;
      const double expected = oracles::lanczos_gamma(0.5 * (dim - alpha)) /
                              (oracles::lanczos_gamma(0.5 * alpha) * std::pow(pi, 0.5 * dim) *
                               std::pow(2.0, alpha));
      CHECK(p.riesz_normalization() == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma sign across the regimes") {
  ProblemParams p = base_params();
  p.p = 2.0;  // subcritical at alpha = 2
  CHECK(*derive_exponents(p).sigma < 0.0);
  for (double q : {2.5, 3.0, 4.0}) {
    p.p = q;
    CHECK(*derive_exponents(p).sigma > 0.0);
  }
}
