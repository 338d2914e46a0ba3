#include "choquard/params.hpp"

#include <cmath>
#include <sstream>

namespace choquard {

namespace {
// Boundary detection tolerance for floating exponents: gamma and the sigma
// denominator vanish together, so one epsilon keeps the classifications
// consistent.
constexpr double kBoundaryTol = 1e-12;
}  // namespace

double ProblemParams::riesz_normalization() const {
  return std::tgamma(0.5 * (dim - alpha)) /
         (std::tgamma(0.5 * alpha) * std::pow(pi, 0.5 * dim) * std::pow(2.0, alpha));
}

ValidationReport validate(const ProblemParams& params) {
  ValidationReport rep;
  auto fail = [&](const std::string& constraint, const std::string& msg, double value) {
    rep.violations.push_back({constraint, msg, value});
  };
  std::ostringstream os;

  if (params.dim < 3) {
    os.str("");
    os << "dimension must be >= 3, got " << params.dim;
    fail("dim >= 3", os.str(), params.dim);
  }
  const double alpha_lo = std::max(0.0, params.dim - 4.0);
  if (!(params.alpha > alpha_lo && params.alpha < params.dim)) {
    os.str("");
    os << "alpha must lie in (" << alpha_lo << ", " << params.dim << "), got " << params.alpha;
    fail("(dim-4)_+ < alpha < dim", os.str(), params.alpha);
  }
  const double p_energy = (params.dim + params.alpha) / (params.dim - 2.0);
  if (!(params.p >= 2.0)) {
    os.str("");
    os << "p must be >= 2, got " << params.p;
    fail("p >= 2", os.str(), params.p);
  }
  if (!(params.p < p_energy)) {
    os.str("");
    os << "p must be < p^b = " << p_energy << ", got " << params.p;
    fail("p < (dim+alpha)/(dim-2)", os.str(), params.p);
  }
  const double b_lo = params.hardy_limit();
  if (!(params.b > b_lo)) {
    os.str("");
    os << "b must exceed -(dim-2)^2/4 = " << b_lo << " strictly, got " << params.b;
    fail("b > -(dim-2)^2/4", os.str(), params.b);
  }
  if (params.a != 1 && params.a != -1) {
    os.str("");
    os << "a must be +1 or -1, got " << params.a;
    fail("a in {+1,-1}", os.str(), params.a);
  }
  if (!(params.delta >= 0.0)) {
    os.str("");
    os << "delta must be >= 0, got " << params.delta;
    fail("delta >= 0", os.str(), params.delta);
  }
  return rep;
}

void require_valid(const ProblemParams& params) {
  ValidationReport rep = validate(params);
  if (rep.passed()) return;
  std::string msg = "invalid parameters:";
  for (const auto& v : rep.violations) msg += " [" + v.message + "]";
  throw ParameterError(msg);
}

CriticalExponents derive_exponents(const ProblemParams& params) {
  require_valid(params);
  CriticalExponents e;
  const double N = params.dim, al = params.alpha, p = params.p;
  e.p_mass = 1.0 + (2.0 + al) / N;
  e.p_energy = (N + al) / (N - 2.0);
  e.gamma = 0.5 * N - (2.0 + al) / (2.0 * p - 2.0);
  // gamma = (Np - N - alpha - 2)/(2p - 2), so |gamma| below the boundary
  // tolerance is exactly the degenerate-sigma case.
  if (std::abs(e.gamma) > kBoundaryTol) {
    e.sigma = (N + al - N * p + 2.0 * p) / (N * p - N - al - 2.0);
  }
  return e;
}

Regime classify_regime(const ProblemParams& params) {
  CriticalExponents e = derive_exponents(params);
  if (std::abs(e.gamma) <= kBoundaryTol) return Regime::MassCritical;
  if (e.gamma < 0.0) return Regime::MassSubcritical;
  if (std::abs(e.gamma - 1.0) <= kBoundaryTol) return Regime::EnergyCritical;
  if (e.gamma < 1.0) return Regime::InterCritical;
  return Regime::EnergyCritical;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::MassSubcritical: return "mass-subcritical";
    case Regime::MassCritical: return "mass-critical";
    case Regime::InterCritical: return "inter-critical";
    case Regime::EnergyCritical: return "energy-critical";
  }
  return "unknown";
}

}  // namespace choquard
