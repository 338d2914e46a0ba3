#ifndef CHOQUARD_PARAMS_HPP
#define CHOQUARD_PARAMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "choquard/common.hpp"

namespace choquard {

// Problem data for i u_t - L_b u = -a (I_alpha * |u|^p) |u|^{p-2} u with
// L_b = -Laplace + b/|x|^2, regularized to b/(|x|^2 + delta) when delta > 0.
struct ProblemParams {
  int dim = 3;         // spatial dimension, >= 3
  double alpha = 2.0;  // Riesz order, (dim-4)_+ < alpha < dim
  double p = 2.0;      // nonlinearity exponent, 2 <= p < (dim+alpha)/(dim-2)
  double b = 0.0;      // potential coupling, b > -(dim-2)^2/4
  int a = +1;          // +1 focusing, -1 defocusing
  double delta = 0.0;  // potential regularization (length^2), >= 0

  double hardy_limit() const { return -0.25 * (dim - 2.0) * (dim - 2.0); }
  // Normalization constant of the Riesz kernel A/|x|^{dim-alpha}.
  double riesz_normalization() const;
};

struct CriticalExponents {
  double p_mass = 0.0;    // 1 + (2+alpha)/dim
  double p_energy = 0.0;  // (dim+alpha)/(dim-2)
  double gamma = 0.0;     // dim/2 - (2+alpha)/(2p-2)
  std::optional<double> sigma;  // undefined exactly at the mass-critical point
};

enum class Regime { MassSubcritical, MassCritical, InterCritical, EnergyCritical };

std::string regime_name(Regime r);

struct ValidationIssue {
  std::string constraint;
  std::string message;
  double offending = 0.0;
};

struct ValidationReport {
  std::vector<ValidationIssue> violations;
  bool passed() const { return violations.empty(); }
};

// Diagnostic check of the standing assumptions; never throws.
ValidationReport validate(const ProblemParams& params);

// Throws ParameterError when validate() fails.
void require_valid(const ProblemParams& params);

CriticalExponents derive_exponents(const ProblemParams& params);
Regime classify_regime(const ProblemParams& params);

}  // namespace choquard

#endif
