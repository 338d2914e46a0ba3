#ifndef CHOQUARD_FUNCTIONALS_HPP
#define CHOQUARD_FUNCTIONALS_HPP

#include "choquard/spectral.hpp"

namespace choquard {

// Conserved quantities and variational functionals of one field state.
// energy = (kinetic + potential_term)/2 - (a/2p) nonlocal_term and
// hb_norm_sq = kinetic + potential_term by construction.
struct FunctionalReport {
  double mass = 0.0;
  double energy = 0.0;
  double hb_norm_sq = 0.0;
  double kinetic = 0.0;
  double potential_term = 0.0;  // integral of b/(|x|^2+delta) |u|^2
  double nonlocal_term = 0.0;   // integral of (I_alpha*|u|^p)|u|^p
  double weinstein = 0.0;       // quotient J_b(u); NaN when degenerate
};

double mass(const SpectralField& u);
double variance(const SpectralField& u);  // integral of |x|^2 |u|^2

// Pointwise |u|^p as a real array (p >= 2 keeps the integrand C^1).
std::vector<double> abs_power(const SpectralField& u, double p);

double hardy_term(const SpectralField& u, double b, double delta);
double nonlocal_term(const SpectralField& u, const ProblemParams& params);

double energy(const SpectralField& u, const ProblemParams& params);

// Scale-invariant quotient |u|_{L2}^{dim+alpha-dim p+2p} |u|_{Hb}^{dim p-dim-alpha} / P(u).
// Throws DegenerateInputError when the nonlocal term is not positive.
double weinstein(const SpectralField& u, const ProblemParams& params);

FunctionalReport functional_report(const SpectralField& u, const ProblemParams& params);

// Sharp constant of the symmetric-kernel Hardy-Littlewood-Sobolev pairing,
//   pi^{(N-a)/2} Gamma(a/2)/Gamma((N+a)/2) (Gamma(N/2)/Gamma(N))^{-a/N}.
double hls_sharp_constant(int dim, double alpha);

}  // namespace choquard

#endif
