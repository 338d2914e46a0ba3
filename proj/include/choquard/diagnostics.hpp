#ifndef CHOQUARD_DIAGNOSTICS_HPP
#define CHOQUARD_DIAGNOSTICS_HPP

#include "choquard/evolution.hpp"

namespace choquard {

// Weight for the virial identities: either w = |x|^2 or the localized
// phi_R(x) = R^2 psi(|x|/R) with psi(r) = r^2 for r <= 1, constant past
// r = 10, psi' <= 2r and psi'' <= 2 everywhere.
struct VirialWeight {
  enum class Kind { Quadratic, Localized } kind = Kind::Quadratic;
  double R = 0.0;

  static VirialWeight quadratic() { return {Kind::Quadratic, 0.0}; }
  static VirialWeight localized(double R);

  // Radial profile psi and derivatives (piecewise closed forms).
  static double psi(double r);
  static double psi_prime(double r);
  static double psi_second(double r);
  static double psi_third(double r);
  static double psi_fourth(double r);
};

// (integral |x|^2|u|^2, 2 Im integral conj(u) x.grad u). The second entry is
// half of d/dt of the first along the flow.
std::pair<double, double> variance_and_momentum(const SpectralField& u);

// 8 b integral |x|^2/(|x|^2+delta)^2 |u|^2: the Hardy part of the virial
// right side for the regularized flow (reduces to 8x the Hardy term at delta=0).
double virial_hardy_term(const SpectralField& u, const ProblemParams& params);

// Right side of the standard virial identity for the regularized flow:
// 8 integral |grad u|^2 + virial_hardy_term
// + (4 alpha + 4 dim - 4 dim p)/p * nonlocal term.
double virial_rhs_standard(const SpectralField& u, const ProblemParams& params);

// General-weight right side. The quadratic weight reduces algebraically to
// virial_rhs_standard (same code path). The localized weight needs the
// pairwise double sum, which is refused above 32 points per axis unless
// force_pairwise is set.
double virial_rhs_weighted(const SpectralField& u, const VirialWeight& w,
                           const ProblemParams& params, bool force_pairwise = false);

// Pairwise-sum evaluation of the nonlocal virial term
// -(2 A (dim-alpha)/p) sum (x-y).(grad w(x)-grad w(y))|u(x)|^p|u(y)|^p /|x-y|^{dim-alpha+2}
// (oracle for the multiplier-reduced quadratic path; O(M^2)).
double nonlocal_virial_pairwise(const SpectralField& u, const VirialWeight& w,
                                const ProblemParams& params);

struct VirialConsistencyReport {
  double max_abs_mismatch = 0.0;
  double max_rel_mismatch = 0.0;  // against max |rhs| over the window
  double rhs_scale = 0.0;
  int samples = 0;
};

// Central second difference of the recorded variance against the recorded
// virial right side at interior sample times (uniform spacing required).
VirialConsistencyReport virial_consistency_check(const TrajectoryRecord& traj);

enum class DichotomyPrediction { Global, Blowup, OutsideTheorem };
std::string prediction_name(DichotomyPrediction p);

struct DichotomyReport {
  DichotomyPrediction prediction = DichotomyPrediction::OutsideTheorem;
  double ratio = 0.0;           // |u0|_{Hb}|u0|_{L2}^sigma / K
  double energy_mass = 0.0;     // E(u0) |u0|_{L2}^{2 sigma}
  double energy_mass_over_H = 0.0;
  std::vector<std::string> warnings;
};

// Classifies initial data against the inter-critical thresholds. Requires an
// inter-critical exponent; equality with K within a relative tolerance of
// 1e-6 maps to OutsideTheorem, as does failure of the energy hypothesis.
DichotomyReport classify_dichotomy(const SpectralField& u0, const ProblemParams& params,
                                   const Thresholds& th);

struct DichotomyScanRow {
  double c = 0.0;
  double ratio = 0.0;
  double energy_mass_over_H = 0.0;
  DichotomyPrediction prediction = DichotomyPrediction::OutsideTheorem;
  Outcome outcome = Outcome::Completed;
  bool ratio_side_constant = false;  // recorded ratio stayed on its initial side
  bool agreement = false;
};

// Scales u_base by each ladder value, classifies, evolves, and flags
// agreement: Global predictions must complete the horizon with ratio < 1
// throughout; Blowup predictions must terminate early (either trigger) with
// ratio > 1 throughout.
std::vector<DichotomyScanRow> dichotomy_scan(const SpectralField& u_base,
                                             const std::vector<double>& ladder,
                                             const ProblemParams& params,
                                             const Thresholds& th, const EvolveConfig& cfg);

}  // namespace choquard

#endif
