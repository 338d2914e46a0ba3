#ifndef CHOQUARD_EVOLUTION_HPP
#define CHOQUARD_EVOLUTION_HPP

#include <functional>

#include "choquard/ground_state.hpp"

namespace choquard {

struct EvolveConfig {
  double dt = 1e-3;
  double t_max = 1.0;
  int save_every = 10;
  double blowup_gradient_factor = 50.0;
  double tail_fraction_max = 1e-4;
  bool adaptive = false;          // halve dt on energy jumps (floor dt_min)
  double dt_min = 1e-6;
  bool nonlinearity_off = false;  // test hook: drop the nonlocal phase
  int snapshot_every = 0;         // in save intervals; 0 = no snapshots
};

enum class Outcome { Completed, BlowupDetected, ResolutionLost };
std::string outcome_name(Outcome o);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<FunctionalReport> reports;
  std::vector<double> variance;          // integral |x|^2 |u|^2
  std::vector<double> momentum_virial;   // 2 Im integral conj(u) x.grad u
  std::vector<double> virial_rhs;        // second derivative of the variance
  std::vector<double> dichotomy_ratio;   // |u|_{Hb}|u|_{L2}^sigma / K (NaN if no thresholds)
  std::vector<double> tail_fraction;
  Outcome outcome = Outcome::Completed;
  double detection_time = 0.0;  // meaningful unless Completed
  double final_time = 0.0;
  SpectralField final_state;
};

// One Strang step for the regularized flow: exact half kinetic phase,
// exact full potential+nonlocal phase (real multiplier, |u| invariant),
// exact half kinetic phase. Mass is preserved to rounding. Holds the
// buffers and the cached Riesz convolver for its grid.
class Evolver {
 public:
  Evolver(const Grid& grid, const ProblemParams& params, const EvolveConfig& cfg);

  void step(SpectralField& u, double dt);
  const ProblemParams& params() const { return params_; }

 private:
  ProblemParams params_;
  EvolveConfig cfg_;
  std::vector<double> hardy_;
  std::shared_ptr<RieszConvolver> riesz_;
  CplxVec spec_;
  std::vector<double> phase_, density_;
};

// Single step convenience wrapper (tests and bindings).
SpectralField strang_step(const SpectralField& u, double dt, const ProblemParams& params,
                          bool nonlinearity_off = false);

using SaveCallback = std::function<void(double t, const SpectralField& u, std::size_t row)>;

// Integrates until t_max, a blowup trigger, or an instability; diagnostics
// are recorded every save_every steps (and at t = 0 and the final state).
TrajectoryRecord evolve(const SpectralField& u0, const ProblemParams& params,
                        const EvolveConfig& cfg,
                        const std::optional<Thresholds>& th = std::nullopt,
                        const SaveCallback& on_save = nullptr);

// Explicit self-similar blowup solution built from a mass-critical bound
// state profile: (T-t)^{-dim/2} exp(i/(T-t) - i|x|^2/(4(T-t))) Q(x/(T-t)).
// Q is resampled through its radial profile; at unit scale the samples are
// reused directly.
SpectralField exact_pseudoconformal(double t, double T, const SpectralField& Q,
                                    const ProblemParams& params);

struct BlowupData {
  SpectralField u0;
  double energy = 0.0;
  double momentum = 0.0;        // Im integral conj(u0) x.grad u0 (negative)
  double variance0 = 0.0;
  double predicted_vanishing = 0.0;  // first root of the variance parabola
};

// Mass-critical initial data with prescribed positive energy whose variance
// parabola takes negative values: u0 = lambda psi(mu x), psi = e^{-i|x|^2} theta.
BlowupData positive_energy_blowup_data(const SpectralField& theta, double e_target,
                                       const ProblemParams& params);

// Closed-form free-propagator Gaussian (width s at t=0, unit amplitude).
SpectralField free_gaussian_exact(const Grid& g, double s, double t);

}  // namespace choquard

#endif
