#include "choquard/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "choquard/diagnostics.hpp"

namespace choquard {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::BlowupDetected: return "blowup-detected";
    case Outcome::ResolutionLost: return "resolution-lost";
  }
  return "unknown";
}

Evolver::Evolver(const Grid& grid, const ProblemParams& params, const EvolveConfig& cfg)
    : params_(params), cfg_(cfg) {
  require_valid(params);
  grid.check();
  if (params.b != 0.0 && !(params.delta > 0.0))
    throw ParameterError("time integration with b != 0 requires delta > 0");
  if (params.b != 0.0) hardy_ = hardy_weight(grid, params.b, params.delta);
  if (!cfg.nonlinearity_off) riesz_ = riesz_convolver(grid, params.alpha);
  spec_.resize(grid.size());
  phase_.resize(grid.size());
  density_.resize(grid.size());
}

void Evolver::step(SpectralField& u, double dt) {
  const Grid& g = u.grid();
  const std::size_t total = g.size();
  const std::vector<double> k = g.wavenumbers();
  const double inv_total = 1.0 / static_cast<double>(total);

  auto kinetic_half = [&]() {
    fft_c2c(g, u.data(), spec_.data(), true);
    std::array<int, 8> idx{};
    const double half_dt = 0.5 * dt;
    for (std::size_t f = 0; f < total; ++f) {
      double k2 = 0.0;
      for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
      spec_[f] *= std::polar(inv_total, -half_dt * k2);
      for (int d = g.dim - 1; d >= 0; --d) {
        if (++idx[d] < g.n) break;
        idx[d] = 0;
      }
    }
    fft_c2c(g, spec_.data(), u.data(), false);
  };

  kinetic_half();

  // Potential + nonlocal phase: the multiplier is real, so |u| is invariant
  // during the substep and the flow is exact.
  if (!cfg_.nonlinearity_off) {
    const double p = params_.p;
    if (p == 2.0) {
      for (std::size_t i = 0; i < total; ++i) density_[i] = std::norm(u[i]);
    } else {
      const double hp = 0.5 * p;
      for (std::size_t i = 0; i < total; ++i) density_[i] = std::pow(std::norm(u[i]), hp);
    }
    riesz_->apply(density_.data(), phase_.data());
    const double a = params_.a;
    if (p == 2.0) {
      if (hardy_.empty()) {
        for (std::size_t i = 0; i < total; ++i) u[i] *= std::polar(1.0, dt * a * phase_[i]);
      } else {
        for (std::size_t i = 0; i < total; ++i)
          u[i] *= std::polar(1.0, -dt * (hardy_[i] - a * phase_[i]));
      }
    } else {
      const double q = 0.5 * (p - 2.0);
      for (std::size_t i = 0; i < total; ++i) {
        const double amp = std::pow(std::norm(u[i]), q);
        const double v = hardy_.empty() ? 0.0 : hardy_[i];
        u[i] *= std::polar(1.0, -dt * (v - a * phase_[i] * amp));
      }
    }
  } else if (!hardy_.empty()) {
    for (std::size_t i = 0; i < total; ++i) u[i] *= std::polar(1.0, -dt * hardy_[i]);
  }

  kinetic_half();
}

SpectralField strang_step(const SpectralField& u, double dt, const ProblemParams& params,
                          bool nonlinearity_off) {
  EvolveConfig cfg;
  cfg.nonlinearity_off = nonlinearity_off;
  Evolver ev(u.grid(), params, cfg);
  SpectralField out = u;
  ev.step(out, dt);
  return out;
}

namespace {

// With the nonlinearity test hook active the flow's conserved energy and
// virial right side drop their nonlocal pieces; the recorded report follows
// the flow, not the full functional.
void record_row(TrajectoryRecord& traj, double t, const SpectralField& u,
                const ProblemParams& params, const std::optional<Thresholds>& th,
                const std::optional<double>& sigma, bool nonlinearity_off) {
  FunctionalReport rep;
  if (nonlinearity_off) {
    rep.mass = mass(u);
    rep.kinetic = gradient_squared(u);
    rep.potential_term = hardy_term(u, params.b, params.delta);
    rep.hb_norm_sq = rep.kinetic + rep.potential_term;
    rep.nonlocal_term = 0.0;
    rep.energy = 0.5 * rep.hb_norm_sq;
    rep.weinstein = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep = functional_report(u, params);
  }
  auto [var, mom] = variance_and_momentum(u);
  const double coeff =
      (4.0 * params.alpha + 4.0 * params.dim - 4.0 * params.dim * params.p) / params.p;
  const double vr =
      8.0 * rep.kinetic + virial_hardy_term(u, params) + coeff * rep.nonlocal_term;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  if (th && sigma)
    ratio = std::sqrt(rep.hb_norm_sq) * std::pow(rep.mass, 0.5 * (*sigma)) / th->K;
  traj.times.push_back(t);
  traj.reports.push_back(rep);
  traj.variance.push_back(var);
  traj.momentum_virial.push_back(mom);
  traj.virial_rhs.push_back(vr);
  traj.dichotomy_ratio.push_back(ratio);
  traj.tail_fraction.push_back(spectral_tail_fraction(u));
}

}  // namespace

TrajectoryRecord evolve(const SpectralField& u0, const ProblemParams& params,
                        const EvolveConfig& cfg, const std::optional<Thresholds>& th,
                        const SaveCallback& on_save) {
  require_valid(params);
  if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0) || cfg.save_every < 1)
    throw ConfigError("evolve: need dt > 0, t_max > 0, save_every >= 1");
  if (!u0.finite()) throw ParameterError("evolve: initial data not finite");

  const std::optional<double> sigma = derive_exponents(params).sigma;
  Evolver ev(u0.grid(), params, cfg);
  SpectralField u = u0;
  TrajectoryRecord traj;

  record_row(traj, 0.0, u, params, th, sigma, cfg.nonlinearity_off);
  if (on_save) on_save(0.0, u, 0);
  const double grad0 = std::sqrt(std::max(traj.reports.front().kinetic, 0.0));

  double dt = cfg.dt;
  double t = 0.0;
  std::vector<double> jumps;
  bool done = false;

  while (!done) {
    for (int s = 0; s < cfg.save_every; ++s) {
      ev.step(u, dt);
      t += dt;
      if (t >= cfg.t_max) {
        done = true;
        break;
      }
    }
    if (!u.finite())
      throw InstabilityError("evolve: non-finite field at t = " + format_double(t), t);

    record_row(traj, t, u, params, th, sigma, cfg.nonlinearity_off);
    const std::size_t row = traj.times.size() - 1;
    if (on_save) on_save(t, u, row);

    const double gradn = std::sqrt(std::max(traj.reports[row].kinetic, 0.0));
    if (gradn > cfg.blowup_gradient_factor * grad0) {
      traj.outcome = Outcome::BlowupDetected;
      traj.detection_time = std::max(t - dt, 0.0);
      break;
    }
    if (traj.tail_fraction[row] > cfg.tail_fraction_max) {
      traj.outcome = Outcome::ResolutionLost;
      traj.detection_time = std::max(t - dt, 0.0);
      break;
    }

    if (cfg.adaptive && row >= 1) {
      const double jump =
          std::abs(traj.reports[row].energy - traj.reports[row - 1].energy);
      if (jumps.size() >= 4) {
        std::vector<double> tmp = jumps;
        std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
        const double med = tmp[tmp.size() / 2];
        if (med > 0.0 && jump > 10.0 * med) {
          if (dt * 0.5 < cfg.dt_min) {
            traj.outcome = Outcome::ResolutionLost;
            traj.detection_time = t;
            break;
          }
          dt *= 0.5;
        }
      }
      jumps.push_back(jump);
    }
  }

  traj.final_time = t;
  traj.final_state = std::move(u);
  return traj;
}

SpectralField exact_pseudoconformal(double t, double T, const SpectralField& Q,
                                    const ProblemParams& params) {
  const CriticalExponents e = derive_exponents(params);
  if (e.sigma) throw RegimeError("pseudo-conformal solution requires the mass-critical exponent");
  if (!(t >= 0.0 && t < T)) throw ParameterError("pseudo-conformal sample needs 0 <= t < T");

  const Grid& g = Q.grid();
  const double s = T - t;
  const double pref = std::pow(s, -0.5 * g.dim);
  const std::vector<double> ax = g.coords();

  SpectralField out(g);
  if (std::abs(s - 1.0) < 1e-12) {
    for_each_node(g, [&](std::size_t f, const int* idx) {
      double r2 = 0.0;
      for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
      out[f] = pref * std::polar(1.0, 1.0 / s - r2 / (4.0 * s)) * Q[f].real();
    });
    return out;
  }
  // the shell-averaged profile evaluates the contracted state robustly even
  // for weakly singular origin behavior (b < 0), where spectral dilation rings
  RadialProfile prof(Q, /*use_real_part=*/true);
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double r = std::sqrt(r2);
    out[f] = pref * std::polar(1.0, 1.0 / s - r2 / (4.0 * s)) * prof(r / s);
  });
  return out;
}

BlowupData positive_energy_blowup_data(const SpectralField& theta, double e_target,
                                       const ProblemParams& params) {
  const CriticalExponents e = derive_exponents(params);
  if (e.sigma) throw RegimeError("the positive-energy construction needs the mass-critical exponent");
  if (!(e_target > 0.0)) throw ParameterError("energy target must be positive");
  for (const cplx& z : theta.values())
    if (std::abs(z.imag()) > 1e-14)
      throw ParameterError("the bump profile must be real-valued");

  const Grid& g = theta.grid();
  const double N = g.dim, al = params.alpha, p = params.p;
  const std::vector<double> ax = g.coords();

  // psi = e^{-i|x|^2} theta; the construction's scale algebra uses the exact
  // (delta = 0) Hardy form, which is dilation-covariant.
  SpectralField psi = theta;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    psi[f] = std::polar(1.0, -r2) * theta[f].real();
  });

  ProblemParams exact = params;
  exact.delta = 0.0;
  const double A = 0.5 * (gradient_squared(psi) + hardy_term(psi, exact.b, 0.0));
  const double B = nonlocal_term(psi, exact) / (2.0 * p);
  const double C = variance(psi);
  const double D = -0.5 * variance_and_momentum(psi).second;
  if (!(D > 0.0) || !(A > 0.0) || !(B > 0.0) || !(C > 0.0))
    throw ConstructionError("blowup construction: required positivity of A, B, C, D failed");

  // eps is free in (0, min{A, D^2/(2C)}); pick it so the dilation stays near
  // unity and the constructed state fits the given box
  const double eps_max = 0.999 * std::min(A, D * D / (2.0 * C));
  const double e_mu = (N - 2.0) * (p - 1.0) - (2.0 + al);  // negative at mass-critical
  auto mu_of = [&](double eps) {
    return std::pow((A - eps) * std::pow(eps, p - 1.0) / (B * std::pow(e_target, p - 1.0)),
                    1.0 / e_mu);
  };
  double eps = 0.5 * eps_max, best_gap = std::abs(std::log(mu_of(eps)));
  for (int i = 0; i < 400; ++i) {
    const double cand = eps_max * std::pow(10.0, -6.0 * (1.0 - (i + 1) / 400.0));
    const double gap = std::abs(std::log(mu_of(cand)));
    if (gap < best_gap) {
      best_gap = gap;
      eps = cand;
    }
  }
  const double mu = mu_of(eps);
  const double lambda = std::sqrt(e_target * std::pow(mu, N - 2.0) / eps);

  BlowupData out;
  out.u0 = psi.relabeled(mu);
  out.u0 *= lambda;
  out.energy = 0.5 * (gradient_squared(out.u0) + hardy_term(out.u0, exact.b, 0.0)) -
               nonlocal_term(out.u0, exact) / (2.0 * p);
  auto [var, mom] = variance_and_momentum(out.u0);
  out.variance0 = var;
  out.momentum = 0.5 * mom;  // Im integral conj(u0) x.grad u0
  if (!(out.momentum * out.momentum > 2.0 * out.energy * out.variance0))
    throw ConstructionError("blowup construction: variance parabola does not take negative values");

  // V(t) = C0 + 2 mom2 t + 8 E t^2 with mom2 the recorded momentum pair value.
  const double a2 = 8.0 * out.energy, b1 = 2.0 * mom, c0 = var;
  const double disc = b1 * b1 - 4.0 * a2 * c0;
  out.predicted_vanishing = (-b1 - std::sqrt(disc)) / (2.0 * a2);
  return out;
}

SpectralField free_gaussian_exact(const Grid& g, double s, double t) {
  const cplx w = cplx(s * s, 2.0 * t);
  const cplx pref = std::pow(cplx(s * s, 0.0) / w, 0.5 * g.dim);
  return sample(g, [&](const double* x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    return pref * std::exp(-r2 / (2.0 * w));
  });
}

}  // namespace choquard
