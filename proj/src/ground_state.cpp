#include "choquard/ground_state.hpp"

#include <cmath>
#include <cstdio>

namespace choquard {

namespace {

double l2_norm_sq(const SpectralField& u) {
  double acc = 0.0;
  for (const cplx& z : u.values()) acc += std::norm(z);
  return acc * u.grid().cell_volume();
}

double inner(const SpectralField& a, const SpectralField& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc * a.grid().cell_volume();
}

// -Laplace u as a Fourier multiplier.
SpectralField neg_laplacian(const SpectralField& u) {
  const Grid& g = u.grid();
  CplxVec spec;
  dft_forward(u, spec);
  const std::vector<double> k = g.wavenumbers();
  std::array<int, 8> idx{};
  for (std::size_t f = 0; f < g.size(); ++f) {
    double k2 = 0.0;
    for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
    spec[f] *= k2;
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  SpectralField out(g);
  dft_backward(spec, out);
  return out;
}

double exponent_theta_mass(const ProblemParams& p) {
  return 0.5 * (p.dim + p.alpha - p.dim * p.p + 2.0 * p.p);
}
double exponent_theta_hb(const ProblemParams& p) {
  return 0.5 * (p.dim * p.p - p.dim - p.alpha);
}

}  // namespace

WeinsteinParts weinstein_parts(const SpectralField& u, const ProblemParams& params) {
  WeinsteinParts w;
  w.m = l2_norm_sq(u);
  w.q = gradient_squared(u) + hardy_term(u, params.b, params.delta);
  w.P = nonlocal_term(u, params);
  return w;
}

SpectralField grad_mass_part(const SpectralField& u) { return u; }

SpectralField grad_hb_part(const SpectralField& u, const ProblemParams& params) {
  SpectralField g = neg_laplacian(u);
  if (params.b != 0.0) {
    const std::vector<double> w = hardy_weight(u.grid(), params.b, params.delta);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += w[i] * u[i];
  }
  return g;
}

SpectralField grad_nonlocal_part(const SpectralField& u, const ProblemParams& params) {
  const Grid& g = u.grid();
  std::vector<double> rho = abs_power(u, params.p);
  std::vector<double> pot(g.size());
  riesz_convolver(g, params.alpha)->apply(rho.data(), pot.data());
  SpectralField out(g);
  const double q = 0.5 * (params.p - 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double amp = (q == 0.0) ? 1.0 : std::pow(std::norm(u[i]), q);
    out[i] = params.p * pot[i] * amp * u[i];
  }
  return out;
}

SpectralField weinstein_gradient(const SpectralField& u, const ProblemParams& params,
                                 double* j_out) {
  // the part values are pairings of u with the part gradients, so one pass
  // serves both
  SpectralField gq = grad_hb_part(u, params);
  SpectralField gp = grad_nonlocal_part(u, params);
  WeinsteinParts w;
  w.m = l2_norm_sq(u);
  w.q = inner(gq, u);
  w.P = inner(gp, u) / params.p;
  const double scale = 1e-12 * std::pow(std::max(w.m, 1.0), params.p);
  if (!(w.P > scale))
    throw DegenerateInputError("weinstein gradient: nonlocal term collapsed");
  const double t1 = exponent_theta_mass(params), t2 = exponent_theta_hb(params);
  const double J = std::pow(w.m, t1) * std::pow(w.q, t2) / w.P;
  if (j_out) *j_out = J;

  gq *= J * t2 / w.q;
  gq.axpy(J * t1 / w.m, u);
  gq.axpy(-J / w.P, gp);
  return gq;
}

namespace {

// Brings u to unit L2 and Hb norms: amplitude scaling plus grid relabeling.
// With the exact weight (delta = 0) both norms rescale in closed form; with
// delta > 0 the Hardy term is evaluated at the modified regularization
// mu^2 delta and (lambda, mu) is solved by Newton iteration.
SpectralField unit_normalize(const SpectralField& u, const ProblemParams& params) {
  const double m = l2_norm_sq(u);
  const double kin = gradient_squared(u);
  const int N = u.grid().dim;
  if (params.delta == 0.0 || params.b == 0.0) {
    const double q = kin + hardy_term(u, params.b, params.delta);
    const double mu = std::sqrt(m / q);
    const double lambda = std::sqrt(std::pow(mu, N) / m);
    SpectralField v = u.relabeled(mu);
    v *= lambda;
    return v;
  }
  // hardy integral of u(mu x) against 1/(x^2+delta) equals
  // mu^{2-N} * integral |u|^2/(y^2 + mu^2 delta).
  auto hardy_mod = [&](double d) { return hardy_term(u, params.b, d); };
  double mu = std::sqrt(m / (kin + hardy_mod(params.delta)));
  for (int it = 0; it < 12; ++it) {
    const double q_mu = kin + hardy_mod(mu * mu * params.delta);
    const double mu_next = std::sqrt(m / q_mu);
    if (std::abs(mu_next - mu) < 1e-14 * mu) {
      mu = mu_next;
      break;
    }
    mu = mu_next;
  }
  const double lambda = std::sqrt(std::pow(mu, N) / m);
  SpectralField v = u.relabeled(mu);
  v *= lambda;
  return v;
}

}  // namespace

GroundStateResult minimize_weinstein(const ProblemParams& params, const Grid& grid,
                                     const std::optional<SpectralField>& init,
                                     const MinimizeOptions& opts) {
  require_valid(params);
  grid.check();
  const bool radial_variant = params.b > 0.0;

  SpectralField u = init ? *init : gaussian_field(grid, 1.0);
  if (!grid.compatible(u.grid())) throw ParameterError("minimize: init field grid mismatch");
  {
    const double m0 = l2_norm_sq(u);
    if (!(m0 > 0.0)) throw DegenerateInputError("minimize: zero initial field");
    u *= 1.0 / std::sqrt(m0);
  }

  // The quotient is dilation invariant, so on the periodic box a spurious
  // delocalized branch with vanishing Hb norm competes with the localized
  // states. The scale pin c (q/m - 1)^2 vanishes on the unit-norm
  // representative of every dilation orbit, is orthogonal to the quotient's
  // gradient at critical points, and walls off that branch.
  const double th1 = exponent_theta_mass(params), th2 = exponent_theta_hb(params);
  auto objective = [&](const SpectralField& v, double c_pin, double* j_only) -> double {
    WeinsteinParts w = weinstein_parts(v, params);
    if (!(w.P > 0.0) || !(w.q > 0.0)) throw DegenerateInputError("collapsed iterate");
    const double J = std::pow(w.m, th1) * std::pow(w.q, th2) / w.P;
    if (j_only) *j_only = J;
    const double r = w.q / w.m - 1.0;
    return J + c_pin * r * r;
  };
  auto objective_gradient = [&](const SpectralField& v, double c_pin, double* f_out,
                                double* j_out) -> SpectralField {
    SpectralField gq = grad_hb_part(v, params);
    SpectralField gp = grad_nonlocal_part(v, params);
    WeinsteinParts w;
    w.m = l2_norm_sq(v);
    w.q = inner(gq, v);
    w.P = inner(gp, v) / params.p;
    if (!(w.P > 0.0) || !(w.q > 0.0))
      throw DegenerateInputError("weinstein gradient: collapsed iterate");
    const double J = std::pow(w.m, th1) * std::pow(w.q, th2) / w.P;
    const double r = w.q / w.m - 1.0;
    if (j_out) *j_out = J;
    if (f_out) *f_out = J + c_pin * r * r;
    // d(q/m) = (m gq - q u)/m^2 under the 2<.,.> convention
    SpectralField g = gq;  // will become the full gradient
    g *= J * th2 / w.q + 2.0 * c_pin * r / w.m;
    g.axpy(J * th1 / w.m - 2.0 * c_pin * r * w.q / (w.m * w.m), v);
    g.axpy(-J / w.P, gp);
    return g;
  };

  double J = 0.0, F = 0.0;
  const double j_init = weinstein(u, params);
  const double c_pin = 5.0 * j_init;
  SpectralField g = objective_gradient(u, c_pin, &F, &J);
  std::vector<double> f_hist{F};

  SpectralField prev_u = u, prev_g = g;
  double t_last = 0.1 / F;
  bool have_prev = false;
  bool converged = false;
  int iter = 0;

  for (; iter < opts.max_iter; ++iter) {
    const double gnorm2 = inner(g, g);
    if (std::sqrt(gnorm2) < opts.grad_tol * std::max(F, 1e-30)) {
      converged = true;
      break;
    }

    double t = t_last;
    if (have_prev) {
      SpectralField s = u, y = g;
      s.axpy(-1.0, prev_u);
      y.axpy(-1.0, prev_g);
      const double sy = inner(s, y);
      if (sy > 0.0) t = inner(s, s) / sy;
    }

    prev_u = u;
    prev_g = g;

    bool accepted = false;
    for (int ls = 0; ls < 40 && !accepted; ++ls) {
      SpectralField trial = u;
      trial.axpy(-t, g);
      const double mt = l2_norm_sq(trial);
      if (mt > 0.0) {
        trial *= 1.0 / std::sqrt(mt);
        double Ft;
        try {
          Ft = objective(trial, c_pin, nullptr);
        } catch (const DegenerateInputError&) {
          t *= 0.5;
          continue;
        }
        if (Ft <= F - 1e-4 * t * gnorm2) {
          u = trial;
          F = Ft;
          t_last = t;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;  // descent exhausted at floating-point resolution
      break;
    }

    bool projected = false;
    if (radial_variant && opts.radialize_every > 0 && (iter + 1) % opts.radialize_every == 0) {
      radialize(u);
      const double m = l2_norm_sq(u);
      u *= 1.0 / std::sqrt(m);
      projected = true;
    }
    g = objective_gradient(u, c_pin, &F, &J);
    have_prev = !projected;
    if (projected) f_hist.clear();
    f_hist.push_back(F);
    if (opts.verbose && iter % 50 == 0)
      std::fprintf(stderr, "  iter %4d  F = %.12g  J = %.12g\n", iter, F, J);

    if (static_cast<int>(f_hist.size()) > opts.j_window) {
      const double f_old = f_hist[f_hist.size() - 1 - opts.j_window];
      if ((f_old - F) / std::max(F, 1e-300) < opts.j_rel_tol) {
        converged = true;
        ++iter;
        break;
      }
    }
  }

  if (radial_variant) {
    radialize(u);
    const double m = l2_norm_sq(u);
    u *= 1.0 / std::sqrt(m);
    g = weinstein_gradient(u, params, &J);
  }

  if (!converged)
    throw MinimizeIterationLimit("weinstein minimization hit the iteration limit (last J = " +
                                     format_double(J) + ", iters = " + std::to_string(iter) + ")",
                                 std::move(u));

  GroundStateResult res;
  res.iterations = iter;
  res.converged = converged;
  res.radial_variant = radial_variant;
  res.j_init_values = {j_init};

  res.v = unit_normalize(u, params);
  res.j_value = weinstein(res.v, params);
  res.c_gn = 1.0 / res.j_value;
  res.Q = rescale_to_bound_state(res.v, params, res.c_gn);
  if (opts.polish) polish_bound_state(res.Q, params);

  // Dilation identities of the bound state: both fix the mass ratios.
  const double N = params.dim, al = params.alpha, p = params.p;
  ProblemParams pq = params;
  const WeinsteinParts wq = weinstein_parts(res.Q, pq);
  const double c1 = 2.0 * p / (N + al - (N - 2.0) * p);
  const double c2 = (N * p - N - al) / (N + al - (N - 2.0) * p);
  res.pohozaev_nonlocal = std::abs(wq.P - c1 * wq.m) / (c1 * wq.m);
  res.pohozaev_hb = std::abs(wq.q - c2 * wq.m) / (c2 * wq.m);
  res.c_gn_from_Q = c1 * std::pow(1.0 / c2, 0.5 * (N * p - N - al)) * std::pow(wq.m, 1.0 - p);
  res.el_residual = bound_state_residual(res.Q, params);
  res.grid_limited = !(res.pohozaev_nonlocal < 1e-4 && res.pohozaev_hb < 1e-4);
  return res;
}

SpectralField rescale_to_bound_state(const SpectralField& v, const ProblemParams& params,
                                     double c_gn) {
  const double N = params.dim, al = params.alpha, p = params.p;
  const double num = N + al - N * p + 2.0 * p;  // = N + alpha - (N-2) p > 0
  const double den = N * p - N - al;            // > 0 for p >= 2
  const double mu = std::sqrt(num / den);
  const double lambda =
      std::pow(std::pow(num, 0.5 * al + 1.0) * c_gn / (2.0 * p * std::pow(den, 0.5 * al)),
               1.0 / (2.0 * p - 2.0));
  // v(x) = lambda Q(mu x), so Q(y) = v(y/mu)/lambda, resampled on the same
  // grid through the band-limited dilation. Resampling (rather than
  // relabeling the grid) keeps the dilation identities an honest measure of
  // the discretization: under a pure relabel they hold as exact arithmetic
  // for any field.
  SpectralField Q = dilate_field(v, 1.0 / mu);
  Q *= 1.0 / lambda;

  // Advisory check that the dilated box still contains the state.
  const Grid& g = Q.grid();
  const std::vector<double> ax = g.coords();
  double tail = 0.0, total = 0.0;
  const double r_ok = 0.75 * g.L;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double w = std::norm(Q[f]);
    total += w;
    if (r2 > r_ok * r_ok) tail += w;
  });
  if (total > 0.0 && tail / total > 1e-2)
    throw ResolutionError("bound-state rescaling pushes support toward the box boundary "
                          "(tail mass fraction " + format_double(tail / total) +
                          " beyond 0.75 L); enlarge the box half-width");
  return Q;
}

Thresholds thresholds(double c_gn, const ProblemParams& params, bool radial_variant) {
  const CriticalExponents e = derive_exponents(params);
  const double N = params.dim, al = params.alpha, p = params.p;
  const double den = N * p - N - al - 2.0;
  if (!e.sigma || den <= 0.0)
    throw RegimeError("thresholds defined only inter-critical (p > p_mass)");
  Thresholds th;
  th.c_gn = c_gn;
  th.radial_variant = radial_variant;
  th.K = std::pow(2.0 * p / ((N * p - N - al) * c_gn), 1.0 / den);
  th.H = den / (2.0 * (N * p - N - al)) * th.K * th.K;
  return th;
}

double threshold_potential(double s, double c_gn, const ProblemParams& params) {
  const double e = params.dim * params.p - params.dim - params.alpha;
  return 0.5 * s * s - c_gn / (2.0 * params.p) * std::pow(s, e);
}

double threshold_potential_derivative(double s, double c_gn, const ProblemParams& params) {
  const double e = params.dim * params.p - params.dim - params.alpha;
  return s - c_gn / (2.0 * params.p) * e * std::pow(s, e - 1.0);
}

double mass_critical_threshold(const GroundStateResult& gs, const ProblemParams& params) {
  const CriticalExponents e = derive_exponents(params);
  if (e.sigma) throw RegimeError("mass threshold defined only at the mass-critical exponent");
  return std::sqrt(mass(gs.Q));
}

double polish_bound_state(SpectralField& Q, const ProblemParams& params, int max_iter,
                          double tol) {
  const Grid& g = Q.grid();
  const double p = params.p;
  const double gamma = (2.0 * p - 1.0) / (2.0 * p - 2.0);  // stabilization exponent
  const std::vector<double> w =
      (params.b != 0.0) ? hardy_weight(g, params.b, params.delta) : std::vector<double>();
  auto conv = riesz_convolver(g, params.alpha);
  std::vector<double> rho(g.size()), pot(g.size());
  const std::vector<double> k = g.wavenumbers();

  double best_res = bound_state_residual(Q, params);
  SpectralField best = Q;
  for (int it = 0; it < max_iter; ++it) {
    // rhs = (I*|Q|^p)|Q|^{p-2}Q - V Q, applied through (1 - Laplace)^{-1}
    if (p == 2.0) {
      for (std::size_t i = 0; i < g.size(); ++i) rho[i] = std::norm(Q[i]);
    } else {
      const double hp = 0.5 * p;
      for (std::size_t i = 0; i < g.size(); ++i) rho[i] = std::pow(std::norm(Q[i]), hp);
    }
    conv->apply(rho.data(), pot.data());
    // stabilization factor S = <(1-Lap)Q, Q>/<rhs, Q>; S = 1 at the solution
    SpectralField rhs(g);
    const double qexp = 0.5 * (p - 2.0);
    double den = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double amp = (qexp == 0.0) ? 1.0 : std::pow(std::norm(Q[i]), qexp);
      const cplx nq = pot[i] * amp * Q[i];
      rhs[i] = nq - (w.empty() ? cplx(0.0, 0.0) : w[i] * Q[i]);
      den += (std::conj(Q[i]) * rhs[i]).real();
      m2 += std::norm(Q[i]);
    }
    den *= g.cell_volume();
    const double num = gradient_squared(Q) + m2 * g.cell_volume();
    if (!(den > 0.0)) break;
    const double S = num / den;

    CplxVec spec;
    dft_forward(rhs, spec);
    std::array<int, 8> idx{};
    for (std::size_t f = 0; f < g.size(); ++f) {
      double k2 = 0.0;
      for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
      spec[f] /= (k2 + 1.0);
      for (int d = g.dim - 1; d >= 0; --d) {
        if (++idx[d] < g.n) break;
        idx[d] = 0;
      }
    }
    SpectralField next(g);
    dft_backward(spec, next);
    next *= std::pow(S, gamma);
    Q = next;

    const double res = bound_state_residual(Q, params);
    if (res < best_res) {
      best_res = res;
      best = Q;
    } else if (res > 2.0 * best_res && it > 10) {
      break;  // diverging from the fixed point; keep the best iterate
    }
    if (res < tol) break;
  }
  Q = best;
  return best_res;
}

double bound_state_residual(const SpectralField& Q, const ProblemParams& params) {
  const Grid& g = Q.grid();
  SpectralField lhs = neg_laplacian(Q);
  const std::vector<double> w =
      (params.b != 0.0) ? hardy_weight(g, params.b, params.delta) : std::vector<double>();
  std::vector<double> rho = abs_power(Q, params.p);
  std::vector<double> pot(g.size());
  riesz_convolver(g, params.alpha)->apply(rho.data(), pot.data());
  const double q = 0.5 * (params.p - 2.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double amp = (q == 0.0) ? 1.0 : std::pow(std::norm(Q[i]), q);
    cplx r = lhs[i] + Q[i] - pot[i] * amp * Q[i];
    if (!w.empty()) r += w[i] * Q[i];
    num += std::norm(r);
    den += std::norm(Q[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace choquard
