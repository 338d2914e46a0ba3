#include "choquard/functionals.hpp"

#include <cmath>

namespace choquard {

double mass(const SpectralField& u) {
  double acc = 0.0;
  for (const cplx& z : u.values()) acc += std::norm(z);
  return acc * u.grid().cell_volume();
}

double variance(const SpectralField& u) {
  const Grid& g = u.grid();
  const std::vector<double> ax = g.coords();
  double acc = 0.0;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    acc += r2 * std::norm(u[f]);
  });
  return acc * g.cell_volume();
}

std::vector<double> abs_power(const SpectralField& u, double p) {
  std::vector<double> out(u.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::norm(u[i]);
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double n2 = std::norm(u[i]);
      out[i] = n2 * std::sqrt(n2);
    }
  } else {
    const double half_p = 0.5 * p;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(std::norm(u[i]), half_p);
  }
  return out;
}

double hardy_term(const SpectralField& u, double b, double delta) {
  if (b == 0.0) return 0.0;
  const Grid& g = u.grid();
  const std::vector<double> w = hardy_weight(g, b, delta);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * std::norm(u[i]);
  return acc * g.cell_volume();
}

double nonlocal_term(const SpectralField& u, const ProblemParams& params) {
  const Grid& g = u.grid();
  std::vector<double> rho = abs_power(u, params.p);
  std::vector<double> pot(g.size());
  riesz_convolver(g, params.alpha)->apply(rho.data(), pot.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) acc += rho[i] * pot[i];
  return acc * g.cell_volume();
}

double energy(const SpectralField& u, const ProblemParams& params) {
  const double kin = gradient_squared(u);
  const double pot = hardy_term(u, params.b, params.delta);
  const double nl = nonlocal_term(u, params);
  return 0.5 * (kin + pot) - params.a / (2.0 * params.p) * nl;
}

double weinstein(const SpectralField& u, const ProblemParams& params) {
  const double m = mass(u);
  const double q = gradient_squared(u) + hardy_term(u, params.b, params.delta);
  const double P = nonlocal_term(u, params);
  const double scale = 1e-12 * std::pow(std::max(m, 1.0), params.p);
  if (!(P > scale)) throw DegenerateInputError("weinstein quotient: nonlocal term is degenerate");
  const double N = params.dim, al = params.alpha, p = params.p;
  return std::pow(m, 0.5 * (N + al - N * p + 2.0 * p)) * std::pow(q, 0.5 * (N * p - N - al)) / P;
}

FunctionalReport functional_report(const SpectralField& u, const ProblemParams& params) {
  FunctionalReport r;
  r.mass = mass(u);
  r.kinetic = gradient_squared(u);
  r.potential_term = hardy_term(u, params.b, params.delta);
  r.nonlocal_term = nonlocal_term(u, params);
  r.hb_norm_sq = r.kinetic + r.potential_term;
  r.energy = 0.5 * r.hb_norm_sq - params.a / (2.0 * params.p) * r.nonlocal_term;
  const double N = params.dim, al = params.alpha, p = params.p;
  const double scale = 1e-12 * std::pow(std::max(r.mass, 1.0), p);
  r.weinstein = (r.nonlocal_term > scale)
                    ? std::pow(r.mass, 0.5 * (N + al - N * p + 2.0 * p)) *
                          std::pow(r.hb_norm_sq, 0.5 * (N * p - N - al)) / r.nonlocal_term
                    : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double hls_sharp_constant(int dim, double alpha) {
  if (!(alpha > 0.0 && alpha < dim)) throw ParameterError("hls constant: need 0 < alpha < dim");
  const double N = dim;
  return std::pow(pi, 0.5 * (N - alpha)) * std::tgamma(0.5 * alpha) / std::tgamma(0.5 * (N + alpha)) *
         std::pow(std::tgamma(0.5 * N) / std::tgamma(N), -alpha / N);
}

}  // namespace choquard
