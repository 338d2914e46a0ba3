#include <cmath>
#include <cstdio>

#include "choquard/field.hpp"

namespace choquard {

double NormalRng::next_uniform() {
  // splitmix64, mapped to (0,1)
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double NormalRng::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform(), u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * pi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * pi * u2);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void Grid::check() const {
  if (dim < 3 || dim > 5) throw ParameterError("grid dimension must be 3, 4 or 5");
  if (n < 4 || (n & (n - 1)) != 0) throw ParameterError("grid points per axis must be a power of two >= 4");
  if (!(L > 0.0)) throw ParameterError("grid half-width must be positive");
}

std::vector<double> Grid::coords() const {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = coord(j);
  return x;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n);
  for (int m = 0; m < n; ++m) k[m] = wavenumber(m);
  return k;
}

bool SpectralField::finite() const {
  for (const cplx& z : v_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

SpectralField& SpectralField::operator*=(double s) {
  for (cplx& z : v_) z *= s;
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (cplx& z : v_) z *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += a * x[i];
  return *this;
}

SpectralField sample(const Grid& g, const std::function<cplx(const double*)>& fn) {
  g.check();
  SpectralField u(g);
  const std::vector<double> ax = g.coords();
  double x[8];
  for_each_node(g, [&](std::size_t f, const int* idx) {
    for (int d = 0; d < g.dim; ++d) x[d] = ax[idx[d]];
    u[f] = fn(x);
  });
  return u;
}

SpectralField gaussian_field(const Grid& g, double width, double amplitude) {
  const double inv2w2 = 1.0 / (2.0 * width * width);
  return sample(g, [&](const double* x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    return cplx(amplitude * std::exp(-r2 * inv2w2), 0.0);
  });
}

SpectralField radial_bump(const Grid& g, double r0, double amplitude) {
  return sample(g, [&](const double* x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
    const double s = 1.0 - r2 / (r0 * r0);
    if (s <= 0.0) return cplx(0.0, 0.0);
    const double s2 = s * s;
    return cplx(amplitude * s2 * s2, 0.0);
  });
}

double max_abs(const SpectralField& u) {
  double m = 0.0;
  for (const cplx& z : u.values()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace choquard
