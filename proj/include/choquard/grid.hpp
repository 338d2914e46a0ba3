#ifndef CHOQUARD_GRID_HPP
#define CHOQUARD_GRID_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "choquard/common.hpp"

namespace choquard {

// Periodic Cartesian grid on [-L, L)^dim with n points per axis (power of
// two). With the half-cell offset on (the default) nodes sit at
// x_j = -L + (j + 1/2) h, so no node coincides with the origin and the exact
// 1/|x|^2 weight is finite everywhere.
struct Grid {
  int dim = 3;
  int n = 64;
  double L = 12.0;
  bool offset = true;

  double h() const { return 2.0 * L / n; }
  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= h();
    return v;
  }
  double coord(int j) const { return -L + (j + (offset ? 0.5 : 0.0)) * h(); }
  int signed_index(int m) const { return m < n / 2 ? m : m - n; }
  // Wavenumber of FFT mode m (FFTW ordering): k_m = pi * signed(m) / L.
  double wavenumber(int m) const { return pi * signed_index(m) / L; }

  std::vector<double> coords() const;
  std::vector<double> wavenumbers() const;

  // Same samples reinterpreted as f(mu x): spacing and box shrink by 1/mu.
  Grid relabeled(double mu) const {
    Grid g = *this;
    g.L = L / mu;
    return g;
  }

  bool compatible(const Grid& o) const {
    return dim == o.dim && n == o.n && L == o.L && offset == o.offset;
  }

  void check() const;  // throws ParameterError on bad dim/n/L
};

// Row-major index helpers (first axis slowest).
inline std::size_t flat_index(const Grid& g, const int* idx) {
  std::size_t f = 0;
  for (int d = 0; d < g.dim; ++d) f = f * g.n + idx[d];
  return f;
}

// Calls fn(flat, idx[]) for every node, decoding indices incrementally.
template <class Fn>
void for_each_node(const Grid& g, Fn&& fn) {
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    fn(f, idx.data());
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
}

}  // namespace choquard

#endif
