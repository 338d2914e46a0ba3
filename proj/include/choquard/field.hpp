#ifndef CHOQUARD_FIELD_HPP
#define CHOQUARD_FIELD_HPP

#include <functional>

#include "choquard/grid.hpp"

namespace choquard {

// Complex samples of u on a Grid. Value semantics; all spectral operations
// treat fields as immutable inputs unless documented otherwise.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid_(g), v_(g.size(), cplx(0.0, 0.0)) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }
  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  CplxVec& values() { return v_; }
  const CplxVec& values() const { return v_; }

  bool finite() const;

  SpectralField& operator*=(double s);
  SpectralField& operator*=(cplx s);
  SpectralField& axpy(double a, const SpectralField& x);  // *this += a*x

  // Same samples on the relabeled grid (x -> mu x reinterpretation).
  SpectralField relabeled(double mu) const {
    SpectralField f = *this;
    f.grid_ = grid_.relabeled(mu);
    return f;
  }

 private:
  Grid grid_;
  CplxVec v_;
};

// Samples fn(x) where x is the node coordinate vector (length grid.dim).
SpectralField sample(const Grid& g, const std::function<cplx(const double*)>& fn);

// Radial helpers used throughout the test and experiment setups.
SpectralField gaussian_field(const Grid& g, double width, double amplitude = 1.0);
// amplitude * (1 - (r/r0)^2)^4 inside r0, zero outside; C^3 and compact.
SpectralField radial_bump(const Grid& g, double r0, double amplitude = 1.0);
// Smooth random field with Fourier decay exp(-|k|^2/(2 k0^2)); deterministic in seed.
SpectralField random_smooth_field(const Grid& g, std::uint64_t seed, double k0, bool real_valued);

double max_abs(const SpectralField& u);

}  // namespace choquard

#endif
