#ifndef CHOQUARD_SPECTRAL_HPP
#define CHOQUARD_SPECTRAL_HPP

#include <memory>

#include "choquard/field.hpp"
#include "choquard/params.hpp"

namespace choquard {

// Transform normalization, fixed in one place: the forward transform carries
// h^dim and the inverse (2L)^{-dim}, so the discrete Parseval identity
//   h^dim sum_x |u|^2 = (2L)^{-dim} sum_k |u_hat|^2
// holds without extra factors. self_test() asserts it at startup.

// Unnormalized DFT of the samples (FFTW layout); out is resized.
void dft_forward(const SpectralField& u, CplxVec& out);
void dft_backward(const CplxVec& in, SpectralField& out);  // includes 1/n^dim

// Raw cached-plan transform for integrators that own their buffers
// (unnormalized; in and out must be distinct).
void fft_c2c(const Grid& g, const cplx* in, cplx* out, bool forward);

// sum over modes of |k|^2 |u_hat_k|^2 with Parseval weights = integral |grad u|^2.
double gradient_squared(const SpectralField& u);

// Spectral derivative along one axis (multiplier i k_axis).
SpectralField gradient_component(const SpectralField& u, int axis);

// Exact free propagator over time tau: every mode times exp(-i tau |k|^2).
// With imaginary_time set the multiplier is exp(-tau |k|^2) instead.
SpectralField kinetic_multiplier_step(const SpectralField& u, double tau,
                                      bool imaginary_time = false);

// b/(|x|^2 + delta) sampled on the grid. delta = 0 requires the half-cell
// offset so that no node sits at the origin.
std::vector<double> hardy_weight(const Grid& g, double b, double delta);

// Fraction of Fourier mass carried by modes with |signed index| >= n/3 on
// any axis; the resolution-loss monitor for the time integrator.
double spectral_tail_fraction(const SpectralField& u);

// Free-space Riesz convolution (I_alpha * density) evaluated with a
// truncated-kernel Fourier symbol on a zero-padded (2n)^dim grid. The
// truncation radius 2L covers every pair of points in the ball |x| <= L, so
// for box-decaying densities the result matches the whole-space convolution
// to spectral accuracy. The symbol is radial, nonnegative and finite at
// k = 0, which keeps the operator symmetric and positivity-preserving.
class RieszConvolver {
 public:
  RieszConvolver(const Grid& g, double alpha);
  ~RieszConvolver();
  RieszConvolver(const RieszConvolver&) = delete;
  RieszConvolver& operator=(const RieszConvolver&) = delete;

  // density and out are real arrays of grid.size(); aliasing allowed.
  void apply(const double* density, double* out);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }

 private:
  struct Impl;
  Grid grid_;
  double alpha_;
  std::unique_ptr<Impl> impl_;
};

// Cached-convolver convenience wrapper (keyed by grid and alpha).
std::shared_ptr<RieszConvolver> riesz_convolver(const Grid& g, double alpha);

// Field-level wrapper: takes the real part of `density`, returns a real field.
SpectralField riesz_convolve(const SpectralField& density, double alpha);

// Doubles resolution by Fourier zero-padding (same box, 2n points per axis).
SpectralField upsample2x(const SpectralField& u);

// Samples the trigonometric interpolant of u at the dilated points scale*x
// on the same grid (exact band-limited dilation; evaluation beyond the box
// wraps periodically).
SpectralField dilate_field(const SpectralField& u, double scale);

// Spherical-shell averages of |u| (bin width h/2) with a cubic-spline
// evaluator; used for radial profiles, resampled dilations and the radial
// projection of ground-state iterates.
class RadialProfile {
 public:
  RadialProfile(const SpectralField& u, bool use_real_part = false);
  double operator()(double r) const;  // 0 beyond the sampled range
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return val_; }

 private:
  void build_spline();
  std::vector<double> r_, val_;
  std::vector<double> r_ext_, v_ext_, y2_;  // evenly mirrored spline data
};

// Replaces u by its spherical average (projection onto radial functions).
void radialize(SpectralField& u);

// Parseval + free-propagator sign conventions; throws Error on failure.
void self_test();

double parseval_mismatch(const SpectralField& u);  // relative, for tests

}  // namespace choquard

#endif
