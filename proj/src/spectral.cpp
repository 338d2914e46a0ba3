#include "choquard/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <thread>

namespace choquard {

namespace {

int fft_threads() {
  static int n = [] {
    if (const char* env = std::getenv("CHOQUARD_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1 && v <= 64) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hc, 1u, 8u));
  }();
  return n;
}

struct PlanKey {
  int kind;  // 0 c2c fwd, 1 c2c bwd, 2 r2c, 3 c2r
  std::array<int, 8> dims;
  int rank;
  bool operator<(const PlanKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (rank != o.rank) return rank < o.rank;
    return dims < o.dims;
  }
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  fftw_plan get_c2c(int rank, const int* dims, int sign) {
    PlanKey key{sign == FFTW_FORWARD ? 0 : 1, {}, rank};
    std::copy(dims, dims + rank, key.dims.begin());
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d) total *= dims[d];
    CplxVec in(total), out(total);
    fftw_plan_with_nthreads(fft_threads());
    fftw_plan p = fftw_plan_dft(rank, dims, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    if (!p) throw Error("fftw plan creation failed");
    plans_[key] = p;
    return p;
  }

  fftw_plan get_real(int rank, const int* dims, bool forward) {
    PlanKey key{forward ? 2 : 3, {}, rank};
    std::copy(dims, dims + rank, key.dims.begin());
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1, half = 1;
    for (int d = 0; d < rank; ++d) total *= dims[d];
    half = total / dims[rank - 1] * (dims[rank - 1] / 2 + 1);
    RealVec re(total);
    CplxVec sp(half);
    fftw_plan_with_nthreads(fft_threads());
    fftw_plan p = forward
                      ? fftw_plan_dft_r2c(rank, dims, re.data(),
                                          reinterpret_cast<fftw_complex*>(sp.data()), FFTW_ESTIMATE)
                      : fftw_plan_dft_c2r(rank, dims, reinterpret_cast<fftw_complex*>(sp.data()),
                                          re.data(), FFTW_ESTIMATE);
    if (!p) throw Error("fftw plan creation failed");
    plans_[key] = p;
    return p;
  }

 private:
  PlanCache() {
    fftw_init_threads();
  }
  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

void c2c_execute(const Grid& g, const cplx* in, cplx* out, int sign) {
  int dims[8];
  for (int d = 0; d < g.dim; ++d) dims[d] = g.n;
  fftw_plan p = PlanCache::instance().get_c2c(g.dim, dims, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

// Applies fn(|k|^2) as a diagonal Fourier multiplier.
template <class Fn>
SpectralField apply_radial_multiplier(const SpectralField& u, Fn&& fn) {
  const Grid& g = u.grid();
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  const std::vector<double> k = g.wavenumbers();
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    double k2 = 0.0;
    for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
    spec[f] *= fn(k2);
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  SpectralField out(g);
  c2c_execute(g, spec.data(), out.data(), FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(total);
  for (std::size_t f = 0; f < total; ++f) out[f] *= norm;
  return out;
}

}  // namespace

void fft_c2c(const Grid& g, const cplx* in, cplx* out, bool forward) {
  c2c_execute(g, in, out, forward ? FFTW_FORWARD : FFTW_BACKWARD);
}

void dft_forward(const SpectralField& u, CplxVec& out) {
  out.resize(u.size());
  c2c_execute(u.grid(), u.data(), out.data(), FFTW_FORWARD);
}

void dft_backward(const CplxVec& in, SpectralField& out) {
  const Grid& g = out.grid();
  if (in.size() != g.size()) throw Error("dft_backward: size mismatch");
  c2c_execute(g, in.data(), out.data(), FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(g.size());
  for (std::size_t f = 0; f < g.size(); ++f) out[f] *= norm;
}

double gradient_squared(const SpectralField& u) {
  const Grid& g = u.grid();
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  const std::vector<double> k = g.wavenumbers();
  std::array<int, 8> idx{};
  double acc = 0.0;
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    double k2 = 0.0;
    for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
    acc += k2 * std::norm(spec[f]);
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  // Parseval weight: h^dim forward x (2L)^-dim inverse = h^dim / n^dim.
  return acc * g.cell_volume() / static_cast<double>(total);
}

SpectralField gradient_component(const SpectralField& u, int axis) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.dim) throw ParameterError("gradient axis out of range");
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  const std::vector<double> k = g.wavenumbers();
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    spec[f] *= cplx(0.0, k[idx[axis]]);
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  SpectralField out(g);
  c2c_execute(g, spec.data(), out.data(), FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(total);
  for (std::size_t f = 0; f < total; ++f) out[f] *= norm;
  return out;
}

SpectralField kinetic_multiplier_step(const SpectralField& u, double tau, bool imaginary_time) {
  if (imaginary_time) {
    return apply_radial_multiplier(u, [tau](double k2) { return cplx(std::exp(-tau * k2), 0.0); });
  }
  return apply_radial_multiplier(u, [tau](double k2) {
    return std::polar(1.0, -tau * k2);
  });
}

std::vector<double> hardy_weight(const Grid& g, double b, double delta) {
  g.check();
  if (delta < 0.0) throw ParameterError("hardy weight: delta must be >= 0");
  if (delta == 0.0 && !g.offset)
    throw SingularityError("hardy weight with delta = 0 needs the half-cell offset (node at origin)");
  std::vector<double> w(g.size());
  const std::vector<double> ax = g.coords();
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    w[f] = b / (r2 + delta);
  });
  return w;
}

double spectral_tail_fraction(const SpectralField& u) {
  const Grid& g = u.grid();
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  const int cutoff = g.n / 3;
  std::array<int, 8> idx{};
  double tail = 0.0, total = 0.0;
  const std::size_t sz = g.size();
  for (std::size_t f = 0; f < sz; ++f) {
    bool in_tail = false;
    for (int d = 0; d < g.dim; ++d) {
      int m = idx[d] < g.n / 2 ? idx[d] : g.n - idx[d];
      if (m >= cutoff) {
        in_tail = true;
        break;
      }
    }
    const double e = std::norm(spec[f]);
    total += e;
    if (in_tail) tail += e;
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

// ---------------------------------------------------------------------------
// Truncated-kernel Riesz symbol.
//
// The kernel A/|x|^{dim-alpha} cut at radius R has the radial transform
//   G_R(k) = A (2 pi)^{dim/2} k^{-alpha} S(kR),
//   S(y)   = integral_0^y t^{alpha - dim/2} J_{dim/2-1}(t) dt,
// finite at k = 0. S is evaluated by a power series near zero and a
// cumulative Simpson table with Hermite interpolation elsewhere.
// ---------------------------------------------------------------------------

namespace {

double bessel_j_halfish(double nu, double t) {
  // dim 3 -> nu = 1/2 and dim 5 -> nu = 3/2 have elementary forms.
  if (t <= 0.0) return 0.0;
  if (nu == 0.5) return std::sqrt(2.0 / (pi * t)) * std::sin(t);
  if (nu == 1.5) return std::sqrt(2.0 / (pi * t)) * (std::sin(t) / t - std::cos(t));
  return std::cyl_bessel_j(nu, t);
}

class RieszSymbolTable {
 public:
  RieszSymbolTable(int dim, double alpha, double y_max)
      : dim_(dim), alpha_(alpha), nu_(0.5 * dim - 1.0), y_split_(1.0) {
    build(y_max);
  }

  double S(double y) const {
    if (y <= y_split_) return series(y);
    const double t = (y - y_split_) / dy_;
    std::size_t i = std::min(static_cast<std::size_t>(t), tab_.size() - 2);
    const double s = t - i;
    const double y0 = y_split_ + i * dy_, y1 = y0 + dy_;
    const double d0 = integrand(y0) * dy_, d1 = integrand(y1) * dy_;
    const double v0 = tab_[i], v1 = tab_[i + 1];
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * d0 +
           (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * d1;
  }

  double integrand(double t) const {
    if (t <= 0.0) return 0.0;
    return std::pow(t, alpha_ - 0.5 * dim_) * bessel_j_halfish(nu_, t);
  }

 private:
  double series(double y) const {
    // S(y) = sum_j (-1)^j y^{alpha+2j} / ((alpha+2j) 2^{2j+nu} j! Gamma(j+nu+1))
    double sum = 0.0;
    double pow_y = std::pow(y, alpha_);
    double denom_pow = std::pow(2.0, nu_);
    double fact = 1.0;
    for (int j = 0; j < 40; ++j) {
      const double term = ((j % 2) ? -1.0 : 1.0) * pow_y /
                          ((alpha_ + 2.0 * j) * denom_pow * fact * std::tgamma(j + nu_ + 1.0));
      sum += term;
      if (std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-30)) break;
      pow_y *= y * y;
      denom_pow *= 4.0;
      fact *= (j + 1.0);
    }
    return sum;
  }

  void build(double y_max) {
    dy_ = 0.02;
    const std::size_t count = static_cast<std::size_t>((y_max - y_split_) / dy_) + 3;
    tab_.resize(count);
    tab_[0] = series(y_split_);
    for (std::size_t i = 1; i < count; ++i) {
      // 8-panel Simpson over one table step
      const double a = y_split_ + (i - 1) * dy_;
      const int panels = 8;
      const double hh = dy_ / panels;
      double acc = integrand(a) + integrand(a + dy_);
      for (int j = 1; j < panels; ++j) acc += 2.0 * (1 + j % 2) * integrand(a + j * hh);
      tab_[i] = tab_[i - 1] + acc * hh / 3.0;
    }
  }

  int dim_;
  double alpha_, nu_, y_split_, dy_;
  std::vector<double> tab_;
};

}  // namespace

struct RieszConvolver::Impl {
  std::vector<int> pdims;
  std::size_t ptotal = 0, phalf = 0;
  RealVec pad_real;
  CplxVec pad_spec;
  RealVec symbol;
  fftw_plan r2c = nullptr, c2r = nullptr;
};

RieszConvolver::RieszConvolver(const Grid& g, double alpha)
    : grid_(g), alpha_(alpha), impl_(new Impl) {
  g.check();
  if (!(alpha > 0.0 && alpha < g.dim))
    throw ParameterError("riesz order must satisfy 0 < alpha < dim");

  const int pn = 2 * g.n;
  impl_->pdims.assign(g.dim, pn);
  impl_->ptotal = 1;
  for (int d = 0; d < g.dim; ++d) impl_->ptotal *= pn;
  impl_->phalf = impl_->ptotal / pn * (pn / 2 + 1);
  impl_->pad_real.resize(impl_->ptotal);
  impl_->pad_spec.resize(impl_->phalf);
  impl_->symbol.resize(impl_->phalf);
  impl_->r2c = PlanCache::instance().get_real(g.dim, impl_->pdims.data(), true);
  impl_->c2r = PlanCache::instance().get_real(g.dim, impl_->pdims.data(), false);

  // Kernel truncated at R = 2L: covers all pairs within the ball |x| <= L,
  // and its support just fits the padded period 4L. A quintic taper over
  // [R - w, R] removes the truncation jump, whose ringing would otherwise
  // leak into pair distances approaching R.
  const double R = 2.0 * g.L;
  const double w = std::min(g.h(), 0.25 * R);
  const double Ri = R - w;
  ProblemParams tmp;
  tmp.dim = g.dim;
  tmp.alpha = alpha;
  const double A = tmp.riesz_normalization();
  const double pref = A * std::pow(2.0 * pi, 0.5 * g.dim);
  const double nu = 0.5 * g.dim - 1.0;

  const double k_unit = pi / (2.0 * g.L);  // padded-axis wavenumber spacing
  const double k_axis_max = k_unit * (pn / 2);
  const double y_max = std::sqrt(static_cast<double>(g.dim)) * k_axis_max * Ri * 1.0001 + 1.0;
  RieszSymbolTable table(g.dim, alpha, y_max);

  // 16-point Gauss-Legendre nodes on the taper window.
  static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
  static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
  double taper_r[16], taper_wt[16];
  for (int i = 0; i < 8; ++i) {
    taper_r[2 * i] = Ri + 0.5 * w * (1.0 - gl_x[i]);
    taper_r[2 * i + 1] = Ri + 0.5 * w * (1.0 + gl_x[i]);
    // quintic rolloff from 1 at R-w to 0 at R
    for (int j = 0; j < 2; ++j) {
      const double z = (taper_r[2 * i + j] - Ri) / w;
      const double t = 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
      taper_wt[2 * i + j] = 0.5 * w * gl_w[i] * t;
    }
  }

  const double g0 = [&] {
    double edge = 0.0;
    for (int i = 0; i < 16; ++i) edge += taper_wt[i] * std::pow(taper_r[i], alpha - 1.0);
    const double surf_over = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    return pref * surf_over * (std::pow(Ri, alpha) / alpha + edge);
  }();

  // Half-spectrum layout: last axis runs over [0, pn/2].
  std::array<int, 8> idx{};
  const int last = g.dim - 1;
  const int hn = pn / 2 + 1;
  for (std::size_t f = 0; f < impl_->phalf; ++f) {
    double k2 = 0.0;
    for (int d = 0; d < last; ++d) {
      const int m = idx[d] < pn / 2 ? idx[d] : idx[d] - pn;
      k2 += (k_unit * m) * (k_unit * m);
    }
    k2 += (k_unit * idx[last]) * (k_unit * idx[last]);
    if (k2 == 0.0) {
      impl_->symbol[f] = g0;
    } else {
      const double k = std::sqrt(k2);
      double edge = 0.0;
      for (int i = 0; i < 16; ++i)
        edge += taper_wt[i] * std::pow(taper_r[i], alpha - 0.5 * g.dim) *
                bessel_j_halfish(nu, k * taper_r[i]);
      impl_->symbol[f] = pref * (std::pow(k, -alpha) * table.S(k * Ri) +
                                 std::pow(k, 1.0 - 0.5 * g.dim) * edge);
    }
    for (int d = last; d >= 0; --d) {
      const int lim = (d == last) ? hn : pn;
      if (++idx[d] < lim) break;
      idx[d] = 0;
    }
  }
}

RieszConvolver::~RieszConvolver() = default;

void RieszConvolver::apply(const double* density, double* out) {
  Impl& im = *impl_;
  const int n = grid_.n, dim = grid_.dim, pn = 2 * n;
  std::memset(im.pad_real.data(), 0, im.ptotal * sizeof(double));

  // Scatter the n^dim block into the corner of the padded box, row by row.
  const std::size_t rows = grid_.size() / n;
  std::array<int, 8> idx{};
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t src = r * n, dst = 0;
    for (int d = 0; d < dim - 1; ++d) dst = (dst * pn) + idx[d];
    dst *= pn;
    std::memcpy(im.pad_real.data() + dst, density + src, n * sizeof(double));
    for (int d = dim - 2; d >= 0; --d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
  }

  fftw_execute_dft_r2c(im.r2c, im.pad_real.data(),
                       reinterpret_cast<fftw_complex*>(im.pad_spec.data()));
  for (std::size_t f = 0; f < im.phalf; ++f) im.pad_spec[f] *= im.symbol[f];
  fftw_execute_dft_c2r(im.c2r, reinterpret_cast<fftw_complex*>(im.pad_spec.data()),
                       im.pad_real.data());

  const double scale = 1.0 / static_cast<double>(im.ptotal);
  idx = {};
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t src = 0, dst = r * n;
    for (int d = 0; d < dim - 1; ++d) src = (src * pn) + idx[d];
    src *= pn;
    const double* in_row = im.pad_real.data() + src;
    double* out_row = out + dst;
    for (int j = 0; j < n; ++j) out_row[j] = in_row[j] * scale;
    for (int d = dim - 2; d >= 0; --d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
  }
}

namespace {
std::mutex riesz_cache_mu;
std::map<std::string, std::shared_ptr<RieszConvolver>> riesz_cache;
}  // namespace

std::shared_ptr<RieszConvolver> riesz_convolver(const Grid& g, double alpha) {
  char key[128];
  std::snprintf(key, sizeof(key), "%d:%d:%.17g:%.17g", g.dim, g.n, g.L, alpha);
  std::lock_guard<std::mutex> lock(riesz_cache_mu);
  auto it = riesz_cache.find(key);
  if (it != riesz_cache.end()) return it->second;
  if (riesz_cache.size() >= 4) riesz_cache.clear();  // bound the footprint
  auto conv = std::make_shared<RieszConvolver>(g, alpha);
  riesz_cache[key] = conv;
  return conv;
}

SpectralField riesz_convolve(const SpectralField& density, double alpha) {
  const Grid& g = density.grid();
  auto conv = riesz_convolver(g, alpha);
  std::vector<double> rho(g.size()), pot(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rho[i] = density[i].real();
  conv->apply(rho.data(), pot.data());
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = cplx(pot[i], 0.0);
  return out;
}

SpectralField upsample2x(const SpectralField& u) {
  const Grid& g = u.grid();
  Grid g2 = g;
  g2.n = 2 * g.n;
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  CplxVec spec2(g2.size(), cplx(0.0, 0.0));
  const double scale = static_cast<double>(g2.size()) / static_cast<double>(g.size());
  // With the half-cell offset the fine nodes sit a quarter coarse cell to
  // the left of the zero-padded evaluation points; shift per axis in phase.
  std::vector<cplx> shift(g.n, cplx(1.0, 0.0));
  if (g.offset)
    for (int m = 0; m < g.n; ++m)
      shift[m] = std::polar(1.0, -pi * g.signed_index(m) / (2.0 * g.n));
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t f2 = 0;
    cplx ph = spec[f] * scale;
    for (int d = 0; d < g.dim; ++d) {
      const int m = g.signed_index(idx[d]);
      f2 = f2 * g2.n + (m >= 0 ? m : m + g2.n);
      ph *= shift[idx[d]];
    }
    spec2[f2] = ph;
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  SpectralField out(g2);
  c2c_execute(g2, spec2.data(), out.data(), FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(g2.size());
  for (std::size_t f = 0; f < g2.size(); ++f) out[f] *= norm;
  return out;
}

SpectralField dilate_field(const SpectralField& u, double scale) {
  const Grid& g = u.grid();
  const int n = g.n;
  const std::size_t total = g.size();
  CplxVec cur(total);
  c2c_execute(g, u.data(), cur.data(), FFTW_FORWARD);

  // Per-axis evaluation matrix M[j][m] = exp(i k_m (scale x_j - x_0))/n with
  // x_0 the first node (the DFT coefficients are anchored there); the axes
  // share it on the cubic grid.
  std::vector<cplx> M(static_cast<std::size_t>(n) * n);
  const double x0 = g.coord(0);
  for (int j = 0; j < n; ++j) {
    const double x = scale * g.coord(j) - x0;
    for (int m = 0; m < n; ++m)
      M[static_cast<std::size_t>(j) * n + m] = std::polar(1.0 / n, g.wavenumber(m) * x);
  }

  CplxVec next(total);
  std::size_t pre = 1, post = total / n;
  for (int axis = 0; axis < g.dim; ++axis) {
    // contract the mode index of `axis`: next[p, j, q] = sum_m M[j,m] cur[p, m, q]
    for (std::size_t p = 0; p < pre; ++p) {
      for (int j = 0; j < n; ++j) {
        cplx* out_row = next.data() + (p * n + j) * post;
        std::fill(out_row, out_row + post, cplx(0.0, 0.0));
        const cplx* Mrow = M.data() + static_cast<std::size_t>(j) * n;
        for (int m = 0; m < n; ++m) {
          const cplx w = Mrow[m];
          const cplx* in_row = cur.data() + (p * n + m) * post;
          for (std::size_t q = 0; q < post; ++q) out_row[q] += w * in_row[q];
        }
      }
    }
    cur.swap(next);
    pre *= n;
    post /= n;
  }

  SpectralField out(g);
  std::copy(cur.begin(), cur.end(), out.values().begin());
  return out;
}

// ---------------------------------------------------------------------------
// Radial profiles.
// ---------------------------------------------------------------------------

namespace {

void radial_bin_means(const SpectralField& u, const std::function<double(cplx)>& extract,
                      std::vector<double>& r_out, std::vector<double>& v_out) {
  const Grid& g = u.grid();
  const double dr = 0.25 * g.h();
  const std::vector<double> ax = g.coords();
  const std::size_t nbins = static_cast<std::size_t>(std::sqrt(static_cast<double>(g.dim)) * g.L / dr) + 2;
  std::vector<double> sum(nbins, 0.0), rsum(nbins, 0.0);
  std::vector<std::size_t> cnt(nbins, 0);
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double r = std::sqrt(r2);
    const std::size_t bin = static_cast<std::size_t>(r / dr);
    if (bin < nbins) {
      sum[bin] += extract(u[f]);
      rsum[bin] += r;
      cnt[bin]++;
    }
  });
  r_out.clear();
  v_out.clear();
  // abscissa = mean radius of the shell, which removes the first-order
  // binning bias of uneven sample placement
  for (std::size_t i = 0; i < nbins; ++i) {
    if (cnt[i] == 0) continue;
    r_out.push_back(rsum[i] / cnt[i]);
    v_out.push_back(sum[i] / cnt[i]);
  }
}

// Cubic spline through shell means, extended evenly through the origin so
// the slope vanishes there instead of the natural-spline curvature.
struct EvenRadialSpline {
  std::vector<double> x, y, y2;

  EvenRadialSpline(const std::vector<double>& r, const std::vector<double>& v);
  double operator()(double r) const;
};

// Natural cubic spline second derivatives.
std::vector<double> spline_second_derivatives(const std::vector<double>& x,
                                              const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> y2(n, 0.0), u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    const double p = sig * y2[i - 1] + 2.0;
    y2[i] = (sig - 1.0) / p;
    u[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    u[i] = (6.0 * u[i] / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
  }
  for (std::size_t k = n - 1; k-- > 1;) y2[k] = y2[k] * y2[k + 1] + u[k];
  return y2;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& y2, double xv) {
  std::size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (hi + lo) / 2;
    if (x[mid] > xv)
      hi = mid;
    else
      lo = mid;
  }
  const double h = x[hi] - x[lo];
  const double a = (x[hi] - xv) / h, b = (xv - x[lo]) / h;
  return a * y[lo] + b * y[hi] +
         ((a * a * a - a) * y2[lo] + (b * b * b - b) * y2[hi]) * h * h / 6.0;
}

EvenRadialSpline::EvenRadialSpline(const std::vector<double>& r, const std::vector<double>& v) {
  const std::size_t mirror = std::min<std::size_t>(6, r.size());
  x.reserve(r.size() + mirror);
  y.reserve(r.size() + mirror);
  for (std::size_t i = mirror; i-- > 0;) {
    x.push_back(-r[i]);
    y.push_back(v[i]);
  }
  x.insert(x.end(), r.begin(), r.end());
  y.insert(y.end(), v.begin(), v.end());
  y2 = spline_second_derivatives(x, y);
}

double EvenRadialSpline::operator()(double r) const {
  if (r >= x.back()) return y.back();
  if (r <= x.front()) return y.front();
  return spline_eval(x, y, y2, r);
}

}  // namespace

RadialProfile::RadialProfile(const SpectralField& u, bool use_real_part) {
  auto extract = use_real_part ? std::function<double(cplx)>([](cplx z) { return z.real(); })
                               : std::function<double(cplx)>([](cplx z) { return std::abs(z); });
  radial_bin_means(u, extract, r_, val_);
  if (r_.size() < 4) throw Error("radial profile: too few shells");
  build_spline();
}

void RadialProfile::build_spline() {
  EvenRadialSpline s(r_, val_);
  // store the mirrored-extended arrays; evaluation reuses the plain lookup
  r_ext_ = s.x;
  v_ext_ = s.y;
  y2_ = s.y2;
}

double RadialProfile::operator()(double r) const {
  if (r >= r_ext_.back()) return 0.0;
  if (r <= r_ext_.front()) return v_ext_.front();
  return spline_eval(r_ext_, v_ext_, y2_, r);
}

void radialize(SpectralField& u) {
  const Grid& g = u.grid();
  std::vector<double> rr, vr, ri, vi;
  radial_bin_means(u, [](cplx z) { return z.real(); }, rr, vr);
  radial_bin_means(u, [](cplx z) { return z.imag(); }, ri, vi);
  const EvenRadialSpline sr(rr, vr), si(ri, vi);
  const std::vector<double> ax = g.coords();
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double r = std::sqrt(r2);
    u[f] = cplx(sr(r), si(r));
  });
}

SpectralField random_smooth_field(const Grid& g, std::uint64_t seed, double k0, bool real_valued) {
  g.check();
  NormalRng rng(seed);
  CplxVec spec(g.size());
  const std::vector<double> k = g.wavenumbers();
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t f = 0; f < total; ++f) {
    double k2 = 0.0;
    for (int d = 0; d < g.dim; ++d) k2 += k[idx[d]] * k[idx[d]];
    const double amp = std::exp(-k2 / (2.0 * k0 * k0));
    const double gr = rng(), gi = rng();
    spec[f] = cplx(gr * amp, gi * amp);
    for (int d = g.dim - 1; d >= 0; --d) {
      if (++idx[d] < g.n) break;
      idx[d] = 0;
    }
  }
  SpectralField u(g);
  dft_backward(spec, u);
  if (real_valued)
    for (std::size_t f = 0; f < total; ++f) u[f] = cplx(u[f].real(), 0.0);
  double m = 0.0;
  for (std::size_t f = 0; f < total; ++f) m += std::norm(u[f]);
  m *= g.cell_volume();
  if (m > 0.0) u *= 1.0 / std::sqrt(m);
  return u;
}

double parseval_mismatch(const SpectralField& u) {
  const Grid& g = u.grid();
  double mx = 0.0;
  for (const cplx& z : u.values()) mx += std::norm(z);
  mx *= g.cell_volume();
  CplxVec spec(g.size());
  c2c_execute(g, u.data(), spec.data(), FFTW_FORWARD);
  double mk = 0.0;
  for (const cplx& z : spec) mk += std::norm(z);
  mk *= g.cell_volume() / static_cast<double>(g.size());
  return std::abs(mx - mk) / std::max(mx, 1e-300);
}

void self_test() {
  static bool done = false;
  if (done) return;

  Grid g{3, 16, 6.0, true};
  SpectralField u = random_smooth_field(g, 42, 2.0, false);
  if (parseval_mismatch(u) > 1e-12) throw Error("self test: Parseval normalization broken");

  // Plane-wave eigenmode: one free step must multiply by exp(-i tau |k0|^2).
  const double k0 = 2.0 * pi / (2.0 * g.L) * 3.0;
  SpectralField pw = sample(g, [&](const double* x) { return std::polar(1.0, k0 * x[0]); });
  const double tau = 0.37;
  SpectralField stepped = kinetic_multiplier_step(pw, tau);
  const cplx expect = std::polar(1.0, -tau * k0 * k0);
  double err = 0.0;
  for (std::size_t i = 0; i < pw.size(); ++i)
    err = std::max(err, std::abs(stepped[i] - expect * pw[i]));
  if (err > 1e-12) throw Error("self test: free-propagator phase convention broken");

  // Spreading Gaussian: width parameter s^2 -> s^2 + 2 i t under the free flow.
  Grid gg{3, 32, 8.0, true};
  SpectralField ga = gaussian_field(gg, 1.0);
  const double t = 0.25;
  SpectralField num = kinetic_multiplier_step(ga, t);
  const cplx w = cplx(1.0, 2.0 * t);
  SpectralField ex = sample(gg, [&](const double* x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return std::pow(cplx(1.0, 0.0) / w, 1.5) * std::exp(-r2 / (2.0 * w));
  });
  double num2 = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    diff2 += std::norm(num[i] - ex[i]);
    num2 += std::norm(ex[i]);
  }
  // band-limit of the sampled Gaussian caps the agreement near 1e-9 here
  if (std::sqrt(diff2 / num2) > 1e-6) throw Error("self test: free Gaussian evolution mismatch");

  done = true;
}

}  // namespace choquard
