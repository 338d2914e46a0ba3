#include "choquard/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace choquard {

// ---------------------------------------------------------------------------
// Localized weight profile. psi'(r) = 2r up to r = 1, then tapered by the
// decreasing quintic S(z) = 1 - (10 z^3 - 15 z^4 + 6 z^5) on z = (r-1)/9,
// zero from r = 10 on. This keeps psi' <= 2r and psi'' <= 2 everywhere.
// ---------------------------------------------------------------------------

namespace {
constexpr double kTaperLo = 1.0, kTaperHi = 10.0, kTaperW = 9.0;

double S_val(double z) {
  return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
}
double S_d1(double z) {
  const double w = z * (1.0 - z);
  return -30.0 * w * w;
}
double S_d2(double z) { return -60.0 * z * (1.0 - z) * (1.0 - 2.0 * z); }
double S_d3(double z) { return -60.0 * (1.0 - 6.0 * z + 6.0 * z * z); }

// integral_0^z (1 + 9 t) S(t) dt
double S_int(double z) {
  const double z2 = z * z, z4 = z2 * z2;
  return z + 4.5 * z2 - 2.5 * z4 - 15.0 * z4 * z + 21.5 * z4 * z2 - (54.0 / 7.0) * z4 * z2 * z;
}
}  // namespace

double VirialWeight::psi(double r) {
  if (r <= kTaperLo) return r * r;
  if (r >= kTaperHi) return 1.0 + 18.0 * S_int(1.0);
  return 1.0 + 18.0 * S_int((r - kTaperLo) / kTaperW);
}

double VirialWeight::psi_prime(double r) {
  if (r <= kTaperLo) return 2.0 * r;
  if (r >= kTaperHi) return 0.0;
  return 2.0 * r * S_val((r - kTaperLo) / kTaperW);
}

double VirialWeight::psi_second(double r) {
  if (r <= kTaperLo) return 2.0;
  if (r >= kTaperHi) return 0.0;
  const double z = (r - kTaperLo) / kTaperW;
  return 2.0 * S_val(z) + 2.0 * r * S_d1(z) / kTaperW;
}

double VirialWeight::psi_third(double r) {
  if (r <= kTaperLo || r >= kTaperHi) return 0.0;
  const double z = (r - kTaperLo) / kTaperW;
  return 4.0 * S_d1(z) / kTaperW + 2.0 * r * S_d2(z) / (kTaperW * kTaperW);
}

double VirialWeight::psi_fourth(double r) {
  if (r <= kTaperLo || r >= kTaperHi) return 0.0;
  const double z = (r - kTaperLo) / kTaperW;
  return 6.0 * S_d2(z) / (kTaperW * kTaperW) + 2.0 * r * S_d3(z) / (kTaperW * kTaperW * kTaperW);
}

VirialWeight VirialWeight::localized(double R) {
  if (!(R >= 1.0)) throw ParameterError("localized virial weight needs R >= 1");
  // Constructed profile constraints, asserted numerically once per process.
  static bool checked = [] {
    for (int i = 0; i <= 20000; ++i) {
      const double r = 12.0 * i / 20000.0;
      if (psi_prime(r) > 2.0 * r + 1e-12) throw Error("virial weight: psi' <= 2r violated");
      if (psi_second(r) > 2.0 + 1e-12) throw Error("virial weight: psi'' <= 2 violated");
    }
    return true;
  }();
  (void)checked;
  VirialWeight w;
  w.kind = Kind::Localized;
  w.R = R;
  return w;
}

std::pair<double, double> variance_and_momentum(const SpectralField& u) {
  const Grid& g = u.grid();
  const std::vector<double> ax = g.coords();
  double var = 0.0, mom = 0.0;
  // momentum needs x . grad u; accumulate axis by axis.
  std::vector<double> xdot(g.size(), 0.0);
  SpectralField du;
  for (int axis = 0; axis < g.dim; ++axis) {
    du = gradient_component(u, axis);
    for_each_node(g, [&](std::size_t f, const int* idx) {
      const cplx t = std::conj(u[f]) * du[f];
      xdot[f] += ax[idx[axis]] * t.imag();
    });
  }
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    var += r2 * std::norm(u[f]);
    mom += xdot[f];
  });
  const double vol = g.cell_volume();
  return {var * vol, 2.0 * mom * vol};
}

double virial_hardy_term(const SpectralField& u, const ProblemParams& params) {
  if (params.b == 0.0) return 0.0;
  const Grid& g = u.grid();
  const std::vector<double> ax = g.coords();
  double acc = 0.0;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double den = r2 + params.delta;
    acc += r2 / (den * den) * std::norm(u[f]);
  });
  if (params.delta == 0.0 && !g.offset)
    throw SingularityError("virial hardy term with delta = 0 needs the offset grid");
  return 8.0 * params.b * acc * g.cell_volume();
}

double virial_rhs_standard(const SpectralField& u, const ProblemParams& params) {
  const double kin = gradient_squared(u);
  const double nl = nonlocal_term(u, params);
  const double coeff =
      (4.0 * params.alpha + 4.0 * params.dim - 4.0 * params.dim * params.p) / params.p;
  return 8.0 * kin + virial_hardy_term(u, params) + coeff * nl;
}

namespace {

// Pieces of the localized-weight identity, all in closed radial form.
struct LocalWeightTables {
  std::vector<double> r2;        // |x|^2 per node
  std::vector<double> w_d2;      // psi_R''(r)
  std::vector<double> w_rp;      // R psi'(r/R)/r  (-> 2 at r = 0)
  std::vector<double> bilap;     // Laplacian^2 of phi_R
  std::vector<double> xgrad;     // x . grad phi_R = r R psi'(r/R)
  std::vector<double> lap;       // Laplacian of phi_R
};

LocalWeightTables build_tables(const Grid& g, double R) {
  LocalWeightTables t;
  const std::size_t total = g.size();
  t.r2.resize(total);
  t.w_d2.resize(total);
  t.w_rp.resize(total);
  t.bilap.resize(total);
  t.xgrad.resize(total);
  t.lap.resize(total);
  const std::vector<double> ax = g.coords();
  const double N = g.dim;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += ax[idx[d]] * ax[idx[d]];
    const double r = std::sqrt(r2);
    const double s = r / R;
    t.r2[f] = r2;
    const double p1 = R * VirialWeight::psi_prime(s);   // phi_R'
    const double p2 = VirialWeight::psi_second(s);      // phi_R''
    const double p3 = VirialWeight::psi_third(s) / R;   // phi_R'''
    const double p4 = VirialWeight::psi_fourth(s) / (R * R);
    t.w_d2[f] = p2;
    t.w_rp[f] = (r > 0.0) ? p1 / r : 2.0;
    t.xgrad[f] = r * p1;
    t.lap[f] = p2 + (N - 1.0) * t.w_rp[f];
    if (s <= 1.0) {
      t.bilap[f] = 0.0;  // exact in the quadratic region
    } else {
      t.bilap[f] = p4 + 2.0 * (N - 1.0) * p3 / r +
                   (N - 1.0) * (N - 3.0) * (p2 / r2 - p1 / (r2 * r));
    }
  });
  return t;
}

}  // namespace

namespace {

// Cell means of |d|^{alpha-dim} per absolute grid offset (midpoint
// sub-quadrature; equivalent-volume ball for the singular cell). The
// pairwise virial sums carry the |x-y|^2-degree weight through this table,
// which keeps the direct sums at product-integration accuracy.
std::vector<double> pairwise_kernel_means(const Grid& g, double alpha) {
  const double h = g.h();
  const int n = g.n;
  std::vector<double> tab(static_cast<std::size_t>(n) * n * n);
  for (int ox = 0; ox < n; ++ox)
    for (int oy = 0; oy < n; ++oy)
      for (int oz = 0; oz < n; ++oz) {
        const std::size_t f = (static_cast<std::size_t>(ox) * n + oy) * n + oz;
        const int omax = std::max({ox, oy, oz});
        const int m = omax <= 1 ? 32 : (omax <= 3 ? 16 : (omax <= 6 ? 8 : 4));
        double acc = 0.0;
        for (int ix = 0; ix < m; ++ix)
          for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz) {
              if (omax == 0) {
                const bool core_x = (ix == m / 2 || ix == m / 2 - 1);
                const bool core_y = (iy == m / 2 || iy == m / 2 - 1);
                const bool core_z = (iz == m / 2 || iz == m / 2 - 1);
                if (core_x && core_y && core_z) continue;
              }
              const double dx = (ox + (ix + 0.5) / m - 0.5) * h;
              const double dy = (oy + (iy + 0.5) / m - 0.5) * h;
              const double dz = (oz + (iz + 0.5) / m - 0.5) * h;
              acc += std::pow(dx * dx + dy * dy + dz * dz, 0.5 * (alpha - 3.0));
            }
        tab[f] = acc / (m * m * m);
        if (omax == 0) {
          const double side = 2.0 * h / m;
          const double r_core = std::pow(3.0 / (4.0 * pi), 1.0 / 3.0) * side;
          tab[f] += 4.0 * pi * std::pow(r_core, alpha) / (alpha * h * h * h);
        }
      }
  return tab;
}

}  // namespace

double nonlocal_virial_pairwise(const SpectralField& u, const VirialWeight& w,
                                const ProblemParams& params) {
  const Grid& g = u.grid();
  if (g.dim != 3) throw ConfigError("pairwise virial sum implemented for dim 3");
  const std::size_t total = g.size();
  const int n = g.n;
  const std::vector<double> ax = g.coords();
  const double A = params.riesz_normalization();
  const double N = 3.0, al = params.alpha;

  std::vector<double> rho = abs_power(u, params.p);
  const std::vector<double> tab = pairwise_kernel_means(g, al);

  // Quadratic-weight part: (x-y).(grad|x|^2(x)-grad|x|^2(y)) = 2|x-y|^2
  // collapses onto the plain kernel, summed through the cell-mean table.
  double base = 0.0;
  {
    std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int ix = 0; ix < n; ++ix) {
      double row = 0.0;
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          const double ri = rho[(static_cast<std::size_t>(ix) * n + iy) * n + iz];
          if (ri == 0.0) continue;
          double acc = 0.0;
          for (int jx = 0; jx < n; ++jx)
            for (int jy = 0; jy < n; ++jy) {
              const std::size_t base_t =
                  (static_cast<std::size_t>(std::abs(ix - jx)) * n + std::abs(iy - jy)) * n;
              const std::size_t base_r = (static_cast<std::size_t>(jx) * n + jy) * n;
              for (int jz = 0; jz < n; ++jz)
                acc += tab[base_t + std::abs(iz - jz)] * rho[base_r + jz];
            }
          row += ri * acc;
        }
      rows[ix] = row;
    }
    for (int ix = 0; ix < n; ++ix) base += rows[ix];
    base *= 2.0;
  }

  double corr = 0.0;
  if (w.kind == VirialWeight::Kind::Localized) {
    // Pairs with at least one point outside the quadratic ball |x| <= R pick
    // up the weight difference; the density there is the field tail.
    const double R = w.R;
    std::vector<std::array<double, 3>> pos(total);
    std::vector<std::array<double, 3>> gw(total);
    std::vector<double> rnorm(total);
    for_each_node(g, [&](std::size_t f, const int* idx) {
      double r2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        pos[f][d] = ax[idx[d]];
        r2 += ax[idx[d]] * ax[idx[d]];
      }
      const double r = std::sqrt(r2);
      rnorm[f] = r;
      const double fac = (r > 0.0) ? R * VirialWeight::psi_prime(r / R) / r : 2.0;
      for (int d = 0; d < 3; ++d) gw[f][d] = fac * pos[f][d];
    });
    std::vector<double> row_acc(total, 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
      if (rho[i] == 0.0) continue;
      double row = 0.0;
      for (std::size_t j = 0; j < total; ++j) {
        if (static_cast<std::size_t>(i) == j || rho[j] == 0.0) continue;
        if (rnorm[i] <= R && rnorm[j] <= R) continue;
        double d2 = 0.0, dot = 0.0;
        for (int d = 0; d < 3; ++d) {
          const double dx = pos[i][d] - pos[j][d];
          d2 += dx * dx;
          dot += dx * (gw[i][d] - gw[j][d]);
        }
        row += (dot - 2.0 * d2) * rho[j] * std::pow(d2, -0.5 * (N - al + 2.0));
      }
      row_acc[i] = row * rho[i];
    }
    for (std::size_t i = 0; i < total; ++i) corr += row_acc[i];
  }

  const double vol2 = g.cell_volume() * g.cell_volume();
  return -2.0 * A * (N - al) / params.p * (base + corr) * vol2;
}

double virial_rhs_weighted(const SpectralField& u, const VirialWeight& w,
                           const ProblemParams& params, bool force_pairwise) {
  if (w.kind == VirialWeight::Kind::Quadratic) {
    // d_ij w = 2 delta_ij, Laplacian^2 w = 0, (x-y).(grad w(x)-grad w(y)) =
    // 2|x-y|^2: every term collapses onto the standard right side.
    return virial_rhs_standard(u, params);
  }
  const Grid& g = u.grid();
  if (w.R > g.L / 4.0)
    throw ConfigError("localized virial weight needs R <= L/4");
  if (g.n > 32 && !force_pairwise)
    throw ConfigError("localized virial pairwise sum refused above 32 points per axis "
                      "(pass force_pairwise to override)");

  const LocalWeightTables t = build_tables(g, w.R);
  const std::size_t total = g.size();
  const double vol = g.cell_volume();

  // T1 = 4 int psi''(r/R)|d_r u|^2 + (R psi'(r/R)/r)(|grad u|^2 - |d_r u|^2)
  std::vector<SpectralField> du;
  du.reserve(g.dim);
  for (int axis = 0; axis < g.dim; ++axis) du.push_back(gradient_component(u, axis));
  const std::vector<double> ax = g.coords();
  double t1 = 0.0;
  for_each_node(g, [&](std::size_t f, const int* idx) {
    cplx radial(0.0, 0.0);
    double grad2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      radial += ax[idx[d]] * du[d][f];
      grad2 += std::norm(du[d][f]);
    }
    const double rad2 = (t.r2[f] > 0.0) ? std::norm(radial) / t.r2[f] : grad2;
    t1 += t.w_d2[f] * rad2 + t.w_rp[f] * (grad2 - rad2);
  });
  t1 *= 4.0 * vol;

  double t2 = 0.0, t3 = 0.0, t5 = 0.0;
  std::vector<double> rho = abs_power(u, params.p);
  std::vector<double> pot(total);
  riesz_convolver(g, params.alpha)->apply(rho.data(), pot.data());
  for (std::size_t f = 0; f < total; ++f) {
    const double n2 = std::norm(u[f]);
    t2 -= t.bilap[f] * n2;
    if (params.b != 0.0) {
      const double den = t.r2[f] + params.delta;
      t3 += t.xgrad[f] / (den * den) * n2;
    }
    t5 += pot[f] * rho[f] * t.lap[f];
  }
  t2 *= vol;
  t3 *= 4.0 * params.b * vol;
  t5 *= (4.0 / params.p - 2.0) * vol;

  const double t4 = nonlocal_virial_pairwise(u, w, params);
  return t1 + t2 + t3 + t4 + t5;
}

VirialConsistencyReport virial_consistency_check(const TrajectoryRecord& traj) {
  const std::size_t n = traj.times.size();
  if (n < 5) throw ConfigError("virial consistency check needs at least 5 samples");
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs(traj.times[i + 1] - traj.times[i] - dt) > 1e-9 * std::max(1.0, dt))
      throw ConfigError("virial consistency check needs uniform save intervals");

  VirialConsistencyReport rep;
  rep.samples = static_cast<int>(n) - 2;
  for (std::size_t i = 0; i + 2 < n; ++i)
    rep.rhs_scale = std::max(rep.rhs_scale, std::abs(traj.virial_rhs[i + 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 =
        (traj.variance[i + 1] - 2.0 * traj.variance[i] + traj.variance[i - 1]) / (dt * dt);
    const double mismatch = std::abs(d2 - traj.virial_rhs[i]);
    rep.max_abs_mismatch = std::max(rep.max_abs_mismatch, mismatch);
  }
  rep.max_rel_mismatch =
      rep.rhs_scale > 0.0 ? rep.max_abs_mismatch / rep.rhs_scale
                          : std::numeric_limits<double>::infinity();
  return rep;
}

std::string prediction_name(DichotomyPrediction p) {
  switch (p) {
    case DichotomyPrediction::Global: return "global";
    case DichotomyPrediction::Blowup: return "blowup";
    case DichotomyPrediction::OutsideTheorem: return "outside-theorem";
  }
  return "unknown";
}

DichotomyReport classify_dichotomy(const SpectralField& u0, const ProblemParams& params,
                                   const Thresholds& th) {
  const CriticalExponents e = derive_exponents(params);
  if (!e.sigma || !(*e.sigma > 0.0))
    throw RegimeError("dichotomy classification applies to the inter-critical range only "
                      "(mass-critical data is governed by the L2 threshold)");
  const double sigma = *e.sigma;

  const FunctionalReport rep = functional_report(u0, params);
  DichotomyReport out;
  out.ratio = std::sqrt(rep.hb_norm_sq) * std::pow(rep.mass, 0.5 * sigma) / th.K;
  out.energy_mass = rep.energy * std::pow(rep.mass, sigma);
  out.energy_mass_over_H = out.energy_mass / th.H;

  if (!(out.energy_mass < th.H)) {
    out.prediction = DichotomyPrediction::OutsideTheorem;
    out.warnings.push_back("energy-mass product is not below the threshold H");
    return out;
  }
  if (std::abs(out.ratio - 1.0) <= 1e-6) {
    out.prediction = DichotomyPrediction::OutsideTheorem;
    out.warnings.push_back("threshold functional equals K within tolerance");
    return out;
  }
  if (out.ratio < 1.0) {
    out.prediction = DichotomyPrediction::Global;
  } else {
    out.prediction = DichotomyPrediction::Blowup;
    // Finite-variance data is automatic on the compact grid; the radial
    // branch of the blowup statement needs p below (2 dim + 6)/(dim + 1).
    const double p_rad = (2.0 * params.dim + 6.0) / (params.dim + 1.0);
    if (params.p >= p_rad) {
      SpectralField radial_check = u0;
      radialize(radial_check);
      double diff = 0.0, tot = 0.0;
      for (std::size_t i = 0; i < u0.size(); ++i) {
        diff += std::norm(radial_check[i] - u0[i]);
        tot += std::norm(u0[i]);
      }
      if (diff > 1e-8 * tot)
        out.warnings.push_back("non-radial data with p >= (2 dim+6)/(dim+1): the radial "
                               "blowup statement does not cover this exponent");
    }
  }
  return out;
}

std::vector<DichotomyScanRow> dichotomy_scan(const SpectralField& u_base,
                                             const std::vector<double>& ladder,
                                             const ProblemParams& params, const Thresholds& th,
                                             const EvolveConfig& cfg) {
  std::vector<DichotomyScanRow> rows;
  rows.reserve(ladder.size());
  for (double c : ladder) {
    SpectralField u0 = u_base;
    u0 *= c;
    DichotomyScanRow row;
    row.c = c;
    const DichotomyReport rep = classify_dichotomy(u0, params, th);
    row.ratio = rep.ratio;
    row.energy_mass_over_H = rep.energy_mass_over_H;
    row.prediction = rep.prediction;

    TrajectoryRecord traj = evolve(u0, params, cfg, th);
    row.outcome = traj.outcome;
    bool side_ok = true;
    for (double r : traj.dichotomy_ratio) {
      if (rep.prediction == DichotomyPrediction::Global && !(r < 1.0)) side_ok = false;
      if (rep.prediction == DichotomyPrediction::Blowup && !(r > 1.0)) side_ok = false;
    }
    row.ratio_side_constant = side_ok;
    if (rep.prediction == DichotomyPrediction::Global)
      row.agreement = (traj.outcome == Outcome::Completed) && side_ok;
    else if (rep.prediction == DichotomyPrediction::Blowup)
      row.agreement = (traj.outcome != Outcome::Completed) && side_ok;
    else
      row.agreement = false;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace choquard
