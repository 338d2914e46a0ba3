#include "choquard/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace choquard {

namespace {
constexpr char kMagic[4] = {'C', 'H', 'Q', 'F'};
constexpr std::uint8_t kVersion = 1;

void put(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
void get(std::istream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw Error("field file truncated");
}
}  // namespace

void write_field(const std::filesystem::path& path, const SpectralField& u, double delta) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open field file for writing: " + path.string());
  const Grid& g = u.grid();
  put(os, kMagic, 4);
  put(os, &kVersion, 1);
  const std::int32_t dim = g.dim, n = g.n;
  const std::uint8_t off = g.offset ? 1 : 0;
  put(os, &dim, 4);
  put(os, &n, 4);
  put(os, &g.L, 8);
  put(os, &off, 1);
  put(os, &delta, 8);
  put(os, u.data(), u.size() * sizeof(cplx));
  if (!os) throw Error("field file write failed: " + path.string());
}

SpectralField read_field(const std::filesystem::path& path, double* delta_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open field file: " + path.string());
  char magic[4];
  get(is, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw Error("bad field file magic: " + path.string());
  std::uint8_t ver = 0;
  get(is, &ver, 1);
  if (ver != kVersion) throw Error("unsupported field file version");
  std::int32_t dim = 0, n = 0;
  std::uint8_t off = 0;
  double L = 0.0, delta = 0.0;
  get(is, &dim, 4);
  get(is, &n, 4);
  get(is, &L, 8);
  get(is, &off, 1);
  get(is, &delta, 8);
  Grid g{dim, n, L, off != 0};
  g.check();
  SpectralField u(g);
  get(is, u.data(), u.size() * sizeof(cplx));
  if (delta_out) *delta_out = delta;
  return u;
}

void write_report_csv_header(std::ostream& os) {
  os << "t,mass,energy,hb_norm_sq,kinetic,potential_term,nonlocal_term";
}

void write_report_csv_row(std::ostream& os, double t, const FunctionalReport& r) {
  os << format_double(t) << ',' << format_double(r.mass) << ',' << format_double(r.energy) << ','
     << format_double(r.hb_norm_sq) << ',' << format_double(r.kinetic) << ','
     << format_double(r.potential_term) << ',' << format_double(r.nonlocal_term);
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open trajectory CSV for writing: " + path.string());
  write_report_csv_header(os);
  os << ",variance,momentum_virial,virial_rhs,dichotomy_ratio,tail_fraction\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    write_report_csv_row(os, traj.times[i], traj.reports[i]);
    os << ',' << format_double(traj.variance[i]) << ',' << format_double(traj.momentum_virial[i])
       << ',' << format_double(traj.virial_rhs[i]) << ','
       << format_double(traj.dichotomy_ratio[i]) << ',' << format_double(traj.tail_fraction[i])
       << '\n';
  }
}

TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open trajectory CSV: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw Error("empty trajectory CSV");
  TrajectoryRecord traj;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::strtod(tok.c_str(), nullptr));
    if (vals.size() != 12) throw Error("trajectory CSV row has wrong column count");
    traj.times.push_back(vals[0]);
    FunctionalReport r;
    r.mass = vals[1];
    r.energy = vals[2];
    r.hb_norm_sq = vals[3];
    r.kinetic = vals[4];
    r.potential_term = vals[5];
    r.nonlocal_term = vals[6];
    traj.reports.push_back(r);
    traj.variance.push_back(vals[7]);
    traj.momentum_virial.push_back(vals[8]);
    traj.virial_rhs.push_back(vals[9]);
    traj.dichotomy_ratio.push_back(vals[10]);
    traj.tail_fraction.push_back(vals[11]);
  }
  return traj;
}

void write_radial_profile_csv(const std::filesystem::path& path, const SpectralField& u) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open radial profile CSV for writing: " + path.string());
  RadialProfile prof(u);
  os << "r,abs_u\n";
  for (std::size_t i = 0; i < prof.radii().size(); ++i)
    os << format_double(prof.radii()[i]) << ',' << format_double(prof.values()[i]) << '\n';
}

void write_axis_slice_csv(const std::filesystem::path& path, const SpectralField& u, int axis) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.dim) throw ParameterError("slice axis out of range");
  std::ofstream os(path);
  if (!os) throw Error("cannot open slice CSV for writing: " + path.string());
  os << "x,re,im,abs\n";
  int idx[8];
  for (int d = 0; d < g.dim; ++d) idx[d] = g.n / 2;  // nearest row to the axis
  for (int j = 0; j < g.n; ++j) {
    idx[axis] = j;
    const cplx z = u[flat_index(g, idx)];
    os << format_double(g.coord(j)) << ',' << format_double(z.real()) << ','
       << format_double(z.imag()) << ',' << format_double(std::abs(z)) << '\n';
  }
}

}  // namespace choquard
