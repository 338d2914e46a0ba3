#ifndef CHOQUARD_IO_HPP
#define CHOQUARD_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "choquard/diagnostics.hpp"

namespace choquard {

// Flat binary field layout: magic "CHQF", version byte, dim, n, L, offset,
// delta, then interleaved re/im doubles in row-major axis order.
void write_field(const std::filesystem::path& path, const SpectralField& u, double delta = 0.0);
SpectralField read_field(const std::filesystem::path& path, double* delta_out = nullptr);

// One report row; frozen column order
// t,mass,energy,hb_norm_sq,kinetic,potential_term,nonlocal_term.
void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, double t, const FunctionalReport& r);

// Trajectory CSV: the report columns followed by
// variance,momentum_virial,virial_rhs,dichotomy_ratio,tail_fraction.
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj);
TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path);

// (r, |u| averaged over spheres) rows.
void write_radial_profile_csv(const std::filesystem::path& path, const SpectralField& u);

// Axis-aligned slice through the box center: x, re, im, |u|.
void write_axis_slice_csv(const std::filesystem::path& path, const SpectralField& u, int axis);

}  // namespace choquard

#endif
