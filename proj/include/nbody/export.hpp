#pragma once

#include "nbody/record.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nbody {

/// Plain-text coefficient table, odd k per row, 5-decimal fixed point.
/// Cubic records give one column each, divided by their a_1 (scale rows at
/// the bottom carry the sign and size). A criss-cross record gives the three
/// columns a_{1,k}, b_{1,k}, a_{3,k} in physical units. Records of different
/// families cannot share a table.
std::string format_table(const std::vector<OrbitRecord>& records);

/// Fixed-point text with 5 decimals; values that round to zero print unsigned.
std::string format_coefficient(double value);

/// Observable time series on `samples` uniform times over one period:
/// t, E, Jx, Jy, Jz, Ixx, Iyy, Izz, Ixy, Ixz, Iyz, I_spread, Q_max.
void write_observables(std::ostream& os, const OrbitModel& model, const ReducedParams& params,
                       std::size_t samples);

/// Fourier trajectory sampled at `samples` uniform times per period over
/// `periods` periods, in the integrator's row format.
void write_fourier_trajectory(std::ostream& os, const OrbitModel& model, const ReducedParams& params,
                              std::size_t samples, double periods);

} // namespace nbody
