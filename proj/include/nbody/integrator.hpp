#pragma once

#include "nbody/dynamics.hpp"
#include "nbody/model.hpp"
#include "nbody/params.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nbody {

struct PhaseState {
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    double t = 0.0;

    std::size_t size() const { return positions.size(); }
    bool finite() const;
};

struct TrajectorySample {
    PhaseState state;
    double E = 0.0;
    Vec3 J = Vec3::Zero();
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    PhaseState final_state;
    std::size_t steps = 0;
    double dt = 0.0;
};

/// Default step 2π · 1e-4.
inline constexpr double kDefaultStep = kTwoPi * 1e-4;

/// Fixed-step classical Runge-Kutta. The step is shrunk to horizon / n with
/// n = ceil(horizon / dt) so the last step lands on the horizon exactly.
/// A sample (with E and J) is stored every `stride` steps and at both ends;
/// stride 0 keeps only the ends. Throws CollisionError on close approach and
/// Error on a non-finite state.
Trajectory integrate(const PhaseState& initial, std::span<const double> masses,
                     const PotentialSpec& potential, double dt, double horizon,
                     std::size_t stride = 0);

/// Positions and velocities of every body at t = 0 from the Fourier orbit.
PhaseState extract_ics(const OrbitModel& model, const ReducedParams& params);
PhaseState state_at(const OrbitModel& model, std::span<const double> full, double t);

/// Max-norm phase-space mismatch between the state after one integrated
/// period and the initial state.
double return_error(const OrbitModel& model, const ReducedParams& params, double dt = kDefaultStep);

/// Distance between a configuration and the Fourier orbit modulo the
/// orbit's continuous symmetries: time shift, rigid rotation, and drift of
/// the center of mass. Returns the largest body distance after the best
/// mass-weighted alignment over a phase grid refined by golden-section search.
class ShapeComparator {
public:
    ShapeComparator(const OrbitModel& model, const ReducedParams& params,
                    std::size_t phase_samples = 256);

    struct Match {
        double distance = 0.0;
        double phase = 0.0;
    };
    Match compare(std::span<const Vec3> positions) const;

private:
    std::vector<Vec3> centered(std::span<const Vec3> positions) const;
    std::vector<Vec3> reference_at(double phase) const;
    double rms_after_alignment(const std::vector<Vec3>& reference, const std::vector<Vec3>& sample,
                               double* max_distance) const;

    const OrbitModel* model_;
    std::vector<double> full_;
    std::vector<double> masses_;
    std::vector<double> phases_;
    std::vector<std::vector<Vec3>> references_;
};

struct PerturbationReport {
    std::vector<Vec3> deviation;
    double horizon_periods = 0.0;
    /// Shape deviation (see ShapeComparator), the quantity tested against the envelope.
    double max_deviation = 0.0;
    /// Raw |x_perturbed(t) - x_fourier(t)| at matching times; grows with phase
    /// drift and precession even for a stable orbit.
    double max_matching_deviation = 0.0;
    double envelope = 0.0;
    bool bounded = true;
    std::optional<double> exit_time;
    std::string exit_reason;
    double z_extent = 0.0;
    /// Sampled body positions for plotting, one configuration per sample.
    std::vector<double> sample_times;
    std::vector<std::vector<Vec3>> section_points;
};

struct PerturbationOptions {
    double dt = kDefaultStep;
    std::size_t samples_per_period = 20;
    std::size_t phase_samples = 256;
    bool stop_on_exit = true;
};

/// Integrates the Fourier orbit's initial state with `deviation` added to the
/// positions (missing bodies get none) for n_periods and tracks the shape
/// deviation. The verdict is `bounded` while it stays below `envelope`;
/// collisions count as leaving the envelope.
PerturbationReport perturb_and_track(const OrbitModel& model, const ReducedParams& params,
                                     const std::vector<Vec3>& deviation, double n_periods,
                                     double envelope, const PerturbationOptions& options = {});

/// Writes `t, x,y,z,vx,vy,vz per body, E, Jx, Jy, Jz` rows with a header line.
void write_trajectory(std::ostream& os, const std::vector<TrajectorySample>& samples);

} // namespace nbody
