#pragma once

#include "nbody/model.hpp"
#include "nbody/params.hpp"
#include "nbody/sampler.hpp"

#include <span>
#include <vector>

namespace nbody {

struct ForceResult {
    std::vector<Vec3> forces;
    double potential = 0.0;
    double min_distance = 0.0;
};

/// Pairwise forces F_i = -∂V/∂x_i and total potential energy. Throws
/// CollisionError (tagged with `time`) when a pair is closer than
/// spec.collision_threshold.
ForceResult forces(const PotentialSpec& spec, std::span<const double> masses,
                   std::span<const Vec3> positions, double time = 0.0);

double potential_energy(const PotentialSpec& spec, std::span<const double> masses,
                        std::span<const Vec3> positions);

struct Observables {
    Vec3 J = Vec3::Zero();
    Mat3 I = Mat3::Zero();
    Mat3 Q = Mat3::Zero();
    double E = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    Vec3 P = Vec3::Zero();
    Vec3 com = Vec3::Zero();
};

/// J = Σ m x × v, I = Σ m (|x|² 𝟙 - x xᵀ), Q = Σ m (3 x xᵀ - |x|² 𝟙),
/// E = K + V. A body at the origin contributes nothing to I and Q.
Observables observables(std::span<const double> masses, std::span<const Vec3> positions,
                        std::span<const Vec3> velocities, const PotentialSpec& spec = {});

/// Max absolute entry of a tensor.
double max_abs(const Mat3& m);

/// Eigenvalue spread of a symmetric tensor relative to its mean eigenvalue.
double relative_eigen_spread(const Mat3& m);

struct ResidualReport {
    /// max over bodies, samples and coordinates of |m ẍ - F|
    double max = 0.0;
    std::size_t worst_body = 0;
    double worst_time = 0.0;
    /// spectrum[k]: largest amplitude of harmonic k of m ẍ - F over bodies
    /// and coordinates, k = 0 … N/2.
    std::vector<double> spectrum;
};

/// Equation-of-motion violation of the Fourier trajectory on the grid nodes.
/// Any N works here; the oversampling rule only matters for integration.
ResidualReport residual(const OrbitModel& model, std::span<const double> full,
                        const QuadratureGrid& grid);
ResidualReport residual(const OrbitModel& model, const ReducedParams& params,
                        const QuadratureGrid& grid);

} // namespace nbody
