#pragma once

#include "nbody/model.hpp"
#include "nbody/params.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nbody {

/// N uniform nodes t_j = 2πj/N on [0, 2π), each with weight 2π/N.
/// The trapezoidal rule integrates trigonometric polynomials of degree < N
/// exactly, so products of two degree-k_max series need N > 2 k_max.
struct QuadratureGrid {
    std::size_t N = 0;

    /// Default oversampling: N = 4 k_max + 4.
    static QuadratureGrid for_k_max(int k_max);

    double weight() const;
    double node(std::size_t j) const;
    std::vector<double> nodes() const;

    /// Throws std::invalid_argument unless N >= 4 k_max + 2.
    void check_oversampling(int k_max) const;
};

/// Body states at a list of sample times, stored body-major.
struct SampledTrajectory {
    std::size_t bodies = 0;
    std::vector<double> times;
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;    // empty unless requested
    std::vector<Vec3> accelerations; // empty unless requested

    std::size_t nodes() const { return times.size(); }
    const Vec3& position(std::size_t body, std::size_t node) const
    {
        return positions[body * times.size() + node];
    }
    const Vec3& velocity(std::size_t body, std::size_t node) const
    {
        return velocities[body * times.size() + node];
    }
    const Vec3& acceleration(std::size_t body, std::size_t node) const
    {
        return accelerations[body * times.size() + node];
    }
    /// Positions of all bodies at one sample.
    std::vector<Vec3> configuration(std::size_t node) const;
    /// Velocities of all bodies at one sample.
    std::vector<Vec3> velocity_configuration(std::size_t node) const;
};

/// Evaluates every body of a model at fixed sample times. Trigonometric
/// tables are built once per distinct time shift (body phase plus
/// coordinate phase), so repeated evaluation costs one multiply-add per
/// coefficient and sample.
class TrajectorySampler {
public:
    TrajectorySampler(const OrbitModel& model, std::vector<double> times);

    const std::vector<double>& times() const { return times_; }
    const OrbitModel& model() const { return *model_; }

    /// derivatives: 0 positions only, 1 adds velocities, 2 adds accelerations.
    SampledTrajectory sample(std::span<const double> full, int derivatives = 0) const;

    /// Adds Σ_b Σ_j weight · load_b(t_j) · ∂x_b(t_j)/∂c to gradient[c] for every
    /// full coefficient c. `load` is body-major like SampledTrajectory.
    void accumulate_adjoint(std::span<const Vec3> load, double weight,
                            std::span<double> gradient) const;

private:
    struct Table {
        std::vector<double> sin; // [node * (k_max + 1) + k]
        std::vector<double> cos;
    };
    std::size_t table_for(double shift);

    const OrbitModel* model_;
    std::vector<double> times_;
    std::vector<double> shifts_;
    std::vector<Table> tables_;
    std::vector<std::array<std::size_t, 3>> body_table_;  // per body and coordinate
    std::vector<std::array<std::size_t, 3>> body_offset_; // full index of sin k=0 per coordinate
    std::size_t stride_ = 0;
};

SampledTrajectory sample_positions(const OrbitModel& model, const ReducedParams& params,
                                   const QuadratureGrid& grid, int derivatives = 0);

SampledTrajectory sample_at(const OrbitModel& model, std::span<const double> full,
                            const std::vector<double>& times, int derivatives = 0);

} // namespace nbody
