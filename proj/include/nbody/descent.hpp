#pragma once

#include "nbody/action.hpp"
#include "nbody/model.hpp"
#include "nbody/params.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace nbody {

/// Per-slot step sizes δτ for the update δa = -δτ ∂S/∂a.
struct DescentSchedule {
    enum class Rule {
        /// δτ_k = δ for every slot (plain gradient descent).
        uniform,
        /// δτ_k = δ / (M k²), M the slot's kinetic inertia.
        preconditioned,
        /// δτ_k read from a per-harmonic table; entries may be negative.
        custom,
    };

    Rule rule = Rule::preconditioned;
    double delta = 0.0;
    std::map<int, double> per_k;

    static DescentSchedule uniform(double step);
    static DescentSchedule preconditioned(double delta);
    static DescentSchedule custom(std::map<int, double> table);

    /// Throws std::invalid_argument if a custom table misses a free harmonic
    /// or if every step is zero.
    std::vector<double> step_sizes(const ParamLayout& layout) const;
};

/// Kinetic-limit bound on the step: uniform δτ < 2/(π M k_max²),
/// preconditioned δ < 2/π. Custom schedules return the largest |δτ_k| allowed
/// for uniform steps.
double stability_bound(const DescentSchedule& schedule, int k_max, double mass);

/// Along the homogeneous-scaling direction the action curvature is (2 - α)
/// times its kinetic part, which tightens the preconditioned bound to
/// δ < 2 / (π (2 - α)).
double scaling_mode_bound(double alpha);

/// 0.7 × scaling_mode_bound(alpha).
double default_delta(double alpha);

struct StopCriteria {
    double grad_tol = 1e-10;
    std::size_t max_iters = 200000;
    double escape_radius = 50.0;
    /// Quadrature nodes for the action (0: 4 k_max + 4).
    std::size_t quadrature_nodes = 0;
    /// Nodes for the final residual check (0: 4 × quadrature nodes).
    std::size_t residual_nodes = 0;
    /// Progress lines every log_interval iterations (0: off).
    std::size_t log_interval = 0;
    std::ostream* log = nullptr;
};

enum class Outcome { converged, collision, escape, max_iters };

const char* to_string(Outcome outcome);

struct RunResult {
    Outcome outcome = Outcome::max_iters;
    ReducedParams params;
    std::size_t iterations = 0;
    std::vector<double> action_trace;
    double grad_norm = 0.0;
    std::optional<double> residual;

    // collision details
    std::size_t collision_a = 0;
    std::size_t collision_b = 0;
    double collision_time = 0.0;
    // escape details
    std::size_t escape_body = 0;

    /// Converged and certified by the equation-of-motion residual.
    bool is_orbit(double residual_tol = 1e-5) const;
};

/// a <- a - δτ ∘ ∂S/∂a, slot by slot.
ReducedParams step(const ReducedParams& params, std::span<const double> gradient,
                   const DescentSchedule& schedule);

/// Called once per iteration with the parameters and their action report,
/// before the stopping tests.
using IterationObserver =
    std::function<void(std::size_t iteration, const ReducedParams& params, const ActionReport& report)>;

/// Iterates `step` until the gradient vanishes, two bodies collide on the
/// grid, a body leaves escape_radius, or max_iters is reached. Collisions
/// and escapes are reported in the outcome, never thrown.
RunResult run(const OrbitModel& model, const ReducedParams& initial, const DescentSchedule& schedule,
              const StopCriteria& stop = {}, const IterationObserver& observer = {});

/// Positions of every body on a uniform time grid, body-major.
struct SampledPaths {
    std::size_t bodies = 0;
    std::size_t nodes = 0;
    std::vector<Vec3> x;

    Vec3& at(std::size_t body, std::size_t node) { return x[body * nodes + node]; }
    const Vec3& at(std::size_t body, std::size_t node) const { return x[body * nodes + node]; }
};

struct NaiveDescentResult {
    SampledPaths paths;
    /// Amplitude of the alternating (-1)^j mode, before and after each iteration.
    std::vector<double> nyquist_trace;
    double growth_ratio = 1.0;
    bool unstable = false;
};

/// Position-space descent  x <- x + δτ (m D²x - F)  with the three-point
/// second difference D²x_j = (x_{j+1} - 2x_j + x_{j-1}) / h². Divergence is
/// reported, not thrown.
NaiveDescentResult naive_time_descent(const SampledPaths& paths, std::span<const double> masses,
                                      const PotentialSpec& potential, double step,
                                      std::size_t iterations);

/// Largest stable δτ for the alternating mode: h² / (2 m), h = 2π / nodes.
double naive_step_bound(std::size_t nodes, double mass);

double nyquist_amplitude(const SampledPaths& paths);

} // namespace nbody
