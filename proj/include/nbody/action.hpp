#pragma once

#include "nbody/dynamics.hpp"
#include "nbody/model.hpp"
#include "nbody/params.hpp"
#include "nbody/sampler.hpp"

#include <span>
#include <vector>

namespace nbody {

struct ActionReport {
    double S = 0.0;
    double K_integral = 0.0;
    double V_integral = 0.0;
    /// Reduced gradient; empty when only the action was requested.
    std::vector<double> gradient;
    double grad_norm = 0.0;
    /// Diagnostics gathered on the grid.
    double min_distance = 0.0;
    double max_radius = 0.0;
    std::size_t farthest_body = 0;
};

/// Action S = ∫(K - V) dt over one period and its gradient with respect to
/// the reduced coefficients, on a fixed trapezoidal grid. The gradient of a
/// full coefficient c of harmonic k is
///
///     ∂S/∂c = π · inertia(c) · k² · c + ∫ F · ∂x/∂c dt,
///
/// i.e. the projection of -(m ẍ - F) onto the basis function of c, whose
/// zeros are the Fourier-projected equations of motion.
class ActionEvaluator {
public:
    /// The model must outlive the evaluator. Throws if the grid is too coarse.
    ActionEvaluator(const OrbitModel& model, QuadratureGrid grid);

    const OrbitModel& model() const { return *model_; }
    const QuadratureGrid& grid() const { return grid_; }
    const TrajectorySampler& sampler() const { return sampler_; }

    /// Throws CollisionError when two bodies meet on the grid.
    ActionReport evaluate(const ReducedParams& params, bool with_gradient) const;

    /// Full-coefficient gradient (before projection onto reduced slots).
    std::vector<double> full_gradient(std::span<const double> full) const;

private:
    ActionReport evaluate_full(std::span<const double> full, std::vector<double>* full_grad) const;

    const OrbitModel* model_;
    QuadratureGrid grid_;
    TrajectorySampler sampler_;
    std::vector<double> masses_;
    std::vector<double> kinetic_scale_; // π · inertia · k² per full coefficient
};

ActionReport action(const OrbitModel& model, const ReducedParams& params, const QuadratureGrid& grid);

std::vector<double> gradient(const OrbitModel& model, const ReducedParams& params,
                             const QuadratureGrid& grid);

/// Central differences (S(p + h e_j) - S(p - h e_j)) / 2h for every slot.
/// Throws std::invalid_argument for h <= 0.
std::vector<double> fd_gradient_oracle(const OrbitModel& model, const ReducedParams& params,
                                       const QuadratureGrid& grid, double h = 1e-6);

double inf_norm(std::span<const double> v);

} // namespace nbody
