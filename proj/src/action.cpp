#include "nbody/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbody {

ActionEvaluator::ActionEvaluator(const OrbitModel& model, QuadratureGrid grid)
    : model_(&model), grid_(grid), sampler_(model, grid.nodes()), masses_(model.masses())
{
    grid_.check_oversampling(model.k_max);
    kinetic_scale_.assign(model.coefficient_count(), 0.0);
    for (std::size_t i = 0; i < kinetic_scale_.size(); ++i) {
        const CoefficientKey key = model.coefficient_key(i);
        const double k = key.k;
        kinetic_scale_[i] = kPi * model.coefficient_inertia(key.generator, key.series) * k * k;
    }
}

ActionReport ActionEvaluator::evaluate_full(std::span<const double> full,
                                            std::vector<double>* full_grad) const
{
    const OrbitModel& model = *model_;
    const std::size_t n_nodes = grid_.N;
    const std::size_t n_bodies = model.bodies.size();
    const double w = grid_.weight();

    const SampledTrajectory traj = sampler_.sample(full, 1);
    ActionReport report;
    report.min_distance = std::numeric_limits<double>::infinity();

    std::vector<Vec3> load;
    if (full_grad)
        load.resize(n_bodies * n_nodes);

    for (std::size_t j = 0; j < n_nodes; ++j) {
        const auto config = traj.configuration(j);
        const ForceResult f = forces(model.potential, masses_, config, traj.times[j]);
        report.V_integral += w * f.potential;
        report.min_distance = std::min(report.min_distance, f.min_distance);
        for (std::size_t b = 0; b < n_bodies; ++b) {
            report.K_integral += w * 0.5 * masses_[b] * traj.velocity(b, j).squaredNorm();
            const double r = config[b].norm();
            if (r > report.max_radius) {
                report.max_radius = r;
                report.farthest_body = b;
            }
            if (full_grad)
                load[b * n_nodes + j] = f.forces[b];
        }
    }
    report.S = report.K_integral - report.V_integral;

    if (full_grad) {
        full_grad->assign(full.size(), 0.0);
        for (std::size_t i = 0; i < full.size(); ++i)
            (*full_grad)[i] = kinetic_scale_[i] * full[i];
        sampler_.accumulate_adjoint(load, w, *full_grad);
    }
    return report;
}

ActionReport ActionEvaluator::evaluate(const ReducedParams& params, bool with_gradient) const
{
    params.check(*model_);
    const std::vector<double> full = params.expand();
    if (!with_gradient)
        return evaluate_full(full, nullptr);
    std::vector<double> g;
    ActionReport report = evaluate_full(full, &g);
    report.gradient = params.layout->project(g);
    report.grad_norm = inf_norm(report.gradient);
    return report;
}

std::vector<double> ActionEvaluator::full_gradient(std::span<const double> full) const
{
    std::vector<double> g;
    evaluate_full(full, &g);
    return g;
}

ActionReport action(const OrbitModel& model, const ReducedParams& params, const QuadratureGrid& grid)
{
    return ActionEvaluator(model, grid).evaluate(params, false);
}

std::vector<double> gradient(const OrbitModel& model, const ReducedParams& params,
                             const QuadratureGrid& grid)
{
    return ActionEvaluator(model, grid).evaluate(params, true).gradient;
}

std::vector<double> fd_gradient_oracle(const OrbitModel& model, const ReducedParams& params,
                                       const QuadratureGrid& grid, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("finite-difference step must be positive");
    const ActionEvaluator evaluator(model, grid);
    std::vector<double> out(params.values.size());
    ReducedParams probe = params;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = params.values[i];
        probe.values[i] = v + h;
        const double plus = evaluator.evaluate(probe, false).S;
        probe.values[i] = v - h;
        const double minus = evaluator.evaluate(probe, false).S;
        probe.values[i] = v;
        out[i] = (plus - minus) / (2.0 * h);
    }
    return out;
}

double inf_norm(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace nbody
