#include "nbody/descent.hpp"

#include "nbody/dynamics.hpp"
#include "nbody/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nbody {

DescentSchedule DescentSchedule::uniform(double step)
{
    DescentSchedule s;
    s.rule = Rule::uniform;
    s.delta = step;
    return s;
}

DescentSchedule DescentSchedule::preconditioned(double delta)
{
    DescentSchedule s;
    s.rule = Rule::preconditioned;
    s.delta = delta;
    return s;
}

DescentSchedule DescentSchedule::custom(std::map<int, double> table)
{
    DescentSchedule s;
    s.rule = Rule::custom;
    s.per_k = std::move(table);
    return s;
}

std::vector<double> DescentSchedule::step_sizes(const ParamLayout& layout) const
{
    std::vector<double> out(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const int k = layout.slot(i).k;
        switch (rule) {
        case Rule::uniform:
            out[i] = delta;
            break;
        case Rule::preconditioned: {
            const double kk = std::max(k, 1);
            const double inertia = layout.slot_inertia(i);
            out[i] = inertia > 0.0 ? delta / (inertia * kk * kk) : 0.0;
            break;
        }
        case Rule::custom: {
            const auto it = per_k.find(k);
            if (it == per_k.end())
                throw std::invalid_argument("custom descent schedule has no step for k = " +
                                            std::to_string(k));
            out[i] = it->second;
            break;
        }
        }
    }
    if (std::all_of(out.begin(), out.end(), [](double v) { return v == 0.0; }))
        throw std::invalid_argument("descent schedule has no nonzero step");
    return out;
}

double stability_bound(const DescentSchedule& schedule, int k_max, double mass)
{
    switch (schedule.rule) {
    case DescentSchedule::Rule::preconditioned:
        return 2.0 / kPi;
    case DescentSchedule::Rule::uniform:
    case DescentSchedule::Rule::custom:
        break;
    }
    return 2.0 / (kPi * mass * static_cast<double>(k_max) * k_max);
}

double scaling_mode_bound(double alpha)
{
    if (!(alpha < 2.0))
        throw std::invalid_argument("scaling bound needs alpha < 2");
    return 2.0 / (kPi * (2.0 - alpha));
}

double default_delta(double alpha)
{
    return 0.7 * scaling_mode_bound(alpha);
}

const char* to_string(Outcome outcome)
{
    switch (outcome) {
    case Outcome::converged: return "converged";
    case Outcome::collision: return "collision";
    case Outcome::escape: return "escape";
    case Outcome::max_iters: return "max_iters";
    }
    return "unknown";
}

bool RunResult::is_orbit(double residual_tol) const
{
    return outcome == Outcome::converged && residual && *residual <= residual_tol;
}

ReducedParams step(const ReducedParams& params, std::span<const double> gradient,
                   const DescentSchedule& schedule)
{
    if (!params.layout || gradient.size() != params.values.size())
        throw LayoutError("step: gradient does not match the parameters");
    const std::vector<double> tau = schedule.step_sizes(*params.layout);
    ReducedParams out = params;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] -= tau[i] * gradient[i];
    return out;
}

RunResult run(const OrbitModel& model, const ReducedParams& initial, const DescentSchedule& schedule,
              const StopCriteria& stop, const IterationObserver& observer)
{
    initial.check(model);
    const QuadratureGrid grid = stop.quadrature_nodes ? QuadratureGrid{stop.quadrature_nodes}
                                                      : QuadratureGrid::for_k_max(model.k_max);
    const ActionEvaluator evaluator(model, grid);
    const std::vector<double> tau = schedule.step_sizes(*initial.layout);

    RunResult result;
    result.params = initial;
    for (std::size_t it = 0;; ++it) {
        ActionReport report;
        try {
            report = evaluator.evaluate(result.params, true);
        } catch (const CollisionError& e) {
            result.outcome = Outcome::collision;
            result.collision_a = e.body_a();
            result.collision_b = e.body_b();
            result.collision_time = e.time();
            result.iterations = it;
            return result;
        }
        result.action_trace.push_back(report.S);
        result.grad_norm = report.grad_norm;
        result.iterations = it;
        if (observer)
            observer(it, result.params, report);

        if (!std::isfinite(report.S) || !std::isfinite(report.grad_norm) ||
            report.max_radius > stop.escape_radius) {
            result.outcome = Outcome::escape;
            result.escape_body = report.farthest_body;
            return result;
        }
        if (stop.log && stop.log_interval && it % stop.log_interval == 0) {
            *stop.log << "iter " << it << "  S " << report.S << "  grad " << report.grad_norm
                      << "  min_dist " << report.min_distance << '\n';
        }
        if (report.grad_norm <= stop.grad_tol) {
            result.outcome = Outcome::converged;
            break;
        }
        if (it >= stop.max_iters) {
            result.outcome = Outcome::max_iters;
            break;
        }
        for (std::size_t i = 0; i < tau.size(); ++i)
            result.params.values[i] -= tau[i] * report.gradient[i];
    }

    const QuadratureGrid fine{stop.residual_nodes ? stop.residual_nodes : 4 * grid.N};
    try {
        result.residual = residual(model, result.params, fine).max;
    } catch (const CollisionError&) {
        result.residual.reset();
    }
    return result;
}

double naive_step_bound(std::size_t nodes, double mass)
{
    const double h = kTwoPi / static_cast<double>(nodes);
    return h * h / (2.0 * mass);
}

double nyquist_amplitude(const SampledPaths& paths)
{
    double amp = 0.0;
    for (std::size_t b = 0; b < paths.bodies; ++b) {
        Vec3 acc = Vec3::Zero();
        for (std::size_t j = 0; j < paths.nodes; ++j)
            acc += (j % 2 == 0 ? 1.0 : -1.0) * paths.at(b, j);
        amp = std::max(amp, acc.cwiseAbs().maxCoeff() / static_cast<double>(paths.nodes));
    }
    return amp;
}

NaiveDescentResult naive_time_descent(const SampledPaths& paths, std::span<const double> masses,
                                      const PotentialSpec& potential, double step,
                                      std::size_t iterations)
{
    if (paths.nodes < 3 || paths.nodes % 2 != 0)
        throw std::invalid_argument("naive descent needs an even number of nodes >= 4");
    if (masses.size() != paths.bodies || paths.x.size() != paths.bodies * paths.nodes)
        throw std::invalid_argument("naive descent: paths and masses disagree");

    NaiveDescentResult result;
    result.paths = paths;
    result.nyquist_trace.push_back(nyquist_amplitude(paths));

    const std::size_t n = paths.nodes;
    const double h = kTwoPi / static_cast<double>(n);
    const double inv_h2 = 1.0 / (h * h);
    std::vector<Vec3> config(paths.bodies);
    std::vector<Vec3> update(paths.x.size());

    for (std::size_t it = 0; it < iterations; ++it) {
        SampledPaths& p = result.paths;
        bool finite = true;
        for (std::size_t j = 0; j < n && finite; ++j) {
            for (std::size_t b = 0; b < p.bodies; ++b)
                config[b] = p.at(b, j);
            ForceResult f;
            try {
                f = forces(potential, masses, config, h * static_cast<double>(j));
            } catch (const CollisionError&) {
                finite = false;
                break;
            }
            for (std::size_t b = 0; b < p.bodies; ++b) {
                const Vec3 d2 = (p.at(b, (j + 1) % n) - 2.0 * p.at(b, j) + p.at(b, (j + n - 1) % n)) * inv_h2;
                update[b * n + j] = step * (masses[b] * d2 - f.forces[b]);
            }
        }
        if (!finite) {
            result.unstable = true;
            break;
        }
        for (std::size_t i = 0; i < p.x.size(); ++i)
            p.x[i] += update[i];
        const double amp = nyquist_amplitude(p);
        result.nyquist_trace.push_back(amp);
        if (!std::isfinite(amp)) {
            result.unstable = true;
            break;
        }
    }
    const double first = result.nyquist_trace.front();
    const double last = result.nyquist_trace.back();
    result.growth_ratio = first > 0.0 ? last / first : (last > 0.0 ? INFINITY : 1.0);
    result.unstable = result.unstable || result.growth_ratio > 1.0;
    return result;
}

} // namespace nbody
