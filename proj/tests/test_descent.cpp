#include "nbody/action.hpp"
#include "nbody/descent.hpp"
#include "nbody/errors.hpp"
#include "nbody/families.hpp"
#include "nbody/sampler.hpp"
#include "nbody/symmetry_check.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace nbody;
using doctest::Approx;

namespace {

/// Two-body circle sampled on `nodes` points with a small zig-zag added.
SampledPaths zigzag_seed(std::size_t nodes, double zigzag)
{
    SampledPaths p;
    p.bodies = 2;
    p.nodes = nodes;
    p.x.resize(2 * nodes);
    const double r = testing::kTwoBodyRadius;
    for (std::size_t j = 0; j < nodes; ++j) {
        const double t = kTwoPi * j / nodes;
        const double z = (j % 2 == 0 ? 1.0 : -1.0) * zigzag;
        p.at(0, j) = Vec3(r * std::cos(t) + z, r * std::sin(t), 0.0);
        p.at(1, j) = Vec3(-r * std::cos(t) - z, -r * std::sin(t), 0.0);
    }
    return p;
}

} // namespace

TEST_CASE("step examples")
{
    const FamilySetup setup = build_cubic_family(1);
    const std::vector<double> zero(setup.params.values.size(), 0.0);
    CHECK(step(setup.params, zero, DescentSchedule::preconditioned(0.1)).values == setup.params.values);

    // kinetic only: uniform contraction a_k -> a_k (1 - δπ)
    std::mt19937 rng(1);
    for (const FamilySetup& kinetic : {build_cubic_family(1, 27, PotentialSpec{-1.0, 0.0}),
                                       build_crisscross({1, 1, 1}, 27, PotentialSpec{-1.0, 0.0}),
                                       build_crisscross({1, 2, 3}, 27, PotentialSpec{-1.0, 0.0})}) {
        const ReducedParams p = testing::jitter(kinetic.params, 0.2, rng);
        const auto g = gradient(kinetic.model, p, QuadratureGrid::for_k_max(27));
        const double delta = 0.1;
        const ReducedParams next = step(p, g, DescentSchedule::preconditioned(delta));
        for (std::size_t i = 0; i < p.values.size(); ++i)
            CHECK(next.values[i] == Approx(p.values[i] * (1 - delta * kPi)).epsilon(1e-12).scale(1e-15));
    }

    // negative entry ascends
    std::map<int, double> table;
    for (int k = 1; k <= 27; k += 2)
        table[k] = 0.01;
    table[1] = -0.01;
    const std::vector<double> ones(setup.params.values.size(), 1.0);
    const ReducedParams moved = step(setup.params, ones, DescentSchedule::custom(table));
    CHECK(moved.values[0] == Approx(1.01));
    CHECK(moved.values[1] == Approx(-0.01));

    table.erase(27);
    CHECK_THROWS_AS(DescentSchedule::custom(table).step_sizes(*setup.params.layout), std::invalid_argument);
    CHECK_THROWS_AS(DescentSchedule::uniform(0.0).step_sizes(*setup.params.layout), std::invalid_argument);
}

TEST_CASE("stability bounds")
{
    CHECK(stability_bound(DescentSchedule::uniform(1e-4), 27, 1.0) == Approx(2.0 / (kPi * 729)));
    CHECK(std::abs(stability_bound(DescentSchedule::uniform(1e-4), 27, 1.0) - 8.73e-4) <= 1e-6);
    CHECK(stability_bound(DescentSchedule::preconditioned(0.1), 27, 1.0) == Approx(2.0 / kPi));
    CHECK(stability_bound(DescentSchedule::preconditioned(0.1), 99, 3.0) == Approx(0.63662).epsilon(1e-5));
    CHECK(stability_bound(DescentSchedule::uniform(1e-4), 54, 1.0) ==
          Approx(stability_bound(DescentSchedule::uniform(1e-4), 27, 1.0) / 4));
    CHECK(scaling_mode_bound(-1.0) == Approx(2.0 / (3.0 * kPi)));
    CHECK(default_delta(-1.0) < scaling_mode_bound(-1.0));
}

TEST_CASE("preconditioned descent is unstable above the scaling-mode bound")
{
    const FamilySetup setup = build_cubic_family(1);
    StopCriteria stop;
    stop.max_iters = 5000;
    const RunResult below = run(setup.model, setup.params, DescentSchedule::preconditioned(0.97 * scaling_mode_bound(-1)), stop);
    CHECK(below.outcome == Outcome::converged);
    const RunResult above = run(setup.model, setup.params, DescentSchedule::preconditioned(1.05 * scaling_mode_bound(-1)), stop);
    CHECK(above.outcome != Outcome::converged);
}

TEST_CASE("run examples")
{
    const RunResult cubic = testing::converge(build_cubic_family(1));
    REQUIRE(cubic.outcome == Outcome::converged);
    CHECK(cubic.grad_norm <= 1e-10);
    CHECK(std::abs(cubic.params.values[1] / cubic.params.values[0] - 0.03282) <= 0.002);
    CHECK(cubic.is_orbit());

    const FamilySetup wide = testing::two_body_circle(1.1 * testing::kTwoBodyRadius);
    const RunResult two = testing::converge(wide);
    REQUIRE(two.outcome == Outcome::converged);
    CHECK(std::abs(two.params.values[0] - 0.62996) <= 1e-4);
    CHECK(std::abs(two.params.values[1] - 0.62996) <= 1e-4);

    const FamilySetup coincident = testing::two_body_circle(0.0);
    const RunResult collided = testing::converge(coincident);
    CHECK(collided.outcome == Outcome::collision);
    CHECK(collided.collision_a == 0);
    CHECK(collided.collision_b == 1);
    CHECK_FALSE(collided.is_orbit());
}

TEST_CASE("ascent everywhere escapes")
{
    const FamilySetup setup = build_cubic_family(1);
    std::map<int, double> table;
    for (int k = 1; k <= 27; k += 2)
        table[k] = -0.01 / (12.0 * k * k);
    const RunResult r = run(setup.model, setup.params, DescentSchedule::custom(table));
    CHECK(r.outcome == Outcome::escape);
    CHECK(r.iterations < 200000);
}

TEST_CASE("max_iters outcome")
{
    StopCriteria stop;
    stop.max_iters = 3;
    const RunResult r = run(build_crisscross().model, build_crisscross().params,
                            DescentSchedule::preconditioned(0.1), stop);
    CHECK(r.outcome == Outcome::max_iters);
    CHECK(r.iterations == 3);
    CHECK(r.grad_norm > stop.grad_tol);
    CHECK(r.action_trace.size() == r.iterations + 1);
}

TEST_CASE("progress log")
{
    std::ostringstream log;
    StopCriteria stop;
    stop.log_interval = 10;
    stop.log = &log;
    run(build_cubic_family(1).model, build_cubic_family(1).params, DescentSchedule::preconditioned(0.1), stop);
    const std::string text = log.str();
    CHECK(text.find("iter 10 ") != std::string::npos);
    CHECK(text.find("grad") != std::string::npos);
    CHECK(text.find("min_dist") != std::string::npos);
}

TEST_CASE("property: symmetry holds at every iteration")
{
    const QuadratureGrid grid = QuadratureGrid::for_k_max(27);
    for (const FamilySetup& setup : {build_cubic_family(1), build_cubic_family(3), build_crisscross()}) {
        double worst = 0.0;
        std::size_t checked = 0;
        run(setup.model, setup.params, DescentSchedule::preconditioned(default_delta(-1)), {},
            [&](std::size_t, const ReducedParams& p, const ActionReport&) {
                worst = std::max(worst, verify_symmetry(setup.model, p, grid, 1e-12).worst);
                ++checked;
            });
        CHECK(checked > 10);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("property: action is non-increasing at half the stability bound")
{
    for (const FamilySetup& setup : {build_cubic_family(1), build_cubic_family(3), build_crisscross(),
                                     build_crisscross({1, 2, 3}),
                                     testing::two_body_circle(1.1 * testing::kTwoBodyRadius)}) {
        const RunResult r = run(setup.model, setup.params, DescentSchedule::preconditioned(0.5 * scaling_mode_bound(-1)));
        CHECK(r.outcome == Outcome::converged);
        std::size_t violations = 0;
        for (std::size_t i = 1; i < r.action_trace.size(); ++i)
            if (r.action_trace[i] > r.action_trace[i - 1] + 1e-14 * std::abs(r.action_trace[i - 1]))
                ++violations;
        CHECK(violations == 0);
    }
}

TEST_CASE("property: runs are deterministic")
{
    const FamilySetup setup = build_crisscross({1, 2, 3});
    const RunResult a = testing::converge(setup);
    const RunResult b = testing::converge(setup);
    CHECK(a.params.values == b.params.values);
    CHECK(a.action_trace == b.action_trace);
    CHECK(a.iterations == b.iterations);
    CHECK(a.grad_norm == b.grad_norm);
    CHECK(a.residual == b.residual);
}

TEST_CASE("naive time descent shows the zig-zag instability above its bound")
{
    const std::size_t nodes = 64;
    const SampledPaths seed = zigzag_seed(nodes, 1e-6);
    const std::vector<double> masses{1.0, 1.0};
    const double bound = naive_step_bound(nodes, 1.0);
    CHECK(bound == Approx(std::pow(kTwoPi / nodes, 2) / 2));

    const NaiveDescentResult stable = naive_time_descent(seed, masses, {}, 0.8 * bound, 50);
    CHECK_FALSE(stable.unstable);
    CHECK(stable.growth_ratio < 1e-3);

    const NaiveDescentResult unstable = naive_time_descent(seed, masses, {}, 1.2 * bound, 30);
    CHECK(unstable.unstable);
    CHECK(unstable.growth_ratio > 1e3);
    // geometric growth while linear: |1 - 4 δτ / h²| = 1.4
    const auto& trace = unstable.nyquist_trace;
    const double ratio = trace[11] / trace[10];
    CHECK(ratio == Approx(1.4).epsilon(0.05));

    const NaiveDescentResult idle = naive_time_descent(seed, masses, {}, 1.2 * bound, 0);
    CHECK(idle.paths.x == seed.x);
    CHECK(idle.nyquist_trace.size() == 1);
}
