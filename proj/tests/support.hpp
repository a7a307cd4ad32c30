#pragma once

#include "nbody/descent.hpp"
#include "nbody/families.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <random>

namespace nbody::testing {

/// Reference cubic coefficients for m = 1, a_1 normalized to one.
inline const std::map<int, double> kTable1M1{{1, 1.0}, {3, 0.03282}, {5, -0.00098}, {7, -0.00036}, {9, -0.00003}};

/// Reference cubic coefficients by m.
inline const std::map<int, std::map<int, double>> kTable1{
    {1, kTable1M1},
    {3, {{1, 1.0}, {3, -0.04629}, {5, -0.00472}, {7, -0.00269}, {9, 0.00056}, {11, 0.00010}, {13, 0.00007},
         {15, -0.00002}}},
    {5, {{1, 1.0}, {3, -0.03991}, {5, 0.00359}, {7, 0.00161}, {9, -0.00168}, {11, -0.00043}, {13, -0.00028},
         {15, 0.00012}, {17, 0.00001}, {19, 0.00001}}},
    {7, {{1, 1.0}, {3, -0.03335}, {5, 0.00885}, {7, 0.00445}, {9, -0.00334}, {11, -0.00039}, {13, -0.00028},
         {15, -0.00013}, {17, -0.00011}, {19, -0.00008}, {21, -0.00005}}},
};

/// Reference criss-cross coefficients for k = 1, 3, ..., 15: a_{1,k}, b_{1,k}, a_{3,k}.
inline const std::map<int, std::array<double, 3>> kTable3{
    {1, {1.09764, 0.10896, -0.98868}},  {3, {-0.02809, 0.03251, -0.00442}},
    {5, {0.00724, -0.00376, -0.01100}}, {7, {-0.00121, 0.00131, -0.00010}},
    {9, {0.00040, -0.00029, -0.00069}}, {11, {-0.00010, 0.00010, -0.00001}},
    {13, {0.00003, -0.00003, -0.00006}}, {15, {-0.00001, 0.00001, 0.00000}},
};

/// Two equal unit masses on opposite phases of one vector generator:
/// x = Σ a_k cos kt, y = Σ b_k sin kt (odd k), seeded on a circle of `radius`.
inline FamilySetup two_body_circle(double radius, int k_max = 9, PotentialSpec potential = {})
{
    OrbitModel model;
    model.k_max = k_max;
    model.potential = potential;
    Generator g;
    g.kind = GeneratorKind::vector;
    g.series_parity = {Parity::odd_only, Parity::odd_only, Parity::odd_only};
    model.generators.push_back(g);
    model.bodies.push_back({0, OrthTransform{}, 0.0, 1.0});
    model.bodies.push_back({0, OrthTransform{}, kPi, 1.0});
    model.symmetries.push_back({OrthTransform::diagonal(-1, -1, 1), 1, kPi, "exchange"});
    model.validate();

    std::vector<CoefficientKey> slots;
    for (int k = 1; k <= k_max; k += 2) {
        slots.push_back({0, 0, k, Basis::cos});
        slots.push_back({0, 1, k, Basis::sin});
    }
    auto layout = std::make_shared<const ParamLayout>(model, slots);
    ReducedParams params{std::vector<double>(layout->size(), 0.0), layout};
    params.values[0] = radius;
    params.values[1] = radius;
    return {model, params};
}

/// One free unit mass whose three coordinates are independent full series.
inline FamilySetup single_body(int k_max = 5, double G = 0.0)
{
    OrbitModel model;
    model.k_max = k_max;
    model.potential.G = G;
    Generator g;
    g.kind = GeneratorKind::vector;
    g.series_parity = {Parity::all, Parity::all, Parity::all};
    model.generators.push_back(g);
    model.bodies.push_back({0, OrthTransform{}, 0.0, 1.0});
    model.validate();
    auto layout = std::make_shared<const ParamLayout>(free_layout(model));
    return {model, ReducedParams{std::vector<double>(layout->size(), 0.0), layout}};
}

inline const double kTwoBodyRadius = std::pow(2.0, -2.0 / 3.0);

/// Adds N(0, sigma / k²) noise to every slot.
inline ReducedParams jitter(const ReducedParams& params, double sigma, std::mt19937& rng)
{
    std::normal_distribution<double> noise(0.0, sigma);
    ReducedParams out = params;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const int k = std::max(1, out.layout->slot(i).k);
        out.values[i] += noise(rng) / (k * k);
    }
    return out;
}

inline RunResult converge(const FamilySetup& setup, double grad_tol = 1e-10)
{
    StopCriteria stop;
    stop.grad_tol = grad_tol;
    return run(setup.model, setup.params, DescentSchedule::preconditioned(default_delta(setup.model.potential.alpha)),
               stop);
}

/// Converged cubic orbit at the default truncation, computed once per m.
inline const FamilySetup& converged_cubic(int m)
{
    static std::map<int, FamilySetup> cache;
    auto it = cache.find(m);
    if (it == cache.end()) {
        FamilySetup setup = build_cubic_family(m);
        setup.params = converge(setup).params;
        it = cache.emplace(m, std::move(setup)).first;
    }
    return it->second;
}

inline const FamilySetup& converged_crisscross()
{
    static const FamilySetup setup = [] {
        FamilySetup s = build_crisscross();
        s.params = converge(s).params;
        return s;
    }();
    return setup;
}

} // namespace nbody::testing
