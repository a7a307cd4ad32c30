#pragma once

#include "nbody/model.hpp"
#include "nbody/params.hpp"
#include "nbody/sampler.hpp"

#include <span>
#include <string>
#include <vector>

namespace nbody {

struct SymmetryFailure {
    std::string label;
    double distance = 0.0;
    double time = 0.0;
};

struct SymmetryReport {
    bool passed = true;
    /// Largest set distance over all elements and nodes.
    double worst = 0.0;
    std::vector<SymmetryFailure> failures;
};

/// Set distance between two equally sized point sets: the smallest possible
/// maximum pair distance over matchings that pair equal masses only.
double set_distance(std::span<const Vec3> a, std::span<const Vec3> b, std::span<const double> masses);

/// Checks set(σ t + τ) = R · set(t) on the grid nodes for every symmetry
/// element of the model. One failure is reported per element (its worst node).
SymmetryReport verify_symmetry(const OrbitModel& model, std::span<const double> full,
                               const QuadratureGrid& grid, double tol = 1e-9);
SymmetryReport verify_symmetry(const OrbitModel& model, const ReducedParams& params,
                               const QuadratureGrid& grid, double tol = 1e-9);

} // namespace nbody
