#include "nbody/symmetry_check.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace nbody {

namespace {

bool same_mass(double a, double b) { return a == b; }

double greedy_distance(std::span<const Vec3> a, std::span<const Vec3> b, std::span<const double> masses)
{
    std::vector<bool> used(a.size(), false);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = a.size();
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (used[j] || !same_mass(masses[i], masses[j]))
                continue;
            const double d = (a[j] - b[i]).norm();
            if (d < best) {
                best = d;
                pick = j;
            }
        }
        if (pick == a.size())
            return std::numeric_limits<double>::infinity();
        used[pick] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

// Perfect matching using only pairs with distance <= limit (Kuhn's algorithm).
bool has_matching(const std::vector<std::vector<double>>& dist, double limit)
{
    const std::size_t n = dist.size();
    std::vector<std::size_t> owner(n, n);
    std::vector<bool> seen(n);
    std::function<bool(std::size_t)> augment = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (dist[i][j] > limit || seen[j])
                continue;
            seen[j] = true;
            if (owner[j] == n || augment(owner[j])) {
                owner[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(seen.begin(), seen.end(), false);
        if (!augment(i))
            return false;
    }
    return true;
}

} // namespace

double set_distance(std::span<const Vec3> a, std::span<const Vec3> b, std::span<const double> masses)
{
    if (a.size() != b.size() || a.size() != masses.size())
        throw std::invalid_argument("set_distance: size mismatch");
    const std::size_t n = a.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
    std::vector<double> candidates;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (same_mass(masses[i], masses[j])) {
                dist[i][j] = (b[i] - a[j]).norm();
                candidates.push_back(dist[i][j]);
            }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t lo = 0;
    std::size_t hi = candidates.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (has_matching(dist, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo < candidates.size() ? candidates[lo] : inf;
}

SymmetryReport verify_symmetry(const OrbitModel& model, std::span<const double> full,
                               const QuadratureGrid& grid, double tol)
{
    SymmetryReport report;
    const std::vector<double> times = grid.nodes();
    const std::vector<double> masses = model.masses();
    const SampledTrajectory base = sample_at(model, full, times, 0);

    for (const auto& element : model.symmetries) {
        std::vector<double> mapped(times.size());
        for (std::size_t j = 0; j < times.size(); ++j)
            mapped[j] = element.time_sign * times[j] + element.time_shift;
        const SampledTrajectory image = sample_at(model, full, mapped, 0);

        SymmetryFailure worst{element.label, 0.0, 0.0};
        for (std::size_t j = 0; j < times.size(); ++j) {
            std::vector<Vec3> rotated = base.configuration(j);
            for (auto& x : rotated)
                x = element.transform.apply(x);
            const std::vector<Vec3> target = image.configuration(j);
            double d = greedy_distance(target, rotated, masses);
            if (d > tol)
                d = std::min(d, set_distance(target, rotated, masses));
            if (d > worst.distance) {
                worst.distance = d;
                worst.time = times[j];
            }
        }
        report.worst = std::max(report.worst, worst.distance);
        if (worst.distance > tol) {
            report.passed = false;
            report.failures.push_back(worst);
        }
    }
    return report;
}

SymmetryReport verify_symmetry(const OrbitModel& model, const ReducedParams& params,
                               const QuadratureGrid& grid, double tol)
{
    params.check(model);
    return verify_symmetry(model, params.expand(), grid, tol);
}

} // namespace nbody
