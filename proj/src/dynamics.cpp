#include "nbody/dynamics.hpp"

#include "nbody/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbody {

namespace {

// r^(alpha - 2) and r^alpha from r², with fast paths for the common exponents.
struct PairPowers {
    double r_alpha;
    double r_alpha_minus_2;
};

PairPowers pair_powers(double alpha, double r2)
{
    if (alpha == -1.0) {
        const double inv_r = 1.0 / std::sqrt(r2);
        return {inv_r, inv_r / r2};
    }
    if (alpha == -2.0) {
        const double inv_r2 = 1.0 / r2;
        return {inv_r2, inv_r2 * inv_r2};
    }
    const double r_alpha = std::pow(r2, 0.5 * alpha);
    return {r_alpha, r_alpha / r2};
}

double potential_sign(double alpha)
{
    return alpha < 0.0 ? -1.0 : 1.0;
}

} // namespace

ForceResult forces(const PotentialSpec& spec, std::span<const double> masses,
                   std::span<const Vec3> positions, double time)
{
    if (masses.size() != positions.size())
        throw std::invalid_argument("forces: mass and position counts differ");
    const std::size_t n = positions.size();
    const double kappa = potential_sign(spec.alpha);
    const double eps2 = spec.softening * spec.softening;
    const double threshold2 = spec.collision_threshold * spec.collision_threshold;

    ForceResult out;
    out.forces.assign(n, Vec3::Zero());
    double min_r2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = positions[i] - positions[j];
            const double raw2 = d.squaredNorm();
            if (!(raw2 >= threshold2))
                throw CollisionError(i, j, time, std::sqrt(raw2));
            min_r2 = std::min(min_r2, raw2);
            const PairPowers p = pair_powers(spec.alpha, raw2 + eps2);
            const double gmm = spec.G * masses[i] * masses[j];
            out.potential += kappa * gmm * p.r_alpha;
            // F_i = -κ G m_i m_j α r^(α-2) (x_i - x_j)
            const Vec3 f = (-kappa * gmm * spec.alpha * p.r_alpha_minus_2) * d;
            out.forces[i] += f;
            out.forces[j] -= f;
        }
    }
    out.min_distance = std::sqrt(min_r2);
    return out;
}

double potential_energy(const PotentialSpec& spec, std::span<const double> masses,
                        std::span<const Vec3> positions)
{
    const double kappa = potential_sign(spec.alpha);
    const double eps2 = spec.softening * spec.softening;
    double v = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            v += kappa * spec.G * masses[i] * masses[j] *
                 pair_powers(spec.alpha, (positions[i] - positions[j]).squaredNorm() + eps2).r_alpha;
    return v;
}

Observables observables(std::span<const double> masses, std::span<const Vec3> positions,
                        std::span<const Vec3> velocities, const PotentialSpec& spec)
{
    if (masses.size() != positions.size() || masses.size() != velocities.size())
        throw std::invalid_argument("observables: mass, position and velocity counts differ");
    Observables o;
    double total_mass = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double m = masses[i];
        const Vec3& x = positions[i];
        const Vec3& v = velocities[i];
        o.J += m * x.cross(v);
        o.P += m * v;
        o.com += m * x;
        total_mass += m;
        o.kinetic += 0.5 * m * v.squaredNorm();
        // |x|² π_x = x xᵀ, which is also the correct limit at the origin
        const Mat3 outer = x * x.transpose();
        const double r2 = x.squaredNorm();
        o.I += m * (r2 * Mat3::Identity() - outer);
        o.Q += m * (3.0 * outer - r2 * Mat3::Identity());
    }
    if (total_mass > 0.0)
        o.com /= total_mass;
    o.potential = masses.size() > 1 ? potential_energy(spec, masses, positions) : 0.0;
    o.E = o.kinetic + o.potential;
    return o;
}

double max_abs(const Mat3& m)
{
    return m.cwiseAbs().maxCoeff();
}

double relative_eigen_spread(const Mat3& m)
{
    const Eigen::SelfAdjointEigenSolver<Mat3> solver(m, Eigen::EigenvaluesOnly);
    const Vec3 ev = solver.eigenvalues();
    const double mean = ev.mean();
    const double spread = ev.maxCoeff() - ev.minCoeff();
    return mean == 0.0 ? spread : spread / std::abs(mean);
}

ResidualReport residual(const OrbitModel& model, std::span<const double> full,
                        const QuadratureGrid& grid)
{
    const TrajectorySampler sampler(model, grid.nodes());
    const SampledTrajectory traj = sampler.sample(full, 2);
    const std::vector<double> masses = model.masses();
    const std::size_t n_nodes = grid.N;
    const std::size_t n_bodies = model.bodies.size();

    ResidualReport report;
    std::vector<Vec3> misfit(n_bodies * n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const auto config = traj.configuration(j);
        const ForceResult f = forces(model.potential, masses, config, traj.times[j]);
        for (std::size_t b = 0; b < n_bodies; ++b) {
            const Vec3 r = masses[b] * traj.acceleration(b, j) - f.forces[b];
            misfit[b * n_nodes + j] = r;
            const double m = r.cwiseAbs().maxCoeff();
            if (m > report.max) {
                report.max = m;
                report.worst_body = b;
                report.worst_time = traj.times[j];
            }
        }
    }

    report.spectrum.assign(n_nodes / 2 + 1, 0.0);
    for (std::size_t b = 0; b < n_bodies; ++b) {
        for (int c = 0; c < 3; ++c) {
            for (std::size_t k = 0; k <= n_nodes / 2; ++k) {
                double s = 0.0;
                double co = 0.0;
                for (std::size_t j = 0; j < n_nodes; ++j) {
                    const double v = misfit[b * n_nodes + j][c];
                    const double phase = static_cast<double>(k) * traj.times[j];
                    s += v * std::sin(phase);
                    co += v * std::cos(phase);
                }
                const double scale = (k == 0 || 2 * k == n_nodes) ? 1.0 / n_nodes : 2.0 / n_nodes;
                report.spectrum[k] = std::max(report.spectrum[k], scale * std::hypot(s, co));
            }
        }
    }
    return report;
}

ResidualReport residual(const OrbitModel& model, const ReducedParams& params,
                        const QuadratureGrid& grid)
{
    params.check(model);
    return residual(model, params.expand(), grid);
}

} // namespace nbody
