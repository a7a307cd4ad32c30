#include "nbody/integrator.hpp"

#include "nbody/errors.hpp"
#include "nbody/sampler.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nbody {

bool PhaseState::finite() const
{
    for (const auto& x : positions)
        if (!x.allFinite())
            return false;
    for (const auto& v : velocities)
        if (!v.allFinite())
            return false;
    return std::isfinite(t);
}

namespace {

void accelerations(const PotentialSpec& potential, std::span<const double> masses,
                   std::span<const Vec3> positions, double t, std::vector<Vec3>& out)
{
    const ForceResult f = forces(potential, masses, positions, t);
    for (std::size_t i = 0; i < positions.size(); ++i)
        out[i] = f.forces[i] / masses[i];
}

TrajectorySample make_sample(const PhaseState& s, std::span<const double> masses,
                             const PotentialSpec& potential)
{
    const Observables o = observables(masses, s.positions, s.velocities, potential);
    return {s, o.E, o.J};
}

} // namespace

Trajectory integrate(const PhaseState& initial, std::span<const double> masses,
                     const PotentialSpec& potential, double dt, double horizon, std::size_t stride)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("integrate: dt must be positive");
    if (!(horizon >= 0.0))
        throw std::invalid_argument("integrate: horizon must be non-negative");
    if (initial.positions.size() != masses.size() || initial.velocities.size() != masses.size())
        throw std::invalid_argument("integrate: state and masses disagree");
    if (!initial.finite())
        throw Error("integrate: non-finite initial state");

    const std::size_t n = initial.size();
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const double h = steps ? horizon / static_cast<double>(steps) : 0.0;

    Trajectory traj;
    traj.dt = h;
    traj.steps = steps;
    PhaseState s = initial;
    traj.samples.push_back(make_sample(s, masses, potential));

    std::vector<Vec3> k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n), tmp(n);
    const double t0 = initial.t;
    for (std::size_t step = 0; step < steps; ++step) {
        const double t = t0 + h * static_cast<double>(step);
        accelerations(potential, masses, s.positions, t, k1v);
        k1x = s.velocities;

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = s.positions[i] + 0.5 * h * k1x[i];
        accelerations(potential, masses, tmp, t + 0.5 * h, k2v);
        for (std::size_t i = 0; i < n; ++i)
            k2x[i] = s.velocities[i] + 0.5 * h * k1v[i];

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = s.positions[i] + 0.5 * h * k2x[i];
        accelerations(potential, masses, tmp, t + 0.5 * h, k3v);
        for (std::size_t i = 0; i < n; ++i)
            k3x[i] = s.velocities[i] + 0.5 * h * k2v[i];

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = s.positions[i] + h * k3x[i];
        accelerations(potential, masses, tmp, t + h, k4v);
        for (std::size_t i = 0; i < n; ++i)
            k4x[i] = s.velocities[i] + h * k3v[i];

        for (std::size_t i = 0; i < n; ++i) {
            s.positions[i] += (h / 6.0) * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
            s.velocities[i] += (h / 6.0) * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        s.t = t0 + h * static_cast<double>(step + 1);
        if (!s.finite())
            throw Error("integrate: state became non-finite at t = " + std::to_string(s.t));
        if ((stride && (step + 1) % stride == 0) || step + 1 == steps) {
            if (step + 1 == steps || traj.samples.back().state.t != s.t)
                traj.samples.push_back(make_sample(s, masses, potential));
        }
    }
    traj.final_state = s;
    return traj;
}

PhaseState state_at(const OrbitModel& model, std::span<const double> full, double t)
{
    const SampledTrajectory traj = sample_at(model, full, {t}, 1);
    PhaseState s;
    s.t = t;
    s.positions = traj.positions;
    s.velocities = traj.velocities;
    return s;
}

PhaseState extract_ics(const OrbitModel& model, const ReducedParams& params)
{
    params.check(model);
    return state_at(model, params.expand(), 0.0);
}

double return_error(const OrbitModel& model, const ReducedParams& params, double dt)
{
    const PhaseState start = extract_ics(model, params);
    const std::vector<double> masses = model.masses();
    const Trajectory traj = integrate(start, masses, model.potential, dt, kTwoPi);
    double err = 0.0;
    for (std::size_t i = 0; i < start.size(); ++i) {
        err = std::max(err, (traj.final_state.positions[i] - start.positions[i]).cwiseAbs().maxCoeff());
        err = std::max(err, (traj.final_state.velocities[i] - start.velocities[i]).cwiseAbs().maxCoeff());
    }
    return err;
}

ShapeComparator::ShapeComparator(const OrbitModel& model, const ReducedParams& params,
                                 std::size_t phase_samples)
    : model_(&model), full_(params.expand()), masses_(model.masses())
{
    params.check(model);
    if (phase_samples < 8)
        throw std::invalid_argument("shape comparator needs at least 8 phase samples");
    phases_.resize(phase_samples);
    for (std::size_t i = 0; i < phase_samples; ++i)
        phases_[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(phase_samples);
    const SampledTrajectory traj = sample_at(model, full_, phases_, 0);
    for (std::size_t i = 0; i < phase_samples; ++i)
        references_.push_back(centered(traj.configuration(i)));
}

std::vector<Vec3> ShapeComparator::centered(std::span<const Vec3> positions) const
{
    Vec3 com = Vec3::Zero();
    double total = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        com += masses_[i] * positions[i];
        total += masses_[i];
    }
    com /= total;
    std::vector<Vec3> out(positions.begin(), positions.end());
    for (auto& x : out)
        x -= com;
    return out;
}

std::vector<Vec3> ShapeComparator::reference_at(double phase) const
{
    return centered(sample_at(*model_, full_, {phase}, 0).configuration(0));
}

double ShapeComparator::rms_after_alignment(const std::vector<Vec3>& reference,
                                            const std::vector<Vec3>& sample,
                                            double* max_distance) const
{
    // Weighted Kabsch: rotation R minimizing Σ m |ref - R sample|².
    Mat3 h = Mat3::Zero();
    for (std::size_t i = 0; i < sample.size(); ++i)
        h += masses_[i] * sample[i] * reference[i].transpose();
    const Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    const Mat3 rot = svd.matrixV() * d * svd.matrixU().transpose();

    double sum = 0.0;
    double total = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double dist = (reference[i] - rot * sample[i]).norm();
        sum += masses_[i] * dist * dist;
        total += masses_[i];
        worst = std::max(worst, dist);
    }
    if (max_distance)
        *max_distance = worst;
    return std::sqrt(sum / total);
}

ShapeComparator::Match ShapeComparator::compare(std::span<const Vec3> positions) const
{
    if (positions.size() != masses_.size())
        throw std::invalid_argument("shape comparison: wrong number of bodies");
    const std::vector<Vec3> sample = centered(positions);

    std::size_t best = 0;
    double best_rms = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < references_.size(); ++i) {
        const double rms = rms_after_alignment(references_[i], sample, nullptr);
        if (rms < best_rms) {
            best_rms = rms;
            best = i;
        }
    }

    // golden-section refinement on [phase - Δ, phase + Δ]
    const double span = kTwoPi / static_cast<double>(phases_.size());
    double lo = phases_[best] - span;
    double hi = phases_[best] + span;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    auto objective = [&](double phase) { return rms_after_alignment(reference_at(phase), sample, nullptr); };
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int iter = 0; iter < 40; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double phase = 0.5 * (lo + hi);
    double worst = 0.0;
    const double rms = rms_after_alignment(reference_at(phase), sample, &worst);

    Match match;
    if (rms <= best_rms) {
        match.phase = std::fmod(phase + kTwoPi, kTwoPi);
        match.distance = worst;
    } else {
        rms_after_alignment(references_[best], sample, &worst);
        match.phase = phases_[best];
        match.distance = worst;
    }
    return match;
}

PerturbationReport perturb_and_track(const OrbitModel& model, const ReducedParams& params,
                                     const std::vector<Vec3>& deviation, double n_periods,
                                     double envelope, const PerturbationOptions& options)
{
    if (!(n_periods >= 1.0))
        throw std::invalid_argument("perturbation horizon must be at least one period");
    if (deviation.size() > model.body_count())
        throw std::invalid_argument("deviation lists more bodies than the model has");
    for (const auto& d : deviation)
        if (!d.allFinite())
            throw std::invalid_argument("deviation must be finite");
    if (options.samples_per_period == 0)
        throw std::invalid_argument("samples_per_period must be positive");

    PerturbationReport report;
    report.deviation = deviation;
    report.deviation.resize(model.body_count(), Vec3::Zero());
    report.horizon_periods = n_periods;
    report.envelope = envelope;

    const std::vector<double> full = params.expand();
    const std::vector<double> masses = model.masses();
    const ShapeComparator comparator(model, params, options.phase_samples);

    PhaseState state = extract_ics(model, params);
    for (std::size_t i = 0; i < state.size(); ++i)
        state.positions[i] += report.deviation[i];

    const auto total_samples =
        static_cast<std::size_t>(std::llround(n_periods * static_cast<double>(options.samples_per_period)));
    const double sample_span = kTwoPi / static_cast<double>(options.samples_per_period);

    auto record = [&](const PhaseState& s) {
        const Vec3* begin = s.positions.data();
        const ShapeComparator::Match match = comparator.compare({begin, s.positions.size()});
        const PhaseState fourier = state_at(model, full, s.t);
        double matching = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            matching = std::max(matching, (s.positions[i] - fourier.positions[i]).norm());
            report.z_extent = std::max(report.z_extent, std::abs(s.positions[i].z()));
        }
        report.max_deviation = std::max(report.max_deviation, match.distance);
        report.max_matching_deviation = std::max(report.max_matching_deviation, matching);
        report.sample_times.push_back(s.t);
        report.section_points.push_back(s.positions);
        if (report.bounded && match.distance >= envelope) {
            report.bounded = false;
            report.exit_time = s.t;
            report.exit_reason = "left envelope";
        }
    };

    record(state);
    for (std::size_t i = 0; i < total_samples; ++i) {
        if (!report.bounded && options.stop_on_exit)
            break;
        try {
            state = integrate(state, masses, model.potential, options.dt, sample_span).final_state;
        } catch (const CollisionError& e) {
            report.bounded = false;
            report.exit_time = e.time();
            report.exit_reason = e.what();
            break;
        } catch (const Error& e) {
            report.bounded = false;
            report.exit_time = state.t;
            report.exit_reason = e.what();
            break;
        }
        record(state);
    }
    return report;
}

void write_trajectory(std::ostream& os, const std::vector<TrajectorySample>& samples)
{
    if (samples.empty())
        return;
    const std::size_t n = samples.front().state.size();
    os << "t";
    for (std::size_t b = 0; b < n; ++b)
        os << ",x" << b << ",y" << b << ",z" << b << ",vx" << b << ",vy" << b << ",vz" << b;
    os << ",E,Jx,Jy,Jz\n";
    const auto old_precision = os.precision(17);
    for (const auto& s : samples) {
        os << s.state.t;
        for (std::size_t b = 0; b < n; ++b) {
            const Vec3& x = s.state.positions[b];
            const Vec3& v = s.state.velocities[b];
            os << ',' << x.x() << ',' << x.y() << ',' << x.z() << ',' << v.x() << ',' << v.y() << ','
               << v.z();
        }
        os << ',' << s.E << ',' << s.J.x() << ',' << s.J.y() << ',' << s.J.z() << '\n';
    }
    os.precision(old_precision);
}

} // namespace nbody
