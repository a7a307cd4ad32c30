#include "nbody/export.hpp"

#include "nbody/dynamics.hpp"
#include "nbody/errors.hpp"
#include "nbody/integrator.hpp"
#include "nbody/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace nbody {

std::string format_coefficient(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", value);
    std::string s = buf;
    if (s == "-0.00000")
        s = "0.00000";
    return s;
}

namespace {

struct Column {
    std::string label;
    std::map<int, double> values;
    // Columns sharing a group are blanked together past the group's last entry.
    std::size_t group = 0;
};

double coefficient(const OrbitRecord& r, std::size_t generator, std::size_t series, Basis basis, int k)
{
    for (const auto& c : r.coefficients)
        if (c.key.generator == generator && c.key.series == series && c.key.basis == basis && c.key.k == k)
            return c.value;
    return 0.0;
}

} // namespace

std::string format_table(const std::vector<OrbitRecord>& records)
{
    if (records.empty())
        throw std::invalid_argument("no records to tabulate");
    const Family kind = records.front().family.kind;
    for (const auto& r : records)
        if (r.family.kind != kind)
            throw std::invalid_argument("records of different families cannot share a table");
    if (kind != Family::cubic && kind != Family::crisscross)
        throw std::invalid_argument("tables exist for the cubic and criss-cross families only");

    std::vector<Column> columns;
    int k_limit = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const OrbitRecord& r = records[i];
        k_limit = std::max(k_limit, r.k_max);
        if (kind == Family::cubic) {
            if (r.scale == 0.0)
                throw NormalizationError("record has a_1 = 0");
            Column col{"a_k (m=" + std::to_string(r.family.m) + ")", {}, i};
            for (int k = 1; k <= r.k_max; k += 2)
                col.values[k] = coefficient(r, 0, 0, Basis::sin, k) / r.scale;
            columns.push_back(col);
        } else {
            Column a1{"a_{1,k}", {}, i};
            Column b1{"b_{1,k}", {}, i};
            Column a3{"a_{3,k}", {}, i};
            for (int k = 1; k <= r.k_max; k += 2) {
                a1.values[k] = coefficient(r, 0, 0, Basis::cos, k);
                b1.values[k] = coefficient(r, 0, 1, Basis::sin, k);
                a3.values[k] = coefficient(r, 2, 0, Basis::cos, k);
            }
            columns.push_back(a1);
            columns.push_back(b1);
            columns.push_back(a3);
        }
    }

    std::map<std::size_t, int> group_last;
    for (const auto& col : columns)
        for (const auto& [k, v] : col.values)
            if (format_coefficient(v) != "0.00000")
                group_last[col.group] = std::max(group_last[col.group], k);
    int last_row = 1;
    for (const auto& [g, k] : group_last)
        last_row = std::max(last_row, k);

    constexpr int width = 12;
    std::ostringstream os;
    os << std::left << std::setw(4) << "k";
    for (const auto& col : columns)
        os << std::right << std::setw(width) << col.label;
    os << '\n';
    for (int k = 1; k <= last_row; k += 2) {
        os << std::left << std::setw(4) << k;
        for (const auto& col : columns) {
            const auto it = col.values.find(k);
            const bool shown = it != col.values.end() && k <= group_last[col.group];
            os << std::right << std::setw(width) << (shown ? format_coefficient(it->second) : "");
        }
        os << '\n';
    }
    if (kind == Family::cubic) {
        os << std::left << std::setw(4) << "a_1";
        for (const auto& r : records) {
            std::ostringstream v;
            v << std::setprecision(8) << r.scale;
            os << std::right << std::setw(width) << v.str();
        }
        os << '\n';
    }
    return os.str();
}

void write_observables(std::ostream& os, const OrbitModel& model, const ReducedParams& params,
                       std::size_t samples)
{
    if (samples == 0)
        throw std::invalid_argument("observe: samples must be positive");
    std::vector<double> times(samples);
    for (std::size_t j = 0; j < samples; ++j)
        times[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
    const SampledTrajectory traj = sample_at(model, params.expand(), times, 1);
    const std::vector<double> masses = model.masses();

    os << "t,E,Jx,Jy,Jz,Ixx,Iyy,Izz,Ixy,Ixz,Iyz,I_spread,Q_max\n";
    const auto old_precision = os.precision(12);
    for (std::size_t j = 0; j < samples; ++j) {
        const Observables o =
            observables(masses, traj.configuration(j), traj.velocity_configuration(j), model.potential);
        os << times[j] << ',' << o.E << ',' << o.J.x() << ',' << o.J.y() << ',' << o.J.z() << ',' << o.I(0, 0)
           << ',' << o.I(1, 1) << ',' << o.I(2, 2) << ',' << o.I(0, 1) << ',' << o.I(0, 2) << ',' << o.I(1, 2)
           << ',' << relative_eigen_spread(o.I) << ',' << max_abs(o.Q) << '\n';
    }
    os.precision(old_precision);
}

void write_fourier_trajectory(std::ostream& os, const OrbitModel& model, const ReducedParams& params,
                              std::size_t samples, double periods)
{
    if (samples == 0 || !(periods > 0.0))
        throw std::invalid_argument("trajectory export needs samples > 0 and periods > 0");
    const auto total = static_cast<std::size_t>(std::llround(periods * static_cast<double>(samples)));
    std::vector<double> times(total + 1);
    for (std::size_t j = 0; j <= total; ++j)
        times[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
    const SampledTrajectory traj = sample_at(model, params.expand(), times, 1);
    const std::vector<double> masses = model.masses();
    std::vector<TrajectorySample> rows;
    rows.reserve(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        TrajectorySample s;
        s.state.t = times[j];
        s.state.positions = traj.configuration(j);
        s.state.velocities = traj.velocity_configuration(j);
        const Observables o = observables(masses, s.state.positions, s.state.velocities, model.potential);
        s.E = o.E;
        s.J = o.J;
        rows.push_back(std::move(s));
    }
    write_trajectory(os, rows);
}

} // namespace nbody
