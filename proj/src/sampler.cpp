#include "nbody/sampler.hpp"

#include "nbody/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nbody {

QuadratureGrid QuadratureGrid::for_k_max(int k_max)
{
    return {static_cast<std::size_t>(4 * k_max + 4)};
}

double QuadratureGrid::weight() const
{
    return kTwoPi / static_cast<double>(N);
}

double QuadratureGrid::node(std::size_t j) const
{
    return kTwoPi * static_cast<double>(j) / static_cast<double>(N);
}

std::vector<double> QuadratureGrid::nodes() const
{
    std::vector<double> t(N);
    for (std::size_t j = 0; j < N; ++j)
        t[j] = node(j);
    return t;
}

void QuadratureGrid::check_oversampling(int k_max) const
{
    if (N < static_cast<std::size_t>(4 * k_max + 2))
        throw std::invalid_argument("quadrature grid with N = " + std::to_string(N) +
                                    " is too coarse for k_max = " + std::to_string(k_max) +
                                    " (need N >= 4 k_max + 2)");
}

std::vector<Vec3> SampledTrajectory::configuration(std::size_t node) const
{
    std::vector<Vec3> out(bodies);
    for (std::size_t b = 0; b < bodies; ++b)
        out[b] = position(b, node);
    return out;
}

std::vector<Vec3> SampledTrajectory::velocity_configuration(std::size_t node) const
{
    std::vector<Vec3> out(bodies);
    for (std::size_t b = 0; b < bodies; ++b)
        out[b] = velocity(b, node);
    return out;
}

TrajectorySampler::TrajectorySampler(const OrbitModel& model, std::vector<double> times)
    : model_(&model), times_(std::move(times)), stride_(static_cast<std::size_t>(model.k_max + 1))
{
    model.validate();
    const std::size_t per_series = 2 * stride_;
    std::vector<std::size_t> generator_offset;
    std::size_t offset = 0;
    for (const auto& g : model.generators) {
        generator_offset.push_back(offset);
        offset += g.series_count() * per_series;
    }
    for (const auto& body : model.bodies) {
        const Generator& g = model.generators[body.generator];
        std::array<std::size_t, 3> table{};
        std::array<std::size_t, 3> base{};
        for (int c = 0; c < 3; ++c) {
            table[c] = table_for(body.phase + g.phase_for(c));
            base[c] = generator_offset[body.generator] + g.series_for(c) * per_series;
        }
        body_table_.push_back(table);
        body_offset_.push_back(base);
    }
}

std::size_t TrajectorySampler::table_for(double shift)
{
    shift = std::fmod(shift, kTwoPi);
    for (std::size_t i = 0; i < shifts_.size(); ++i)
        if (shifts_[i] == shift)
            return i;
    Table table;
    table.sin.resize(times_.size() * stride_);
    table.cos.resize(times_.size() * stride_);
    for (std::size_t j = 0; j < times_.size(); ++j) {
        const double s = times_[j] + shift;
        for (std::size_t k = 0; k < stride_; ++k) {
            table.sin[j * stride_ + k] = std::sin(static_cast<double>(k) * s);
            table.cos[j * stride_ + k] = std::cos(static_cast<double>(k) * s);
        }
    }
    shifts_.push_back(shift);
    tables_.push_back(std::move(table));
    return tables_.size() - 1;
}

SampledTrajectory TrajectorySampler::sample(std::span<const double> full, int derivatives) const
{
    const OrbitModel& model = *model_;
    if (full.size() != model.coefficient_count())
        throw LayoutError("sample: coefficient count does not match the model");
    const std::size_t n_nodes = times_.size();
    const std::size_t n_bodies = model.bodies.size();

    SampledTrajectory out;
    out.bodies = n_bodies;
    out.times = times_;
    out.positions.resize(n_bodies * n_nodes);
    if (derivatives >= 1)
        out.velocities.resize(n_bodies * n_nodes);
    if (derivatives >= 2)
        out.accelerations.resize(n_bodies * n_nodes);

    for (std::size_t b = 0; b < n_bodies; ++b) {
        const OrthTransform& r = model.bodies[b].transform;
        for (std::size_t j = 0; j < n_nodes; ++j) {
            Vec3 x;
            Vec3 v;
            Vec3 a;
            for (int c = 0; c < 3; ++c) {
                const Table& tab = tables_[body_table_[b][c]];
                const double* sn = &tab.sin[j * stride_];
                const double* cs = &tab.cos[j * stride_];
                const double* sc = &full[body_offset_[b][c]];
                const double* cc = sc + stride_;
                double px = cc[0];
                double pv = 0.0;
                double pa = 0.0;
                for (std::size_t k = 1; k < stride_; ++k) {
                    const double s_term = sc[k] * sn[k] + cc[k] * cs[k];
                    px += s_term;
                    if (derivatives >= 1) {
                        const double kd = static_cast<double>(k);
                        pv += kd * (sc[k] * cs[k] - cc[k] * sn[k]);
                        pa -= kd * kd * s_term;
                    }
                }
                x[c] = px;
                v[c] = pv;
                a[c] = pa;
            }
            out.positions[b * n_nodes + j] = r.apply(x);
            if (derivatives >= 1)
                out.velocities[b * n_nodes + j] = r.apply(v);
            if (derivatives >= 2)
                out.accelerations[b * n_nodes + j] = r.apply(a);
        }
    }
    return out;
}

void TrajectorySampler::accumulate_adjoint(std::span<const Vec3> load, double weight,
                                           std::span<double> gradient) const
{
    const OrbitModel& model = *model_;
    const std::size_t n_nodes = times_.size();
    if (load.size() != model.bodies.size() * n_nodes)
        throw std::invalid_argument("adjoint load has the wrong size");
    if (gradient.size() != model.coefficient_count())
        throw LayoutError("adjoint: gradient size does not match the model");

    for (std::size_t b = 0; b < model.bodies.size(); ++b) {
        const OrthTransform inv = model.bodies[b].transform.inverse();
        for (std::size_t j = 0; j < n_nodes; ++j) {
            const Vec3 local = inv.apply(load[b * n_nodes + j]) * weight;
            for (int c = 0; c < 3; ++c) {
                const double l = local[c];
                if (l == 0.0)
                    continue;
                const Table& tab = tables_[body_table_[b][c]];
                const double* sn = &tab.sin[j * stride_];
                const double* cs = &tab.cos[j * stride_];
                double* gs = &gradient[body_offset_[b][c]];
                double* gc = gs + stride_;
                gc[0] += l;
                for (std::size_t k = 1; k < stride_; ++k) {
                    gs[k] += l * sn[k];
                    gc[k] += l * cs[k];
                }
            }
        }
    }
}

SampledTrajectory sample_positions(const OrbitModel& model, const ReducedParams& params,
                                   const QuadratureGrid& grid, int derivatives)
{
    params.check(model);
    return sample_at(model, params.expand(), grid.nodes(), derivatives);
}

SampledTrajectory sample_at(const OrbitModel& model, std::span<const double> full,
                            const std::vector<double>& times, int derivatives)
{
    return TrajectorySampler(model, times).sample(full, derivatives);
}

} // namespace nbody
