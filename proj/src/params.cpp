#include "nbody/params.hpp"

#include "nbody/errors.hpp"

#include <string>

namespace nbody {

ParamLayout::ParamLayout(const OrbitModel& model, std::vector<CoefficientKey> slots,
                         std::vector<Coupling> couplings)
    : slots_(std::move(slots)), couplings_(std::move(couplings)),
      full_size_(model.coefficient_count()), k_max_(model.k_max)
{
    std::vector<int> owner(full_size_, -1);
    targets_.resize(slots_.size());
    inertia_.assign(slots_.size(), 0.0);

    auto claim = [&](std::size_t slot, const CoefficientKey& key, double sign) {
        std::size_t index = 0;
        try {
            index = model.coefficient_index(key);
        } catch (const std::out_of_range& e) {
            throw LayoutError(std::string("layout key out of range: ") + e.what());
        }
        const Generator& g = model.generators[key.generator];
        if (!parity_allows(g.series_parity[key.series], key.k))
            throw LayoutError("layout key k = " + std::to_string(key.k) +
                              " violates the series parity mask");
        if (owner[index] != -1)
            throw LayoutError("full coefficient reachable from more than one slot");
        owner[index] = static_cast<int>(slot);
        targets_[slot].push_back({index, sign});
        inertia_[slot] += model.coefficient_inertia(key.generator, key.series);
    };

    for (std::size_t i = 0; i < slots_.size(); ++i)
        claim(i, slots_[i], 1.0);
    for (const auto& c : couplings_) {
        if (c.slot >= slots_.size())
            throw LayoutError("coupling refers to a missing slot");
        if (c.sign != 1.0 && c.sign != -1.0)
            throw LayoutError("coupling sign must be +1 or -1");
        claim(c.slot, c.target, c.sign);
    }
}

std::vector<double> ParamLayout::expand(std::span<const double> values) const
{
    if (values.size() != slots_.size())
        throw LayoutError("expand: value count does not match the layout");
    std::vector<double> full(full_size_, 0.0);
    for (std::size_t i = 0; i < slots_.size(); ++i)
        for (const auto& t : targets_[i])
            full[t.index] = t.sign * values[i];
    return full;
}

std::vector<double> ParamLayout::reduce(std::span<const double> full) const
{
    if (full.size() != full_size_)
        throw LayoutError("reduce: full coefficient count does not match the layout");
    std::vector<double> values(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i)
        values[i] = full[targets_[i].front().index];
    return values;
}

std::vector<double> ParamLayout::project(std::span<const double> full_gradient) const
{
    if (full_gradient.size() != full_size_)
        throw LayoutError("project: gradient size does not match the layout");
    std::vector<double> g(slots_.size(), 0.0);
    for (std::size_t i = 0; i < slots_.size(); ++i)
        for (const auto& t : targets_[i])
            g[i] += t.sign * full_gradient[t.index];
    return g;
}

std::size_t ParamLayout::find_slot(const CoefficientKey& key) const
{
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (slots_[i] == key)
            return i;
    return slots_.size();
}

bool ParamLayout::compatible_with(const OrbitModel& model) const
{
    return model.k_max == k_max_ && model.coefficient_count() == full_size_;
}

std::vector<double> ReducedParams::expand() const
{
    if (!layout)
        throw LayoutError("reduced parameters carry no layout");
    return layout->expand(values);
}

void ReducedParams::check(const OrbitModel& model) const
{
    if (!layout)
        throw LayoutError("reduced parameters carry no layout");
    if (values.size() != layout->size())
        throw LayoutError("reduced parameter count does not match the layout");
    if (!layout->compatible_with(model))
        throw LayoutError("reduced parameter layout does not match the model");
}

std::vector<double> project_gradient(std::span<const double> full_gradient,
                                     const ReducedParams& params)
{
    if (!params.layout)
        throw LayoutError("reduced parameters carry no layout");
    return params.layout->project(full_gradient);
}

ParamLayout free_layout(const OrbitModel& model)
{
    std::vector<CoefficientKey> slots;
    for (std::size_t g = 0; g < model.generators.size(); ++g) {
        const Generator& gen = model.generators[g];
        for (std::size_t s = 0; s < gen.series_count(); ++s)
            for (Basis basis : {Basis::sin, Basis::cos})
                for (int k = 1; k <= model.k_max; ++k)
                    if (parity_allows(gen.series_parity[s], k))
                        slots.push_back({g, s, k, basis});
    }
    return ParamLayout(model, std::move(slots));
}

std::vector<std::vector<FourierSeries>> to_series(const OrbitModel& model,
                                                  std::span<const double> full)
{
    if (full.size() != model.coefficient_count())
        throw LayoutError("to_series: coefficient count does not match the model");
    std::vector<std::vector<FourierSeries>> out;
    std::size_t index = 0;
    for (const auto& gen : model.generators) {
        auto& series_list = out.emplace_back();
        for (std::size_t s = 0; s < gen.series_count(); ++s) {
            FourierSeries series(gen.series_parity[s]);
            for (int basis = 0; basis < 2; ++basis) {
                for (int k = 0; k <= model.k_max; ++k, ++index) {
                    const double v = full[index];
                    if (v == 0.0)
                        continue;
                    if (basis == 0)
                        series.set_sin(k, v);
                    else
                        series.set_cos(k, v);
                }
            }
            series_list.push_back(std::move(series));
        }
    }
    return out;
}

} // namespace nbody
