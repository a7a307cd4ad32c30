#include "nbody/model.hpp"

#include <stdexcept>

namespace nbody {

void PotentialSpec::validate() const
{
    if (!(alpha < 2.0) || alpha == 0.0)
        throw std::invalid_argument("potential exponent must satisfy alpha < 2, alpha != 0");
    if (softening < 0.0)
        throw std::invalid_argument("softening must be non-negative");
    if (collision_threshold < 0.0)
        throw std::invalid_argument("collision threshold must be non-negative");
}

std::string to_string(Family family)
{
    switch (family) {
    case Family::cubic: return "cubic";
    case Family::crisscross: return "crisscross";
    case Family::choreography: return "choreography";
    case Family::custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name)
{
    if (name == "cubic")
        return Family::cubic;
    if (name == "crisscross" || name == "criss-cross")
        return Family::crisscross;
    if (name == "choreography")
        return Family::choreography;
    if (name == "custom")
        return Family::custom;
    throw std::invalid_argument("unknown family '" + name + "'");
}

std::string to_string(Basis basis)
{
    return basis == Basis::sin ? "sin" : "cos";
}

std::vector<double> OrbitModel::masses() const
{
    std::vector<double> out;
    out.reserve(bodies.size());
    for (const auto& b : bodies)
        out.push_back(b.mass);
    return out;
}

std::size_t OrbitModel::coefficient_count() const
{
    std::size_t n = 0;
    for (const auto& g : generators)
        n += g.series_count() * 2 * static_cast<std::size_t>(k_max + 1);
    return n;
}

std::size_t OrbitModel::coefficient_index(const CoefficientKey& key) const
{
    if (key.generator >= generators.size())
        throw std::out_of_range("coefficient key: generator out of range");
    if (key.series >= generators[key.generator].series_count())
        throw std::out_of_range("coefficient key: series out of range");
    if (key.k < 0 || key.k > k_max || (key.basis == Basis::sin && key.k == 0))
        throw std::out_of_range("coefficient key: harmonic out of range");
    const std::size_t per_series = 2 * static_cast<std::size_t>(k_max + 1);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < key.generator; ++g)
        offset += generators[g].series_count() * per_series;
    return offset + key.series * per_series +
           static_cast<std::size_t>(key.basis) * (k_max + 1) + key.k;
}

CoefficientKey OrbitModel::coefficient_key(std::size_t index) const
{
    const std::size_t per_series = 2 * static_cast<std::size_t>(k_max + 1);
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const std::size_t span = generators[g].series_count() * per_series;
        if (index < span) {
            CoefficientKey key;
            key.generator = g;
            key.series = index / per_series;
            const std::size_t rem = index % per_series;
            key.basis = rem > static_cast<std::size_t>(k_max) ? Basis::cos : Basis::sin;
            key.k = static_cast<int>(rem % (k_max + 1));
            return key;
        }
        index -= span;
    }
    throw std::out_of_range("coefficient index out of range");
}

double OrbitModel::coefficient_inertia(std::size_t generator, std::size_t series) const
{
    const Generator& g = generators.at(generator);
    double inertia = 0.0;
    for (const auto& b : bodies) {
        if (b.generator != generator)
            continue;
        for (int c = 0; c < 3; ++c)
            if (g.series_for(c) == series)
                inertia += b.mass;
    }
    return inertia;
}

void OrbitModel::validate() const
{
    if (k_max < 1)
        throw std::invalid_argument("model needs k_max >= 1");
    potential.validate();
    for (const auto& g : generators)
        if (g.series_parity.size() != g.series_count())
            throw std::invalid_argument("generator parity list does not match its series count");
    for (const auto& b : bodies) {
        if (b.generator >= generators.size())
            throw std::invalid_argument("body bound to a missing generator");
        if (!(b.mass > 0.0))
            throw std::invalid_argument("body masses must be positive");
    }
}

} // namespace nbody
