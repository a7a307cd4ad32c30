#include "nbody/families.hpp"

#include "nbody/errors.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace nbody {

namespace {

SymmetryElement space_element(const OrthTransform& r, std::string label)
{
    return {r, 1, 0.0, std::move(label)};
}

OrthTransform negative_identity()
{
    return OrthTransform::diagonal(-1, -1, -1);
}

} // namespace

ParityVerdict collision_parity_check(int m)
{
    if (m < 1)
        throw std::invalid_argument("number of masses per loop must be at least 1");
    return m % 2 == 0 ? ParityVerdict::collision : ParityVerdict::safe;
}

FamilySetup build_cubic_family(int m, int k_max, PotentialSpec potential)
{
    if (collision_parity_check(m) == ParityVerdict::collision)
        throw CollisionParityError(m);
    if (k_max < 1)
        throw std::invalid_argument("k_max must be at least 1");

    OrbitModel model;
    model.k_max = k_max;
    model.potential = potential;
    model.family.kind = Family::cubic;
    model.family.m = m;

    Generator f;
    f.kind = GeneratorKind::phased_scalar;
    f.coordinate_phase = {0.0, kTwoPi / 3.0, 2.0 * kTwoPi / 3.0};
    f.series_parity = {Parity::odd_only};
    model.generators.push_back(f);

    for (const auto& loop : klein_elements())
        for (int j = 0; j < m; ++j)
            model.bodies.push_back({0, loop, kTwoPi * j / m, 1.0});

    const auto group = m % 3 == 0 ? a4_elements() : klein_elements();
    for (const auto& g : group)
        model.symmetries.push_back(space_element(g, "rotation " + g.to_string()));
    model.symmetries.push_back({negative_identity(), 1, kPi, "half-period reflection"});
    // f odd in t  =>  set(-t) = -P_yz set(t)
    model.symmetries.push_back({OrthTransform({0, 2, 1}, {-1, -1, -1}), -1, 0.0, "time reversal"});
    if (m > 1)
        model.symmetries.push_back({OrthTransform{}, 1, kTwoPi / m, "Lagrange time shift"});
    model.validate();

    std::vector<CoefficientKey> slots;
    for (int k = 1; k <= k_max; k += 2)
        slots.push_back({0, 0, k, Basis::sin});
    auto layout = std::make_shared<const ParamLayout>(model, std::move(slots));

    ReducedParams params{std::vector<double>(layout->size(), 0.0), layout};
    params.values[0] = 1.0;
    return {std::move(model), std::move(params)};
}

double crisscross_coupling_sign(int k)
{
    return k % 4 == 3 ? 1.0 : -1.0;
}

FamilySetup build_crisscross(std::array<double, 3> masses, int k_max, PotentialSpec potential)
{
    for (double mass : masses)
        if (!(mass > 0.0))
            throw std::invalid_argument("criss-cross masses must be positive");
    if (k_max < 1)
        throw std::invalid_argument("k_max must be at least 1");

    OrbitModel model;
    model.k_max = k_max;
    model.potential = potential;
    model.family.kind = Family::crisscross;
    model.family.masses = masses;

    Generator g;
    g.kind = GeneratorKind::vector;
    g.series_parity = {Parity::odd_only, Parity::odd_only, Parity::odd_only};
    for (std::size_t i = 0; i < 3; ++i) {
        model.generators.push_back(g);
        model.bodies.push_back({i, OrthTransform{}, 0.0, masses[i]});
    }

    model.symmetries.push_back({negative_identity(), 1, kPi, "half-period reflection"});
    model.symmetries.push_back({OrthTransform::diagonal(1, -1, 1), -1, 0.0, "time reversal"});
    const bool equal = model.family.equal_masses();
    if (equal) {
        // set(t + π/2) = Rot(-90°) set(t), exchanging bodies 1 and 2
        model.symmetries.push_back({OrthTransform({1, 0, 2}, {1, -1, 1}), 1, kPi / 2,
                                    "quarter-period rotation"});
    }
    model.validate();

    constexpr std::size_t x = 0;
    constexpr std::size_t y = 1;
    std::vector<CoefficientKey> slots;
    std::vector<Coupling> couplings;
    std::vector<double> seed;

    auto add_slot = [&](CoefficientKey key, double value) {
        slots.push_back(key);
        seed.push_back(value);
        return slots.size() - 1;
    };

    if (equal) {
        for (int k = 1; k <= k_max; k += 2) {
            const double s = crisscross_coupling_sign(k);
            const auto a1 = add_slot({0, x, k, Basis::cos}, k == 1 ? 1.0 : 0.0);
            couplings.push_back({a1, {1, y, k, Basis::sin}, s}); // b_{2,k} = ±a_{1,k}
        }
        for (int k = 1; k <= k_max; k += 2) {
            const double s = crisscross_coupling_sign(k);
            const auto b1 = add_slot({0, y, k, Basis::sin}, 0.0);
            couplings.push_back({b1, {1, x, k, Basis::cos}, s}); // a_{2,k} = ±b_{1,k}
        }
        for (int k = 1; k <= k_max; k += 2) {
            const double s = crisscross_coupling_sign(k);
            const auto a3 = add_slot({2, x, k, Basis::cos}, k == 1 ? -1.0 : 0.0);
            couplings.push_back({a3, {2, y, k, Basis::sin}, s}); // b_{3,k} = ±a_{3,k}
        }
    } else {
        // Same k = 1 seed as the equal-mass case, written out per body:
        // x = (cos t, 0, -cos t), y = (0, -sin t, sin t).
        const std::array<double, 3> x1{1.0, 0.0, -1.0};
        const std::array<double, 3> y1{0.0, -1.0, 1.0};
        const double total = masses[0] + masses[1] + masses[2];
        double com_x = 0.0;
        double com_y = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            com_x += masses[i] * x1[i] / total;
            com_y += masses[i] * y1[i] / total;
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (int k = 1; k <= k_max; k += 2)
                add_slot({i, x, k, Basis::cos}, k == 1 ? x1[i] - com_x : 0.0);
            for (int k = 1; k <= k_max; k += 2)
                add_slot({i, y, k, Basis::sin}, k == 1 ? y1[i] - com_y : 0.0);
        }
    }

    auto layout = std::make_shared<const ParamLayout>(model, std::move(slots), std::move(couplings));
    return {std::move(model), ReducedParams{std::move(seed), std::move(layout)}};
}

FamilySetup build_choreography(int n, const std::array<FourierSeries, 3>& seed,
                               const ChoreographyShape& shape, int k_max, PotentialSpec potential)
{
    if (n < 2)
        throw std::invalid_argument("a choreography needs at least two bodies");
    if (k_max < 1)
        throw std::invalid_argument("k_max must be at least 1");

    OrbitModel model;
    model.k_max = k_max;
    model.potential = potential;
    model.family.kind = Family::choreography;
    model.family.m = n;
    model.family.parity = shape.parity;

    Generator g;
    g.kind = GeneratorKind::vector;
    g.series_parity = {shape.parity[0], shape.parity[1], shape.parity[2]};
    model.generators.push_back(g);
    for (int j = 0; j < n; ++j)
        model.bodies.push_back({0, OrthTransform{}, kTwoPi * j / n, 1.0});

    model.symmetries.push_back({OrthTransform{}, 1, kTwoPi / n, "choreography time shift"});
    bool all_sine = true;
    bool all_definite = true;
    std::array<int, 3> half_period{1, 1, 1};
    for (int c = 0; c < 3; ++c) {
        if (!shape.active[c])
            continue;
        all_sine = all_sine && shape.sine_only[c];
        if (shape.parity[c] == Parity::all)
            all_definite = false;
        else
            half_period[c] = shape.parity[c] == Parity::odd_only ? -1 : 1;
    }
    if (all_sine)
        model.symmetries.push_back({negative_identity(), -1, 0.0, "time reversal"});
    if (all_definite)
        model.symmetries.push_back({OrthTransform::diagonal(half_period[0], half_period[1],
                                                            half_period[2]),
                                    1, kPi, "half-period reflection"});
    model.validate();

    std::vector<CoefficientKey> slots;
    std::vector<double> values;
    for (std::size_t c = 0; c < 3; ++c) {
        if (!shape.active[c])
            continue;
        for (Basis basis : {Basis::sin, Basis::cos}) {
            if (basis == Basis::cos && shape.sine_only[c])
                continue;
            for (int k = 1; k <= k_max; ++k) {
                if (!parity_allows(shape.parity[c], k))
                    continue;
                slots.push_back({0, c, k, basis});
                values.push_back(basis == Basis::sin ? seed[c].sin_coeff(k) : seed[c].cos_coeff(k));
            }
        }
    }
    auto layout = std::make_shared<const ParamLayout>(model, std::move(slots));
    return {std::move(model), ReducedParams{std::move(values), std::move(layout)}};
}

ChoreographyShape figure_eight_shape()
{
    ChoreographyShape shape;
    shape.active = {true, true, false};
    shape.parity = {Parity::odd_only, Parity::even_only, Parity::all};
    shape.sine_only = {true, true, true};
    return shape;
}

std::array<FourierSeries, 3> figure_eight_seed()
{
    return {FourierSeries({{1, 1.0}}, {}, Parity::odd_only),
            FourierSeries({{2, 0.5}}, {}, Parity::even_only), FourierSeries{}};
}

FamilySetup build_family(const FamilyTag& tag, int k_max, PotentialSpec potential)
{
    switch (tag.kind) {
    case Family::cubic:
        return build_cubic_family(tag.m, k_max, potential);
    case Family::crisscross:
        return build_crisscross(tag.masses, k_max, potential);
    case Family::choreography: {
        if (tag.parity != figure_eight_shape().parity)
            throw std::invalid_argument("only the figure-eight choreography recipe can be rebuilt "
                                        "from a family tag");
        auto setup = build_choreography(tag.m, figure_eight_seed(), figure_eight_shape(), k_max,
                                        potential);
        return setup;
    }
    case Family::custom:
        break;
    }
    throw std::invalid_argument("custom models cannot be rebuilt from a family tag");
}

} // namespace nbody
