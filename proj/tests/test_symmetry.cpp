#include "nbody/action.hpp"
#include "nbody/errors.hpp"
#include "nbody/families.hpp"
#include "nbody/sampler.hpp"
#include "nbody/symmetry_check.hpp"

#include "support.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace nbody;
using doctest::Approx;

namespace {

bool contains(const std::vector<OrthTransform>& set, const OrthTransform& g)
{
    return std::find(set.begin(), set.end(), g) != set.end();
}

double max_diff(const Vec3& a, const Vec3& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("klein elements")
{
    const auto klein = klein_elements();
    CHECK(klein.size() == 4);
    CHECK(contains(klein, OrthTransform{}));
    CHECK(contains(klein, OrthTransform::diagonal(1, -1, -1)));
    CHECK(contains(klein, OrthTransform::diagonal(-1, 1, -1)));
    CHECK(contains(klein, OrthTransform::diagonal(-1, -1, 1)));
    const Vec3 y = OrthTransform::diagonal(1, -1, -1).apply(Vec3(0.1, 0.2, 0.3));
    CHECK(max_diff(y, Vec3(0.1, -0.2, -0.3)) == 0.0);
    for (const auto& g : klein) {
        CHECK(g * g == OrthTransform{});
        CHECK(g.inverse() == g);
    }
    CHECK(is_closed(klein));
}

TEST_CASE("A4 elements")
{
    const auto a4 = a4_elements();
    CHECK(a4.size() == 12);
    CHECK(std::set<OrthTransform>(a4.begin(), a4.end()).size() == 12);
    for (const auto& g : a4) {
        CHECK(g.determinant() == 1);
        CHECK(g.negative_entries() % 2 == 0);
        CHECK(g.matrix().determinant() == Approx(1.0));
        CHECK((g.matrix() * g.matrix().transpose() - Mat3::Identity()).norm() == 0.0);
    }
    CHECK(contains(a4, cyclic_permutation()));
    CHECK(is_closed(a4));
    for (const auto& a : a4)
        for (const auto& b : a4)
            CHECK(contains(a4, a * b));

    // Klein set is a normal subgroup of A4
    const auto klein = klein_elements();
    for (const auto& g : a4)
        for (const auto& h : klein)
            CHECK(contains(klein, g * h * g.inverse()));
    CHECK(all_signed_permutations().size() == 48);
    CHECK(group_closure(klein_elements()).size() == 4);
}

TEST_CASE("signed permutations are validated")
{
    CHECK_THROWS_AS(OrthTransform({0, 0, 1}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(OrthTransform({0, 1, 2}, {1, 2, 1}), std::invalid_argument);
    Mat3 bad = Mat3::Identity();
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(OrthTransform::from_matrix(bad), std::invalid_argument);
    for (const auto& g : all_signed_permutations())
        CHECK(OrthTransform::from_matrix(g.matrix()) == g);
}

TEST_CASE("collision parity")
{
    CHECK(collision_parity_check(1) == ParityVerdict::safe);
    CHECK(collision_parity_check(2) == ParityVerdict::collision);
    CHECK(collision_parity_check(3) == ParityVerdict::safe);
    CHECK(collision_parity_check(10) == ParityVerdict::collision);
    CHECK_THROWS_AS(collision_parity_check(0), std::invalid_argument);
}

TEST_CASE("cubic family construction")
{
    const FamilySetup one = build_cubic_family(1);
    CHECK(one.model.body_count() == 4);
    CHECK(one.params.values.size() == 14);
    for (std::size_t i = 0; i < one.params.values.size(); ++i) {
        const CoefficientKey& key = one.params.layout->slot(i);
        CHECK(key.basis == Basis::sin);
        CHECK(key.k == static_cast<int>(2 * i + 1));
    }
    CHECK(one.params.values[0] == 1.0);

    CHECK_THROWS_AS(build_cubic_family(2), CollisionParityError);
    CHECK_THROWS_AS(build_cubic_family(0), std::invalid_argument);
    CHECK_THROWS_AS(build_cubic_family(-3), std::invalid_argument);

    const FamilySetup three = build_cubic_family(3);
    CHECK(three.model.body_count() == 12);
    std::vector<OrthTransform> spatial;
    for (const auto& s : three.model.symmetries)
        if (s.time_sign == 1 && s.time_shift == 0.0)
            spatial.push_back(s.transform);
    CHECK(spatial.size() == 12);
    for (const auto& g : a4_elements())
        CHECK(contains(spatial, g));

    // body set invariant under x -> y -> z at sampled times
    const QuadratureGrid grid = QuadratureGrid::for_k_max(27);
    std::mt19937 rng(1);
    const ReducedParams p = testing::jitter(three.params, 0.05, rng);
    const SampledTrajectory traj = sample_positions(three.model, p, grid);
    const auto masses = three.model.masses();
    for (std::size_t j = 0; j < grid.N; j += 7) {
        auto config = traj.configuration(j);
        auto rotated = config;
        for (auto& x : rotated)
            x = cyclic_permutation().apply(x);
        CHECK(set_distance(config, rotated, masses) <= 1e-12);
    }
    // the Klein-only family for m = 1 is not cyclically symmetric
    const SampledTrajectory t1 = sample_positions(one.model, testing::jitter(one.params, 0.05, rng), grid);
    auto config = t1.configuration(5);
    auto rotated = config;
    for (auto& x : rotated)
        x = cyclic_permutation().apply(x);
    CHECK(set_distance(config, rotated, one.model.masses()) > 1e-3);
}

TEST_CASE("criss-cross construction")
{
    CHECK(crisscross_coupling_sign(1) == -1.0);
    CHECK(crisscross_coupling_sign(5) == -1.0);
    CHECK(crisscross_coupling_sign(13) == -1.0);
    CHECK(crisscross_coupling_sign(3) == 1.0);
    CHECK(crisscross_coupling_sign(7) == 1.0);

    const FamilySetup eq = build_crisscross();
    CHECK(eq.model.body_count() == 3);
    CHECK(eq.params.values.size() == 3 * 14);
    const ParamLayout& layout = *eq.params.layout;
    const auto seed_at = [&](CoefficientKey key) { return eq.params.values[layout.find_slot(key)]; };
    CHECK(seed_at({0, 0, 1, Basis::cos}) == 1.0);
    CHECK(seed_at({0, 1, 1, Basis::sin}) == 0.0);
    CHECK(seed_at({2, 0, 1, Basis::cos}) == -1.0);

    // a_{2,k} = s b_{1,k}, b_{2,k} = s a_{1,k}, b_{3,k} = s a_{3,k}
    std::mt19937 rng(2);
    const ReducedParams p = testing::jitter(eq.params, 0.1, rng);
    const auto full = p.expand();
    const auto& m = eq.model;
    for (int k = 1; k <= 27; k += 2) {
        const double s = crisscross_coupling_sign(k);
        CHECK(full[m.coefficient_index({1, 0, k, Basis::cos})] == s * full[m.coefficient_index({0, 1, k, Basis::sin})]);
        CHECK(full[m.coefficient_index({1, 1, k, Basis::sin})] == s * full[m.coefficient_index({0, 0, k, Basis::cos})]);
        CHECK(full[m.coefficient_index({2, 1, k, Basis::sin})] == s * full[m.coefficient_index({2, 0, k, Basis::cos})]);
        CHECK(full[m.coefficient_index({0, 0, k, Basis::sin})] == 0.0);
        CHECK(full[m.coefficient_index({0, 1, k, Basis::cos})] == 0.0);
    }

    const FamilySetup unequal = build_crisscross({1.0, 2.0, 3.0});
    CHECK(unequal.params.values.size() == 3 * 2 * 14);
    CHECK(unequal.params.layout->couplings().empty());
    // seed center of mass removed
    const auto tu = sample_positions(unequal.model, unequal.params, QuadratureGrid{16});
    for (std::size_t j = 0; j < 16; ++j) {
        Vec3 com = Vec3::Zero();
        for (std::size_t b = 0; b < 3; ++b)
            com += unequal.model.bodies[b].mass * tu.position(b, j);
        CHECK(com.norm() <= 1e-14);
    }

    CHECK_THROWS_AS(build_crisscross({1.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_crisscross({1.0, -2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("sample_positions examples")
{
    const FamilySetup one = build_cubic_family(1);
    const SampledTrajectory traj = sample_at(one.model, one.params.expand(), {0.0}, 1);
    const Vec3 expected(0.0, std::sin(kTwoPi / 3), std::sin(2 * kTwoPi / 3));
    CHECK(max_diff(traj.position(0, 0), expected) <= 1e-15);
    CHECK(std::abs(traj.position(0, 0).y() - 0.86603) <= 1e-5);
    bool found = false;
    for (std::size_t b = 0; b < one.model.body_count(); ++b)
        if (one.model.bodies[b].transform == OrthTransform::diagonal(1, -1, -1)) {
            found = true;
            CHECK(max_diff(traj.position(b, 0), Vec3(0.0, -0.86603, 0.86603)) <= 1e-5);
        }
    CHECK(found);

    // reference criss-cross coefficients summed at t = 0 gives the listed x_1 = 1.07590
    FamilySetup cc = build_crisscross();
    const ParamLayout& layout = *cc.params.layout;
    for (const auto& [k, row] : testing::kTable3) {
        cc.params.values[layout.find_slot({0, 0, k, Basis::cos})] = row[0];
        cc.params.values[layout.find_slot({0, 1, k, Basis::sin})] = row[1];
        cc.params.values[layout.find_slot({2, 0, k, Basis::cos})] = row[2];
    }
    const SampledTrajectory t3 = sample_at(cc.model, cc.params.expand(), {0.0}, 1);
    CHECK(std::abs(t3.position(0, 0).x() - 1.07590) <= 1e-5);
    CHECK(t3.position(0, 0).y() == 0.0);

    // layout mismatch
    const FamilySetup three = build_cubic_family(3);
    CHECK_THROWS_AS(sample_positions(three.model, build_crisscross().params, QuadratureGrid{112}), LayoutError);
}

TEST_CASE("expand and reduce are inverse")
{
    std::mt19937 rng(4);
    for (const FamilySetup& setup : {build_cubic_family(3), build_crisscross(), build_crisscross({1, 2, 3})}) {
        const ReducedParams p = testing::jitter(setup.params, 0.2, rng);
        const auto full = p.expand();
        CHECK(full.size() == setup.model.coefficient_count());
        CHECK(p.layout->reduce(full) == p.values);
        CHECK(p.layout->expand(p.layout->reduce(full)) == full);
    }
}

TEST_CASE("layouts reject double ownership and bad keys")
{
    const FamilySetup setup = build_crisscross();
    const OrbitModel& model = setup.model;
    CHECK_THROWS_AS(ParamLayout(model, {{0, 0, 1, Basis::cos}, {0, 0, 1, Basis::cos}}), LayoutError);
    CHECK_THROWS_AS(ParamLayout(model, {{0, 0, 1, Basis::cos}, {1, 1, 1, Basis::sin}},
                                {{0, {1, 1, 1, Basis::sin}, -1.0}}),
                    LayoutError);
    CHECK_THROWS_AS(ParamLayout(model, {{0, 0, 2, Basis::cos}}), LayoutError);
    CHECK_THROWS_AS(ParamLayout(model, {{5, 0, 1, Basis::cos}}), LayoutError);
    CHECK_THROWS_AS(ParamLayout(model, {{0, 0, 29, Basis::cos}}), LayoutError);
}

TEST_CASE("project_gradient")
{
    const FamilySetup setup = build_crisscross();
    const std::vector<double> zero(setup.model.coefficient_count(), 0.0);
    const auto reduced = project_gradient(zero, setup.params);
    CHECK(std::all_of(reduced.begin(), reduced.end(), [](double g) { return g == 0.0; }));

    // each slot collects the signed sum of its coupled coefficients
    std::vector<double> ones(setup.model.coefficient_count(), 1.0);
    const auto summed = project_gradient(ones, setup.params);
    const ParamLayout& layout = *setup.params.layout;
    for (std::size_t i = 0; i < layout.size(); ++i)
        CHECK(summed[i] == 1.0 + crisscross_coupling_sign(layout.slot(i).k));
}

TEST_CASE("cubic kinetic gradient is four single-body contributions")
{
    const FamilySetup setup = build_cubic_family(1, 27, PotentialSpec{-1.0, 0.0});
    std::mt19937 rng(8);
    const ReducedParams p = testing::jitter(setup.params, 0.3, rng);
    const auto g = gradient(setup.model, p, QuadratureGrid::for_k_max(27));
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const int k = p.layout->slot(i).k;
        const double single_body = kPi * 3.0 * k * k * p.values[i];
        CHECK(g[i] == Approx(4.0 * single_body).epsilon(1e-12));
    }
}

TEST_CASE("verify_symmetry")
{
    const QuadratureGrid grid = QuadratureGrid::for_k_max(27);
    const FamilySetup one = build_cubic_family(1);
    const SymmetryReport seeded = verify_symmetry(one.model, one.params, grid, 1e-12);
    CHECK(seeded.passed);
    CHECK(seeded.failures.empty());

    // a coefficient outside the reduced set breaks it
    auto full = one.params.expand();
    full[one.model.coefficient_index({0, 0, 2, Basis::sin})] = 1e-3;
    const SymmetryReport broken = verify_symmetry(one.model, full, grid, 1e-12);
    CHECK_FALSE(broken.passed);
    CHECK_FALSE(broken.failures.empty());
    CHECK(broken.worst > 1e-4);

    const FamilySetup& three = testing::converged_cubic(3);
    const SymmetryReport converged = verify_symmetry(three.model, three.params, grid);
    CHECK(converged.passed);
    bool has_cyclic = false;
    for (const auto& s : three.model.symmetries)
        has_cyclic = has_cyclic || s.transform == cyclic_permutation();
    CHECK(has_cyclic);
}

TEST_CASE("property: random parameters keep every family's symmetry")
{
    const QuadratureGrid grid = QuadratureGrid::for_k_max(27);
    std::mt19937 rng(12);
    for (const FamilySetup& setup : {build_cubic_family(1), build_cubic_family(3), build_cubic_family(5),
                                     build_crisscross(), build_crisscross({1, 2, 3}),
                                     build_family(FamilyTag{Family::choreography, 3, {1, 1, 1},
                                                            figure_eight_shape().parity})}) {
        for (int trial = 0; trial < 3; ++trial) {
            const ReducedParams p = testing::jitter(setup.params, 0.1, rng);
            const SymmetryReport r = verify_symmetry(setup.model, p, grid, 1e-12);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("property: transforming the bindings transforms the samples")
{
    std::mt19937 rng(13);
    const FamilySetup setup = build_cubic_family(3);
    const ReducedParams p = testing::jitter(setup.params, 0.1, rng);
    const QuadratureGrid grid{40};
    const SampledTrajectory base = sample_positions(setup.model, p, grid, 1);
    for (const auto& g : all_signed_permutations()) {
        OrbitModel moved = setup.model;
        for (auto& b : moved.bodies)
            b.transform = g * b.transform;
        const SampledTrajectory image = sample_at(moved, p.expand(), grid.nodes(), 1);
        double worst = 0.0;
        for (std::size_t b = 0; b < moved.body_count(); ++b)
            for (std::size_t j = 0; j < grid.N; ++j) {
                worst = std::max(worst, max_diff(image.position(b, j), g.apply(base.position(b, j))));
                worst = std::max(worst, max_diff(image.velocity(b, j), g.apply(base.velocity(b, j))));
            }
        CHECK(worst == 0.0);
    }
}

TEST_CASE("set distance uses optimal matching among equal masses")
{
    const std::vector<Vec3> a{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
    const std::vector<Vec3> b{Vec3(2, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)};
    CHECK(set_distance(a, b, std::vector<double>{1, 1, 1}) == 0.0);
    // unequal masses forbid the swap
    CHECK(set_distance(a, b, std::vector<double>{1, 2, 3}) == Approx(2.0));
    // greedy pairs 0.9 with 1 and leaves 1.5 for 0
    const std::vector<Vec3> c{Vec3(0, 0, 0), Vec3(1, 0, 0)};
    const std::vector<Vec3> d{Vec3(0.9, 0, 0), Vec3(1.5, 0, 0)};
    CHECK(set_distance(c, d, std::vector<double>{1, 1}) == Approx(0.9));
}
