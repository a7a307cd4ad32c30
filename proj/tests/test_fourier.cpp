#include "nbody/errors.hpp"
#include "nbody/fourier.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nbody;
using doctest::Approx;

namespace {

FourierSeries table1_m1()
{
    return FourierSeries(testing::kTable1M1, {}, Parity::odd_only);
}

FourierSeries random_series(std::mt19937& rng, int k_max, Parity parity = Parity::all)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierSeries s(parity);
    for (int k = 1; k <= k_max; ++k) {
        if (!parity_allows(parity, k))
            continue;
        s.set_sin(k, u(rng) / k);
        if (parity != Parity::odd_only || k % 2 == 1)
            s.set_cos(k, u(rng) / k);
    }
    return s;
}

} // namespace

TEST_CASE("eval examples")
{
    CHECK(eval(FourierSeries({{1, 1.0}}), kPi / 2) == Approx(1.0).epsilon(1e-15));
    CHECK(eval(table1_m1(), 0.0) == 0.0);
    // a_1 sin 2π/3 + a_5 sin 10π/3 + a_7 sin 14π/3
    CHECK(std::abs(eval(table1_m1(), kTwoPi / 3) - 0.866562) <= 1e-6);
    CHECK(std::abs(eval(table1_m1(), kTwoPi / 3) - 0.86656) <= 1e-5);
}

TEST_CASE("eval_deriv examples")
{
    CHECK(eval_deriv(FourierSeries({{1, 1.0}}), kPi / 2, 2) == Approx(-1.0));
    CHECK(std::abs(eval_deriv(table1_m1(), 0.0, 1) - 1.09077) <= 1e-4);
    const FourierSeries empty;
    for (double t : {0.0, 0.3, 2.0})
        for (int order : {1, 2})
            CHECK(eval_deriv(empty, t, order) == 0.0);
    CHECK_THROWS_AS(eval_deriv(table1_m1(), 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(eval_deriv(table1_m1(), 0.0, 0), std::invalid_argument);
}

TEST_CASE("normalize")
{
    auto [unit, scale] = normalize(FourierSeries({{1, 2.0}, {3, 0.5}}));
    CHECK(scale == 2.0);
    CHECK(unit.sin_coeff(1) == 1.0);
    CHECK(unit.sin_coeff(3) == 0.25);

    auto [flipped, negative] = normalize(FourierSeries({{1, -0.8}}));
    CHECK(negative == -0.8);
    CHECK(flipped.sin_coeff(1) == 1.0);

    CHECK_THROWS_AS(normalize(FourierSeries({{3, 0.5}})), NormalizationError);
    CHECK_THROWS_AS(normalize(FourierSeries({{1, 1e-16}})), NormalizationError);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        FourierSeries s = random_series(rng, 12);
        s.set_sin(1, 0.5 + trial);
        auto [n, a1] = normalize(s);
        const FourierSeries back = n.scaled(a1);
        for (int k = 0; k <= 12; ++k) {
            CHECK(back.sin_coeff(k) == Approx(s.sin_coeff(k)).epsilon(1e-15));
            CHECK(back.cos_coeff(k) == Approx(s.cos_coeff(k)).epsilon(1e-15));
        }
    }
}

TEST_CASE("rescale_period")
{
    const std::vector<FourierSeries> coords{table1_m1(), FourierSeries({{1, 2.0}}, {{3, 1.0}})};
    for (double alpha : {-1.0, -2.0, 1.0})
        CHECK(rescale_period(coords, {alpha, kTwoPi}) == coords);

    CHECK(ScalingLaw{-1.0, 2 * kTwoPi}.factor() == Approx(1.58740).epsilon(1e-5));
    CHECK(ScalingLaw{-2.0, 2 * kTwoPi}.factor() == Approx(1.41421).epsilon(1e-5));
    const auto scaled = rescale_period(coords, {-1.0, 2 * kTwoPi});
    CHECK(scaled[0].sin_coeff(3) == Approx(0.03282 * std::cbrt(4.0)));
    CHECK(scaled[1].cos_coeff(3) == Approx(std::cbrt(4.0)));
    CHECK(scaled[1].k_max() == coords[1].k_max());

    CHECK_THROWS_AS(ScalingLaw({2.0, kTwoPi}).factor(), std::invalid_argument);
    CHECK_THROWS_AS(ScalingLaw({3.0, kTwoPi}).factor(), std::invalid_argument);
    CHECK_THROWS_AS(ScalingLaw({0.0, kTwoPi}).factor(), std::invalid_argument);
    CHECK_THROWS_AS(rescale_period(coords, {-1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("parity masks are enforced at write time")
{
    FourierSeries odd(Parity::odd_only);
    odd.set_sin(3, 1.0);
    CHECK_THROWS_AS(odd.set_sin(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(odd.set_cos(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FourierSeries({{2, 1.0}}, {}, Parity::odd_only), std::invalid_argument);
    FourierSeries any;
    CHECK_THROWS_AS(any.set_sin(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(any.set_sin(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(any.set_cos(-1, 1.0), std::invalid_argument);
    any.set_cos(0, 0.5);
    CHECK(eval(any, 1.0) == 0.5);
    CHECK_THROWS_AS(any.set_sin(1, std::nan("")), std::invalid_argument);
}

TEST_CASE("property: linearity")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const FourierSeries a = random_series(rng, 15);
        const FourierSeries b = random_series(rng, 9);
        const double c = 0.37 * (trial - 4);
        const FourierSeries combo = c * a + b;
        for (int j = 0; j < 64; ++j) {
            const double t = kTwoPi * j / 64;
            CHECK(eval(combo, t) == Approx(c * eval(a, t) + eval(b, t)).epsilon(1e-13));
        }
    }
}

TEST_CASE("property: spectral derivatives agree with central differences to O(h^2)")
{
    std::mt19937 rng(3);
    const FourierSeries s = random_series(rng, 9);
    for (double t : {0.1, 1.3, 2.9, 5.0}) {
        double previous1 = 0.0;
        double previous2 = 0.0;
        for (double h : {1e-2, 5e-3, 2.5e-3}) {
            const double d1 = (eval(s, t + h) - eval(s, t - h)) / (2 * h);
            const double d2 = (eval(s, t + h) - 2 * eval(s, t) + eval(s, t - h)) / (h * h);
            const double e1 = std::abs(d1 - eval_deriv(s, t, 1));
            const double e2 = std::abs(d2 - eval_deriv(s, t, 2));
            if (previous1 > 0.0) {
                CHECK(previous1 / e1 == Approx(4.0).epsilon(0.05));
                CHECK(previous2 / e2 == Approx(4.0).epsilon(0.05));
            }
            previous1 = e1;
            previous2 = e2;
        }
    }
}

TEST_CASE("property: odd sine series flip under half-period shift and time reversal")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        FourierSeries s(Parity::odd_only);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 1; k <= 27; k += 2)
            s.set_sin(k, u(rng) / (k * k));
        for (int j = 0; j < 112; ++j) {
            const double t = kTwoPi * j / 112;
            CHECK(eval(s, t + kPi) == Approx(-eval(s, t)).epsilon(1e-12).scale(1.0));
            CHECK(eval(s, -t) == Approx(-eval(s, t)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("dense storage round-trips through maps")
{
    const FourierSeries s({{1, 0.5}, {4, -0.25}}, {{0, 1.0}, {2, 0.125}});
    CHECK(s.k_max() == 4);
    CHECK(s.sin_map() == std::map<int, double>{{1, 0.5}, {4, -0.25}});
    CHECK(s.cos_map() == std::map<int, double>{{0, 1.0}, {2, 0.125}});
    CHECK(s.sin_coeff(40) == 0.0);
    CHECK(FourierSeries(s.sin_map(), s.cos_map()) == s);
}
