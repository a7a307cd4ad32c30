#pragma once

#include "nbody/model.hpp"
#include "nbody/params.hpp"

#include <array>

namespace nbody {

inline constexpr int kDefaultKMax = 27;

/// A symmetry-constrained model together with its seed parameters.
struct FamilySetup {
    OrbitModel model;
    ReducedParams params;
};

enum class ParityVerdict { safe, collision };

/// Loops of the cubic family meet pairwise at two antipodal points. With m
/// masses per loop, even m puts a mass at both intersections at once, so
/// masses on different loops collide. Throws std::invalid_argument for m < 1.
ParityVerdict collision_parity_check(int m);

/// 4m equal unit masses on four loops related by the Klein π-rotations.
/// One scalar generator f with odd-k sine harmonics; body (loop g, index j)
/// follows R_g (f(s), f(s + 2π/3), f(s + 4π/3)) with s = t + 2πj/m.
/// Seeded with the unit circle f = sin t. Throws CollisionParityError for
/// even m, std::invalid_argument for m < 1.
FamilySetup build_cubic_family(int m, int k_max = kDefaultKMax, PotentialSpec potential = {});

/// Planar three-body criss-cross: x_i = Σ a_{i,k} cos kt, y_i = Σ b_{i,k} sin kt,
/// odd k. For equal masses the coefficients of body 2 and the y-series of
/// body 3 follow a_{1,k}, b_{1,k}, a_{3,k} with sign -1 for k ≡ 1 (mod 4) and
/// +1 for k ≡ 3 (mod 4). Seed a_{1,1} = 1, b_{1,1} = 0, a_{3,1} = -1.
FamilySetup build_crisscross(std::array<double, 3> masses = {1.0, 1.0, 1.0},
                             int k_max = kDefaultKMax, PotentialSpec potential = {});

/// Sign relating the coupled criss-cross coefficients at harmonic k.
double crisscross_coupling_sign(int k);

/// Shape of a choreography generator: which coordinates move, their harmonic
/// parity, and whether they carry sine terms only.
struct ChoreographyShape {
    std::array<bool, 3> active{true, true, false};
    std::array<Parity, 3> parity{Parity::all, Parity::all, Parity::all};
    std::array<bool, 3> sine_only{false, false, false};
};

/// n equal unit masses following one closed curve with time offsets 2πj/n.
/// `seed` gives the three coordinate series of the curve; coefficients
/// outside the shape are dropped.
FamilySetup build_choreography(int n, const std::array<FourierSeries, 3>& seed,
                               const ChoreographyShape& shape, int k_max = kDefaultKMax,
                               PotentialSpec potential = {});

/// Lemniscate x = sin t, y = 0.5 sin 2t with odd-sine x and even-sine y: a
/// seed for the three-body figure-eight.
ChoreographyShape figure_eight_shape();
std::array<FourierSeries, 3> figure_eight_seed();

/// Rebuilds a family model with its default seed from its tag.
FamilySetup build_family(const FamilyTag& tag, int k_max = kDefaultKMax,
                         PotentialSpec potential = {});

} // namespace nbody
