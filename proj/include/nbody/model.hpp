#pragma once

#include "nbody/fourier.hpp"
#include "nbody/transform.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nbody {

/// Homogeneous pair potential V_ij = κ G m_i m_j r^α with κ = -1 for α < 0
/// and κ = +1 for 0 < α < 2, so the interaction is attractive either way.
struct PotentialSpec {
    double alpha = -1.0;
    double G = 1.0;
    /// Plummer softening, r² -> r² + ε². Diagnostics only; leave at 0 for orbits.
    double softening = 0.0;
    double collision_threshold = 1e-8;

    /// Throws std::invalid_argument for α >= 2, α == 0, negative softening.
    void validate() const;
};

enum class GeneratorKind {
    /// Three independent series, one per coordinate.
    vector,
    /// One scalar series f; coordinate c is f(t + coordinate_phase[c]).
    phased_scalar,
};

struct Generator {
    GeneratorKind kind = GeneratorKind::vector;
    std::array<double, 3> coordinate_phase{0.0, 0.0, 0.0};
    /// One entry per stored series (1 for phased_scalar, 3 for vector).
    std::vector<Parity> series_parity;

    std::size_t series_count() const { return kind == GeneratorKind::vector ? 3 : 1; }
    /// Series that drives coordinate c.
    std::size_t series_for(int c) const { return kind == GeneratorKind::vector ? c : 0; }
    double phase_for(int c) const { return kind == GeneratorKind::vector ? 0.0 : coordinate_phase[c]; }
};

/// Body trajectory x_b(t) = transform · g(t + phase), g = generators[generator].
struct BodyBinding {
    std::size_t generator = 0;
    OrthTransform transform;
    double phase = 0.0;
    double mass = 1.0;
};

enum class Family { cubic, crisscross, choreography, custom };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

struct FamilyTag {
    Family kind = Family::custom;
    /// Masses per loop (cubic) or number of bodies (choreography).
    int m = 0;
    /// Criss-cross masses.
    std::array<double, 3> masses{1.0, 1.0, 1.0};
    /// Choreography per-coordinate parity recipe.
    std::array<Parity, 3> parity{Parity::all, Parity::all, Parity::all};
    bool equal_masses() const { return masses[0] == masses[1] && masses[1] == masses[2]; }
};

/// Space-time symmetry of the body set:  set(σ t + τ) = R · set(t),
/// where bodies may be permuted among equal masses.
struct SymmetryElement {
    OrthTransform transform;
    int time_sign = 1;
    double time_shift = 0.0;
    std::string label;
};

/// Address of one coefficient in the model's full coefficient space.
enum class Basis { sin = 0, cos = 1 };

struct CoefficientKey {
    std::size_t generator = 0;
    std::size_t series = 0;
    int k = 1;
    Basis basis = Basis::sin;
    bool operator==(const CoefficientKey&) const = default;
};

std::string to_string(Basis basis);

struct OrbitModel {
    int k_max = 27;
    std::vector<Generator> generators;
    std::vector<BodyBinding> bodies;
    PotentialSpec potential;
    FamilyTag family;
    std::vector<SymmetryElement> symmetries;

    std::size_t body_count() const { return bodies.size(); }
    std::vector<double> masses() const;

    /// Size of the flat full coefficient vector: per generator and series,
    /// (k_max + 1) sine slots followed by (k_max + 1) cosine slots.
    std::size_t coefficient_count() const;
    std::size_t coefficient_index(const CoefficientKey& key) const;
    CoefficientKey coefficient_key(std::size_t index) const;

    /// Kinetic inertia of a full coefficient: Σ m_b × (coordinates it drives)
    /// over the bodies bound to its generator. The kinetic part of ∂S/∂c for
    /// a harmonic-k coefficient c is π · inertia · k² · c.
    double coefficient_inertia(std::size_t generator, std::size_t series) const;

    /// Throws std::invalid_argument on dangling generator ids, non-positive
    /// masses, or inconsistent series counts.
    void validate() const;
};

} // namespace nbody
