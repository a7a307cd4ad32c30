#pragma once

#include "nbody/model.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nbody {

/// A full coefficient that follows a reduced slot with a fixed sign.
struct Coupling {
    std::size_t slot = 0;
    CoefficientKey target;
    double sign = 1.0;
};

/// Maps a flat vector of free coefficients onto the model's full coefficient
/// space. Each slot owns one primary coefficient and any number of coupled
/// ones (value = sign · slot value); every other full coefficient is zero.
class ParamLayout {
public:
    /// Throws LayoutError if a full coefficient is reachable from more than
    /// one slot, if a key is out of range, or if a key violates its series parity.
    ParamLayout(const OrbitModel& model, std::vector<CoefficientKey> slots,
                std::vector<Coupling> couplings = {});

    std::size_t size() const { return slots_.size(); }
    std::size_t full_size() const { return full_size_; }
    int k_max() const { return k_max_; }

    const std::vector<CoefficientKey>& slots() const { return slots_; }
    const std::vector<Coupling>& couplings() const { return couplings_; }
    const CoefficientKey& slot(std::size_t i) const { return slots_[i]; }

    /// Σ over the slot's full coefficients of their kinetic inertia (the
    /// diagonal of the kinetic Hessian divided by π k²).
    double slot_inertia(std::size_t i) const { return inertia_[i]; }

    std::vector<double> expand(std::span<const double> values) const;
    /// Reads each slot's primary coefficient.
    std::vector<double> reduce(std::span<const double> full) const;
    /// Chain rule: each slot receives the signed sum of the gradients of the
    /// full coefficients it drives.
    std::vector<double> project(std::span<const double> full_gradient) const;

    /// Slot index holding `key` as its primary coefficient, or size() if none.
    std::size_t find_slot(const CoefficientKey& key) const;

    /// True when this layout was built for a model with the same coefficient space.
    bool compatible_with(const OrbitModel& model) const;

private:
    struct Target {
        std::size_t index;
        double sign;
    };
    std::vector<CoefficientKey> slots_;
    std::vector<Coupling> couplings_;
    std::vector<std::vector<Target>> targets_; // per slot, primary first
    std::vector<double> inertia_;
    std::size_t full_size_ = 0;
    int k_max_ = 0;
};

/// Descent variables: the free coefficient values plus the layout that gives
/// them meaning.
struct ReducedParams {
    std::vector<double> values;
    std::shared_ptr<const ParamLayout> layout;

    std::vector<double> expand() const;
    /// Throws LayoutError unless the layout exists, matches the value count,
    /// and matches the model's coefficient space.
    void check(const OrbitModel& model) const;
};

std::vector<double> project_gradient(std::span<const double> full_gradient,
                                     const ReducedParams& params);

/// Layout whose slots are every coefficient allowed by the generators'
/// parity masks (sin k >= 1, cos k >= 1; the constant term is left out).
ParamLayout free_layout(const OrbitModel& model);

/// Per-generator FourierSeries view of a full coefficient vector.
std::vector<std::vector<FourierSeries>> to_series(const OrbitModel& model,
                                                  std::span<const double> full);

} // namespace nbody
