#pragma once

#include "nbody/descent.hpp"
#include "nbody/families.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nbody {

inline constexpr int kRecordSchemaVersion = 1;

enum class RecordStatus { seeded, converged, collision, escape, max_iters };

std::string to_string(RecordStatus status);
RecordStatus record_status_from_string(const std::string& name);

struct RecordCoefficient {
    CoefficientKey key;
    double value = 0.0;
    bool operator==(const RecordCoefficient&) const = default;
};

struct ObservableSummary {
    std::array<double, 3> J{0.0, 0.0, 0.0};
    /// Largest |Q_ij| over the quadrature nodes.
    double Q_max = 0.0;
    double E = 0.0;
    bool operator==(const ObservableSummary&) const = default;
};

struct DescentSettings {
    std::string rule = "preconditioned";
    double delta = 0.0;
    double grad_tol = 0.0;
    std::size_t max_iters = 0;
    double escape_radius = 0.0;
    std::size_t quadrature_nodes = 0;
    std::size_t iterations = 0;
    bool operator==(const DescentSettings&) const = default;
};

struct OrbitRecord {
    int schema_version = kRecordSchemaVersion;
    FamilyTag family;
    PotentialSpec potential;
    int k_max = kDefaultKMax;
    RecordStatus status = RecordStatus::seeded;
    std::vector<RecordCoefficient> coefficients;
    /// a_1 of the designated series; table exports divide by it (cubic).
    double scale = 0.0;
    std::optional<double> residual;
    std::optional<double> grad_norm;
    std::optional<ObservableSummary> observables;
    std::optional<DescentSettings> descent;

    bool operator==(const OrbitRecord& other) const;

    /// Throws RecordError when a converged record lacks residual or grad_norm.
    void validate() const;
};

/// Serialized text of a record (JSON, keys in a fixed order).
std::string dump_record(const OrbitRecord& record);
/// Parses and validates. Malformed text raises RecordError carrying the byte
/// offset; unknown keys and other schema versions are rejected.
OrbitRecord parse_record(const std::string& text);

/// Atomic write: temp file in the target directory, then rename.
void save_record(const OrbitRecord& record, const std::string& path);
OrbitRecord load_record(const std::string& path);

/// Rebuilds the family model and fills its parameters from the record.
FamilySetup setup_from_record(const OrbitRecord& record);

/// a_1 of the generator series used for normalization: the cubic generator,
/// body 1's x-series for the criss-cross, the first coordinate otherwise.
CoefficientKey scale_key(const OrbitModel& model);

ObservableSummary summarize_observables(const OrbitModel& model, const ReducedParams& params);

OrbitRecord make_record(const FamilySetup& setup, RecordStatus status);
OrbitRecord make_record(const OrbitModel& model, const RunResult& result,
                        const DescentSchedule& schedule, const StopCriteria& stop);

struct RecordCheck {
    double stored = 0.0;
    double recomputed = 0.0;
    bool passed = false;
};

/// Recomputes the residual of a converged record; passes when it is within
/// twice the stored value.
RecordCheck reverify(const OrbitRecord& record);

} // namespace nbody
