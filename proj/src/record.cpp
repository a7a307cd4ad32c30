#include "nbody/record.hpp"

#include "nbody/dynamics.hpp"
#include "nbody/errors.hpp"
#include "nbody/sampler.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nbody {

using nlohmann::ordered_json;

namespace {

const char* parity_name(Parity p)
{
    switch (p) {
    case Parity::all:
        return "all";
    case Parity::odd_only:
        return "odd";
    case Parity::even_only:
        return "even";
    }
    return "all";
}

Parity parity_from_name(const std::string& name)
{
    if (name == "all")
        return Parity::all;
    if (name == "odd")
        return Parity::odd_only;
    if (name == "even")
        return Parity::even_only;
    throw RecordError("unknown parity '" + name + "'");
}

void require_keys(const ordered_json& j, const std::string& where, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {})
{
    if (!j.is_object())
        throw RecordError(where + ": expected an object");
    std::set<std::string> known;
    for (const char* k : required) {
        known.insert(k);
        if (!j.contains(k))
            throw RecordError(where + ": missing key '" + k + "'");
    }
    for (const char* k : optional)
        known.insert(k);
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw RecordError(where + ": unknown key '" + item.key() + "'");
}

template <typename T>
T get(const ordered_json& j, const char* key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw RecordError(where + "." + key + ": " + e.what());
    }
}

std::array<double, 3> get_triple(const ordered_json& j, const char* key, const std::string& where)
{
    const auto v = get<std::vector<double>>(j, key, where);
    if (v.size() != 3)
        throw RecordError(where + "." + key + ": expected 3 numbers");
    return {v[0], v[1], v[2]};
}

// nlohmann stores non-finite doubles as null; keep them out of records.
double finite_or_throw(double v, const char* what)
{
    if (!std::isfinite(v))
        throw RecordError(std::string("non-finite ") + what);
    return v;
}

} // namespace

std::string to_string(RecordStatus status)
{
    switch (status) {
    case RecordStatus::seeded:
        return "seeded";
    case RecordStatus::converged:
        return "converged";
    case RecordStatus::collision:
        return "collision";
    case RecordStatus::escape:
        return "escape";
    case RecordStatus::max_iters:
        return "max_iters";
    }
    return "seeded";
}

RecordStatus record_status_from_string(const std::string& name)
{
    for (auto s : {RecordStatus::seeded, RecordStatus::converged, RecordStatus::collision,
                   RecordStatus::escape, RecordStatus::max_iters})
        if (to_string(s) == name)
            return s;
    throw RecordError("unknown status '" + name + "'");
}

bool OrbitRecord::operator==(const OrbitRecord& o) const
{
    const bool family_equal = family.kind == o.family.kind && family.m == o.family.m &&
                              family.masses == o.family.masses && family.parity == o.family.parity;
    const bool potential_equal = potential.alpha == o.potential.alpha && potential.G == o.potential.G &&
                                 potential.softening == o.potential.softening &&
                                 potential.collision_threshold == o.potential.collision_threshold;
    return schema_version == o.schema_version && family_equal && potential_equal && k_max == o.k_max &&
           status == o.status && coefficients == o.coefficients && scale == o.scale &&
           residual == o.residual && grad_norm == o.grad_norm && observables == o.observables &&
           descent == o.descent;
}

void OrbitRecord::validate() const
{
    if (schema_version != kRecordSchemaVersion)
        throw RecordError("unsupported schema version " + std::to_string(schema_version));
    if (k_max < 1)
        throw RecordError("k_max must be positive");
    if (status == RecordStatus::converged && (!residual || !grad_norm))
        throw RecordError("record marked converged must carry residual and grad_norm");
    try {
        potential.validate();
    } catch (const std::invalid_argument& e) {
        throw RecordError(e.what());
    }
}

std::string dump_record(const OrbitRecord& r)
{
    r.validate();
    ordered_json j;
    j["schema_version"] = r.schema_version;
    ordered_json fam;
    fam["kind"] = to_string(r.family.kind);
    fam["m"] = r.family.m;
    fam["masses"] = r.family.masses;
    fam["parity"] = {parity_name(r.family.parity[0]), parity_name(r.family.parity[1]),
                     parity_name(r.family.parity[2])};
    j["family"] = fam;
    j["potential"] = {{"alpha", r.potential.alpha},
                      {"G", r.potential.G},
                      {"softening", r.potential.softening},
                      {"collision_threshold", r.potential.collision_threshold}};
    j["k_max"] = r.k_max;
    j["status"] = to_string(r.status);
    j["scale"] = finite_or_throw(r.scale, "scale");
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : r.coefficients)
        coeffs.push_back({{"generator", c.key.generator},
                          {"series", c.key.series},
                          {"k", c.key.k},
                          {"basis", to_string(c.key.basis)},
                          {"value", finite_or_throw(c.value, "coefficient")}});
    j["coefficients"] = coeffs;
    if (r.residual)
        j["residual"] = finite_or_throw(*r.residual, "residual");
    if (r.grad_norm)
        j["grad_norm"] = finite_or_throw(*r.grad_norm, "grad_norm");
    if (r.observables)
        j["observables"] = {{"J", r.observables->J}, {"Q_max", r.observables->Q_max}, {"E", r.observables->E}};
    if (r.descent) {
        const auto& d = *r.descent;
        j["descent"] = {{"rule", d.rule},
                        {"delta", d.delta},
                        {"grad_tol", d.grad_tol},
                        {"max_iters", d.max_iters},
                        {"escape_radius", d.escape_radius},
                        {"quadrature_nodes", d.quadrature_nodes},
                        {"iterations", d.iterations}};
    }
    return j.dump(2) + "\n";
}

OrbitRecord parse_record(const std::string& text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw RecordError(std::string("malformed record: ") + e.what(), e.byte);
    }

    require_keys(j, "record", {"schema_version", "family", "potential", "k_max", "status", "scale", "coefficients"},
                 {"residual", "grad_norm", "observables", "descent"});
    OrbitRecord r;
    r.schema_version = get<int>(j, "schema_version", "record");
    if (r.schema_version != kRecordSchemaVersion)
        throw RecordError("unsupported schema version " + std::to_string(r.schema_version));

    const auto& fam = j["family"];
    require_keys(fam, "family", {"kind", "m", "masses", "parity"});
    try {
        r.family.kind = family_from_string(get<std::string>(fam, "kind", "family"));
    } catch (const std::invalid_argument& e) {
        throw RecordError(e.what());
    }
    r.family.m = get<int>(fam, "m", "family");
    r.family.masses = get_triple(fam, "masses", "family");
    const auto parity = get<std::vector<std::string>>(fam, "parity", "family");
    if (parity.size() != 3)
        throw RecordError("family.parity: expected 3 entries");
    for (int c = 0; c < 3; ++c)
        r.family.parity[c] = parity_from_name(parity[c]);

    const auto& pot = j["potential"];
    require_keys(pot, "potential", {"alpha", "G", "softening", "collision_threshold"});
    r.potential.alpha = get<double>(pot, "alpha", "potential");
    r.potential.G = get<double>(pot, "G", "potential");
    r.potential.softening = get<double>(pot, "softening", "potential");
    r.potential.collision_threshold = get<double>(pot, "collision_threshold", "potential");

    r.k_max = get<int>(j, "k_max", "record");
    r.status = record_status_from_string(get<std::string>(j, "status", "record"));
    r.scale = get<double>(j, "scale", "record");

    if (!j["coefficients"].is_array())
        throw RecordError("coefficients: expected an array");
    for (const auto& c : j["coefficients"]) {
        require_keys(c, "coefficient", {"generator", "series", "k", "basis", "value"});
        RecordCoefficient rc;
        rc.key.generator = get<std::size_t>(c, "generator", "coefficient");
        rc.key.series = get<std::size_t>(c, "series", "coefficient");
        rc.key.k = get<int>(c, "k", "coefficient");
        const auto basis = get<std::string>(c, "basis", "coefficient");
        if (basis == "sin")
            rc.key.basis = Basis::sin;
        else if (basis == "cos")
            rc.key.basis = Basis::cos;
        else
            throw RecordError("coefficient: unknown basis '" + basis + "'");
        rc.value = get<double>(c, "value", "coefficient");
        r.coefficients.push_back(rc);
    }

    if (j.contains("residual"))
        r.residual = get<double>(j, "residual", "record");
    if (j.contains("grad_norm"))
        r.grad_norm = get<double>(j, "grad_norm", "record");
    if (j.contains("observables")) {
        const auto& o = j["observables"];
        require_keys(o, "observables", {"J", "Q_max", "E"});
        r.observables = ObservableSummary{get_triple(o, "J", "observables"), get<double>(o, "Q_max", "observables"),
                                          get<double>(o, "E", "observables")};
    }
    if (j.contains("descent")) {
        const auto& d = j["descent"];
        require_keys(d, "descent",
                     {"rule", "delta", "grad_tol", "max_iters", "escape_radius", "quadrature_nodes", "iterations"});
        DescentSettings s;
        s.rule = get<std::string>(d, "rule", "descent");
        s.delta = get<double>(d, "delta", "descent");
        s.grad_tol = get<double>(d, "grad_tol", "descent");
        s.max_iters = get<std::size_t>(d, "max_iters", "descent");
        s.escape_radius = get<double>(d, "escape_radius", "descent");
        s.quadrature_nodes = get<std::size_t>(d, "quadrature_nodes", "descent");
        s.iterations = get<std::size_t>(d, "iterations", "descent");
        r.descent = s;
    }
    r.validate();
    return r;
}

void save_record(const OrbitRecord& record, const std::string& path)
{
    const std::string text = dump_record(record);
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw RecordError("cannot write " + tmp.string());
        os << text;
        os.flush();
        if (!os)
            throw RecordError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw RecordError("cannot rename onto " + path);
    }
}

OrbitRecord load_record(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw RecordError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_record(ss.str());
}

CoefficientKey scale_key(const OrbitModel& model)
{
    CoefficientKey key;
    key.generator = 0;
    key.series = 0;
    key.k = 1;
    key.basis = model.family.kind == Family::crisscross ? Basis::cos : Basis::sin;
    return key;
}

FamilySetup setup_from_record(const OrbitRecord& record)
{
    record.validate();
    FamilySetup setup;
    try {
        setup = build_family(record.family, record.k_max, record.potential);
    } catch (const CollisionParityError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw RecordError(std::string("cannot rebuild model: ") + e.what());
    }
    const ParamLayout& layout = *setup.params.layout;
    std::vector<double> values(layout.size(), 0.0);
    std::vector<bool> seen(layout.size(), false);
    for (const auto& c : record.coefficients) {
        const std::size_t slot = layout.find_slot(c.key);
        if (slot == layout.size())
            throw RecordError("coefficient " + to_string(c.key.basis) + " k=" + std::to_string(c.key.k) +
                              " is not a free slot of the family");
        if (seen[slot])
            throw RecordError("duplicate coefficient k=" + std::to_string(c.key.k));
        seen[slot] = true;
        values[slot] = c.value;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw RecordError("record misses coefficient k=" + std::to_string(layout.slot(i).k));
    setup.params.values = std::move(values);
    return setup;
}

ObservableSummary summarize_observables(const OrbitModel& model, const ReducedParams& params)
{
    const QuadratureGrid grid = QuadratureGrid::for_k_max(model.k_max);
    const SampledTrajectory traj = sample_positions(model, params, grid, 1);
    const std::vector<double> masses = model.masses();
    ObservableSummary s;
    for (std::size_t j = 0; j < grid.N; ++j) {
        const Observables o = observables(masses, traj.configuration(j), traj.velocity_configuration(j), model.potential);
        s.Q_max = std::max(s.Q_max, max_abs(o.Q));
        if (j == 0) {
            s.J = {o.J.x(), o.J.y(), o.J.z()};
            s.E = o.E;
        }
    }
    return s;
}

namespace {

std::vector<RecordCoefficient> coefficients_of(const ReducedParams& params)
{
    std::vector<RecordCoefficient> out;
    for (std::size_t i = 0; i < params.values.size(); ++i)
        out.push_back({params.layout->slot(i), params.values[i]});
    return out;
}

double scale_of(const OrbitModel& model, const ReducedParams& params)
{
    return params.expand()[model.coefficient_index(scale_key(model))];
}

} // namespace

OrbitRecord make_record(const FamilySetup& setup, RecordStatus status)
{
    OrbitRecord r;
    r.family = setup.model.family;
    r.potential = setup.model.potential;
    r.k_max = setup.model.k_max;
    r.status = status;
    r.coefficients = coefficients_of(setup.params);
    r.scale = scale_of(setup.model, setup.params);
    return r;
}

OrbitRecord make_record(const OrbitModel& model, const RunResult& result, const DescentSchedule& schedule,
                        const StopCriteria& stop)
{
    OrbitRecord r = make_record(FamilySetup{model, result.params}, RecordStatus::max_iters);
    switch (result.outcome) {
    case Outcome::converged:
        r.status = RecordStatus::converged;
        break;
    case Outcome::collision:
        r.status = RecordStatus::collision;
        break;
    case Outcome::escape:
        r.status = RecordStatus::escape;
        break;
    case Outcome::max_iters:
        r.status = RecordStatus::max_iters;
        break;
    }
    if (std::isfinite(result.grad_norm))
        r.grad_norm = result.grad_norm;
    if (result.residual && std::isfinite(*result.residual))
        r.residual = result.residual;
    if (r.status == RecordStatus::converged || r.status == RecordStatus::max_iters)
        r.observables = summarize_observables(model, result.params);

    DescentSettings d;
    switch (schedule.rule) {
    case DescentSchedule::Rule::uniform:
        d.rule = "uniform";
        break;
    case DescentSchedule::Rule::preconditioned:
        d.rule = "preconditioned";
        break;
    case DescentSchedule::Rule::custom:
        d.rule = "custom";
        break;
    }
    d.delta = schedule.delta;
    d.grad_tol = stop.grad_tol;
    d.max_iters = stop.max_iters;
    d.escape_radius = stop.escape_radius;
    d.quadrature_nodes = stop.quadrature_nodes ? stop.quadrature_nodes : QuadratureGrid::for_k_max(model.k_max).N;
    d.iterations = result.iterations;
    r.descent = d;
    return r;
}

RecordCheck reverify(const OrbitRecord& record)
{
    if (record.status != RecordStatus::converged || !record.residual)
        throw RecordError("only converged records can be re-verified");
    const FamilySetup setup = setup_from_record(record);
    std::size_t nodes = QuadratureGrid::for_k_max(record.k_max).N;
    if (record.descent && record.descent->quadrature_nodes)
        nodes = record.descent->quadrature_nodes;
    RecordCheck check;
    check.stored = *record.residual;
    check.recomputed = residual(setup.model, setup.params, QuadratureGrid{4 * nodes}).max;
    check.passed = check.recomputed <= 2.0 * check.stored;
    return check;
}

} // namespace nbody
