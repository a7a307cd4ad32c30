#include "nbody/cli.hpp"

#include "nbody/errors.hpp"
#include "nbody/export.hpp"
#include "nbody/integrator.hpp"
#include "nbody/record.hpp"
#include "nbody/symmetry_check.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <ostream>

namespace nbody {

namespace {

/// Writes to the named file, or to the fallback stream when the name is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw Error("cannot write " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

int outcome_code(RecordStatus status)
{
    switch (status) {
    case RecordStatus::converged:
    case RecordStatus::seeded:
        return exit_ok;
    case RecordStatus::collision:
        return exit_collision;
    case RecordStatus::escape:
        return exit_escape;
    case RecordStatus::max_iters:
        return exit_not_converged;
    }
    return exit_not_converged;
}

struct SeedArgs {
    std::string family = "cubic";
    int m = 1;
    std::vector<double> masses{1.0, 1.0, 1.0};
    int k_max = kDefaultKMax;
    double alpha = -1.0;
    double G = 1.0;
    std::string output;
};

struct MinimizeArgs {
    std::string input;
    std::string output;
    double delta = 0.0;
    double grad_tol = 1e-10;
    std::size_t max_iters = 200000;
    double escape_radius = 50.0;
    std::size_t nodes = 0;
    std::size_t log_interval = 0;
};

struct VerifyArgs {
    std::string input;
    double residual_tol = 1e-5;
    double symmetry_tol = 1e-9;
    double dt = kDefaultStep;
};

struct PerturbArgs {
    std::string input;
    std::string output;
    std::size_t body = 0;
    double dx = 0.0, dy = 0.0, dz = 0.0;
    double periods = 40.0;
    double envelope_factor = 100.0;
    double dt = kDefaultStep;
    std::size_t samples_per_period = 20;
};

struct ObserveArgs {
    std::string input;
    std::string output;
    std::size_t samples = 64;
};

struct TableArgs {
    std::vector<std::string> inputs;
    std::string output;
};

struct TrajArgs {
    std::string input;
    std::string output;
    std::string source = "fourier";
    std::size_t samples = 200;
    double periods = 1.0;
    double dt = kDefaultStep;
};

int do_seed(const SeedArgs& a, std::ostream& out)
{
    FamilyTag tag;
    tag.kind = family_from_string(a.family);
    tag.m = a.m;
    if (a.masses.size() != 3)
        throw std::invalid_argument("--masses takes three values");
    tag.masses = {a.masses[0], a.masses[1], a.masses[2]};
    if (tag.kind == Family::choreography)
        tag.parity = figure_eight_shape().parity;
    PotentialSpec potential;
    potential.alpha = a.alpha;
    potential.G = a.G;
    potential.validate();

    const FamilySetup setup = build_family(tag, a.k_max, potential);
    const OrbitRecord record = make_record(setup, RecordStatus::seeded);
    save_record(record, a.output);
    out << "seeded " << to_string(tag.kind) << ": " << setup.model.body_count() << " bodies, "
        << setup.params.values.size() << " free coefficients -> " << a.output << '\n';
    return exit_ok;
}

int do_minimize(const MinimizeArgs& a, std::ostream& out, std::ostream& err)
{
    const OrbitRecord input = load_record(a.input);
    const FamilySetup setup = setup_from_record(input);
    const double delta = a.delta != 0.0 ? a.delta : default_delta(setup.model.potential.alpha);
    const DescentSchedule schedule = DescentSchedule::preconditioned(delta);
    StopCriteria stop;
    stop.grad_tol = a.grad_tol;
    stop.max_iters = a.max_iters;
    stop.escape_radius = a.escape_radius;
    stop.quadrature_nodes = a.nodes;
    stop.log_interval = a.log_interval;
    stop.log = &err;

    const RunResult result = run(setup.model, setup.params, schedule, stop);
    const OrbitRecord record = make_record(setup.model, result, schedule, stop);
    save_record(record, a.output);

    out << "outcome " << to_string(result.outcome) << " after " << result.iterations << " iterations\n";
    out << "grad_norm " << result.grad_norm << '\n';
    if (result.residual)
        out << "residual " << *result.residual << (result.is_orbit() ? "" : " (above 1e-05, not certified)")
            << '\n';
    if (result.outcome == Outcome::collision)
        out << "collision between bodies " << result.collision_a << " and " << result.collision_b << " at t = "
            << result.collision_time << '\n';
    if (result.outcome == Outcome::escape)
        out << "body " << result.escape_body << " escaped\n";
    out << "record -> " << a.output << '\n';
    return outcome_code(record.status);
}

int do_verify(const VerifyArgs& a, std::ostream& out)
{
    const OrbitRecord record = load_record(a.input);
    const FamilySetup setup = setup_from_record(record);
    std::size_t nodes = QuadratureGrid::for_k_max(record.k_max).N;
    if (record.descent && record.descent->quadrature_nodes)
        nodes = record.descent->quadrature_nodes;

    const ResidualReport res = residual(setup.model, setup.params, QuadratureGrid{4 * nodes});
    const SymmetryReport sym = verify_symmetry(setup.model, setup.params, QuadratureGrid{nodes}, a.symmetry_tol);
    out << "status " << to_string(record.status) << '\n';
    out << "residual " << res.max << " (body " << res.worst_body << ", t = " << res.worst_time << ")\n";
    if (record.residual)
        out << "stored residual " << *record.residual << (res.max <= 2.0 * *record.residual ? " ok" : " MISMATCH")
            << '\n';
    out << "symmetry " << (sym.passed ? "ok" : "FAILED") << " (worst " << sym.worst << ")\n";
    for (const auto& f : sym.failures)
        out << "  " << f.label << ": " << f.distance << " at t = " << f.time << '\n';

    int code = exit_ok;
    try {
        out << "return error " << return_error(setup.model, setup.params, a.dt) << '\n';
    } catch (const CollisionError& e) {
        out << "return error: " << e.what() << '\n';
        code = exit_collision;
    }
    const bool stored_ok = !record.residual || res.max <= 2.0 * *record.residual;
    if (code == exit_ok && (record.status != RecordStatus::converged || res.max > a.residual_tol || !sym.passed ||
                            !stored_ok))
        code = exit_not_converged;
    out << (code == exit_ok ? "verified" : "not verified") << '\n';
    return code;
}

int do_perturb(const PerturbArgs& a, std::ostream& out)
{
    const OrbitRecord record = load_record(a.input);
    const FamilySetup setup = setup_from_record(record);
    if (a.body >= setup.model.body_count())
        throw std::invalid_argument("--body out of range");
    std::vector<Vec3> deviation(setup.model.body_count(), Vec3::Zero());
    deviation[a.body] = Vec3(a.dx, a.dy, a.dz);
    const double size = deviation[a.body].norm();
    if (size == 0.0)
        throw std::invalid_argument("perturbation is zero; pass --dx, --dy or --dz");

    PerturbationOptions options;
    options.dt = a.dt;
    options.samples_per_period = a.samples_per_period;
    const PerturbationReport report = perturb_and_track(setup.model, setup.params, deviation, a.periods,
                                                        a.envelope_factor * size, options);
    out << "deviation body " << a.body << " (" << a.dx << ", " << a.dy << ", " << a.dz << ") over " << a.periods
        << " periods\n";
    out << "max shape deviation " << report.max_deviation << " (envelope " << report.envelope << ")\n";
    out << "max deviation at matching times " << report.max_matching_deviation << '\n';
    out << "z extent " << report.z_extent << '\n';
    out << "verdict " << (report.bounded ? "bounded" : "exited");
    if (report.exit_time)
        out << " at t = " << *report.exit_time << " (" << *report.exit_time / kTwoPi << " periods, "
            << report.exit_reason << ")";
    out << '\n';

    if (!a.output.empty()) {
        Sink sink(a.output, out);
        auto& os = *sink;
        os << "t";
        for (std::size_t b = 0; b < setup.model.body_count(); ++b)
            os << ",x" << b << ",y" << b << ",z" << b;
        os << '\n' << std::setprecision(12);
        for (std::size_t i = 0; i < report.sample_times.size(); ++i) {
            os << report.sample_times[i];
            for (const auto& x : report.section_points[i])
                os << ',' << x.x() << ',' << x.y() << ',' << x.z();
            os << '\n';
        }
    }
    return exit_ok;
}

int do_observe(const ObserveArgs& a, std::ostream& out)
{
    const FamilySetup setup = setup_from_record(load_record(a.input));
    Sink sink(a.output, out);
    write_observables(*sink, setup.model, setup.params, a.samples);
    return exit_ok;
}

int do_table(const TableArgs& a, std::ostream& out)
{
    std::vector<OrbitRecord> records;
    for (const auto& path : a.inputs)
        records.push_back(load_record(path));
    Sink sink(a.output, out);
    *sink << format_table(records);
    return exit_ok;
}

int do_traj(const TrajArgs& a, std::ostream& out)
{
    const FamilySetup setup = setup_from_record(load_record(a.input));
    Sink sink(a.output, out);
    if (a.source == "fourier") {
        write_fourier_trajectory(*sink, setup.model, setup.params, a.samples, a.periods);
        return exit_ok;
    }
    const PhaseState start = extract_ics(setup.model, setup.params);
    const std::size_t steps_per_sample =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kTwoPi / (a.dt * a.samples))));
    const double dt = kTwoPi / static_cast<double>(steps_per_sample * a.samples);
    const Trajectory traj =
        integrate(start, setup.model.masses(), setup.model.potential, dt, a.periods * kTwoPi, steps_per_sample);
    write_trajectory(*sink, traj.samples);
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Periodic n-body orbits by action minimization over Fourier coefficients", "orbitctl"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    SeedArgs seed;
    auto* seed_cmd = app.add_subcommand("seed", "Build a family and write its seed record");
    seed_cmd->add_option("--family", seed.family, "cubic, crisscross or choreography")
        ->check(CLI::IsMember({"cubic", "crisscross", "choreography"}));
    seed_cmd->add_option("--m", seed.m, "Masses per loop (cubic) or bodies (choreography)");
    seed_cmd->add_option("--masses", seed.masses, "Criss-cross masses")->delimiter(',')->expected(3);
    seed_cmd->add_option("--k-max", seed.k_max, "Truncation order")->check(CLI::PositiveNumber);
    seed_cmd->add_option("--alpha", seed.alpha, "Potential exponent");
    seed_cmd->add_option("--G", seed.G, "Coupling constant");
    seed_cmd->add_option("-o,--output", seed.output, "Record file")->required();

    MinimizeArgs mini;
    auto* mini_cmd = app.add_subcommand("minimize", "Run preconditioned descent from a record");
    mini_cmd->add_option("-i,--input", mini.input, "Input record")->required()->check(CLI::ExistingFile);
    mini_cmd->add_option("-o,--output", mini.output, "Output record")->required();
    mini_cmd->add_option("--delta", mini.delta, "Preconditioned step (default 0.7 of the stability bound)");
    mini_cmd->add_option("--grad-tol", mini.grad_tol, "Gradient tolerance")->check(CLI::PositiveNumber);
    mini_cmd->add_option("--max-iters", mini.max_iters, "Iteration limit");
    mini_cmd->add_option("--escape-radius", mini.escape_radius, "Escape radius")->check(CLI::PositiveNumber);
    mini_cmd->add_option("--nodes", mini.nodes, "Quadrature nodes (default 4 k_max + 4)");
    mini_cmd->add_option("--log-interval", mini.log_interval, "Progress line every N iterations");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Residual, symmetry and one-period return error");
    ver_cmd->add_option("-i,--input", ver.input, "Record")->required()->check(CLI::ExistingFile);
    ver_cmd->add_option("--residual-tol", ver.residual_tol, "Residual bound");
    ver_cmd->add_option("--symmetry-tol", ver.symmetry_tol, "Symmetry set-distance bound");
    ver_cmd->add_option("--dt", ver.dt, "Integration step")->check(CLI::PositiveNumber);

    PerturbArgs per;
    auto* per_cmd = app.add_subcommand("perturb", "Integrate a perturbed orbit and track its deviation");
    per_cmd->add_option("-i,--input", per.input, "Record")->required()->check(CLI::ExistingFile);
    per_cmd->add_option("-o,--output", per.output, "Section points (delimited text)");
    per_cmd->add_option("--body", per.body, "Perturbed body");
    per_cmd->add_option("--dx", per.dx, "Position offset in x");
    per_cmd->add_option("--dy", per.dy, "Position offset in y");
    per_cmd->add_option("--dz", per.dz, "Position offset in z");
    per_cmd->add_option("--periods", per.periods, "Horizon in periods")->check(CLI::Range(1.0, 1e6));
    per_cmd->add_option("--envelope-factor", per.envelope_factor, "Envelope as a multiple of the offset");
    per_cmd->add_option("--dt", per.dt, "Integration step")->check(CLI::PositiveNumber);
    per_cmd->add_option("--samples-per-period", per.samples_per_period, "Comparison samples per period")
        ->check(CLI::PositiveNumber);

    ObserveArgs obs;
    auto* obs_cmd = app.add_subcommand("observe", "Observable time series over one period");
    obs_cmd->add_option("-i,--input", obs.input, "Record")->required()->check(CLI::ExistingFile);
    obs_cmd->add_option("-o,--output", obs.output, "Output file (default stdout)");
    obs_cmd->add_option("--samples", obs.samples, "Sample count")->check(CLI::PositiveNumber);

    TableArgs tab;
    auto* tab_cmd = app.add_subcommand("export-table", "Coefficient table");
    tab_cmd->add_option("-i,--input", tab.inputs, "Records, one column set each")
        ->required()
        ->check(CLI::ExistingFile);
    tab_cmd->add_option("-o,--output", tab.output, "Output file (default stdout)");

    TrajArgs tra;
    auto* tra_cmd = app.add_subcommand("export-traj", "Sampled trajectory for plotting");
    tra_cmd->add_option("-i,--input", tra.input, "Record")->required()->check(CLI::ExistingFile);
    tra_cmd->add_option("-o,--output", tra.output, "Output file (default stdout)");
    tra_cmd->add_option("--source", tra.source, "fourier or integrate")
        ->check(CLI::IsMember({"fourier", "integrate"}));
    tra_cmd->add_option("--samples", tra.samples, "Samples per period")->check(CLI::PositiveNumber);
    tra_cmd->add_option("--periods", tra.periods, "Periods")->check(CLI::PositiveNumber);
    tra_cmd->add_option("--dt", tra.dt, "Integration step")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*seed_cmd)
            return do_seed(seed, out);
        if (*mini_cmd)
            return do_minimize(mini, out, err);
        if (*ver_cmd)
            return do_verify(ver, out);
        if (*per_cmd)
            return do_perturb(per, out);
        if (*obs_cmd)
            return do_observe(obs, out);
        if (*tab_cmd)
            return do_table(tab, out);
        if (*tra_cmd)
            return do_traj(tra, out);
    } catch (const CollisionParityError& e) {
        err << "error: " << e.what() << '\n';
        return exit_collision;
    } catch (const CollisionError& e) {
        err << "error: " << e.what() << '\n';
        return exit_collision;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace nbody
