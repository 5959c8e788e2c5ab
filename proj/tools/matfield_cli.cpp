// matfield: command-line front end for the matfield library.
//
// Subcommands:
//   decompose    split a symmetric (or antisymmetric) matrix field into its
//                orthogonal parts and write part files plus diagnostics
//   verify       run the identity suite on random fields and report
//                residual/tolerance/pass per identity
//   estimate-sup alternating projected ascent for the amplitude-direction
//                objective, with per-restart convergence traces
//   near-max     construct a near-maximizing amplitude field (shell or
//                gaussian family) and report its objective value
//   evolve       integrate the velocity form, the matrix-potential form, or
//                both, sampling states and an energy ledger
//
// Exit codes: 0 success, 1 failed verification or diverged evolution,
// 2 configuration or I/O error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <matfield/matfield.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace matfield;

namespace {

// ---------------------------------------------------------------------------
// shared plumbing

struct Logger {
    bool json_lines = false;

    void event(const std::string& kind, const json& payload, const std::string& human) const {
        if (json_lines) {
            json j = payload;
            j["event"] = kind;
            std::cout << j.dump() << '\n';
        } else {
            std::cout << human << '\n';
        }
    }
};

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// "a,b,c" -> unit 3-vector
void parse_axis(const std::string& s, double* v) {
    std::istringstream is(s);
    char comma;
    if (!(is >> v[0] >> comma >> v[1] >> comma >> v[2]))
        throw config_error("axis must be three comma-separated numbers, got '" + s + "'");
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n < 1e-12) throw config_error("axis must be nonzero");
    for (int a = 0; a < 3; ++a) v[a] /= n;
}

// random divergence-free mean-zero unit-norm velocity
Field random_velocity(const Grid& g, std::uint64_t seed) {
    Field u = project_divfree(random_field(g, FieldKind::vector, 2.0, seed));
    zero_mean(u);
    const double n = norm(u);
    if (n > 0.0) u *= 1.0 / n;
    return u;
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeOpts {
    std::string in;
    bool demo = false;
    std::string out;
    int demo_n = 16;
    std::uint64_t demo_seed = 1;
};

int run_decompose(const DecomposeOpts& o, const Logger& log) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::path outdir = o.out.empty()
                          ? (o.demo ? fs::temp_directory_path() / "matfield_demo" : fs::path("."))
                          : fs::path(o.out);
    ensure_dir(outdir);

    Field M = o.demo ? random_field(make_grid(3, o.demo_n), FieldKind::sym_matrix, 2.0, o.demo_seed)
                     : read_field(o.in);
    if (M.kind() != FieldKind::sym_matrix && M.kind() != FieldKind::antisym_matrix)
        throw config_error("decompose expects a symmetric or antisymmetric matrix field, got kind '" +
                           std::string(to_string(M.kind())) + "'");

    json cfg{{"command", "decompose"},
             {"in", o.demo ? "demo" : o.in},
             {"out", outdir.string()},
             {"kind", to_string(M.kind())},
             {"d", M.grid().d},
             {"n", M.grid().n},
             {"L", M.grid().L}};
    if (o.demo) cfg["demo_seed"] = o.demo_seed;

    const double nM2 = norm2(M);
    json diag;
    std::vector<std::pair<std::string, const Field*>> parts;

    DecompositionResult sym;          // keeps part storage alive until written
    AntisymDecompositionResult anti;  //
    if (M.kind() == FieldKind::sym_matrix) {
        sym = decompose_sym(M);
        for (SymSubspace s :
             {SymSubspace::st, SymSubspace::hess, SymSubspace::id_tilde, SymSubspace::trdivfree})
            parts.emplace_back(to_string(s), &sym.part(s));

        json gram = json::array();
        double worst_cross = 0.0, sum_norm2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            json row = json::array();
            for (int j = 0; j < 4; ++j) {
                row.push_back(sym.gram[i][j]);
                if (i != j) worst_cross = std::max(worst_cross, std::abs(sym.gram[i][j]));
            }
            sum_norm2 += sym.gram[i][i];
            gram.push_back(row);
        }
        diag["gram"] = gram;
        diag["residuals"] = {{"completeness", sym.reconstruction_error},
                             {"orthogonality", nM2 > 0.0 ? worst_cross / nM2 : worst_cross},
                             {"pythagoras", nM2 > 0.0 ? std::abs(sum_norm2 - nM2) / nM2 : 0.0}};
    } else {
        anti = decompose_antisym(M);
        parts.emplace_back("vort", &anti.vort);
        parts.emplace_back("divfree", &anti.divfree);
        diag["gram"] = {{anti.cross_gram}};
        diag["residuals"] = {{"completeness", anti.reconstruction_error},
                             {"orthogonality",
                              nM2 > 0.0 ? std::abs(anti.cross_gram) / nM2 : std::abs(anti.cross_gram)}};
    }

    json norms{{"input", nM2}};
    for (const auto& [name, f] : parts) {
        norms[name] = norm2(*f);
        const fs::path p = outdir / (name + std::string(".field"));
        write_field(*f, p.string());
        log.event("part_written", {{"part", name}, {"path", p.string()}},
                  "wrote " + p.string() + "  |" + name + "|^2 = " + fmt(norm2(*f)));
    }
    diag["norms"] = norms;

    json report = artifact_skeleton(cfg, elapsed_seconds(t0));
    report.update(diag);
    const fs::path jp = outdir / "decompose.json";
    write_json(report, jp.string());
    log.event("diagnostics_written", {{"path", jp.string()}, {"residuals", diag["residuals"]}},
              "wrote " + jp.string());
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
    std::string suite = "full";  // quick | full
    int n = 0;                   // 0: suite default
    int d = 3;
    int fields = 0;  // 0: suite default
    std::uint64_t seed = 1;
    std::string out;
    double tol_scale = 1.0;  // 0.1 under --tolerance-profile strict
};

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

int run_verify(const VerifyOpts& o, const Logger& log) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool quick = o.suite == "quick";
    if (!quick && o.suite != "full") throw config_error("verify: --suite must be quick or full");
    const int n = o.n > 0 ? o.n : (quick ? 12 : 24);
    const int fields = o.fields > 0 ? o.fields : (quick ? 4 : 12);
    const int rot_fields = quick ? 1 : 2;
    if (o.d < 2 || o.d > 4) throw config_error("verify: --d must be 2, 3, or 4");
    const Grid g = make_grid(o.d, n);

    std::vector<Check> checks;
    auto add = [&](const std::string& name, double res, double tol) {
        checks.push_back({name, res, tol * o.tol_scale, res <= tol * o.tol_scale});
    };

    // subspace splitting of random symmetric fields
    double c_complete = 0.0, c_orth = 0.0, c_pyth = 0.0, c_idem = 0.0;
    double c_trace = 0.0, c_constraint = 0.0, c_curl = 0.0, c_divcomm = 0.0;
    for (int f = 0; f < fields; ++f) {
        const Field M = random_field(g, FieldKind::sym_matrix, 1.5, o.seed + 10 * f);
        const double nM = norm(M), nM2 = norm2(M);
        DecompositionResult r = decompose_sym(M);
        c_complete = std::max(c_complete, r.reconstruction_error);
        double sum2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            sum2 += r.gram[i][i];
            for (int j = i + 1; j < 4; ++j)
                c_orth = std::max(c_orth, std::abs(r.gram[i][j]) / nM2);
        }
        c_pyth = std::max(c_pyth, std::abs(sum2 - nM2) / nM2);
        Field twice = project_st(r.st);
        twice -= r.st;
        c_idem = std::max(c_idem, norm(twice) / nM);
        if (o.d == 3) {
            StrainResidual sr = check_strain_characterization(r.st);
            c_trace = std::max(c_trace, sr.trace_res);
            c_constraint = std::max(c_constraint, sr.constraint_res);
            c_curl = std::max(c_curl, std::abs(norm2(r.st) - projection_norm_via_curl(M)) / nM2);
            c_divcomm = std::max(c_divcomm, div_commutation_residual(M));
        }
    }
    add("four_part_completeness", c_complete, 1e-11);
    add("four_part_orthogonality", c_orth, 1e-10);
    add("four_part_pythagoras", c_pyth, 1e-10);
    add("projection_idempotence", c_idem, 1e-12);
    if (o.d == 3) {
        add("strain_trace_free", c_trace, 1e-10);
        add("strain_constraint", c_constraint, 1e-10);
        add("strain_norm_via_curl", c_curl, 1e-10);
        add("divergence_commutation", c_divcomm, 1e-10);
    }

    // antisymmetric splitting
    double a_complete = 0.0, a_orth = 0.0;
    for (int f = 0; f < fields; ++f) {
        const Field A = random_field(g, FieldKind::antisym_matrix, 1.5, o.seed + 10 * f + 5);
        AntisymDecompositionResult r = decompose_antisym(A);
        a_complete = std::max(a_complete, r.reconstruction_error);
        a_orth = std::max(a_orth, std::abs(r.cross_gram) / norm2(A));
    }
    add("antisym_completeness", a_complete, 1e-11);
    add("antisym_orthogonality", a_orth, 1e-10);

    if (o.d == 3) {
        // the velocity -> strain map halves squared norms
        double iso = 0.0;
        for (int f = 0; f < fields; ++f) {
            const Field u = random_velocity(g, o.seed + 10 * f + 7);
            iso = std::max(iso, std::abs(2.0 * norm2(strain_from_velocity(u)) / norm2(u) - 1.0));
        }
        add("velocity_strain_isometry", iso, 1e-10);

        // cube rotations commute with the strain projection
        double rot = 0.0;
        const auto rots = cubic_rotations();
        for (int f = 0; f < rot_fields; ++f) {
            const Field M = random_field(g, FieldKind::sym_matrix, 1.5, o.seed + 10 * f + 9);
            const Field PM = project_st(M);
            const double nM = norm(M);
            for (const auto& Q : rots) {
                Field lhs = project_st(rotate_field(M, Q));
                lhs -= rotate_field(PM, Q);
                rot = std::max(rot, norm(lhs) / nM);
            }
        }
        add("rotation_equivariance", rot, 1e-10);

        // pointwise determinant bound on a trace-free random field
        Field S = as_physical(random_field(g, FieldKind::sym_matrix, 1.0, o.seed + 99));
        for (std::size_t p = 0; p < g.points(); ++p) {
            const double tr = (S.at(p, 0).real() + S.at(p, 3).real() + S.at(p, 5).real()) / 3.0;
            for (int c = 0; c < 6; ++c) S.at(p, c) = complexd(S.at(p, c).real(), 0.0);
            S.at(p, 0) -= tr;
            S.at(p, 3) -= tr;
            S.at(p, 5) -= tr;
        }
        DetBoundReport det = det_bound_check(S);
        const double scale = std::max(det.max_norm_cubed, 1e-300);
        add("pointwise_det_bound", std::max(0.0, det.max_violation) / scale, 1e-14);
    }

    bool all_pass = true;
    json arr = json::array();
    for (const Check& c : checks) {
        all_pass = all_pass && c.pass;
        arr.push_back({{"identity_name", c.name},
                       {"residual", c.residual},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
        log.event("check",
                  {{"identity_name", c.name},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}},
                  std::string(c.pass ? "PASS " : "FAIL ") + c.name + "  residual " + fmt(c.residual) +
                      "  tolerance " + fmt(c.tolerance));
    }

    json cfg{{"command", "verify"}, {"suite", o.suite},   {"n", n},
             {"d", o.d},            {"fields", fields},   {"seed", o.seed},
             {"tolerance_scale", o.tol_scale}};
    json report = artifact_skeleton(cfg, elapsed_seconds(t0));
    report["checks"] = arr;
    report["all_pass"] = all_pass;
    if (!o.out.empty()) {
        ensure_dir(fs::path(o.out));
        write_json(report, (fs::path(o.out) / "verify.json").string());
    }
    log.event("summary", {{"all_pass", all_pass}, {"checks", checks.size()}},
              all_pass ? "all identities hold" : "FAILURES above");
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// estimate-sup

struct EstimateOpts {
    int n = 24;
    double L = 1.0;
    int restarts = 8;
    int iters = 100;
    std::string mode = "unconstrained";  // unconstrained | fixed-direction | plane
    std::uint64_t seed = 1;
    double rel_tol = 1e-9;
    std::string out = ".";
};

int run_estimate(const EstimateOpts& o, const Logger& log) {
    const auto t0 = std::chrono::steady_clock::now();
    AscentMode mode;
    if (o.mode == "unconstrained") mode = AscentMode::unconstrained;
    else if (o.mode == "fixed-direction") mode = AscentMode::fixed_direction;
    else if (o.mode == "plane") mode = AscentMode::plane_constrained;
    else throw config_error("estimate-sup: --mode must be unconstrained, fixed-direction, or plane");

    const Grid g = make_grid(3, o.n, o.L);
    ensure_dir(fs::path(o.out));
    SupremumEstimate est = estimate_supremum(g, o.restarts, o.iters, mode, o.seed, o.rel_tol);

    json traces = json::array();
    for (std::size_t r = 0; r < est.traces.size(); ++r) {
        const std::string csv_name = "trace_r" + std::to_string(r) + ".csv";
        const fs::path csv_path = fs::path(o.out) / csv_name;
        std::ofstream csv(csv_path);
        if (!csv) throw io_error("cannot open '" + csv_path.string() + "' for writing");
        csv.precision(17);
        csv << "iter,objective,step_size\n";
        for (const AscentTracePoint& pt : est.traces[r])
            csv << pt.iter << ',' << pt.objective << ',' << pt.step_size << '\n';
        traces.push_back({{"restart", r},
                          {"iters", est.traces[r].size() - 1},
                          {"final_objective", est.traces[r].back().objective},
                          {"trace_csv", csv_name}});
    }

    json cfg{{"command", "estimate-sup"},
             {"n", o.n},
             {"L", o.L},
             {"restarts", o.restarts},
             {"iters", o.iters},
             {"mode", o.mode},
             {"seed", o.seed},
             {"rel_tol", o.rel_tol},
             {"out", o.out}};
    json report = artifact_skeleton(cfg, elapsed_seconds(t0));
    report["value"] = est.value;
    report["restarts"] = est.restarts;
    report["converged"] = est.converged;
    report["grid"] = {{"d", g.d}, {"n", g.n}, {"L", g.L}};
    report["per_restart_traces"] = traces;
    report["note"] = est.note;

    write_field(est.best.lam, (fs::path(o.out) / "best_amplitude.field").string(), o.seed);
    write_field(est.best.v, (fs::path(o.out) / "best_direction.field").string(), o.seed);
    write_json(report, (fs::path(o.out) / "estimate.json").string());
    log.event("estimate",
              {{"value", est.value}, {"mode", o.mode}, {"converged", est.converged}},
              "estimate " + fmt(est.value) + " (" + o.mode + ", " +
                  (est.converged ? "converged" : "iteration budget reached") + ")");
    return 0;
}

// ---------------------------------------------------------------------------
// near-max

struct NearMaxOpts {
    std::string kind = "gaussian";  // shell | gaussian
    double eps = 0.1;
    int n = 32;
    double L = 1.0;
    double width = 64.0;
    std::string axis = "0,0,1";
    std::uint64_t seed = 1;
    std::string out = ".";
};

int run_near_max(const NearMaxOpts& o, const Logger& log) {
    const auto t0 = std::chrono::steady_clock::now();
    NearMaxKind kind;
    if (o.kind == "shell") kind = NearMaxKind::shell;
    else if (o.kind == "gaussian") kind = NearMaxKind::gaussian;
    else throw config_error("near-max: --kind must be shell or gaussian");

    double axis[3];
    parse_axis(o.axis, axis);
    const Grid g = make_grid(3, o.n, o.L);
    ensure_dir(fs::path(o.out));

    MaxMidField mm = near_maximizer(g, o.eps, kind, axis, o.width, o.seed);
    const double objective = fixed_direction_value(mm.lam, axis);

    json cfg{{"command", "near-max"},
             {"kind", o.kind},
             {"eps", o.eps},
             {"n", o.n},
             {"L", o.L},
             {"width", o.width},
             {"axis", {axis[0], axis[1], axis[2]}},
             {"seed", o.seed},
             {"out", o.out}};
    json report = artifact_skeleton(cfg, elapsed_seconds(t0));
    report["objective"] = objective;
    report["amplitude_norm2"] = norm2(mm.lam);

    write_field(mm.lam, (fs::path(o.out) / "amplitude.field").string(), o.seed);
    write_json(report, (fs::path(o.out) / "near_max.json").string());
    log.event("near_max", {{"kind", o.kind}, {"objective", objective}},
              o.kind + " family objective " + fmt(objective));
    return 0;
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveOpts {
    std::string form = "velocity";     // velocity | potential | both
    std::string init = "taylor-green"; // taylor-green | random | file:<path>
    int n = 32;
    double L = 1.0;
    double T = 0.1;
    double dt = 1e-3;
    double nu = 1.0;
    int sample_every = 10;
    std::uint64_t seed = 1;
    std::string out = ".";
};

int run_evolve(const EvolveOpts& o, const Logger& log) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.form != "velocity" && o.form != "potential" && o.form != "both")
        throw config_error("evolve: --form must be velocity, potential, or both");
    ensure_dir(fs::path(o.out));

    // initial data, always reduced to a velocity first
    std::optional<Field> M0;
    Field u0 = [&]() -> Field {
        if (o.init == "taylor-green") return taylor_green(make_grid(3, o.n, o.L));
        if (o.init == "random") return random_velocity(make_grid(3, o.n, o.L), o.seed);
        if (o.init.rfind("file:", 0) == 0) {
            Field f = read_field(o.init.substr(5));
            if (f.kind() == FieldKind::vector) return f;
            if (f.kind() == FieldKind::sym_matrix) {
                M0 = std::move(f);
                return velocity_from_potential(*M0);
            }
            throw config_error("evolve: initial file must hold a vector or symmetric matrix field");
        }
        throw config_error("evolve: --init must be taylor-green, random, or file:<path>");
    }();
    const Grid g = u0.grid();

    const bool want_vel = o.form != "potential";
    const bool want_pot = o.form != "velocity";
    if (want_pot && !M0) M0 = potential_from_velocity(u0);

    Trajectory tv, tp;
    if (want_vel) tv = evolve(u0, o.T, o.dt, o.sample_every, o.nu);
    if (want_pot) tp = evolve(*M0, o.T, o.dt, o.sample_every, o.nu);
    const Trajectory& lead = want_vel ? tv : tp;

    // sampled states
    for (std::size_t i = 0; i < tv.states.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "velocity_%04zu.field", i);
        write_field(tv.states[i], (fs::path(o.out) / name).string());
    }
    for (std::size_t i = 0; i < tp.states.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "potential_%04zu.field", i);
        write_field(tp.states[i], (fs::path(o.out) / name).string());
    }

    // energy ledger; the equivalence column is populated only when both forms ran
    const double nu0 = norm(u0);
    const fs::path csv_path = fs::path(o.out) / "ledger.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw io_error("cannot open '" + csv_path.string() + "' for writing");
    csv.precision(17);
    csv << "t,kinetic,dissipation_integral,energy_defect,strain_residual,equivalence_residual\n";
    double worst_equiv = 0.0;
    for (std::size_t i = 0; i < lead.times.size(); ++i) {
        csv << lead.times[i] << ',' << lead.ledger.kinetic[i] << ','
            << lead.ledger.dissipation_integral[i] << ',' << energy_defect(lead.ledger, i) << ','
            << (want_pot ? tp : tv).constraint_residuals[i] << ',';
        if (want_vel && want_pot && i < tv.states.size() && i < tp.states.size()) {
            Field r = divergence(tp.states[i]);
            r += tv.states[i];
            const double e = nu0 > 0.0 ? norm(r) / nu0 : norm(r);
            worst_equiv = std::max(worst_equiv, e);
            csv << e;
        }
        csv << '\n';
    }
    csv.close();

    json cfg{{"command", "evolve"}, {"form", o.form},         {"init", o.init},
             {"n", g.n},            {"L", g.L},               {"T", o.T},
             {"dt", o.dt},          {"nu", o.nu},             {"sample_every", o.sample_every},
             {"seed", o.seed},      {"out", o.out}};
    json report = artifact_skeleton(cfg, elapsed_seconds(t0));
    report["samples"] = lead.times.size();
    report["times"] = lead.times;
    report["lifespan_hint"] = lead.lifespan_hint == std::numeric_limits<double>::infinity()
                                  ? json()
                                  : json(lead.lifespan_hint);
    json notes = json::array();
    for (const std::string& s : lead.notes) notes.push_back(s);
    notes.push_back("equivalence_residual is populated only under --form both");
    report["notes"] = notes;
    bool diverged = false;
    for (const Trajectory* t : {want_vel ? &tv : nullptr, want_pot ? &tp : nullptr}) {
        if (!t || !t->diverged) continue;
        diverged = true;
        report["diverged"] = true;
        report["last_valid_time"] = t->last_valid_time;
        report["divergence_note"] = t->divergence_note;
    }
    if (!diverged) {
        report["diverged"] = false;
        report["final_kinetic"] = lead.ledger.kinetic.back();
        report["final_energy_defect"] = energy_defect(lead.ledger, lead.times.size() - 1);
        if (want_vel && want_pot) report["max_equivalence_residual"] = worst_equiv;
    }
    write_json(report, (fs::path(o.out) / "evolve.json").string());

    log.event("evolve",
              {{"form", o.form},
               {"samples", lead.times.size()},
               {"diverged", diverged},
               {"final_kinetic", lead.ledger.kinetic.back()}},
              diverged ? "evolution diverged; see evolve.json"
                       : "sampled " + std::to_string(lead.times.size()) + " states, final kinetic " +
                             fmt(lead.ledger.kinetic.back()));
    return diverged ? 1 : 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"matfield: orthogonal matrix-field decomposition, extremal estimates, and "
                 "dissipative evolution on the periodic torus"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    int threads = 1;
    std::string profile = "default";
    Logger log;
    app.add_option("--threads", threads, "worker thread count")->check(CLI::PositiveNumber);
    app.add_option("--tolerance-profile", profile, "default | strict (10x tighter)")
        ->check(CLI::IsMember({"default", "strict"}));
    app.add_flag("--json-logs", log.json_lines, "emit one JSON object per log line");

    DecomposeOpts dec;
    auto* cd = app.add_subcommand("decompose", "split a matrix field into orthogonal parts");
    auto* in_opt = cd->add_option("--in", dec.in, "input .field file (symmetric or antisymmetric)");
    auto* demo_opt = cd->add_flag("--demo", dec.demo, "decompose a built-in random example instead");
    cd->add_option("--out", dec.out, "output directory (default: . ; demo: a temp directory)");
    cd->add_option("--demo-n", dec.demo_n, "demo grid resolution")->check(CLI::PositiveNumber);
    cd->add_option("--demo-seed", dec.demo_seed, "demo field seed");
    in_opt->excludes(demo_opt);

    VerifyOpts ver;
    auto* cv = app.add_subcommand("verify", "run the identity suite on random fields");
    cv->add_option("--suite", ver.suite, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    cv->add_option("--n", ver.n, "grid resolution (default: suite preset)");
    cv->add_option("--d", ver.d, "dimension, 2..4 (some checks need 3)");
    cv->add_option("--fields", ver.fields, "random fields per check (default: suite preset)");
    cv->add_option("--seed", ver.seed, "base seed");
    cv->add_option("--out", ver.out, "directory for verify.json (omit: stdout only)");

    EstimateOpts est;
    auto* ce = app.add_subcommand("estimate-sup", "alternating ascent for the amplitude-direction "
                                                  "objective");
    ce->add_option("--n", est.n, "grid resolution")->check(CLI::PositiveNumber);
    ce->add_option("--L", est.L, "box size")->check(CLI::PositiveNumber);
    ce->add_option("--restarts", est.restarts, "ascent restarts")->check(CLI::PositiveNumber);
    ce->add_option("--iters", est.iters, "max iterations per restart")->check(CLI::PositiveNumber);
    ce->add_option("--mode", est.mode, "unconstrained | fixed-direction | plane");
    ce->add_option("--seed", est.seed, "base seed");
    ce->add_option("--rel-tol", est.rel_tol, "relative-change stop rule");
    ce->add_option("--out", est.out, "output directory");

    NearMaxOpts nm;
    auto* cn = app.add_subcommand("near-max", "construct a near-maximizing amplitude field");
    cn->add_option("--kind", nm.kind, "shell | gaussian");
    cn->add_option("--eps", nm.eps, "shell half-width parameter");
    cn->add_option("--n", nm.n, "grid resolution")->check(CLI::PositiveNumber);
    cn->add_option("--L", nm.L, "box size")->check(CLI::PositiveNumber);
    cn->add_option("--width", nm.width, "gaussian width parameter");
    cn->add_option("--axis", nm.axis, "direction axis as 'x,y,z' (normalized)");
    cn->add_option("--seed", nm.seed, "phase seed (shell family)");
    cn->add_option("--out", nm.out, "output directory");

    EvolveOpts evo;
    auto* cw = app.add_subcommand("evolve", "integrate the dissipative evolution and sample it");
    cw->add_option("--form", evo.form, "velocity | potential | both");
    cw->add_option("--init", evo.init, "taylor-green | random | file:<path>");
    cw->add_option("--n", evo.n, "grid resolution (ignored for file: inits)");
    cw->add_option("--L", evo.L, "box size (ignored for file: inits)");
    cw->add_option("--T", evo.T, "final time");
    cw->add_option("--dt", evo.dt, "time step");
    cw->add_option("--nu", evo.nu, "viscosity");
    cw->add_option("--sample-every", evo.sample_every, "steps between samples");
    cw->add_option("--seed", evo.seed, "seed for random initial data");
    cw->add_option("--out", evo.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; any parse failure is a config error
    }
    set_thread_count(threads);
    ver.tol_scale = profile == "strict" ? 0.1 : 1.0;

    try {
        if (cd->parsed()) {
            if (!dec.demo && dec.in.empty())
                throw config_error("decompose: pass --in <file> or --demo");
            return run_decompose(dec, log);
        }
        if (cv->parsed()) return run_verify(ver, log);
        if (ce->parsed()) return run_estimate(est, log);
        if (cn->parsed()) return run_near_max(nm, log);
        if (cw->parsed()) return run_evolve(evo, log);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;  // unreachable: a subcommand is required
}
