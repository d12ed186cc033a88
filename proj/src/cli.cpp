#include "flexwing/cli.hpp"

#include "flexwing/convergence.hpp"
#include "flexwing/fem.hpp"
#include "flexwing/report.hpp"
#include "flexwing/simulation.hpp"
#include "flexwing/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace flexwing {

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    return os;
}

Provenance provenance(const RunConfig& c, const std::string& command, std::optional<double> Lambda) {
    Provenance p;
    p.command = command;
    p.scenario = c.scenario;
    p.config_hash = fnv1a_hex(c.text);
    p.Lambda = Lambda;
    p.extra = "seed: " + std::to_string(c.seed);
    return p;
}

std::optional<double> lambda_of(const ResolvedControl& rc) {
    if (rc.report && rc.report->feasible) return rc.report->Lambda;
    return std::nullopt;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ResolvedControl resolve_control(const RunConfig& c) {
    ResolvedControl rc;
    rc.law = c.law;
    if (c.eps_auto) {
        rc.report = feasibility_search(c.model, c.law.k1, c.law.k2, c.search);
        rc.law.eps1 = rc.report->params.eps1;
        rc.law.eps2 = rc.report->params.eps2;
        return rc;
    }
    try {
        CertificateParameters p;
        p.eps1 = c.law.eps1;
        p.eps2 = c.law.eps2;
        check_certificate_preconditions(model_bounds(c.model), p);
        SearchOptions so = c.search;
        so.fixed_eps1 = c.law.eps1;
        so.fixed_eps2 = c.law.eps2;
        rc.report = feasibility_search(c.model, c.law.k1, c.law.k2, so);
    } catch (const PreconditionError& e) {
        rc.rejection = e.what();
    }
    return rc;
}

int cmd_certify(const RunConfig& c, const CommandOptions& o) {
    ResolvedControl rc = resolve_control(c);
    if (!rc.report) {
        std::cerr << "certify: rejected: " << rc.rejection << '\n';
        return kExitInfeasible;
    }
    CertificateReport& r = *rc.report;
    r.sup_U = c.disturbance.amplitude_bound();
    r.sup_Udot = c.disturbance.rate_bound();
    if (r.feasible) r.ultimate = ultimate_bounds(r, r.sup_U, r.sup_Udot);
    auto os = open_out(o.out_dir, "certificate.txt");
    write_provenance(os, provenance(c, "certify", lambda_of(rc)));
    write_report(os, r);
    std::cout << "certify: " << (r.feasible ? "feasible" : "infeasible") << " Lambda=" << g17(r.Lambda)
              << " eps1=" << g17(r.params.eps1) << " eps2=" << g17(r.params.eps2) << '\n';
    return r.feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const RunConfig& c, const CommandOptions& o) {
    ResolvedControl rc;
    rc.law = c.law;
    if (c.mode == LoopMode::ClosedLoop) {
        rc = resolve_control(c);
        if (!rc.report) std::cerr << "simulate: warning: no certificate: " << rc.rejection << '\n';
        else if (!rc.report->feasible) std::cerr << "simulate: warning: certificate search found no feasible point\n";
    }
    SimulationConfig sc = c.sim;
    sc.mild_solution = sc.mild_solution || o.mild_solution;
    auto sys = assemble(c.model, rc.law, Mesh::uniform(c.model.span, c.elements), c.mode);

    Trajectory traj;
    try {
        traj = sc.integrator == Integrator::MatrixExponential ? propagate_expm(sys, c.initial, c.disturbance, sc)
                                                              : simulate(sys, c.initial, c.disturbance, sc);
    } catch (const CompatibilityError& e) {
        std::cerr << "simulate: " << e.what() << " (pass --mild-solution to accept)\n";
        return kExitUsage;
    } catch (const DivergenceError& e) {
        std::cerr << "simulate: " << e.what() << '\n';
        return kExitDiverged;
    }

    const Provenance prov = provenance(c, "simulate", lambda_of(rc));
    const auto pre = prov.lines();
    {
        auto os = open_out(o.out_dir, "trajectory.csv");
        write_trajectory_csv(os, traj, pre);
    }
    {
        auto os = open_out(o.out_dir, "snapshots_w.csv");
        write_snapshot_csv(os, traj, true, pre);
    }
    {
        auto os = open_out(o.out_dir, "snapshots_phi.csv");
        write_snapshot_csv(os, traj, false, pre);
    }

    const std::string mode = c.mode == LoopMode::OpenLoop ? "open loop" : "closed loop";
    {
        auto os = open_out(o.out_dir, "tip.svg");
        write_svg_chart(os, {{"w(l,t) [m]", traj.times, traj.w_tip}, {"phi(l,t) [rad]", traj.times, traj.phi_tip}},
                        {"Tip response, " + mode, "t [s]", "tip displacement"}, prov);
    }
    {
        auto os = open_out(o.out_dir, "energy.svg");
        ChartOptions co{"Energy, " + mode, "t [s]", "energy"};
        co.log_y = true;
        write_svg_chart(os, {{"E", traj.times, traj.energy_H1}, {"script E", traj.times, traj.energy_H2}}, co, prov);
    }
    for (bool bending : {true, false}) {
        std::vector<Series> s;
        for (std::size_t k = 0; k < traj.snapshot_positions.size(); ++k) {
            Series se;
            se.label = "y = " + g17(traj.snapshot_positions[k]).substr(0, 6) + " m";
            se.x = traj.times;
            for (const auto& row : bending ? traj.w_snapshots : traj.phi_snapshots) se.y.push_back(row[k]);
            s.push_back(std::move(se));
        }
        auto os = open_out(o.out_dir, bending ? "snapshots_w.svg" : "snapshots_phi.svg");
        write_svg_chart(os, s,
                        {bending ? "Bending w(y,t), " + mode : "Twist phi(y,t), " + mode, "t [s]",
                         bending ? "w [m]" : "phi [rad]"},
                        prov);
    }

    // amplitude summary: max over the second half of the run relative to the initial tip value
    auto late_max = [&](const std::vector<double>& x) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (traj.times[i] >= 0.5 * sc.t_end) m = std::max(m, std::abs(x[i]));
        return m;
    };
    auto os = open_out(o.out_dir, "summary.txt");
    write_provenance(os, prov);
    const double w0 = std::abs(traj.w_tip.front()), p0 = std::abs(traj.phi_tip.front());
    os << "eps1 = " << g17(rc.law.eps1) << "\neps2 = " << g17(rc.law.eps2) << '\n';
    os << "w_tip_initial = " << g17(w0) << "\nw_tip_late_max = " << g17(late_max(traj.w_tip)) << '\n';
    os << "phi_tip_initial = " << g17(p0) << "\nphi_tip_late_max = " << g17(late_max(traj.phi_tip)) << '\n';
    os << "energy_final = " << g17(traj.energy_H1.back()) << '\n';
    if (traj.energy_H2.front() > 0) os << "energy_decay_rate_fit = " << g17(decay_fit(traj).rate) << '\n';
    else os << "energy_decay_rate_fit = n/a\n";
    std::cout << "simulate: " << traj.size() << " samples, final E=" << g17(traj.energy_H1.back()) << '\n';
    return kExitOk;
}

int cmd_verify(const RunConfig& c, const CommandOptions& o) {
    ResolvedControl rc = resolve_control(c);
    auto report = run_verification_suite(c.model, rc.law, c.verify);
    auto os = open_out(o.out_dir, "verification.txt");
    write_provenance(os, provenance(c, "verify", lambda_of(rc)));
    write_verification_report(os, report);
    write_verification_report(std::cout, report);
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

int cmd_converge(const RunConfig& c, const CommandOptions& o) {
    const std::vector<int> meshes{8, 16, 32, 64};
    const std::vector<double> dts{4e-3, 2e-3, 1e-3};
    ConvergenceReport r;
    r.bending = static_bending_convergence(c.model, meshes);
    r.torsion = static_torsion_convergence(c.model, meshes);
    for (int n : {1, 2, 4, 8, 16, 32, 64}) r.cubic.emplace_back(n, cubic_reproduction_error(c.model.span, 1.0, n));

    ControlLaw law = c.law;
    ResolvedControl rc;
    if (c.mode == LoopMode::ClosedLoop && c.eps_auto) {
        rc = resolve_control(c);
        law = rc.law;
    }
    SimulationConfig sc = c.sim;
    sc.mild_solution = sc.mild_solution || o.mild_solution;
    auto sys = assemble(c.model, law, Mesh::uniform(c.model.span, 8), c.mode);
    try {
        r.temporal = temporal_convergence(sys, c.initial, c.disturbance, sc, dts);
    } catch (const CompatibilityError& e) {
        std::cerr << "converge: " << e.what() << " (pass --mild-solution to accept)\n";
        return kExitUsage;
    } catch (const DivergenceError& e) {
        std::cerr << "converge: " << e.what() << '\n';
        return kExitDiverged;
    }

    const Provenance prov = provenance(c, "converge", lambda_of(rc));
    {
        auto os = open_out(o.out_dir, "convergence.csv");
        write_convergence_csv(os, r, prov.lines());
    }
    auto series = [](const std::string& label, const std::vector<ConvergenceRow>& rows, bool by_mesh) {
        Series s{label, {}, {}};
        for (const auto& x : rows) {
            s.x.push_back(std::log10(by_mesh ? double(x.elements) : x.dt));
            s.y.push_back(x.error);
        }
        return s;
    };
    {
        auto os = open_out(o.out_dir, "convergence_space.svg");
        ChartOptions co{"Static energy-norm error", "log10(elements)", "error"};
        co.log_y = true;
        write_svg_chart(os, {series("bending", r.bending, true), series("torsion", r.torsion, true)}, co, prov);
    }
    {
        auto os = open_out(o.out_dir, "convergence_time.svg");
        ChartOptions co{"Newmark vs matrix exponential", "log10(dt)", "relative L2 error"};
        co.log_y = true;
        write_svg_chart(os, {series("8 elements", r.temporal, false)}, co, prov);
    }
    write_convergence_csv(std::cout, r);
    return kExitOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Boundary-controlled flexible wing: certificates, simulation and verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommandOptions opts;
    std::uint64_t seed = 0;
    std::string which;
    const std::pair<const char*, const char*> commands[] = {
        {"certify", "search the stability certificate and write certificate.txt"},
        {"simulate", "integrate the discretized wing and write traces, snapshots and charts"},
        {"verify", "run the numerical checks of the analytic constructions"},
        {"converge", "mesh and time-step convergence studies"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", opts.config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override [run] seed");
        sub->add_flag("--mild-solution", opts.mild_solution, "accept incompatible closed-loop initial data");
        sub->callback([&which, name] { which = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (auto* sub : app.get_subcommands())
        if (sub->count("--seed")) opts.seed = seed;

    RunConfig config;
    try {
        config = load_config(opts.config_path);
    } catch (const ConfigError& e) {
        std::cerr << opts.config_path.string() << ": " << e.what() << '\n';
        return kExitUsage;
    }
    if (opts.seed) {
        config.seed = *opts.seed;
        config.verify.seed = *opts.seed;
    }
    try {
        fs::create_directories(opts.out_dir);
        if (which == "certify") return cmd_certify(config, opts);
        if (which == "simulate") return cmd_simulate(config, opts);
        if (which == "verify") return cmd_verify(config, opts);
        return cmd_converge(config, opts);
    } catch (const std::exception& e) {
        std::cerr << which << ": " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace flexwing
