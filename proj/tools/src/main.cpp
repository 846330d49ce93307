// hygrid CLI: distribution-feeder decarbonization case studies.
//
// Exit codes: 0 success, 1 configuration / input error, 2 solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hygrid/metrics.hpp"
#include "hygrid/network.hpp"
#include "hygrid/optimizer.hpp"
#include "hygrid/profiles.hpp"
#include "hygrid/runner.hpp"

using namespace hygrid;

namespace {

int cmd_run(const std::string& manifest_path, const std::vector<std::string>& cases,
            int seed, const std::string& network_mode, const std::string& out_dir,
            int horizon, int jobs) {
    runner::RunManifest m;
    if (!manifest_path.empty())
        m = runner::RunManifest::from_json_file(manifest_path);
    if (!cases.empty()) m.cases = cases;
    if (seed >= 0) m.seed = static_cast<uint32_t>(seed);
    if (!network_mode.empty()) {
        if (network_mode == "full")
            m.network_mode = opt::NetworkMode::full;
        else if (network_mode == "copperplate")
            m.network_mode = opt::NetworkMode::copperplate;
        else
            throw runner::ConfigError("unknown --network-mode: " + network_mode);
    }
    if (!out_dir.empty()) m.out_dir = out_dir;
    if (horizon > 0) m.horizon = horizon;
    if (jobs > 0) m.jobs = jobs;

    runner::RunOutcome out = runner::run(m);
    std::printf("%-5s %12s %8s %10s %9s\n", "case", "objective", "green%", "mean_dlmp",
                "curt%");
    for (const auto& oc : out.outcomes) {
        const metrics::CaseReport& r = oc.report;
        std::printf("%-5s %12.2f %8.2f %10.2f %9.2f\n", r.case_id.c_str(),
                    r.objective, r.green_fraction_pct, r.mean_dlmp,
                    r.curtailment.pct);
        for (const std::string& w : r.warnings)
            std::fprintf(stderr, "warning [case %s]: %s\n", r.case_id.c_str(),
                         w.c_str());
    }
    std::printf("summary: %s\n", out.summary_path.c_str());
    return 0;
}

int cmd_sweep(const std::vector<double>& ez, const std::vector<double>& lcoe,
              bool no_compressor, const std::string& out_path) {
    auto cells = runner::sweep_h2(ez, lcoe, !no_compressor, 148.0, out_path);
    std::printf("%10s %10s %12s %10s %6s\n", "ez_capex", "pv_lcoe", "production",
                "total", "<=$1");
    for (const auto& c : cells)
        std::printf("%10.1f %10.1f %12.3f %10.3f %6s\n", c.ez_capex, c.pv_lcoe,
                    c.production, c.total, c.meets_doe_target ? "yes" : "no");
    if (!out_path.empty()) std::printf("written: %s\n", out_path.c_str());
    return 0;
}

int cmd_gen_profiles(int seed, double penetration, int horizon,
                     const std::string& out_path) {
    profiles::ProfileSet p =
        profiles::gen_profiles(static_cast<uint32_t>(seed), penetration, horizon);
    profiles::write_profiles_csv(p, out_path);
    double le = 0, pe = 0;
    for (double v : p.load_mw) le += v;
    for (double v : p.pv_avail_mw) pe += v;
    std::printf("wrote %s: %d hours, load %.1f MWh, pv %.1f MWh\n", out_path.c_str(),
                p.horizon(), le, pe);
    return 0;
}

int cmd_validate(const std::string& network_path, const std::string& manifest_path) {
    if (!network_path.empty()) {
        net::Network n = network_path == "builtin"
                             ? net::builtin_ieee33()
                             : net::parse_network_file(network_path);
        std::printf("network ok: %d buses, %zu lines, %.0f kW / %.0f kvar load\n",
                    n.num_buses(), n.lines.size(), n.total_p_load_kw(),
                    n.total_q_load_kvar());
    }
    if (!manifest_path.empty()) {
        runner::RunManifest m = runner::RunManifest::from_json_file(manifest_path);
        std::printf("manifest ok: seed %u, horizon %d, %zu case(s)\n", m.seed,
                    m.horizon,
                    (m.cases.empty() ? opt::CaseConfig::all_case_ids() : m.cases)
                        .size());
    }
    if (network_path.empty() && manifest_path.empty()) {
        std::fprintf(stderr, "validate: pass --network and/or --manifest\n");
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hygrid: joint sizing/dispatch case studies on a radial feeder"};
    app.require_subcommand(1);

    std::string manifest, network_mode, out_dir, network_path;
    std::vector<std::string> cases;
    int seed = -1, horizon = 0, jobs = 0;

    CLI::App* run = app.add_subcommand("run", "run case studies");
    run->add_option("--manifest", manifest, "run manifest (JSON)");
    run->add_option("--case", cases, "case id (repeatable); default: all");
    run->add_option("--seed", seed, "profile RNG seed");
    run->add_option("--network-mode", network_mode, "full|copperplate");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--horizon", horizon, "hours");
    run->add_option("--jobs", jobs, "concurrent case workers");

    std::vector<double> ez_grid{50, 100, 150, 200, 250};
    std::vector<double> lcoe_grid{12, 20, 30, 40, 50};
    bool no_compressor = false;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep-h2", "hydrogen cost matrix");
    sweep->add_option("--ez-capex", ez_grid, "electrolyzer CAPEX grid, $/kW");
    sweep->add_option("--pv-lcoe", lcoe_grid, "PV LCOE grid, $/MWh");
    sweep->add_flag("--no-compressor", no_compressor, "exclude compressor CAPEX");
    sweep->add_option("--out", sweep_out, "CSV output path");

    int gp_seed = 1, gp_horizon = 336;
    double gp_pen = 1.2;
    std::string gp_out = "profiles.csv";
    CLI::App* gen = app.add_subcommand("gen-profiles", "write synthetic profiles");
    gen->add_option("--seed", gp_seed, "RNG seed");
    gen->add_option("--penetration", gp_pen, "PV energy / load energy");
    gen->add_option("--horizon", gp_horizon, "hours");
    gen->add_option("--out", gp_out, "CSV output path");

    std::string v_manifest;
    CLI::App* validate = app.add_subcommand("validate", "check inputs");
    validate->add_option("--network", network_path, "network CSV or 'builtin'");
    validate->add_option("--manifest", v_manifest, "run manifest (JSON)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(manifest, cases, seed, network_mode, out_dir, horizon,
                           jobs);
        if (sweep->parsed()) return cmd_sweep(ez_grid, lcoe_grid, no_compressor,
                                              sweep_out);
        if (gen->parsed()) return cmd_gen_profiles(gp_seed, gp_pen, gp_horizon,
                                                   gp_out);
        if (validate->parsed()) return cmd_validate(network_path, v_manifest);
    } catch (const opt::SolveError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
