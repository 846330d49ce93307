#include "hygrid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace hygrid::runner {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt6(double v) { return fmt(v, "%.6g"); }

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    return f;
}

}  // namespace

RunManifest RunManifest::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open manifest: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("manifest parse error: " + std::string(e.what()));
    }
    RunManifest m;
    try {
        m.seed = j.value("seed", m.seed);
        m.horizon = j.value("horizon", m.horizon);
        m.out_dir = j.value("out_dir", m.out_dir);
        m.jobs = j.value("jobs", m.jobs);
        if (j.contains("cases")) m.cases = j["cases"].get<std::vector<std::string>>();
        if (j.contains("network")) {
            const json& n = j["network"];
            m.network_path = n.value("path", m.network_path);
            std::string mode = n.value("mode", std::string("copperplate"));
            if (mode == "full")
                m.network_mode = opt::NetworkMode::full;
            else if (mode == "copperplate")
                m.network_mode = opt::NetworkMode::copperplate;
            else
                throw ConfigError("manifest: unknown network mode '" + mode + "'");
        }
        if (j.contains("profiles")) {
            const json& p = j["profiles"];
            m.load_profile_path = p.value("load_csv", m.load_profile_path);
            m.pv_profile_path = p.value("pv_csv", m.pv_profile_path);
            m.load_energy_mwh = p.value("load_energy_mwh", m.load_energy_mwh);
        }
        if (j.contains("overrides"))
            for (auto& [k, v] : j["overrides"].items()) {
                if (!v.is_number())
                    throw ConfigError("manifest: override '" + k + "' must be numeric");
                m.overrides[k] = v.get<double>();
            }
    } catch (const json::exception& e) {
        throw ConfigError("manifest field error: " + std::string(e.what()));
    }
    if (m.horizon <= 0) throw ConfigError("manifest: horizon must be positive");
    if (m.load_energy_mwh <= 0)
        throw ConfigError("manifest: load_energy_mwh must be positive");
    for (const std::string& c : m.cases) {
        const auto& ids = opt::CaseConfig::all_case_ids();
        if (std::find(ids.begin(), ids.end(), c) == ids.end())
            throw ConfigError("manifest: unknown case id '" + c + "'");
    }
    return m;
}

std::string RunManifest::to_json() const {
    json j;
    j["seed"] = seed;
    j["horizon"] = horizon;
    j["out_dir"] = out_dir;
    j["jobs"] = jobs;
    j["cases"] = cases.empty() ? opt::CaseConfig::all_case_ids() : cases;
    j["network"]["path"] = network_path.empty() ? "builtin" : network_path;
    j["network"]["mode"] =
        network_mode == opt::NetworkMode::full ? "full" : "copperplate";
    j["profiles"]["load_csv"] = load_profile_path;
    j["profiles"]["pv_csv"] = pv_profile_path;
    j["profiles"]["load_energy_mwh"] = load_energy_mwh;
    j["overrides"] = overrides;
    return j.dump(2) + "\n";
}

void apply_overrides(const std::map<std::string, double>& overrides,
                     opt::CaseConfig& cfg, opt::AssetSet& a) {
    for (const auto& [key, v] : overrides) {
        if (key == "import_price") cfg.import_price = v;
        else if (key == "curtail_penalty") cfg.curtail_penalty = v;
        else if (key == "lcoe_price_cap") cfg.lcoe_price_cap = v;
        else if (key == "pv.lcoe") a.pv.lcoe = v;
        else if (key == "battery.capex_per_kw") a.battery.capex_per_kw = v;
        else if (key == "battery.rte") a.battery.rte = v;
        else if (key == "fin.interest") a.fin.interest = v;
        else if (key == "fin.horizon_fraction") a.fin.horizon_fraction = v;
        else if (key == "h2.ez_capex_per_kw") a.h2.ez_capex_per_kw = v;
        else if (key == "h2.comp_capex_per_kw") a.h2.comp_capex_per_kw = v;
        else if (key == "h2.tank_capex_per_kg") a.h2.tank_capex_per_kg = v;
        else if (key == "h2.fc_capex_per_kw") a.h2.fc_capex_per_kw = v;
        else if (key == "h2.e_spec_kwh_per_kg") a.h2.e_spec_kwh_per_kg = v;
        else if (key == "h2.storage_cost_per_kg") a.h2.storage_cost_per_kg = v;
        else if (key == "h2.comp_kwh_per_kg") a.h2.comp_kwh_per_kg = v;
        else if (key.rfind("dg.", 0) == 0) {
            size_t dot = key.rfind('.');
            if (dot <= 3) throw ConfigError("bad override key: " + key);
            std::string name = key.substr(3, dot - 3);
            std::string field = key.substr(dot + 1);
            bool found = false;
            for (auto& g : a.dgs)
                if (g.name == name) {
                    found = true;
                    if (field == "lcoe") g.lcoe = v;
                    else if (field == "no_load_cost") g.no_load_cost = v;
                    else if (field == "ramp_mw_per_h") g.ramp_mw_per_h = v;
                    else throw ConfigError("bad override key: " + key);
                }
            if (!found) throw ConfigError("override names unknown DG: " + key);
        } else {
            throw ConfigError("unknown override key: " + key);
        }
    }
}

void write_schedule_csv(const opt::ScheduleResult& s, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "hour,load_mw,import_mw";
    for (const auto& n : s.dg_names) f << ",dg:" << n;
    const bool pv = !s.pv_avail_mw.empty();
    const bool batt = !s.batt_ch_mw.empty();
    const bool h2 = !s.ez_mw.empty();
    if (pv) f << ",pv_avail_mw,pv_disp_mw,pv_curt_mw";
    if (batt) f << ",batt_ch_mw,batt_dis_mw,soc_mwh";
    if (h2) f << ",ez_mw,fc_mw,tank_kg";
    f << "\n";
    for (int h = 0; h < s.horizon; ++h) {
        f << h << ',' << fmt(s.load_mw[h]) << ',' << fmt(s.import_mw[h]);
        for (const auto& g : s.dg_mw) f << ',' << fmt(g[h]);
        if (pv)
            f << ',' << fmt(s.pv_avail_mw[h]) << ',' << fmt(s.pv_disp_mw[h]) << ','
              << fmt(s.pv_curt_mw[h]);
        if (batt)
            f << ',' << fmt(s.batt_ch_mw[h]) << ',' << fmt(s.batt_dis_mw[h]) << ','
              << fmt(s.soc_mwh[h]);
        if (h2)
            f << ',' << fmt(s.ez_mw[h]) << ',' << fmt(s.fc_mw[h]) << ','
              << fmt(s.tank_kg[h]);
        f << "\n";
    }
}

opt::ScheduleResult read_schedule_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open schedule: " + path);
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty schedule file: " + path);
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    opt::ScheduleResult s;
    std::vector<std::vector<double>> data(cols.size());
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string c;
        size_t i = 0;
        while (std::getline(ss, c, ',')) {
            if (i >= cols.size()) throw ConfigError("ragged schedule row: " + path);
            data[i++].push_back(std::stod(c));
        }
        if (i != cols.size()) throw ConfigError("ragged schedule row: " + path);
    }
    s.horizon = static_cast<int>(data.empty() ? 0 : data[0].size());
    for (size_t i = 0; i < cols.size(); ++i) {
        const std::string& c = cols[i];
        if (c == "hour") continue;
        else if (c == "load_mw") s.load_mw = data[i];
        else if (c == "import_mw") s.import_mw = data[i];
        else if (c.rfind("dg:", 0) == 0) {
            s.dg_names.push_back(c.substr(3));
            s.dg_mw.push_back(data[i]);
        }
        else if (c == "pv_avail_mw") s.pv_avail_mw = data[i];
        else if (c == "pv_disp_mw") s.pv_disp_mw = data[i];
        else if (c == "pv_curt_mw") s.pv_curt_mw = data[i];
        else if (c == "batt_ch_mw") s.batt_ch_mw = data[i];
        else if (c == "batt_dis_mw") s.batt_dis_mw = data[i];
        else if (c == "soc_mwh") s.soc_mwh = data[i];
        else if (c == "ez_mw") s.ez_mw = data[i];
        else if (c == "fc_mw") s.fc_mw = data[i];
        else if (c == "tank_kg") s.tank_kg = data[i];
        else throw ConfigError("unknown schedule column '" + c + "' in " + path);
    }
    return s;
}

namespace {

json report_to_json(const CaseOutcome& oc) {
    const metrics::CaseReport& r = oc.report;
    json j;
    j["case"] = r.case_id;
    j["seed"] = r.seed;
    j["objective_usd"] = r.objective;
    j["capital_cost_usd"] = r.capital_cost;
    j["operation_cost_usd"] = r.operation_cost;
    j["green_fraction_pct"] = r.green_fraction_pct;
    j["dg_capacity_factor_pct"] = r.dg_capacity_factor_pct;
    j["mean_dlmp_usd_per_mwh"] = r.mean_dlmp;
    j["hourly_dlmp_usd_per_mwh"] = r.hourly_dlmp;
    j["curtailment"]["available_mwh"] = r.curtailment.available_mwh;
    j["curtailment"]["curtailed_mwh"] = r.curtailment.curtailed_mwh;
    j["curtailment"]["pct"] = r.curtailment.pct;
    j["sizing"]["batt_power_mw"] = r.sizing.batt_power_mw;
    j["sizing"]["batt_energy_mwh"] = r.sizing.batt_energy_mwh;
    j["sizing"]["ez_mw"] = r.sizing.ez_mw;
    j["sizing"]["fc_mw"] = r.sizing.fc_mw;
    j["sizing"]["tank_kg"] = r.sizing.tank_kg;
    j["voltage"]["v_min_pu"] = r.v_min;
    j["voltage"]["v_max_pu"] = r.v_max;
    if (!r.voltage_adjusted_load_mwh.empty())
        j["voltage"]["class_adjusted_load_mwh"] = r.voltage_adjusted_load_mwh;
    if (oc.fixed_point_iterations > 0) {
        j["fixed_point"]["iterations"] = oc.fixed_point_iterations;
        j["fixed_point"]["converged"] = oc.fixed_point_converged;
    }
    j["warnings"] = r.warnings;
    return j;
}

void write_stack_csv(const opt::ScheduleResult& s, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "hour,load_mw";
    for (const auto& n : s.dg_names) f << ",dg:" << n;
    f << ",pv_disp_mw,batt_dis_mw,fc_mw,import_mw,batt_ch_mw,ez_mw,pv_curt_mw\n";
    auto at = [](const std::vector<double>& v, int h) {
        return v.empty() ? 0.0 : v[h];
    };
    for (int h = 0; h < s.horizon; ++h) {
        f << h << ',' << fmt6(s.load_mw[h]);
        for (const auto& g : s.dg_mw) f << ',' << fmt6(g[h]);
        f << ',' << fmt6(at(s.pv_disp_mw, h)) << ',' << fmt6(at(s.batt_dis_mw, h))
          << ',' << fmt6(at(s.fc_mw, h)) << ',' << fmt6(s.import_mw[h]) << ','
          << fmt6(at(s.batt_ch_mw, h)) << ',' << fmt6(at(s.ez_mw, h)) << ','
          << fmt6(at(s.pv_curt_mw, h)) << "\n";
    }
}

void write_voltage_csv(const opt::ScheduleResult& s, const net::Network& network,
                       const std::string& path) {
    std::ofstream f = open_out(path);
    f << "hour,v_min_pu,v_max_pu";
    for (const auto& b : network.buses) f << ",v" << b.id;
    f << "\n";
    for (int h = 0; h < s.horizon; ++h) {
        double lo = 10, hi = 0;
        for (double v : s.v_pu[h]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        f << h << ',' << fmt6(lo) << ',' << fmt6(hi);
        for (double v : s.v_pu[h]) f << ',' << fmt6(v);
        f << "\n";
    }
}

struct CaseJob {
    std::string id;
    opt::CaseConfig cfg;
    opt::AssetSet assets;
    profiles::ProfileSet prof;
};

}  // namespace

RunOutcome run(const RunManifest& m) {
    net::Network network = m.network_path.empty() || m.network_path == "builtin"
                               ? net::builtin_ieee33()
                               : net::parse_network_file(m.network_path);

    std::vector<std::string> case_ids =
        m.cases.empty() ? opt::CaseConfig::all_case_ids() : m.cases;

    profiles::ProfileSet load_override, pv_override;
    if (!m.load_profile_path.empty())
        load_override = profiles::read_profiles_csv(m.load_profile_path);
    if (!m.pv_profile_path.empty())
        pv_override = profiles::read_profiles_csv(m.pv_profile_path);

    std::vector<CaseJob> jobs;
    for (const std::string& id : case_ids) {
        CaseJob job;
        job.id = id;
        job.cfg = opt::CaseConfig::for_case(id);
        job.cfg.horizon = m.horizon;
        job.cfg.network = m.network_mode;
        job.assets = opt::default_assets(job.cfg);
        apply_overrides(m.overrides, job.cfg, job.assets);
        job.prof = profiles::gen_profiles(m.seed, job.cfg.pv_penetration, m.horizon,
                                          m.load_energy_mwh);
        if (!m.load_profile_path.empty()) {
            if (load_override.horizon() < m.horizon)
                throw ConfigError("load profile shorter than horizon");
            job.prof.load_mw.assign(load_override.load_mw.begin(),
                                    load_override.load_mw.begin() + m.horizon);
        }
        if (!m.pv_profile_path.empty()) {
            if (pv_override.horizon() < m.horizon)
                throw ConfigError("pv profile shorter than horizon");
            job.prof.pv_avail_mw.assign(pv_override.pv_avail_mw.begin(),
                                        pv_override.pv_avail_mw.begin() + m.horizon);
        }
        jobs.push_back(std::move(job));
    }

    fs::create_directories(m.out_dir);

    std::vector<CaseOutcome> outcomes(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const CaseJob& job = jobs[i];
            try {
                opt::CaseRun run;
                CaseOutcome oc;
                if (job.cfg.update_dg_lcoe) {
                    opt::FixedPointResult fp =
                        opt::run_case_5b(job.cfg, network, job.assets, job.prof);
                    run = std::move(fp.iterates.back().run);
                    oc.fixed_point_iterations = static_cast<int>(fp.iterates.size());
                    oc.fixed_point_converged = fp.converged;
                } else {
                    run = opt::run_case(job.cfg, network, job.assets, job.prof);
                }
                oc.report = metrics::make_report(run, network, job.assets, m.seed);

                fs::path dir = fs::path(m.out_dir) / ("case_" + job.id);
                fs::create_directories(dir);
                write_schedule_csv(run.schedule, (dir / "schedule.csv").string());
                write_stack_csv(run.schedule, (dir / "stack.csv").string());
                if (!run.schedule.v_pu.empty())
                    write_voltage_csv(run.schedule, network,
                                      (dir / "voltage.csv").string());
                std::ofstream rf = open_out((dir / "report.json").string());
                rf << report_to_json(oc).dump(2) << "\n";
                outcomes[i] = std::move(oc);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    int nworkers = m.jobs > 0 ? m.jobs
                              : std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
    nworkers = std::min<int>(nworkers, static_cast<int>(jobs.size()));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunOutcome out;
    out.summary_path = (fs::path(m.out_dir) / "summary.csv").string();
    std::ofstream sf = open_out(out.summary_path);
    sf << "case,objective_usd,capital_usd,operation_usd,green_pct,mean_dlmp,"
          "curtail_pct,batt_power_mw,batt_energy_mwh,ez_mw,fc_mw,tank_kg,"
          "v_min_pu,v_max_pu\n";
    for (const CaseOutcome& oc : outcomes) {
        const metrics::CaseReport& r = oc.report;
        sf << r.case_id << ',' << fmt6(r.objective) << ',' << fmt6(r.capital_cost)
           << ',' << fmt6(r.operation_cost) << ',' << fmt6(r.green_fraction_pct)
           << ',' << fmt6(r.mean_dlmp) << ',' << fmt6(r.curtailment.pct) << ','
           << fmt6(r.sizing.batt_power_mw) << ',' << fmt6(r.sizing.batt_energy_mwh)
           << ',' << fmt6(r.sizing.ez_mw) << ',' << fmt6(r.sizing.fc_mw) << ','
           << fmt6(r.sizing.tank_kg) << ',' << fmt6(r.v_min) << ',' << fmt6(r.v_max)
           << "\n";
    }
    sf.close();
    out.outcomes = std::move(outcomes);
    return out;
}

std::vector<H2SweepCell> sweep_h2(const std::vector<double>& ez_capex_grid,
                                  const std::vector<double>& pv_lcoe_grid,
                                  bool include_compressor, double comp_capex_per_kw,
                                  const std::string& csv_path) {
    std::vector<H2SweepCell> cells;
    for (double capex : ez_capex_grid)
        for (double lcoe : pv_lcoe_grid) {
            metrics::H2CostBreakdown b = metrics::h2_cost(
                capex, include_compressor ? comp_capex_per_kw : 0.0, lcoe);
            H2SweepCell c;
            c.ez_capex = capex;
            c.pv_lcoe = lcoe;
            c.production = b.energy_per_kg + b.capex_per_kg;
            c.storage = b.storage_per_kg;
            c.total = b.total_per_kg;
            c.meets_doe_target = c.production <= 1.0 + 1e-12;
            cells.push_back(c);
        }
    if (!csv_path.empty()) {
        std::ofstream f = open_out(csv_path);
        f << "ez_capex_usd_per_kw,pv_lcoe_usd_per_mwh,production_usd_per_kg,"
             "storage_usd_per_kg,total_usd_per_kg,meets_doe_target\n";
        for (const H2SweepCell& c : cells)
            f << fmt6(c.ez_capex) << ',' << fmt6(c.pv_lcoe) << ','
              << fmt(c.production, "%.4f") << ',' << fmt(c.storage, "%.4f") << ','
              << fmt(c.total, "%.4f") << ',' << (c.meets_doe_target ? 1 : 0) << "\n";
    }
    return cells;
}

}  // namespace hygrid::runner
