#include "pphi/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "pphi/extremes.hpp"
#include "pphi/io.hpp"
#include "pphi/norms.hpp"
#include "pphi/parallel.hpp"

namespace pphi {

namespace fs = std::filesystem;
using nlohmann::json;

const char* code_version() { return "pphi 1.0.0"; }

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double parse_scale_or_auto(const json& v, const std::string& what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "auto") return -1.0;
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw ConfigError(what + ": expected a number, \"auto\" or \"inf\"");
    }
    return v.get<double>();
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    check_keys(j, "config", {"model", "grid", "sampler", "analysis", "seed", "out_dir"});
    if (j.contains("model")) {
        const json& m = j["model"];
        check_keys(m, "model", {"n", "mass2", "poly", "cutoff_e"});
        if (m.contains("n")) cfg.n = m["n"].get<int>();
        if (m.contains("mass2")) cfg.mass2 = m["mass2"].get<double>();
        if (m.contains("poly")) cfg.poly = m["poly"].get<std::vector<double>>();
        if (m.contains("cutoff_e")) cfg.cutoff_e = parse_scale_or_auto(m["cutoff_e"], "cutoff_e");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"rho", "tmax", "tmin"});
        if (g.contains("rho")) cfg.rho = g["rho"].get<double>();
        if (g.contains("tmax")) cfg.tmax = parse_scale_or_auto(g["tmax"], "tmax");
        if (g.contains("tmin")) cfg.tmin = parse_scale_or_auto(g["tmin"], "tmin");
    }
    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        check_keys(s, "sampler", {"method", "replicas", "mc_inner", "mcmc"});
        if (s.contains("method")) cfg.method = s["method"].get<std::string>();
        if (s.contains("replicas")) cfg.replicas = s["replicas"].get<int>();
        if (s.contains("mc_inner")) cfg.mc_inner = s["mc_inner"].get<int>();
        if (s.contains("mcmc")) {
            const json& mc = s["mcmc"];
            check_keys(mc, "sampler.mcmc", {"step", "burn_in", "thin"});
            if (mc.contains("step")) cfg.mcmc_step = mc["step"].get<double>();
            if (mc.contains("burn_in")) cfg.mcmc_burn_in = mc["burn_in"].get<int>();
            if (mc.contains("thin")) cfg.mcmc_thin = mc["thin"].get<int>();
        }
    }
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        check_keys(a, "analysis",
                   {"alphas", "moment_exponents", "extremes", "dump_fields"});
        if (a.contains("alphas")) cfg.alphas = a["alphas"].get<std::vector<double>>();
        if (a.contains("moment_exponents"))
            cfg.moment_exponents = a["moment_exponents"].get<std::vector<double>>();
        if (a.contains("extremes")) cfg.extremes = a["extremes"].get<bool>();
        if (a.contains("dump_fields")) cfg.dump_fields = a["dump_fields"].get<bool>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    if (cfg.n < 2) throw ConfigError("model.n must be >= 2");
    if (!(cfg.mass2 > 0.0)) throw ConfigError("model.mass2 must be > 0");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw ConfigError("grid.rho must be in (0,1)");
    if (cfg.method != "polchinski" && cfg.method != "mcmc")
        throw ConfigError("sampler.method must be 'polchinski' or 'mcmc'");
    if (cfg.replicas < 1) throw ConfigError("sampler.replicas must be >= 1");
    if (cfg.mc_inner < 2) throw ConfigError("sampler.mc_inner must be >= 2");
    if (!cfg.poly.empty()) {
        if (cfg.poly.size() % 2 != 0) throw ConfigError("model.poly: degree must be even");
        if (!(cfg.poly.back() > 0.0))
            throw ConfigError("model.poly: leading coefficient must be > 0");
    }
    return cfg;
}

nlohmann::json canonical_config_json(const RunConfig& cfg) {
    auto scale_repr = [](double v) -> json {
        if (v < 0.0) return "auto";
        if (std::isinf(v)) return "inf";
        return v;
    };
    return json{
        {"model",
         {{"n", cfg.n}, {"mass2", cfg.mass2}, {"poly", cfg.poly},
          {"cutoff_e", scale_repr(cfg.cutoff_e)}}},
        {"grid", {{"rho", cfg.rho}, {"tmax", scale_repr(cfg.tmax)},
                  {"tmin", scale_repr(cfg.tmin)}}},
        {"sampler",
         {{"method", cfg.method}, {"replicas", cfg.replicas}, {"mc_inner", cfg.mc_inner},
          {"mcmc", {{"step", cfg.mcmc_step}, {"burn_in", cfg.mcmc_burn_in},
                    {"thin", cfg.mcmc_thin}}}}},
        {"analysis",
         {{"alphas", cfg.alphas}, {"moment_exponents", cfg.moment_exponents},
          {"extremes", cfg.extremes}, {"dump_fields", cfg.dump_fields}}},
        {"seed", cfg.seed},
        {"out_dir", cfg.out_dir}};
}

double resolve_cutoff_e(const LatticeGeometry& geom, const std::vector<double>& poly,
                        uint64_t seed, int pilot) {
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    WickPolynomial p(poly, variance_c_eps(geom), std::numeric_limits<double>::infinity());
    std::vector<double> vals(static_cast<size_t>(pilot));
    parallel_for(vals.size(), [&](size_t i) {
        vals[i] = v0(sample_gff(geom, derive_seed(seed, {"cutoff-pilot", i})), p);
    });
    std::sort(vals.begin(), vals.end());
    const double q = vals[static_cast<size_t>(0.999 * (vals.size() - 1))];
    return 10.0 * std::max(q, 1.0);
}

ResolvedRun resolve_run(const RunConfig& cfg) {
    ResolvedRun r;
    const LatticeGeometry geom(cfg.n, cfg.mass2);
    r.c_eps = variance_c_eps(geom);
    r.cutoff_e = cfg.cutoff_e;
    if (r.cutoff_e < 0.0)
        r.cutoff_e = cfg.method == "mcmc" && cfg.poly.empty()
                         ? std::numeric_limits<double>::infinity()
                         : resolve_cutoff_e(geom, cfg.poly, cfg.seed);
    if (cfg.method == "polchinski" && std::isinf(r.cutoff_e) && !cfg.poly.empty())
        throw ConfigError("polchinski sampler requires a finite cutoff_e");
    r.poly = WickPolynomial(cfg.poly, r.c_eps, r.cutoff_e);
    r.grid = make_geometric_grid(geom, cfg.rho, cfg.tmax, cfg.tmin);
    return r;
}

namespace {

struct ReplicaStats {
    uint64_t seed = 0;
    double l2_sq = 0.0;
    double v0_value = 0.0;
    double max_value = 0.0;
    double centered = 0.0;
    double z = 0.0;
    double coupling_residual = 0.0;
};

ReplicaStats field_stats(const RealField& f, const WickPolynomial& poly) {
    ReplicaStats s;
    double l2 = 0.0, mx = f.values[0];
    for (double v : f.values) {
        l2 += v * v;
        mx = std::max(mx, v);
    }
    s.l2_sq = l2 / (static_cast<double>(f.geom.n) * f.geom.n);
    s.v0_value = v0(f, poly);
    s.max_value = mx;
    const double eps = f.geom.epsilon();
    s.centered = eps < std::exp(-1.0) ? mx - m_eps(eps) : std::nan("");
    s.z = derivative_martingale(f, eps);
    return s;
}

json stats_record(int replica, const ReplicaStats& s) {
    json rec{{"replica", replica}, {"seed", s.seed},      {"l2_sq", s.l2_sq},
             {"v0", s.v0_value},   {"max", s.max_value},  {"centered_max", s.centered},
             {"z", s.z}};
    if (s.coupling_residual >= 0.0) rec["coupling_residual"] = s.coupling_residual;
    return rec;
}

}  // namespace

void write_path(const GffPath& path, const std::string& dir) {
    fs::create_directories(dir);
    json manifest{{"seed", path.seed},
                  {"n", path.fields.front().geom.n},
                  {"mass2", path.fields.front().geom.mass2},
                  {"times", json::array()}};
    for (double t : path.grid.times)
        manifest["times"].push_back(std::isinf(t) ? json("inf") : json(t));
    write_json_file(manifest, dir + "/path.json");
    char name[32];
    for (size_t j = 0; j < path.fields.size(); ++j) {
        std::snprintf(name, sizeof(name), "scale_%04zu.bin", j);
        write_field(path.fields[j], dir + "/" + name);
    }
}

GffPath read_path(const std::string& dir) {
    const json manifest = read_json_file(dir + "/path.json");
    GffPath path;
    path.seed = manifest["seed"].get<uint64_t>();
    std::vector<double> times;
    for (const auto& t : manifest["times"])
        times.push_back(t.is_string() ? std::numeric_limits<double>::infinity()
                                      : t.get<double>());
    path.grid = ScaleGrid(times);
    char name[32];
    for (size_t j = 0; j < times.size(); ++j) {
        std::snprintf(name, sizeof(name), "scale_%04zu.bin", j);
        path.fields.push_back(read_field(dir + "/" + name));
    }
    return path;
}

void run(const RunConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    const LatticeGeometry geom(cfg.n, cfg.mass2);
    const ResolvedRun res = resolve_run(cfg);
    fs::create_directories(cfg.out_dir);

    json manifest{{"status", "incomplete"},
                  {"code_version", code_version()},
                  {"config", canonical_config_json(cfg)},
                  {"resolved",
                   {{"cutoff_e", std::isinf(res.cutoff_e) ? json("inf") : json(res.cutoff_e)},
                    {"c_eps", res.c_eps},
                    {"t_max", res.grid.times[1]},
                    {"t_min", res.grid.times[res.grid.size() - 2]},
                    {"grid_points", res.grid.size()}}}};
    json seed_table = json::array();
    for (int r = 0; r < cfg.replicas; ++r)
        seed_table.push_back(derive_seed(cfg.seed, {"replica", r}));
    manifest["seeds"] = {{"master", cfg.seed}, {"replicas", seed_table}};
    write_json_file(manifest, cfg.out_dir + "/manifest.json");

    std::vector<ReplicaStats> stats(static_cast<size_t>(cfg.replicas));
    std::vector<RealField> final_fields(static_cast<size_t>(cfg.replicas));
    std::vector<CouplingSample> couplings;
    const bool keep_couplings = cfg.method == "polchinski" && !cfg.alphas.empty();
    if (keep_couplings) couplings.resize(static_cast<size_t>(cfg.replicas));

    if (cfg.method == "polchinski") {
        parallel_for(static_cast<size_t>(cfg.replicas), [&](size_t r) {
            const uint64_t rseed = seed_table[r].get<uint64_t>();
            FlowConfig fc{geom, res.poly, res.grid, cfg.mc_inner,
                          derive_seed(rseed, {"flow"})};
            GffPath path = sample_scale_path(geom, res.grid, derive_seed(rseed, {"path"}));
            CouplingSample cs = integrate_backward(fc, path);
            double resid = 0.0;
            for (size_t j = 0; j < cs.grid.size(); ++j)
                for (size_t i = 0; i < cs.phi_p[j].values.size(); ++i)
                    resid = std::max(resid, std::abs(cs.phi_p[j].values[i] -
                                                     cs.phi_delta[j].values[i] -
                                                     cs.phi_gff[j].values[i]));
            stats[r] = field_stats(cs.phi_p.back(), res.poly);
            stats[r].seed = rseed;
            stats[r].coupling_residual = resid;
            final_fields[r] = cs.phi_p.back();
            if (keep_couplings) couplings[r] = std::move(cs);
        });
    } else {
        McmcConfig mc;
        mc.geom = geom;
        mc.poly = res.poly;
        mc.step = cfg.mcmc_step;
        mc.burn_in = cfg.mcmc_burn_in;
        mc.thin = cfg.mcmc_thin;
        mc.n_samples = cfg.replicas;
        mc.seed = derive_seed(cfg.seed, {"mcmc-chain"});
        McmcResult result = mala_chain(mc);
        for (int r = 0; r < cfg.replicas; ++r) {
            stats[static_cast<size_t>(r)] = field_stats(result.samples[static_cast<size_t>(r)],
                                                        res.poly);
            stats[static_cast<size_t>(r)].seed = mc.seed;
            stats[static_cast<size_t>(r)].coupling_residual = -1.0;  // not applicable
            final_fields[static_cast<size_t>(r)] = result.samples[static_cast<size_t>(r)];
        }
        manifest["mcmc"] = {{"acceptance_rate", result.diagnostics.acceptance_rate},
                            {"step_used", result.diagnostics.step_used},
                            {"ess_l2", result.diagnostics.ess_l2},
                            {"ess_max", result.diagnostics.ess_max}};
    }

    {
        JsonlWriter jsonl(cfg.out_dir + "/stats.jsonl");
        for (int r = 0; r < cfg.replicas; ++r)
            jsonl.write(stats_record(r, stats[static_cast<size_t>(r)]));
    }

    if (cfg.dump_fields) {
        fs::create_directories(cfg.out_dir + "/fields");
        char name[48];
        for (int r = 0; r < cfg.replicas; ++r) {
            std::snprintf(name, sizeof(name), "/fields/phi_%06d.bin", r);
            write_field(final_fields[static_cast<size_t>(r)], cfg.out_dir + name);
        }
    }

    if (keep_couplings) {
        DifferenceDiagnostics d =
            difference_diagnostics(couplings, cfg.alphas, cfg.moment_exponents);
        json dj{{"times", d.times}, {"curves", json::array()}};
        for (const auto& c : d.curves) {
            json cj{{"alpha", c.alpha}, {"exponent", c.exponent},
                    {"moment", json::array()}, {"continuity", json::array()}};
            for (size_t i = 0; i < c.moment.size(); ++i) {
                cj["moment"].push_back({{"mean", c.moment[i].mean},
                                        {"se", c.moment[i].se},
                                        {"ci", c.moment_ci[i]}});
                cj["continuity"].push_back({{"mean", c.continuity[i].mean},
                                            {"se", c.continuity[i].se},
                                            {"ci", c.continuity_ci[i]}});
            }
            dj["curves"].push_back(std::move(cj));
        }
        write_json_file(dj, cfg.out_dir + "/diagnostics.json");
    }

    if (cfg.extremes && cfg.replicas >= 50) {
        std::vector<double> centered;
        for (const auto& s : stats) centered.push_back(s.centered);
        const GumbelFit fit = gumbel_fit(centered);
        write_json_file(json{{"location", fit.location},
                             {"scale", fit.scale},
                             {"ks_distance", fit.ks_distance},
                             {"samples", centered.size()}},
                        cfg.out_dir + "/extremes.json");
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    manifest["status"] = "complete";
    manifest["timing"] = {{"wall_seconds", wall},
                          {"replicas_per_second", cfg.replicas / std::max(wall, 1e-9)}};
    write_json_file(manifest, cfg.out_dir + "/manifest.json");
}

}  // namespace pphi
