#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pphi/extremes.hpp"
#include "pphi/harness.hpp"
#include "pphi/io.hpp"
#include "pphi/norms.hpp"
#include "pphi/parallel.hpp"
#include "pphi/variational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pphi;

namespace {

double parse_scale(const std::string& s, const char* what) {
    if (s == "auto") return -1.0;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    try {
        return std::stod(s);
    } catch (...) {
        throw ConfigError(std::string(what) + ": expected a number, 'auto' or 'inf'");
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

struct CommonFlags {
    std::string config_file;
    std::string poly, cutoff_e = "auto", tmax = "auto", tmin = "auto";
    RunConfig cfg;
};

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_file, "JSON config file (CLI flags override)");
    cmd->add_option("--n", f.cfg.n, "sites per side (eps = 1/n)");
    cmd->add_option("--mass2", f.cfg.mass2, "mass parameter m^2 > 0");
    cmd->add_option("--poly", f.poly, "interaction coefficients a1,a2,...,aN");
    cmd->add_option("--cutoff-e", f.cutoff_e, "energy cut-off (number, 'inf' or 'auto')");
    cmd->add_option("--rho", f.cfg.rho, "geometric grid ratio in (0,1)");
    cmd->add_option("--tmax", f.tmax, "largest finite scale (number or 'auto')");
    cmd->add_option("--tmin", f.tmin, "smallest positive scale (number or 'auto')");
    cmd->add_option("--mc-inner", f.cfg.mc_inner, "inner samples per gradient estimate");
    cmd->add_option("--replicas", f.cfg.replicas, "number of replicas / retained samples");
    cmd->add_option("--seed", f.cfg.seed, "master seed");
    cmd->add_option("--out", f.cfg.out_dir, "output directory");
}

RunConfig finalize_config(CLI::App* cmd, CommonFlags& f) {
    RunConfig cfg;
    if (!f.config_file.empty()) cfg = parse_run_config(read_json_file(f.config_file));
    auto over = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (over("--n")) cfg.n = f.cfg.n;
    if (over("--mass2")) cfg.mass2 = f.cfg.mass2;
    if (over("--poly")) cfg.poly = parse_list(f.poly);
    if (over("--cutoff-e")) cfg.cutoff_e = parse_scale(f.cutoff_e, "cutoff-e");
    if (over("--rho")) cfg.rho = f.cfg.rho;
    if (over("--tmax")) cfg.tmax = parse_scale(f.tmax, "tmax");
    if (over("--tmin")) cfg.tmin = parse_scale(f.tmin, "tmin");
    if (over("--mc-inner")) cfg.mc_inner = f.cfg.mc_inner;
    if (over("--replicas")) cfg.replicas = f.cfg.replicas;
    if (over("--seed")) cfg.seed = f.cfg.seed;
    if (over("--out")) cfg.out_dir = f.cfg.out_dir;
    // revalidate combined config
    return parse_run_config(canonical_config_json(cfg));
}

int cmd_extremes(const std::string& input, const std::string& out_json,
                 const std::string& out_csv) {
    std::vector<double> centered;
    if (fs::is_directory(input)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(input))
            if (e.path().extension() == ".bin") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files) centered.push_back(centered_max(read_field(p.string())).centered);
    } else {
        std::ifstream in(input);
        if (!in) throw ConfigError("extremes: cannot open " + input);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json rec = json::parse(line);
            if (rec.contains("centered_max"))
                centered.push_back(rec["centered_max"].get<double>());
        }
    }
    const GumbelFit fit = gumbel_fit(centered);
    json rep{{"samples", centered.size()},
             {"location", fit.location},
             {"scale", fit.scale},
             {"ks_distance", fit.ks_distance},
             {"log_likelihood", fit.log_likelihood}};
    if (out_json.empty())
        std::cout << rep.dump(2) << "\n";
    else
        write_json_file(rep, out_json);
    if (!out_csv.empty()) {
        std::sort(centered.begin(), centered.end());
        std::ofstream csv(out_csv);
        csv << "x,empirical_cdf,fitted_cdf\n";
        for (size_t i = 0; i < centered.size(); ++i)
            csv << centered[i] << "," << (i + 1.0) / centered.size() << ","
                << gumbel_cdf(centered[i], fit.location, fit.scale) << "\n";
    }
    return 0;
}

int cmd_validate(uint64_t seed) {
    std::printf("validate: quartic 8x8 preset, flow vs MALA oracle\n");
    const LatticeGeometry geom(8, 1.0);
    const double c = variance_c_eps(geom);
    std::vector<double> quartic{0.0, 0.0, 0.0, 1.0};
    const double e_cut = resolve_cutoff_e(geom, quartic, seed, 500);
    const WickPolynomial poly(quartic, c, e_cut);
    const ScaleGrid grid = make_geometric_grid(geom, 0.7);

    const int replicas = 200;
    std::vector<double> flow_l2(replicas), flow_v0(replicas), flow_max(replicas);
    parallel_for(static_cast<size_t>(replicas), [&](size_t r) {
        FlowConfig fc{geom, poly, grid, 128, derive_seed(seed, {"validate-flow", r})};
        GffPath path = sample_scale_path(geom, grid, derive_seed(seed, {"validate-path", r}));
        CouplingSample cs = integrate_backward(fc, path);
        const RealField& f = cs.phi_p.back();
        double l2 = 0.0, mx = f.values[0];
        for (double v : f.values) {
            l2 += v * v;
            mx = std::max(mx, v);
        }
        flow_l2[r] = l2 / 64.0;
        flow_v0[r] = v0(f, poly);
        flow_max[r] = mx;
    });

    McmcConfig mc;
    mc.geom = geom;
    mc.poly = poly;
    mc.n_samples = 500;
    mc.thin = 20;
    mc.burn_in = 5000;
    mc.seed = derive_seed(seed, {"validate-mcmc"});
    McmcResult mr = mala_chain(mc);
    std::vector<double> mc_l2, mc_v0, mc_max;
    for (const auto& f : mr.samples) {
        double l2 = 0.0, mx = f.values[0];
        for (double v : f.values) {
            l2 += v * v;
            mx = std::max(mx, v);
        }
        mc_l2.push_back(l2 / 64.0);
        mc_v0.push_back(v0(f, poly));
        mc_max.push_back(mx);
    }

    auto row = [](const char* name, const std::vector<double>& a,
                  const std::vector<double>& b, double ess) {
        MeanSE ma = mean_se(a);
        MeanSE mb = mean_se(b);
        const double se_b = mb.se * std::sqrt(b.size() / std::max(ess, 1.0));
        const double z = std::abs(ma.mean - mb.mean) /
                         std::sqrt(ma.se * ma.se + se_b * se_b);
        std::printf("  %-12s flow %9.5f +- %.5f   mcmc %9.5f +- %.5f   |z| = %.2f\n",
                    name, ma.mean, ma.se, mb.mean, se_b, z);
        return z;
    };
    std::printf("  observable   flow mean               mcmc mean               sigma\n");
    const double z1 = row("l2_sq", flow_l2, mc_l2, mr.diagnostics.ess_l2);
    const double z2 = row("v0", flow_v0, mc_v0, mr.diagnostics.ess_l2);
    const double z3 = row("max", flow_max, mc_max, mr.diagnostics.ess_max);
    const bool ok = z1 < 3.0 && z2 < 3.0 && z3 < 3.0;
    std::printf("validate: %s\n", ok ? "PASS (all |z| < 3)" : "FAIL");
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice P(phi)_2 toolkit: Polchinski flow, GFF coupling, "
                 "variational checks, extremes"};
    app.require_subcommand(1);

    // sample-gff
    auto* gff = app.add_subcommand("sample-gff", "sample the free field");
    int gff_n = 16;
    double gff_mass2 = 1.0;
    int gff_replicas = 100;
    uint64_t gff_seed = 1;
    std::string gff_out = "gff-run";
    bool gff_paths = false;
    double gff_rho = 0.7;
    gff->add_option("--n", gff_n);
    gff->add_option("--mass2", gff_mass2);
    gff->add_option("--replicas", gff_replicas);
    gff->add_option("--seed", gff_seed);
    gff->add_option("--out", gff_out);
    gff->add_option("--rho", gff_rho);
    gff->add_flag("--paths", gff_paths, "serialize full scale paths");

    // sample-pphi
    auto* pphi_cmd = app.add_subcommand("sample-pphi", "sample the interacting field");
    CommonFlags pf;
    std::string method = "polchinski";
    bool dump_fields = false, do_extremes = false;
    std::string alphas_opt, exponents_opt;
    double mcmc_step = 0.05;
    int mcmc_burn = 2000, mcmc_thin = 10;
    add_model_flags(pphi_cmd, pf);
    pphi_cmd->add_option("--method", method, "polchinski | mcmc");
    pphi_cmd->add_flag("--dump-fields", dump_fields);
    pphi_cmd->add_flag("--extremes", do_extremes);
    pphi_cmd->add_option("--alphas", alphas_opt, "difference-field Sobolev exponents");
    pphi_cmd->add_option("--exponents", exponents_opt, "difference-field moment exponents");
    pphi_cmd->add_option("--mcmc-step", mcmc_step);
    pphi_cmd->add_option("--mcmc-burn-in", mcmc_burn);
    pphi_cmd->add_option("--mcmc-thin", mcmc_thin);

    // coupling-diagnostics
    auto* coup = app.add_subcommand("coupling-diagnostics",
                                    "flow run with difference-field diagnostics");
    CommonFlags cf;
    std::string c_alphas = "1.0", c_exponents = "2.0";
    add_model_flags(coup, cf);
    coup->add_option("--alphas", c_alphas);
    coup->add_option("--exponents", c_exponents);

    // variational
    auto* vari = app.add_subcommand("variational", "Boue-Dupuis objective and minimizers");
    CommonFlags vf;
    std::string mode = "both";
    int sgd_steps = 200, sgd_batch = 64;
    double sgd_rate = 0.1;
    std::string vari_out;
    add_model_flags(vari, vf);
    vari->add_option("--mode", mode, "open-loop | feedback | both");
    vari->add_option("--sgd-steps", sgd_steps);
    vari->add_option("--sgd-rate", sgd_rate);
    vari->add_option("--sgd-batch", sgd_batch);
    vari->add_option("--report", vari_out, "write the report JSON here");

    // extremes
    auto* extr = app.add_subcommand("extremes", "Gumbel fit of per-replica maxima");
    std::string ex_input, ex_json, ex_csv;
    extr->add_option("--input", ex_input, "stats.jsonl or a directory of field dumps")
        ->required();
    extr->add_option("--report", ex_json);
    extr->add_option("--csv", ex_csv);

    // norms
    auto* nrm = app.add_subcommand("norms", "evaluate norms of a stored field");
    std::string nf_field, nf_out;
    std::vector<double> nf_sobolev, nf_holder, nf_lp;
    std::vector<std::string> nf_besov;
    nrm->add_option("--field", nf_field)->required();
    nrm->add_option("--sobolev", nf_sobolev, "H^alpha exponents");
    nrm->add_option("--besov", nf_besov, "p,q,alpha triples");
    nrm->add_option("--holder", nf_holder, "C^alpha exponents");
    nrm->add_option("--lp", nf_lp, "L^p exponents");
    nrm->add_option("--out", nf_out);

    // validate
    auto* val = app.add_subcommand("validate", "run the built-in validation preset");
    uint64_t val_seed = 7;
    val->add_option("--seed", val_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (gff->parsed()) {
            RunConfig cfg;
            cfg.n = gff_n;
            cfg.mass2 = gff_mass2;
            cfg.replicas = gff_replicas;
            cfg.seed = gff_seed;
            cfg.out_dir = gff_out;
            cfg.rho = gff_rho;
            cfg.method = "polchinski";  // P = 0: flow reduces to the free field
            cfg.dump_fields = true;
            run(cfg);
            if (gff_paths) {
                const LatticeGeometry geom(gff_n, gff_mass2);
                const ScaleGrid grid = make_geometric_grid(geom, cfg.rho);
                for (int r = 0; r < gff_replicas; ++r) {
                    char dir[64];
                    std::snprintf(dir, sizeof(dir), "/paths/replica_%06d", r);
                    write_path(sample_scale_path(geom, grid,
                                                 derive_seed(gff_seed, {"replica", r, "path"})),
                               gff_out + dir);
                }
            }
            return 0;
        }
        if (pphi_cmd->parsed()) {
            RunConfig cfg = finalize_config(pphi_cmd, pf);
            if (pphi_cmd->count("--method")) cfg.method = method;
            if (pphi_cmd->count("--dump-fields")) cfg.dump_fields = dump_fields;
            if (pphi_cmd->count("--extremes")) cfg.extremes = do_extremes;
            if (pphi_cmd->count("--alphas")) cfg.alphas = parse_list(alphas_opt);
            if (pphi_cmd->count("--exponents")) cfg.moment_exponents = parse_list(exponents_opt);
            if (pphi_cmd->count("--mcmc-step")) cfg.mcmc_step = mcmc_step;
            if (pphi_cmd->count("--mcmc-burn-in")) cfg.mcmc_burn_in = mcmc_burn;
            if (pphi_cmd->count("--mcmc-thin")) cfg.mcmc_thin = mcmc_thin;
            cfg = parse_run_config(canonical_config_json(cfg));
            run(cfg);
            return 0;
        }
        if (coup->parsed()) {
            RunConfig cfg = finalize_config(coup, cf);
            cfg.method = "polchinski";
            cfg.alphas = parse_list(c_alphas);
            cfg.moment_exponents = parse_list(c_exponents);
            run(cfg);
            return 0;
        }
        if (vari->parsed()) {
            RunConfig cfg = finalize_config(vari, vf);
            const ResolvedRun res = resolve_run(cfg);
            const LatticeGeometry geom(cfg.n, cfg.mass2);
            FlowConfig fc{geom, res.poly, res.grid, cfg.mc_inner, cfg.seed};
            json rep;
            if (mode == "open-loop" || mode == "both") {
                auto [u, r] = minimize_open_loop(fc, {sgd_steps, sgd_rate, sgd_batch},
                                                 derive_seed(cfg.seed, {"open-loop"}));
                rep["open_loop"] = {{"f_value", r.f_value},
                                    {"f_ci", r.f_ci},
                                    {"reference", r.reference_log_laplace},
                                    {"reference_ci", r.reference_ci},
                                    {"gap", r.gap},
                                    {"action", drift_action(u)}};
            }
            if (mode == "feedback" || mode == "both") {
                BdReport r = feedback_objective(fc, cfg.replicas,
                                                derive_seed(cfg.seed, {"feedback"}));
                rep["feedback"] = {{"f_value", r.f_value},
                                   {"f_ci", r.f_ci},
                                   {"reference", r.reference_log_laplace},
                                   {"reference_ci", r.reference_ci},
                                   {"gap", r.gap}};
            }
            if (vari_out.empty())
                std::cout << rep.dump(2) << "\n";
            else
                write_json_file(rep, vari_out);
            return 0;
        }
        if (extr->parsed()) return cmd_extremes(ex_input, ex_json, ex_csv);
        if (nrm->parsed()) {
            const RealField f = read_field(nf_field);
            const DyadicPartition part(f.geom);
            json rep;
            for (double a : nf_sobolev) rep["h_alpha"][std::to_string(a)] = sobolev_norm(f, a);
            for (const std::string& spec3 : nf_besov) {
                auto v = parse_list(spec3);
                if (v.size() != 3) throw ConfigError("norms: --besov expects p,q,alpha");
                rep["besov"][spec3] = besov_norm(f, v[0], v[1], v[2], part);
            }
            for (double a : nf_holder) rep["holder"][std::to_string(a)] = holder_norm(f, a);
            for (double p : nf_lp) rep["lp"][std::to_string(p)] = lp_norm(f, p);
            if (nf_out.empty())
                std::cout << rep.dump(2) << "\n";
            else
                write_json_file(rep, nf_out);
            return 0;
        }
        if (val->parsed()) return cmd_validate(val_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    }
    return 0;
}
