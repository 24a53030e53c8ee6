#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordwalk/density.hpp"
#include "ordwalk/errors.hpp"
#include "ordwalk/exittime.hpp"
#include "ordwalk/fredholm.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/mcsim.hpp"
#include "ordwalk/rng.hpp"
#include "ordwalk/stats.hpp"
#include "ordwalk/verify.hpp"

namespace {

using nlohmann::json;
using namespace ordwalk;

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_csv(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw InvalidInputError(std::string("could not parse ") + what + ": " + s);
        }
    }
    if (out.empty()) throw InvalidInputError(std::string("empty list for ") + what);
    return out;
}

std::vector<long long> parse_csv_int(const std::string& s, const char* what) {
    std::vector<long long> out;
    for (double v : parse_csv(s, what)) out.push_back(static_cast<long long>(v));
    return out;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("ORDWALK_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

struct ManifestWriter {
    std::string command;
    json params = json::object();
    json outputs = json::object();
    std::uint64_t seed = 0;
    bool pretty = false;
    std::string out_file;        // report text destination, verify only
    std::string report;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void emit() {
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest = {{"command", command}, {"params", params},       {"seed", seed},
                         {"version", kVersion}, {"wall_time_s", wall},   {"outputs", outputs}};
        if (!report.empty() && !out_file.empty()) {
            std::ofstream f(out_file);
            f << report;
        }
        std::cout << (pretty ? manifest.dump(2) : manifest.dump()) << "\n";
    }
};

json value_json(const LogSigned& v) {
    return json{{"value", v.value()}, {"log_value", v.is_zero() ? nullptr : json(v.logmag)},
                {"sign", v.sign}};
}

json value_json(double v) {
    LogSigned ls = LogSigned::from_value(v);
    return value_json(ls);
}

json estimate_json(const McEstimate& e, std::uint64_t seed) {
    return json{{"estimate", e.estimate}, {"stderr", e.stderr_est}, {"samples", e.samples},
                {"seed", seed}};
}

int run(int argc, char** argv) {
    CLI::App app{"ordered exponential random walks: exact formulas, Fredholm laws, simulation"};
    app.require_subcommand(1);

    std::string rates_s, x_s, z_s, kill_s = "tau", extreme_s = "largest", method_s = "quad";
    std::string times_s, thresholds_s, tier_s = "quick", only_s, out_file, spec_json;
    std::string statistic_s = "unit";
    long long n = 1, samples = 1000000, trials = 100, dflag = 2;
    int quad_nodes = 64, streams = 0;
    std::optional<std::uint64_t> seed_flag;
    bool pretty = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed_flag, "RNG seed (ORDWALK_SEED if unset)");
        cmd->add_flag("--pretty", pretty, "indent JSON output");
        cmd->add_option("--out", out_file, "write report text to FILE");
        cmd->add_option("--streams", streams, "worker threads (0 = hardware)");
    };

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "evaluate exact formulas");
    eval->require_subcommand(1);
    std::vector<CLI::App*> eval_subs;
    for (const char* name : {"h", "hfrak", "hhat", "density", "survival", "p2", "pfsurvival",
                             "xconst", "gamma", "tailpredict", "fredholm"}) {
        auto* c = eval->add_subcommand(name);
        c->add_option("--rates", rates_s, "comma-separated rates");
        c->add_option("--x", x_s, "start point");
        c->add_option("--z", z_s, "end point");
        c->add_option("--n", n, "time steps");
        c->add_option("--d", dflag, "dimension");
        c->add_option("--kill", kill_s, "tau|rho");
        c->add_option("--extreme", extreme_s, "largest|smallest");
        c->add_option("--method", method_s, "quad|exact2|mc");
        c->add_option("--times", times_s, "observation times n1<...<nm");
        c->add_option("--thresholds", thresholds_s, "thresholds xi_1..xi_m");
        c->add_option("--quad-nodes", quad_nodes, "quadrature nodes per time/axis");
        c->add_option("--spec", spec_json, "KernelSpec JSON (inline or @file)");
        c->add_option("--samples", samples, "Monte Carlo samples");
        add_common(c);
        eval_subs.push_back(c);
    }

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs");
    simulate->require_subcommand(1);
    for (const char* name :
         {"paths", "survival", "htransform", "lpp", "queues", "pushblock", "coupling", "zfromzero"}) {
        auto* c = simulate->add_subcommand(name);
        c->add_option("--rates", rates_s, "comma-separated rates");
        c->add_option("--x", x_s, "start point");
        c->add_option("--n", n, "time steps / horizon");
        c->add_option("--d", dflag, "dimension");
        c->add_option("--kill", kill_s, "tau|rho");
        c->add_option("--samples", samples, "number of paths");
        c->add_option("--trials", trials, "number of trials");
        c->add_option("--times", times_s, "statistic times (htransform)");
        c->add_option("--thresholds", thresholds_s, "statistic thresholds (htransform)");
        c->add_option("--statistic", statistic_s, "unit|max-below|min-above");
        c->add_option("--extreme", extreme_s, "largest|smallest");
        add_common(c);
    }

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run the cross-validation suite");
    verify->add_option("--tier", tier_s, "quick|full");
    verify->add_option("--only", only_s, "filter criteria by id/name substring");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    ManifestWriter mw;
    mw.seed = resolve_seed(seed_flag);
    mw.pretty = pretty;
    mw.out_file = out_file;

    auto rates_of = [&](int expect_d) {
        if (rates_s.empty()) return classify_rates(std::vector<double>(expect_d, 1.0));
        return classify_rates(parse_csv(rates_s, "--rates"));
    };
    auto point_of = [&](const std::string& s, bool strict = false) {
        return ChamberPoint(parse_csv(s, "--x/--z"), strict);
    };

    if (eval->parsed()) {
        CLI::App* sub = eval->get_subcommands().front();
        const std::string name = sub->get_name();
        mw.command = "eval " + name;
        mw.params = {{"rates", rates_s}, {"x", x_s}, {"z", z_s}, {"n", n},
                     {"kill", kill_s},   {"d", dflag}};

        if (name == "h") {
            ChamberPoint x = point_of(x_s);
            Rates r = rates_of(x.dim());
            LogSigned v = (r.regime == Regime::Equal) ? h_equal_scaled(x, r.values[0])
                                                      : h_distinct(x, r);
            mw.outputs = value_json(v);
        } else if (name == "hfrak") {
            ChamberPoint x = point_of(x_s);
            mw.outputs = value_json(frak_h(x, rates_of(x.dim())));
        } else if (name == "hhat") {
            ChamberPoint x = point_of(x_s);
            mw.outputs = value_json(h_hat(x));
        } else if (name == "density") {
            KilledDensityQuery q{point_of(x_s), point_of(z_s), n, rates_of(point_of(x_s).dim()),
                                 kill_from_string(kill_s)};
            LogSigned v = (q.kill == Kill::Tau) ? g_killed(q) : g_tilde(q);
            mw.outputs = value_json(v);
        } else if (name == "survival") {
            ChamberPoint x = point_of(x_s);
            SurvivalOptions opt;
            opt.nodes = quad_nodes;
            if (method_s == "exact2") opt.method = SurvivalMethod::ExactD2;
            else if (method_s == "mc") opt.method = SurvivalMethod::MonteCarlo;
            opt.samples = samples;
            opt.seed = mw.seed;
            opt.streams = streams;
            McEstimate e = survival(x, n, rates_of(x.dim()), kill_from_string(kill_s), opt);
            mw.outputs = estimate_json(e, mw.seed);
        } else if (name == "p2") {
            ChamberPoint x = point_of(x_s);
            if (x.dim() != 2) throw DimensionError("eval p2: --x must have two coordinates");
            mw.outputs = value_json(p2_series(x[0], x[1], n));
        } else if (name == "pfsurvival") {
            ChamberPoint x = point_of(x_s);
            mw.outputs = value_json(rho_survival_pf(x, n));
        } else if (name == "xconst") {
            mw.outputs = value_json(x_const(static_cast<int>(dflag)));
        } else if (name == "gamma") {
            mw.outputs = value_json(gamma_rate(rates_of(2)));
        } else if (name == "tailpredict") {
            ChamberPoint x = point_of(x_s);
            TailPrediction p = tail_predict(x, n, rates_of(x.dim()), kill_from_string(kill_s));
            mw.outputs = {{"value", p.value},
                          {"regime", to_string(p.regime)},
                          {"constant", p.decomposition.constant},
                          {"power", p.decomposition.power},
                          {"gamma", p.decomposition.gamma},
                          {"harmonic", p.decomposition.harmonic}};
        } else if (name == "fredholm") {
            KernelSpec spec;
            if (!spec_json.empty()) {
                json j;
                if (spec_json.front() == '@') {
                    std::ifstream f(spec_json.substr(1));
                    if (!f) throw InvalidInputError("cannot open spec file " + spec_json.substr(1));
                    f >> j;
                } else {
                    j = json::parse(spec_json);
                }
                from_json(j, spec);
            } else {
                spec.x = ChamberPoint(parse_csv(x_s, "--x"), false);
                spec.times = parse_csv_int(times_s, "--times");
                spec.thresholds = parse_csv(thresholds_s, "--thresholds");
                spec.extreme = extreme_from_string(extreme_s);
                spec.quad.nodes = quad_nodes;
                spec.validate();
            }
            json spec_j;
            to_json(spec_j, spec);
            mw.params["spec"] = spec_j;
            mw.outputs = {{"cdf", extreme_cdf(spec)}};
        }
        mw.emit();
        return 0;
    }

    if (simulate->parsed()) {
        CLI::App* sub = simulate->get_subcommands().front();
        const std::string name = sub->get_name();
        mw.command = "simulate " + name;
        mw.params = {{"rates", rates_s}, {"x", x_s},       {"n", n},
                     {"samples", samples}, {"trials", trials}, {"kill", kill_s},
                     {"d", dflag},        {"streams", streams}};

        if (name == "paths") {
            ChamberPoint x(parse_csv(x_s, "--x"), false);
            SimConfig cfg{mw.seed, streams, samples, rates_of(x.dim()), n};
            PathEnsemble ens = sample_paths(x, cfg);
            long long tau_none = 0, rho_none = 0;
            for (long long p = 0; p < ens.samples; ++p) {
                tau_none += ens.tau[p] < 0;
                rho_none += ens.rho[p] < 0;
            }
            mw.outputs = {{"paths", ens.samples},
                          {"tau_survivors", tau_none},
                          {"rho_survivors", rho_none}};
            if (!out_file.empty()) {
                std::ostringstream csv;
                csv << "path,step";
                for (int j = 0; j < ens.d; ++j) csv << ",x" << (j + 1);
                csv << ",tau,rho\n";
                for (long long p = 0; p < ens.samples; ++p)
                    for (long long s = 0; s <= ens.horizon; ++s) {
                        csv << p << "," << s;
                        for (int j = 0; j < ens.d; ++j) csv << "," << ens.pos(p, s, j);
                        csv << "," << ens.tau[p] << "," << ens.rho[p] << "\n";
                    }
                mw.report = csv.str();
            }
        } else if (name == "survival") {
            ChamberPoint x(parse_csv(x_s, "--x"));
            Rates r = rates_of(x.dim());
            SimConfig cfg{mw.seed, streams, samples, r, n};
            mw.outputs = estimate_json(survival_estimate(x, n, r, kill_from_string(kill_s), cfg),
                                       mw.seed);
        } else if (name == "htransform") {
            ChamberPoint x(parse_csv(x_s, "--x"));
            Rates r = rates_of(x.dim());
            SimConfig cfg{mw.seed, streams, samples, r, n};
            std::function<double(const PathView&)> stat;
            if (statistic_s == "unit") {
                stat = [](const PathView&) { return 1.0; };
            } else {
                std::vector<long long> ts = parse_csv_int(times_s, "--times");
                std::vector<double> xs = parse_csv(thresholds_s, "--thresholds");
                bool below = statistic_s == "max-below";
                int d = x.dim();
                stat = [ts, xs, below, d](const PathView& path) {
                    for (size_t t = 0; t < ts.size(); ++t) {
                        double v = below ? path.pos(ts[t], d - 1) : path.pos(ts[t], 0);
                        if (below ? !(v <= xs[t]) : !(v >= xs[t])) return 0.0;
                    }
                    return 1.0;
                };
            }
            mw.outputs = estimate_json(htransform_estimate(x, n, r, stat, cfg), mw.seed);
        } else if (name == "lpp") {
            int d = static_cast<int>(dflag);
            Rates r = rates_of(d);
            RunningStat stat;
            SimConfig cfg{mw.seed, streams, samples, r, n};
            for (long long s = 0; s < samples; ++s) {
                StreamRng rng(cfg.seed, static_cast<std::uint64_t>(s));
                std::vector<double> field(static_cast<size_t>(d) * n);
                for (int i = 0; i < d; ++i)
                    for (long long t = 0; t < n; ++t)
                        field[static_cast<size_t>(i) * n + t] = rng.exponential(r.values[i]);
                stat.add(lpp_dp(field, d, n).at(d, n));
            }
            mw.outputs = {{"mean", stat.mean}, {"stderr", stat.stderr_mean()},
                          {"samples", samples}, {"seed", mw.seed}};
        } else if (name == "queues") {
            int d = static_cast<int>(dflag);
            Rates r = rates_of(d);
            double maxdiff = 0.0;
            RunningStat stat;
            for (long long s = 0; s < samples; ++s) {
                StreamRng rng(mw.seed, static_cast<std::uint64_t>(s));
                std::vector<double> field(static_cast<size_t>(d) * n);
                for (double& f : field) f = rng.exponential(r.values[0]);
                LppTable l = lpp_dp(field, d, n);
                LppTable q = queue_departures(field, d, n);
                for (int i = 1; i <= d; ++i)
                    for (long long j = 1; j <= n; ++j)
                        maxdiff = std::max(maxdiff, std::abs(l.at(i, j) - q.at(j, i)));
                stat.add(q.at(n, d));
            }
            mw.outputs = {{"max_abs_diff_vs_lpp", maxdiff},
                          {"last_departure_mean", stat.mean},
                          {"samples", samples}};
        } else if (name == "pushblock") {
            int d = static_cast<int>(dflag);
            Rates r = rates_of(d);
            SimConfig cfg{mw.seed, streams, samples, r, n};
            std::vector<double> top = pushblock_top_samples(d, n, r, cfg);
            RunningStat stat;
            for (double v : top) stat.add(v);
            mw.outputs = {{"top_mean", stat.mean}, {"stderr", stat.stderr_mean()},
                          {"samples", samples}, {"seed", mw.seed}};
        } else if (name == "coupling") {
            int d = static_cast<int>(dflag);
            Rates r = rates_of(d);
            SimConfig cfg{mw.seed, streams, trials, r, n};
            CouplingResult res = coupling_check(d, n, cfg);
            mw.outputs = {{"trials", res.trials},
                          {"failures", res.identity_failures},
                          {"event_mismatches", res.event_mismatches}};
        } else if (name == "zfromzero") {
            int d = static_cast<int>(dflag);
            Rates r = rates_of(d);
            SimConfig cfg{mw.seed, streams, samples, r, n};
            auto zs = sample_z_from_zero(d, n, cfg);
            RunningStat stat;
            for (const auto& z : zs) stat.add(z.back());
            mw.outputs = {{"zd_mean", stat.mean}, {"stderr", stat.stderr_mean()},
                          {"samples", samples}, {"seed", mw.seed}};
        }
        mw.emit();
        return 0;
    }

    if (verify->parsed()) {
        mw.command = "verify";
        Tier tier = (tier_s == "full") ? Tier::Full : Tier::Quick;
        if (tier_s != "full" && tier_s != "quick")
            throw InvalidInputError("verify: --tier must be quick or full");
        mw.params = {{"tier", tier_s}, {"only", only_s}, {"streams", streams}};
        VerifyReport report = run_verify(tier, mw.seed, only_s, streams);
        mw.report = report.render();
        std::cerr << mw.report;
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"id", r.id},
                            {"name", r.name},
                            {"detail", r.detail},
                            {"measured", r.measured},
                            {"expected", r.expected},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}});
        mw.outputs = {{"criteria", rows}, {"all_pass", report.all_pass()}};
        mw.emit();
        if (!report.all_pass()) return 4;
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ordwalk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
