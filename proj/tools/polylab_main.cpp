// polylab: numerical laboratory for stretched polymers in random potentials.
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "polylab/experiment.hpp"
#include "polylab/errors.hpp"
#include "polylab/version.hpp"

using polylab::io::ExperimentConfig;

namespace {

void add_common(CLI::App* sub, ExperimentConfig& cfg) {
    sub->set_help_flag("--help", "print this help");  // frees -h/--h for the drift
    sub->add_option("--dims", cfg.dims, "lattice dimension D (2..5)");
    sub->add_option("--law", cfg.law_spec,
                    "potential law: bernoulli:p=, det:v=, exp:rate=, twopoint:v0=,v1=,p=");
    sub->add_option("--beta", cfg.beta, "inverse temperature (>= 0)");
    sub->add_option("--h", cfg.h, "drift: one value (on-axis) or D components");
    sub->add_option("--delta", cfg.delta, "cone aperture in (0, 1/sqrt(D)); 0 = default");
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--out", cfg.out_path, "output path (JSON document)");
    sub->add_option("--format", cfg.format, "json | csv (csv also writes tables)");
    sub->add_option("--jobs", cfg.jobs, "worker threads for ensemble runs");
    sub->add_flag("--timing", cfg.timing, "embed wall time (breaks byte determinism)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stretched-polymer laboratory"};
    app.set_help_flag("--help", "print this help");
    app.set_version_flag("--version", polylab::kVersion);
    // INI file with one [subcommand] section per experiment; flags override it
    app.set_config("--config", "", "config file (before the subcommand)");
    app.require_subcommand(1);

    ExperimentConfig cfg;

    auto* gen = app.add_subcommand("gen-env", "sample and store a potential field");
    gen->add_option("--radius", cfg.radius, "box radius (default: --n)");
    gen->add_option("--n", cfg.n, "box radius fallback");
    add_common(gen, cfg);

    auto* en = app.add_subcommand("enumerate", "exact path enumeration tables");
    en->add_option("--n", cfg.n, "maximum length");
    en->add_option("--flavor", cfg.flavor, "quenched | annealed");
    en->add_option("--env", cfg.env_file, "POLYENV file to reuse");
    en->add_flag("--basic", cfg.basic, "cone-confined and irreducible tables");
    en->add_flag("--verify-renewal", cfg.verify_renewal, "report renewal residuals");
    add_common(en, cfg);

    auto* dp = app.add_subcommand("dp", "transfer-operator endpoint distribution");
    dp->add_option("--n", cfg.n, "length");
    dp->add_option("--env", cfg.env_file, "POLYENV file to reuse");
    dp->add_option("--window", cfg.window, "window radius (default: n)");
    dp->add_flag("--log-space", cfg.log_space, "force log-space evolution");
    add_common(dp, cfg);

    auto* mc = app.add_subcommand("mc-annealed", "Monte Carlo disorder average of Q_n(h)");
    mc->add_option("--n", cfg.n, "length");
    mc->add_option("--nenv", cfg.n_env, "environments");
    add_common(mc, cfg);

    auto* rn = app.add_subcommand("renewal", "fit the annealed renewal model");
    rn->add_option("--nmax", cfg.n_max, "irreducible horizon");
    rn->add_option("--method", cfg.method, "enum | dp-moments (linear weights only)");
    add_common(rn, cfg);

    auto* clt = app.add_subcommand("clt", "central-limit checks");
    clt->add_option("--mode", cfg.mode, "annealed | quenched");
    clt->add_option("--n", cfg.n, "length (quenched mode)");
    clt->add_option("--nmax", cfg.n_max, "irreducible horizon");
    clt->add_option("--nenv", cfg.n_env, "environments (quenched mode)");
    clt->add_option("--alphas", cfg.alphas, "on-axis alpha grid");
    clt->add_option("--nlist", cfg.n_list, "lengths (annealed mode)");
    add_common(clt, cfg);

    auto* lln = app.add_subcommand("lln", "law-of-large-numbers tail masses");
    lln->add_option("--n", cfg.n, "length");
    lln->add_option("--nlist", cfg.n_list, "lengths");
    lln->add_option("--eps", cfg.eps, "ball radius around v");
    lln->add_option("--nenv", cfg.n_env, "environments");
    add_common(lln, cfg);

    auto* mix = app.add_subcommand("mixingale", "conditional second-moment decay profile");
    mix->add_option("--ell", cfg.ell, "statistic layer");
    mix->add_option("--kmin", cfg.k_min, "smallest filtration distance");
    mix->add_option("--kmax", cfg.k_max, "largest filtration distance");
    mix->add_option("--horizon", cfg.f_horizon, "irreducible horizon");
    mix->add_option("--mode", cfg.mode, "exact | mc");
    mix->add_option("--nenv", cfg.n_env, "environments (mc mode)");
    add_common(mix, cfg);

    auto* rep = app.add_subcommand("replica", "two-replica attractivity suite");
    rep->add_option("--cases", cfg.cases, "randomized cases");
    rep->add_option("--ell", cfg.ell, "second-moment layer");
    add_common(rep, cfg);

    CLI11_PARSE(app, argc, argv);

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        auto result = polylab::io::run(cfg);
        auto files = polylab::io::emit(result, cfg);
        if (cfg.out_path.empty()) {
            std::cout << result.json_text;
        } else {
            for (const auto& f : files) std::fprintf(stderr, "wrote %s\n", f.c_str());
        }
        return 0;
    } catch (const polylab::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const polylab::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 3;
    } catch (const polylab::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
