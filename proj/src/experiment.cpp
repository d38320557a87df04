#include "polylab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "polylab/environment.hpp"
#include "polylab/exactenum.hpp"
#include "polylab/harness.hpp"
#include "polylab/renewal.hpp"
#include "polylab/replica.hpp"
#include "polylab/transfer.hpp"
#include "polylab/version.hpp"

namespace polylab::io {

using nlohmann::json;
using exactenum::Weighting;

void ExperimentConfig::validate() const {
    if (dims < 2) throw ValidationError("--dims must be >= 2");
    if (dims > kMaxDims) throw CapacityError("--dims above 5 is unsupported");
    if (beta < 0) throw ValidationError("--beta must be >= 0");
    if (h.empty() || h.size() > static_cast<size_t>(dims))
        throw ValidationError("--h needs 1 (on-axis) or dims components");
    double dmax = 1.0 / std::sqrt(static_cast<double>(dims));
    if (delta != 0.0 && !(delta > 0.0 && delta < dmax))
        throw ValidationError("--delta must lie in (0, " + std::to_string(dmax) + ") for D=" +
                              std::to_string(dims));
    if (format != "json" && format != "csv") throw ValidationError("--format must be json or csv");
    PotentialLaw::parse(law_spec);  // throws with a message on bad specs
}

RealVec ExperimentConfig::h_vec() const {
    RealVec v;
    if (h.size() == 1) {
        v[0] = h[0];  // on-axis shorthand h = h e_1
    } else {
        for (size_t i = 0; i < h.size(); ++i) v[static_cast<int>(i)] = h[i];
    }
    return v;
}

double ExperimentConfig::delta_or_default() const {
    return delta != 0.0 ? delta : ConeSpec::default_delta(dims);
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        f << content;
        if (!f.good()) throw ValidationError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, p);
}

namespace {

json config_echo(const ExperimentConfig& cfg) {
    json j;
    j["subcommand"] = cfg.subcommand;
    j["dims"] = cfg.dims;
    j["law"] = cfg.law_spec;
    j["beta"] = cfg.beta;
    j["h"] = cfg.h;
    j["delta"] = cfg.delta_or_default();
    j["n"] = cfg.n;
    j["n_max"] = cfg.n_max ? cfg.n_max : cfg.n;
    j["seed"] = cfg.seed;
    j["n_env"] = cfg.n_env;
    j["jobs"] = cfg.jobs;
    return j;
}

json base_doc(const ExperimentConfig& cfg) {
    json j;
    j["schema"] = "polylab.result.v1";
    j["code_version"] = kVersion;
    j["config"] = config_echo(cfg);
    return j;
}

Environment load_or_sample(const ExperimentConfig& cfg, int radius) {
    if (!cfg.env_file.empty()) {
        Environment env = load_polyenv(cfg.env_file);
        if (env.dims() != cfg.dims) throw ValidationError("environment file dims mismatch");
        return env;
    }
    return sample_environment(PotentialLaw::parse(cfg.law_spec), cfg.dims, radius, cfg.seed);
}

std::string plot_rows(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<double>& errs) {
    std::string out = "# x y err\n";
    char buf[96];
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", xs[i], ys[i],
                      i < errs.size() ? errs[i] : 0.0);
        out += buf;
    }
    return out;
}

json model_json(const renewal::RenewalModel& m) { return json::parse(renewal::model_to_json(m)); }

renewal::RenewalModel build_model(const ExperimentConfig& cfg) {
    auto law = PotentialLaw::parse(cfg.law_spec);
    RealVec h = cfg.h_vec();
    ConeSpec cone(cfg.dims, h, cfg.delta_or_default());
    int N = cfg.n_max ? cfg.n_max : cfg.n;
    if (cfg.method == "dp-moments") {
        auto seq = exactenum::cone_dp_moment_sequences(Weighting::annealed_of(law, cfg.beta), cone,
                                                       h, N);
        auto sm = renewal::model_from_sequences(seq);
        renewal::RenewalModel m;
        m.dims = cfg.dims;
        m.h = h;
        m.beta = cfg.beta;
        m.delta = cone.delta;
        m.lambda = sm.lambda;
        m.v = sm.der.v;
        m.sigma = sm.der.sigma;
        m.kappa0 = sm.der.kappa0;
        m.nu_hat = sm.nu_hat;
        m.horizon = sm.horizon;
        m.provenance = "cone dp moment sequences, N=" + std::to_string(N);
        m.sigma_eigenvalues = sm.der.sigma_eigenvalues;
        m.sigma_positive_definite = sm.der.sigma_positive_definite;
        return m;
    }
    int cap = exactenum::default_cap(cfg.dims);
    if (N > cap)
        throw CapacityError("renewal: horizon " + std::to_string(N) + " exceeds the enumeration cap " +
                            std::to_string(cap) + " (use --method dp-moments for linear weights)");
    auto tabs = exactenum::enumerate_basic(Weighting::annealed_of(law, cfg.beta), cone, h, N);
    auto ilaw = renewal::make_irreducible_law(tabs.f.by_len, N, cfg.dims,
                                              "annealed enumeration, N=" + std::to_string(N));
    return renewal::make_model(ilaw, h, cfg.beta, cone.delta);
}

// ---- subcommand runners --------------------------------------------------

ExperimentResult run_gen_env(const ExperimentConfig& cfg) {
    int radius = cfg.radius ? cfg.radius : cfg.n;
    auto law = PotentialLaw::parse(cfg.law_spec);
    Environment env = sample_environment(law, cfg.dims, radius, cfg.seed);
    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["trap_fraction"] = env.trap_fraction();
    j["results"]["origin_trapped"] = env.is_trap(Point{});
    j["results"]["law_normalized"] = law.is_normalized();
    j["results"]["sites"] = env.values().size();
    res.tables.emplace_back("env", to_polyenv(env));
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_enumerate(const ExperimentConfig& cfg) {
    auto law = PotentialLaw::parse(cfg.law_spec);
    RealVec h = cfg.h_vec();
    int n = cfg.n_max ? cfg.n_max : cfg.n;
    ExperimentResult res;
    json j = base_doc(cfg);

    std::optional<Environment> env;
    Weighting w = Weighting::annealed_of(law, cfg.beta);
    if (cfg.flavor == "quenched") {
        env = load_or_sample(cfg, n);
        w = Weighting::quenched(*env, cfg.beta);
    } else if (cfg.flavor != "annealed") {
        throw ValidationError("--flavor must be quenched or annealed");
    }

    if (cfg.basic || cfg.verify_renewal) {
        ConeSpec cone(cfg.dims, h, cfg.delta_or_default());
        auto tabs = exactenum::enumerate_basic(w, cone, h, n);
        res.tables.emplace_back("t", exactenum::table_to_csv(tabs.t));
        res.tables.emplace_back("f", exactenum::table_to_csv(tabs.f));
        json masses = json::array();
        for (int k = 0; k <= n; ++k) masses.push_back(tabs.t.mass(k));
        j["results"]["t_mass"] = masses;
        if (cfg.verify_renewal) {
            auto residuals = exactenum::renewal_residuals(w, cone, h, n);
            j["results"]["renewal_residuals"] = residuals;
            j["results"]["max_residual"] =
                *std::max_element(residuals.begin(), residuals.end());
        }
    } else {
        auto q = exactenum::enumerate_Q(w, cfg.dims, n);
        res.tables.emplace_back("q", exactenum::table_to_csv(q));
        json qh = json::array();
        for (int k = 0; k <= n; ++k) qh.push_back(exactenum::Q_of_h(q, h, k));
        j["results"]["q_of_h"] = qh;
    }
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_dp(const ExperimentConfig& cfg) {
    RealVec h = cfg.h_vec();
    Environment env = load_or_sample(cfg, cfg.window > 0 ? cfg.window : cfg.n);
    transfer::DpOptions opt;
    opt.window_radius = cfg.window;
    opt.log_space = cfg.log_space;
    opt.jobs = cfg.jobs;
    auto slice = transfer::dp_quenched(env, h, cfg.beta, cfg.n, opt);

    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["n"] = slice.n;
    j["results"]["total"] = slice.total();
    j["results"]["log_space"] = slice.log_space;
    j["results"]["leaked_mass_bound"] = slice.leaked_mass;

    std::string csv;
    for (int d = 0; d < cfg.dims; ++d) csv += (d ? ",x" : "x") + std::to_string(d + 1);
    csv += ",value\n";
    char buf[160];
    for (size_t i = 0; i < slice.vals.size(); ++i) {
        double v = slice.value_at(slice.box.point_at(i));
        if (v == 0.0) continue;
        Point p = slice.box.point_at(i);
        char* q = buf;
        for (int d = 0; d < cfg.dims; ++d)
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), d ? ",%d" : "%d", p[d]);
        q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%.17g\n", v);
        csv.append(buf, static_cast<size_t>(q - buf));
    }
    res.tables.emplace_back("slice", csv);
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_mc_annealed(const ExperimentConfig& cfg) {
    auto law = PotentialLaw::parse(cfg.law_spec);
    transfer::DpOptions opt;
    opt.jobs = cfg.jobs;
    auto est = transfer::mc_annealed(law, cfg.dims, cfg.h_vec(), cfg.beta, cfg.n, cfg.n_env,
                                     cfg.seed, opt);
    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["mean"] = est.mean;
    j["results"]["stderr"] = est.stderr_;
    j["results"]["per_env"] = est.per_env;
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_renewal(const ExperimentConfig& cfg) {
    auto model = build_model(cfg);
    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["model"] = model_json(model);
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_clt(const ExperimentConfig& cfg) {
    RealVec h = cfg.h_vec();
    std::vector<int> ns = cfg.n_list.empty() ? std::vector<int>{25, 100, 400} : cfg.n_list;
    ExperimentResult res;
    json j = base_doc(cfg);

    if (cfg.mode == "annealed") {
        auto law = PotentialLaw::parse(cfg.law_spec);
        ConeSpec cone(cfg.dims, h, cfg.delta_or_default());
        int N = cfg.n_max ? cfg.n_max : exactenum::default_cap(cfg.dims);
        auto tabs = exactenum::enumerate_basic(Weighting::annealed_of(law, cfg.beta), cone, h, N);
        auto ilaw = renewal::make_irreducible_law(tabs.f.by_len, N, cfg.dims, "annealed enumeration");
        auto der = renewal::speed_and_diffusivity(ilaw);
        std::vector<RealVec> alphas;
        for (double a : cfg.alphas) alphas.push_back(RealVec::on_axis(a));
        auto rep = renewal::annealed_clt_check(ilaw, der, alphas, ns);
        json pts = json::array();
        std::vector<double> xs, ys;
        for (const auto& pt : rep.points) {
            pts.push_back({{"alpha", pt.alpha_mag},
                           {"n", pt.n},
                           {"deviation", pt.deviation},
                           {"s_re", pt.s_n.real()},
                           {"s_im", pt.s_n.imag()}});
            xs.push_back(pt.n);
            ys.push_back(pt.deviation);
        }
        j["results"]["points"] = pts;
        j["results"]["slopes"] = rep.slopes;
        res.plot_files.emplace_back("clt", plot_rows(xs, ys, {}));
    } else {
        auto model = [&] {
            ExperimentConfig mc = cfg;
            mc.n_max = std::min(cfg.n_max ? cfg.n_max : exactenum::default_cap(cfg.dims),
                                exactenum::default_cap(cfg.dims));
            mc.method = "enum";
            return build_model(mc);
        }();
        harness::EnsembleSpec ens{PotentialLaw::parse(cfg.law_spec), cfg.dims, cfg.n_env, cfg.seed,
                                  cfg.jobs};
        std::vector<RealVec> alphas;
        for (double a : cfg.alphas) alphas.push_back(RealVec::on_axis(a));
        auto out = harness::quenched_clt(ens, h, cfg.beta, model, alphas, cfg.n);
        json stats = json::array();
        std::vector<double> xs, ys, es;
        for (const auto& st : out.stats) {
            stats.push_back({{"alpha", norm2(st.alpha)},
                             {"gauss", st.gauss},
                             {"median", st.median},
                             {"iqr_lo", st.iqr_lo},
                             {"iqr_hi", st.iqr_hi}});
            xs.push_back(norm2(st.alpha));
            ys.push_back(st.median);
            es.push_back(0.5 * (st.iqr_hi - st.iqr_lo));
        }
        j["results"]["n"] = out.n;
        j["results"]["zero_mass_envs"] = out.zero_mass_envs;
        j["results"]["stats"] = stats;
        j["results"]["model"] = model_json(model);
        res.plot_files.emplace_back("clt", plot_rows(xs, ys, es));
    }
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_lln(const ExperimentConfig& cfg) {
    auto model = [&] {
        ExperimentConfig mc = cfg;
        mc.n_max = exactenum::default_cap(cfg.dims);
        mc.method = "enum";
        return build_model(mc);
    }();
    harness::EnsembleSpec ens{PotentialLaw::parse(cfg.law_spec), cfg.dims, cfg.n_env, cfg.seed,
                              cfg.jobs};
    std::vector<int> ns = cfg.n_list.empty() ? std::vector<int>{cfg.n} : cfg.n_list;
    ExperimentResult res;
    json j = base_doc(cfg);
    json series = json::array();
    std::vector<double> xs, ys;
    for (int n : ns) {
        auto out = harness::empirical_lln(ens, cfg.h_vec(), cfg.beta, model.v, n, cfg.eps);
        series.push_back({{"n", n}, {"median_tail", out.median}, {"tails", out.tails}});
        xs.push_back(n);
        ys.push_back(out.median);
    }
    j["results"]["eps"] = cfg.eps;
    j["results"]["series"] = series;
    j["results"]["model"] = model_json(model);
    res.plot_files.emplace_back("lln", plot_rows(xs, ys, {}));
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_mixingale(const ExperimentConfig& cfg) {
    auto law = PotentialLaw::parse(cfg.law_spec);
    RealVec h = cfg.h_vec();
    ConeSpec cone(cfg.dims, h, cfg.delta_or_default());
    auto model = [&] {
        ExperimentConfig mc = cfg;
        mc.n_max = exactenum::default_cap(cfg.dims);
        mc.method = "enum";
        return build_model(mc);
    }();
    std::vector<int> ks;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) ks.push_back(k);
    double vn = norm2(model.v);
    harness::MixingaleProfile prof;
    if (cfg.mode == "mc")
        prof = harness::mixingale_profile_mc(law, cone, h, cfg.beta, model.lambda, cfg.ell,
                                             cfg.f_horizon, ks, vn, cfg.dims, cfg.n_env, cfg.seed);
    else
        prof = harness::mixingale_profile(law, cone, h, cfg.beta, model.lambda, cfg.ell,
                                          cfg.f_horizon, ks, vn);
    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["ell"] = prof.ell;
    j["results"]["ks"] = prof.ks;
    j["results"]["past"] = prof.past;
    j["results"]["future"] = prof.future;
    j["results"]["var_z"] = prof.var_z;
    j["results"]["decay_exponent"] = prof.decay_exponent;
    j["results"]["tower_residual"] = prof.tower_residual;
    std::vector<double> xs(prof.ks.begin(), prof.ks.end());
    res.plot_files.emplace_back("mixingale", plot_rows(xs, prof.past, {}));
    res.json_text = j.dump(2) + "\n";
    return res;
}

ExperimentResult run_replica(const ExperimentConfig& cfg) {
    auto law = PotentialLaw::parse(cfg.law_spec);
    RealVec h = cfg.h_vec();
    ConeSpec cone(cfg.dims, h, cfg.delta_or_default());
    replica::CaseSetup setup{cone, h, cfg.beta, 0.0, law};

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> axis(1, cfg.dims);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> len(1, std::max(1, cfg.ell));
    auto random_path = [&](int n) {
        std::vector<Step> steps;
        for (int i = 0; i < n; ++i)
            steps.push_back(static_cast<Step>((coin(rng) ? 1 : -1) * axis(rng)));
        return PolymerPath(cfg.dims, steps);
    };

    std::string case_csv = "case,kind,geometry,lhs,rhs,slack,disjoint,independent\n";
    char row[320];
    int case_id = 0;
    auto pt = [&](const Point& p) {  // comma-free point literal for the csv
        std::string s = "(";
        for (int d = 0; d < cfg.dims; ++d) s += (d ? ";" : "") + std::to_string(p[d]);
        return s + ")";
    };
    auto emit_row = [&](const char* kind, const std::string& geom, double lhs, double rhs,
                        double slack, int disjoint, int independent) {
        std::snprintf(row, sizeof row, "%d,%s,%s,%.17g,%.17g,%.17g,%d,%d\n", case_id++, kind,
                      geom.c_str(), lhs, rhs, slack, disjoint, independent);
        case_csv += row;
    };

    int defect_viol = 0, last_viol = 0;
    double min_defect = 1e300, min_slack = 1e300;
    for (int c = 0; c < cfg.cases; ++c) {
        auto g1 = random_path(len(rng)), g2 = random_path(len(rng));
        double d = replica::interaction_defect(g1, g2, law, cfg.beta);
        min_defect = std::min(min_defect, d);
        if (d < -1e-12) ++defect_viol;
        emit_row("defect", g1.literal() + "|" + g2.literal(), d, 0, d, -1, -1);
        auto e1 = random_path(len(rng)), e2 = random_path(len(rng));
        double s = replica::last_step_bound_check(g1, g2, e1, e2, law, cfg.beta);
        min_slack = std::min(min_slack, s);
        if (s < -1e-12) ++last_viol;
        emit_row("last_step", e1.literal() + "|" + e2.literal(), s, 0, s, -1, -1);
    }

    auto model = [&] {
        ExperimentConfig mc = cfg;
        mc.n_max = exactenum::default_cap(cfg.dims);
        mc.method = "enum";
        return build_model(mc);
    }();

    // conditioned four-point cases on the best-supported stretched targets
    int mono_viol = 0, fact_nonzero = 0, fact_cases = 0;
    {
        auto ann = exactenum::enumerate_basic(Weighting::annealed_of(law, cfg.beta), cone, h, 4);
        std::vector<std::pair<Point, int>> targets;
        for (int m = 3; m <= 4; ++m) {
            std::vector<std::pair<double, Point>> rank;
            for (const auto& [y, w] : ann.f.by_len[static_cast<size_t>(m)])
                if (l1_norm(y) == m) rank.push_back({w, y});
            std::sort(rank.begin(), rank.end(), [](auto& a, auto& b) { return a.first > b.first; });
            for (size_t i = 0; i < rank.size() && i < 2; ++i) targets.push_back({rank[i].second, m});
        }
        for (auto& [y, m] : targets) {
            replica::CaseGeometry g;
            g.ell = 4;
            g.x = unit_point(0, 2) + unit_point(1, 2);
            g.x_prime = unit_point(0, 2) - unit_point(1, 2);
            g.y = y;
            g.m = m;
            g.y_prime = y;
            g.y_prime[1] = -y[1];
            g.m_prime = m;
            auto alg = [](const Point& p) { return p[0] <= 2; };
            auto fr = replica::factorization_check(setup, g, alg);
            ++fact_cases;
            if (fr.disjoint && std::fabs(fr.value) > 1e-12) ++fact_nonzero;
            emit_row("factorization", pt(g.x) + "|" + pt(g.y), fr.value, 0, fr.value,
                     fr.disjoint ? 1 : 0, fr.supports_independent ? 1 : 0);
            auto mr = replica::conditional_monotonicity_check(setup, g, alg);
            if (mr.lhs > mr.rhs + 1e-12) ++mono_viol;
            emit_row("monotonicity", pt(g.x) + "|" + pt(g.y), mr.lhs, mr.rhs, mr.rhs - mr.lhs,
                     -1, -1);
        }
    }

    auto prof = replica::second_moment_profile(setup, std::min(cfg.ell, 6), model.v);

    ExperimentResult res;
    json j = base_doc(cfg);
    j["results"]["cases"] = cfg.cases;
    j["results"]["defect_violations"] = defect_viol;
    j["results"]["min_defect"] = min_defect;
    j["results"]["last_step_violations"] = last_viol;
    j["results"]["min_slack"] = min_slack;
    j["results"]["monotonicity_violations"] = mono_viol;
    j["results"]["factorization_cases"] = fact_cases;
    j["results"]["factorization_disjoint_nonzero"] = fact_nonzero;
    j["results"]["second_moment_lower_bound_ok"] = prof.lower_bound_ok;
    j["results"]["second_moment_fit_c2"] = prof.fit_c2;
    j["results"]["second_moment_fit_r2"] = prof.fit_r2;
    res.tables.emplace_back("cases", case_csv);
    res.tables.emplace_back("second_moment", replica::profile_to_csv(prof, cfg.dims));
    res.json_text = j.dump(2) + "\n";
    return res;
}

}  // namespace

ExperimentResult run(const ExperimentConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    if (cfg.subcommand == "gen-env") res = run_gen_env(cfg);
    else if (cfg.subcommand == "enumerate") res = run_enumerate(cfg);
    else if (cfg.subcommand == "dp") res = run_dp(cfg);
    else if (cfg.subcommand == "mc-annealed") res = run_mc_annealed(cfg);
    else if (cfg.subcommand == "renewal") res = run_renewal(cfg);
    else if (cfg.subcommand == "clt") res = run_clt(cfg);
    else if (cfg.subcommand == "lln") res = run_lln(cfg);
    else if (cfg.subcommand == "mixingale") res = run_mixingale(cfg);
    else if (cfg.subcommand == "replica") res = run_replica(cfg);
    else throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");

    if (cfg.timing) {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json j = json::parse(res.json_text);
        j["wall_time_s"] = dt;
        res.json_text = j.dump(2) + "\n";
    }
    return res;
}

std::vector<std::string> emit(const ExperimentResult& result, const ExperimentConfig& cfg) {
    std::vector<std::string> written;
    if (cfg.out_path.empty()) return written;
    atomic_write(cfg.out_path, result.json_text);
    written.push_back(cfg.out_path);

    namespace fs = std::filesystem;
    fs::path base(cfg.out_path);
    std::string stem = (base.parent_path() / base.stem()).string();
    if (cfg.format == "csv" || cfg.subcommand == "gen-env") {
        for (const auto& [suffix, csv] : result.tables) {
            std::string path = suffix == "env" ? stem + ".env" : stem + "_" + suffix + ".csv";
            atomic_write(path, csv);
            written.push_back(path);
        }
    }
    for (const auto& [suffix, rows] : result.plot_files) {
        std::string path = stem + "_" + suffix + ".dat";
        atomic_write(path, rows);
        written.push_back(path);
    }
    return written;
}

}  // namespace polylab::io
