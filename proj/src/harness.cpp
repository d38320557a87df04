#include "polylab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "polylab/exactenum.hpp"

namespace polylab::harness {

using namespace polylab::disorder;
using exactenum::Weighting;

namespace {

// worker pool over independent environments; results land in per-index slots
void for_each_env(int jobs, int count, const std::function<void(int)>& work) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) work(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

SeriesResult s_series(const Environment& env, const ConeSpec& cone, const RealVec& h, double beta,
                      const renewal::RenewalModel& model, int n_max, int f_horizon) {
    const double lambda = model.lambda;
    // quenched cone-confined tables, lambda-shifted
    auto t = exactenum::cone_dp_tables(Weighting::quenched(env, beta), cone, h, n_max, Point{},
                                       lambda);

    // annealed irreducible mass up to the horizon (same truncation as the
    // anchored sums, so the summand is mean zero)
    auto ann = exactenum::enumerate_basic(Weighting::annealed_of(env.law(), beta), cone, h,
                                          f_horizon);
    double fbar = 0;
    for (int m = 1; m <= f_horizon; ++m) fbar += ann.f.mass(m) * std::exp(-lambda * m);

    // anchored quenched irreducible totals, cached per anchor
    std::unordered_map<Point, double, PointHash> f_tot;
    auto f_at = [&](const Point& x) {
        auto it = f_tot.find(x);
        if (it != f_tot.end()) return it->second;
        auto tabs = exactenum::enumerate_basic(Weighting::quenched(env, beta), cone, h, f_horizon, x);
        double s = 0;
        for (int m = 1; m <= f_horizon; ++m) s += tabs.f.mass(m) * std::exp(-lambda * m);
        f_tot.emplace(x, s);
        return s;
    };

    SeriesResult sr;
    sr.experiment = "s_series";
    sr.seed = env.seed();
    double acc = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        double layer = 0, t_mass = 0;
        for (const auto& [x, w] : t[static_cast<size_t>(n)]) {
            if (w == 0.0) continue;
            layer += w * (f_at(x) - fbar);
            t_mass += w;
        }
        acc += layer;
        if (n >= 1) {
            sr.ns.push_back(n);
            sr.values.push_back(acc);
            sr.errors.push_back(0.0);
            sr.companion.push_back(model.kappa0 * t_mass);
        }
    }
    return sr;
}

namespace {

struct AnchoredF {
    SiteInterner interner;
    Poly poly;
    std::vector<Point> region;
};

AnchoredF anchored_f(const Point& anchor, const Point& y, int m, const ConeSpec& cone,
                     const RealVec& h, double lambda) {
    AnchoredF af;
    auto paths = collect_cone_paths(cone, h, lambda, anchor, m, PathClass::irreducible, af.interner);
    af.poly = select_poly(paths, y, m);
    af.region = dependence_region(anchor, anchor + y, cone);
    return af;
}

}  // namespace

CondExpectation cond_expect_f(const Point& anchor, const Point& y, int m,
                              const HalfSpaceAlgebra& algebra, const Environment& env,
                              const ConeSpec& cone, const RealVec& h, double beta, double lambda,
                              CondMode mode, int mc_samples, uint64_t mc_seed) {
    AnchoredF af = anchored_f(anchor, y, m, cone, h, lambda);
    MomentTable moments{&env.law(), beta};
    auto frozen = [&](const Point& p) { return algebra.contains(p); };

    CondExpectation out;
    out.fully_measurable = true;
    out.fully_independent = true;
    for (const Point& p : af.region) {
        if (algebra.contains(p)) out.fully_independent = false;
        else out.fully_measurable = false;
    }

    if (mode == CondMode::exact) {
        Poly c = conditioned(af.poly, moments, frozen, af.interner);
        out.value = eval_at(c, env, beta, af.interner);
        return out;
    }

    // MC mode: freeze the algebra sites from env, resample the rest
    double acc = 0, acc2 = 0;
    for (int s = 0; s < mc_samples; ++s) {
        uint64_t seed_s = derive_seed(mc_seed, static_cast<uint64_t>(s));
        double val = 0;
        for (const Term& t : af.poly.terms) {
            double w = t.coef;
            for (auto& [id, c] : t.sites) {
                const Point& site = af.interner.site(id);
                double v = algebra.contains(site) ? env.value(site)
                                                  : env.law().sample_value(seed_s, site);
                double u = (beta == 0.0) ? 1.0 : (v == kTrap ? 0.0 : std::exp(-beta * v));
                if (u == 0.0) {
                    w = 0;
                    break;
                }
                w *= std::pow(u, c);
            }
            val += w;
        }
        acc += val;
        acc2 += val * val;
    }
    out.value = acc / mc_samples;
    double var = (acc2 - acc * acc / mc_samples) / std::max(1, mc_samples - 1);
    out.stderr_ = std::sqrt(std::max(0.0, var) / mc_samples);
    return out;
}

namespace {

struct ZPolynomial {
    SiteInterner interner;
    Poly z;        // centered statistic
    double mean_raw = 0;
};

// Z_l = sum_x t_{x,l} (f^{(x)}_{<=M} - fbar_{<=M}), centered exactly.
ZPolynomial build_z(const PotentialLaw& law, const ConeSpec& cone, const RealVec& h, double beta,
                    double lambda, int ell, int f_horizon) {
    ZPolynomial zp;
    MomentTable moments{&law, beta};
    auto t_paths = collect_cone_paths(cone, h, lambda, Point{}, ell, PathClass::cone_confined,
                                      zp.interner);
    std::unordered_map<Point, Poly, PointHash> t_by_x;
    for (const PathTerm& pt : t_paths)
        if (pt.length == ell) t_by_x[pt.endpoint].terms.push_back(pt.term);

    double fbar = 0;
    bool fbar_known = false;
    for (auto& [x, tp] : t_by_x) {
        auto f_paths = collect_cone_paths(cone, h, lambda, x, f_horizon, PathClass::irreducible,
                                          zp.interner);
        Poly f = total_poly(f_paths);
        if (!fbar_known) {
            // translation invariance: the annealed total is anchor-independent
            fbar = expect(f, moments);
            fbar_known = true;
        }
        f.add_const(-fbar);
        zp.z += product(tp, f);
    }
    zp.z = compact(zp.z);
    zp.mean_raw = expect(zp.z, moments);
    zp.z.add_const(-zp.mean_raw);
    return zp;
}

double fit_decay_exponent(const std::vector<int>& ks, const std::vector<double>& vals) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < ks.size(); ++i) {
        if (vals[i] > 1e-300) {
            xs.push_back(std::log1p(static_cast<double>(std::max(0, ks[i]))));
            ys.push_back(std::log(vals[i]));
        }
    }
    if (xs.size() < 3) return 0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= xs.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? -num / den : 0;
}

}  // namespace

MixingaleProfile mixingale_profile(const PotentialLaw& law, const ConeSpec& cone, const RealVec& h,
                                   double beta, double lambda, int ell, int f_horizon,
                                   const std::vector<int>& ks, double v_norm) {
    ZPolynomial zp = build_z(law, cone, h, beta, lambda, ell, f_horizon);
    MomentTable moments{&law, beta};

    MixingaleProfile prof;
    prof.ell = ell;
    prof.ks = ks;
    prof.var_z = expect_product({&zp.z, &zp.z}, moments);
    for (int k : ks) {
        HalfSpaceAlgebra past_alg(ell - k, v_norm);
        auto frozen_past = [&](const Point& p) { return past_alg.contains(p); };
        Poly cp = conditioned(zp.z, moments, frozen_past, zp.interner);
        double past = expect_product({&cp, &cp}, moments);
        prof.past.push_back(past);

        HalfSpaceAlgebra fut_alg(ell + k, v_norm);
        auto frozen_fut = [&](const Point& p) { return fut_alg.contains(p); };
        Poly cf = conditioned(zp.z, moments, frozen_fut, zp.interner);
        prof.future.push_back(std::max(0.0, prof.var_z - expect_product({&cf, &cf}, moments)));
    }
    prof.decay_exponent = fit_decay_exponent(ks, prof.past);
    // tower property at the widest conditioning in the list
    {
        HalfSpaceAlgebra alg(ell - ks.back(), v_norm);
        auto frozen = [&](const Point& p) { return alg.contains(p); };
        Poly c = conditioned(zp.z, moments, frozen, zp.interner);
        prof.tower_residual = std::abs(expect(c, moments));
    }
    return prof;
}

MixingaleProfile mixingale_profile_mc(const PotentialLaw& law, const ConeSpec& cone,
                                      const RealVec& h, double beta, double lambda, int ell,
                                      int f_horizon, const std::vector<int>& ks, double v_norm,
                                      int dims, int n_env, uint64_t seed) {
    ZPolynomial zp = build_z(law, cone, h, beta, lambda, ell, f_horizon);
    MomentTable moments{&law, beta};

    int radius = 1;
    for (const Point& p : zp.interner.pts) radius = std::max(radius, linf_norm(p));

    MixingaleProfile prof;
    prof.ell = ell;
    prof.ks = ks;
    std::vector<double> past_acc(ks.size(), 0.0), fut_acc(ks.size(), 0.0);
    double var_acc = 0;
    for (int e = 0; e < n_env; ++e) {
        Environment env =
            sample_environment(law, dims, radius, derive_seed(seed, static_cast<uint64_t>(e)));
        double z_val = eval_at(zp.z, env, beta, zp.interner);
        var_acc += z_val * z_val;
        for (size_t i = 0; i < ks.size(); ++i) {
            HalfSpaceAlgebra past_alg(ell - ks[i], v_norm);
            auto fp = [&](const Point& p) { return past_alg.contains(p); };
            Poly cp = conditioned(zp.z, moments, fp, zp.interner);
            double pv = eval_at(cp, env, beta, zp.interner);
            past_acc[i] += pv * pv;

            HalfSpaceAlgebra fut_alg(ell + ks[i], v_norm);
            auto ff = [&](const Point& p) { return fut_alg.contains(p); };
            Poly cf = conditioned(zp.z, moments, ff, zp.interner);
            double fv = z_val - eval_at(cf, env, beta, zp.interner);
            fut_acc[i] += fv * fv;
        }
    }
    prof.var_z = var_acc / n_env;
    for (size_t i = 0; i < ks.size(); ++i) {
        prof.past.push_back(past_acc[i] / n_env);
        prof.future.push_back(fut_acc[i] / n_env);
    }
    prof.decay_exponent = fit_decay_exponent(ks, prof.past);
    return prof;
}

QuenchedCltResult quenched_clt(const EnsembleSpec& ens, const RealVec& h, double beta,
                               const renewal::RenewalModel& model,
                               const std::vector<RealVec>& alphas, int n,
                               const transfer::DpOptions& dp) {
    QuenchedCltResult res;
    res.n = n;
    res.stats.resize(alphas.size());
    double root = std::sqrt(static_cast<double>(n));
    for (size_t a = 0; a < alphas.size(); ++a) {
        res.stats[a].alpha = alphas[a];
        res.stats[a].gauss = std::exp(-0.5 * quad_form(model.sigma, alphas[a], ens.dims));
    }
    std::vector<std::vector<double>> devs(static_cast<size_t>(ens.n_env));
    std::vector<uint8_t> zeroed(static_cast<size_t>(ens.n_env), 0);
    for_each_env(ens.jobs, ens.n_env, [&](int e) {
        Environment env = sample_environment(ens.law, ens.dims, std::max(1, n),
                                             derive_seed(ens.seed, static_cast<uint64_t>(e)));
        auto slice = transfer::dp_quenched(env, h, beta, n, dp);
        double s0 = slice.total();
        if (s0 <= 0) {
            zeroed[static_cast<size_t>(e)] = 1;
            return;
        }
        for (size_t a = 0; a < alphas.size(); ++a) {
            RealVec as;
            for (int d = 0; d < ens.dims; ++d) as[d] = alphas[a][d] / root;
            std::complex<double> ratio = transfer::char_sum(slice, as, model.v) / s0;
            devs[static_cast<size_t>(e)].push_back(std::abs(ratio - res.stats[a].gauss));
        }
    });
    for (int e = 0; e < ens.n_env; ++e) {  // aggregate in seed order
        if (zeroed[static_cast<size_t>(e)]) {
            ++res.zero_mass_envs;
            continue;
        }
        for (size_t a = 0; a < alphas.size(); ++a)
            res.stats[a].deviations.push_back(devs[static_cast<size_t>(e)][a]);
    }
    for (auto& st : res.stats) {
        std::vector<double> d = st.deviations;
        if (d.empty()) continue;
        std::sort(d.begin(), d.end());
        auto q = [&](double p) { return d[static_cast<size_t>(p * (d.size() - 1))]; };
        st.median = q(0.5);
        st.iqr_lo = q(0.25);
        st.iqr_hi = q(0.75);
    }
    return res;
}

LlnResult empirical_lln(const EnsembleSpec& ens, const RealVec& h, double beta, const RealVec& v,
                        int n, double eps, const transfer::DpOptions& dp) {
    LlnResult res;
    res.n = n;
    res.eps = eps;
    res.tails.assign(static_cast<size_t>(ens.n_env), 0.0);
    for_each_env(ens.jobs, ens.n_env, [&](int e) {
        Environment env = sample_environment(ens.law, ens.dims, std::max(1, n),
                                             derive_seed(ens.seed, static_cast<uint64_t>(e)));
        auto slice = transfer::dp_quenched(env, h, beta, n, dp);
        double total = 0, outside = 0;
        const Box& box = slice.box;
        for (size_t i = 0; i < slice.vals.size(); ++i) {
            double w = slice.value_at(box.point_at(i));
            if (w == 0.0) continue;
            total += w;
            Point p = box.point_at(i);
            double d2 = 0;
            for (int dd = 0; dd < ens.dims; ++dd) {
                double diff = static_cast<double>(p[dd]) / n - v[dd];
                d2 += diff * diff;
            }
            if (std::sqrt(d2) > eps) outside += w;
        }
        res.tails[static_cast<size_t>(e)] = total > 0 ? outside / total : 0.0;
    });
    std::vector<double> sorted = res.tails;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty()) res.median = sorted[sorted.size() / 2];
    return res;
}

}  // namespace polylab::harness
