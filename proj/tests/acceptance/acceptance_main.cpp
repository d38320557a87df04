// Acceptance suite: one run per criterion, one PASS/FAIL line each.
// Usage: acceptance [criterion 1..8]; no argument runs everything.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/exactenum.hpp"
#include "polylab/harness.hpp"
#include "polylab/renewal.hpp"
#include "polylab/replica.hpp"
#include "polylab/transfer.hpp"

using namespace polylab;
using exactenum::Weighting;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double iqr_of(std::vector<double> v) {
    if (v.size() < 4) return 0;
    std::sort(v.begin(), v.end());
    return v[static_cast<size_t>(0.75 * (v.size() - 1))] -
           v[static_cast<size_t>(0.25 * (v.size() - 1))];
}

// ---- C1: renewal identity, quenched and annealed -------------------------

Checker criterion1() {
    Checker c;
    auto trap = PotentialLaw::bernoulli_trap(0.2);
    auto det = PotentialLaw::deterministic(1.0);
    char buf[160];
    for (int dims : {2, 3}) {
        int n_max = dims == 2 ? 8 : 6;
        RealVec h = RealVec::on_axis(0.8);
        for (double frac : {0.3, 0.5}) {
            ConeSpec cone(dims, h, frac / std::sqrt(static_cast<double>(dims)));
            // quenched: ten seeded environments
            for (uint64_t seed = 1; seed <= 10; ++seed) {
                Environment env = sample_environment(trap, dims, n_max, seed);
                auto res = exactenum::renewal_residuals(Weighting::quenched(env, 0.7), cone, h,
                                                        n_max);
                double worst = *std::max_element(res.begin(), res.end());
                if (worst > 1e-12) {
                    std::snprintf(buf, sizeof buf,
                                  "quenched D=%d delta=%.2f seed=%llu residual %.3e", dims, frac,
                                  static_cast<unsigned long long>(seed), worst);
                    c.require(false, buf);
                }
            }
            // annealed: weights with a linear one-site potential, where the
            // identity is exact (nonlinear laws interact across the junction
            // site; see the unit suite for that measured defect)
            for (const Weighting& w :
                 {Weighting::annealed_of(det, 0.7), Weighting::annealed_of(trap, 0.0)}) {
                auto res = exactenum::renewal_residuals(w, cone, h, n_max);
                double worst = *std::max_element(res.begin(), res.end());
                if (worst > 1e-12) {
                    std::snprintf(buf, sizeof buf, "annealed D=%d delta=%.2f residual %.3e", dims,
                                  frac, worst);
                    c.require(false, buf);
                }
            }
        }
    }
    return c;
}

// ---- C2: closed-form beta = 0 oracles -------------------------------------

Checker criterion2() {
    Checker c;
    auto law = PotentialLaw::deterministic(0.0);
    RealVec h = RealVec::on_axis(1.0);
    double S = (std::cosh(1.0) + 1) / 2;
    double lam0 = std::log(S);
    double v0 = std::sinh(1.0) / (2 * S);
    double s11 = std::cosh(1.0) / (2 * S) - v0 * v0;
    double s22 = 1.0 / (2 * S);
    char buf[160];

    // lambda from the N = 10 enumeration, within the reported truncation bound
    {
        ConeSpec cone(2, h, ConeSpec::default_delta(2));
        auto tabs = exactenum::enumerate_basic(Weighting::annealed_of(law, 0.0), cone, h, 10);
        auto sol = renewal::solve_lambda(tabs.f.by_len, 10);
        std::snprintf(buf, sizeof buf, "lambda(N=10) err %.3e vs bound %.3e",
                      std::fabs(sol.lambda - lam0), sol.trunc_bound);
        c.require(std::fabs(sol.lambda - lam0) <= sol.trunc_bound, buf);
        c.require(sol.nu_hat > 0, "nu_hat(N=10) not positive");
    }

    // deep horizon via the moment-sequence route: 1e-6 relative on lambda, v, Sigma
    {
        ConeSpec cone(2, h, 0.25);
        auto seq = exactenum::cone_dp_moment_sequences(Weighting::annealed_of(law, 0.0), cone, h,
                                                       180);
        auto sm = renewal::model_from_sequences(seq);
        auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
        std::snprintf(buf, sizeof buf, "lambda rel err %.2e", rel(sm.lambda, lam0));
        c.require(rel(sm.lambda, lam0) <= 1e-6, buf);
        c.require(std::fabs(sm.lambda - lam0) <= sm.trunc_bound, "lambda outside truncation bound");
        std::snprintf(buf, sizeof buf, "v rel err %.2e", rel(sm.der.v[0], v0));
        c.require(rel(sm.der.v[0], v0) <= 1e-6, buf);
        c.require(std::fabs(sm.der.v[1]) <= 1e-9, "transverse drift not zero");
        std::snprintf(buf, sizeof buf, "sigma11 rel err %.2e", rel(sm.der.sigma.at(0, 0), s11));
        c.require(rel(sm.der.sigma.at(0, 0), s11) <= 1e-6, buf);
        std::snprintf(buf, sizeof buf, "sigma22 rel err %.2e", rel(sm.der.sigma.at(1, 1), s22));
        c.require(rel(sm.der.sigma.at(1, 1), s22) <= 1e-6, buf);
        c.require(std::fabs(sm.der.sigma.at(0, 1)) <= 1e-9, "off-diagonal Sigma not zero");
        c.require(sm.der.sigma_positive_definite, "Sigma not positive definite");
    }
    return c;
}

// shared annealed law for C3/C4
renewal::IrreducibleLaw c34_law() {
    auto law = PotentialLaw::bernoulli_trap(0.2);
    RealVec h = RealVec::on_axis(1.0);
    ConeSpec cone(2, h, ConeSpec::default_delta(2));
    auto tabs = exactenum::enumerate_basic(Weighting::annealed_of(law, 0.3), cone, h, 10);
    return renewal::make_irreducible_law(tabs.f.by_len, 10, 2, "annealed enumeration N=10");
}

// ---- C3: normalization of the irreducible law -----------------------------

Checker criterion3() {
    Checker c;
    auto ilaw = c34_law();
    double total = ilaw.total_mass();
    char buf[160];
    std::snprintf(buf, sizeof buf, "total mass %.15f not in [1 - %.3e, 1 + 1e-10]", total,
                  ilaw.trunc_bound);
    c.require(total >= 1.0 - ilaw.trunc_bound && total <= 1.0 + 1e-10, buf);
    std::snprintf(buf, sizeof buf, "nu_hat %.4f not positive", ilaw.nu_hat);
    c.require(ilaw.nu_hat > 0, buf);
    // exponentially decaying tails: slice masses drop across the horizon
    c.require(ilaw.mass(ilaw.horizon) < ilaw.mass(ilaw.horizon / 2),
              "slice masses do not decay across the horizon");
    return c;
}

// ---- C4: annealed CLT -----------------------------------------------------

Checker criterion4() {
    Checker c;
    auto ilaw = c34_law();
    auto der = renewal::speed_and_diffusivity(ilaw);
    std::vector<RealVec> alphas;
    for (double mag : {0.4, 0.8, 1.2, 1.6, 2.0}) {
        RealVec a;
        a[0] = mag * M_SQRT1_2;
        a[1] = mag * M_SQRT1_2;
        alphas.push_back(a);
    }
    auto rep = renewal::annealed_clt_check(ilaw, der, alphas, {25, 100, 400});
    char buf[160];
    for (size_t i = 0; i < alphas.size(); ++i) {
        double d25 = rep.points[3 * i].deviation;
        double d100 = rep.points[3 * i + 1].deviation;
        double d400 = rep.points[3 * i + 2].deviation;
        if (!(d100 < d25 && d400 < d100)) {
            std::snprintf(buf, sizeof buf, "alpha %.2f deviations not decreasing (%.2e %.2e %.2e)",
                          norm2(alphas[i]), d25, d100, d400);
            c.require(false, buf);
        }
        if (!(rep.slopes[i] >= -0.8 && rep.slopes[i] <= -0.3)) {
            std::snprintf(buf, sizeof buf, "alpha %.2f log-log slope %.3f outside [-0.8, -0.3]",
                          norm2(alphas[i]), rep.slopes[i]);
            c.require(false, buf);
        }
    }
    return c;
}

// ---- C5: attractivity / replica suite --------------------------------------

Checker criterion5() {
    Checker c;
    char buf[160];
    std::mt19937_64 rng(20240809);
    std::uniform_int_distribution<int> axis(1, 2);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> len(1, 6);
    auto rand_path = [&]() {
        std::vector<Step> steps;
        int n = len(rng);
        for (int i = 0; i < n; ++i)
            steps.push_back(static_cast<Step>((coin(rng) ? 1 : -1) * axis(rng)));
        return PolymerPath(2, steps);
    };
    auto expo = PotentialLaw::exponential(1.0);
    auto trap = PotentialLaw::bernoulli_trap(0.3);

    // 1e4 randomized interaction defects and last-step slacks
    double min_defect = 1e300, min_slack = 1e300;
    for (int rep = 0; rep < 10000; ++rep) {
        const PotentialLaw& law = (rep % 2) ? expo : trap;
        double beta = (rep % 2) ? 0.8 : 1.5;
        auto a = rand_path(), b = rand_path();
        min_defect = std::min(min_defect, replica::interaction_defect(a, b, law, beta));
        auto e1 = rand_path(), e2 = rand_path();
        min_slack = std::min(min_slack, replica::last_step_bound_check(a, b, e1, e2, law, beta));
    }
    std::snprintf(buf, sizeof buf, "min interaction defect %.3e", min_defect);
    c.require(min_defect >= -1e-12, buf);
    std::snprintf(buf, sizeof buf, "min last-step slack %.3e", min_slack);
    c.require(min_slack >= -1e-12, buf);

    RealVec h = RealVec::on_axis(0.8);
    replica::CaseSetup setup{ConeSpec(2, h, ConeSpec::default_delta(2)), h, 1.0, 0.0, trap};

    // pick well-supported irreducible targets from the annealed tables;
    // stretched targets only (|y|_1 = m), whose pieces cannot revisit their
    // anchor, so the disjoint-region zero is exact
    auto ann = exactenum::enumerate_basic(Weighting::annealed_of(trap, 1.0), setup.cone, h, 4);
    std::vector<std::pair<Point, int>> targets;
    for (int m = 3; m <= 4; ++m) {
        std::vector<std::pair<double, Point>> rank;
        for (const auto& [y, w] : ann.f.by_len[static_cast<size_t>(m)])
            if (l1_norm(y) == m) rank.push_back({w, y});
        std::sort(rank.begin(), rank.end(), [](auto& a, auto& b) { return a.first > b.first; });
        for (size_t i = 0; i < rank.size() && i < 3; ++i) targets.push_back({rank[i].second, m});
    }

    // conditional monotonicity over 200 random geometries
    int done = 0, attempts = 0;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(targets.size()) - 1);
    std::uniform_int_distribution<int> lvl(0, 4);
    std::uniform_int_distribution<int> elld(2, 4);
    while (done < 200 && attempts < 4000) {
        ++attempts;
        replica::CaseGeometry g;
        g.ell = elld(rng);
        g.x[0] = g.ell - 2 * (coin(rng) && g.ell > 1 ? 1 : 0);
        g.x[1] = (g.ell - std::abs(g.x[0])) % 2 == 0 ? (g.ell - std::abs(g.x[0])) / 2 * (coin(rng) ? 1 : -1) * 0
                                                     : 0;
        if ((std::abs(g.x[0]) + std::abs(g.x[1]) - g.ell) % 2 != 0) continue;
        auto [y1, m1] = targets[static_cast<size_t>(pick(rng))];
        auto [y2, m2] = targets[static_cast<size_t>(pick(rng))];
        g.x_prime = g.x;
        g.x_prime[1] = -g.x[1];
        g.y = y1;
        g.m = m1;
        g.y_prime = y2;
        g.m_prime = m2;
        int level = lvl(rng);
        auto alg = [level](const Point& p) { return p[0] <= level; };
        auto res = replica::conditional_monotonicity_check(setup, g, alg);
        if (res.rhs <= 0) continue;
        if (res.lhs > res.rhs + 1e-12) {
            std::snprintf(buf, sizeof buf, "monotonicity violated: lhs %.6e rhs %.6e", res.lhs,
                          res.rhs);
            c.require(false, buf);
        }
        ++done;
    }
    std::snprintf(buf, sizeof buf, "only %d/200 monotonicity cases realized", done);
    c.require(done >= 200, buf);

    // factorization: exact zeros under disjointness, in several geometries
    int zeros = 0;
    for (int j = 0; j <= 2; ++j) {
        replica::CaseGeometry g;
        g.ell = 4 + j;
        g.x = unit_point(0, 2) + unit_point(1, 2 + j);
        g.x_prime = unit_point(0, 2) - unit_point(1, 2 + j);
        for (auto& [y, m] : targets) {
            g.y = y;
            g.m = m;
            g.y_prime = y;
            g.y_prime[1] = -y[1];
            g.m_prime = m;
            auto alg = [&](const Point& p) { return p[0] <= 2; };
            auto res = replica::factorization_check(setup, g, alg);
            if (!res.disjoint) continue;
            c.require(res.supports_independent, "stretched targets should split off");
            std::snprintf(buf, sizeof buf, "disjoint factorization %.3e not zero", res.value);
            c.require(std::fabs(res.value) <= 1e-12, buf);
            ++zeros;
        }
    }
    c.require(zeros >= 6, "too few disjoint factorization geometries realized");

    // exhaustive positive association at every length up to 6
    auto sm_law = PotentialLaw::bernoulli_trap(0.1);
    replica::CaseSetup sm_setup{setup.cone, h, 1.0, 0.0, sm_law};
    auto model_v = RealVec::on_axis(0.55);
    for (int ell = 1; ell <= 6; ++ell) {
        auto prof = replica::second_moment_profile(sm_setup, ell, model_v);
        std::snprintf(buf, sizeof buf, "E[tt'] < E[t]E[t'] at ell=%d", ell);
        c.require(prof.lower_bound_ok, buf);
    }
    return c;
}

// ---- C6: DP / enumeration and representation equivalences ------------------

Checker criterion6() {
    Checker c;
    char buf[160];
    RealVec h = RealVec::on_axis(0.8);
    auto law = PotentialLaw::exponential(1.0);
    for (uint64_t seed : {100ULL, 101ULL, 102ULL}) {
        Environment env = sample_environment(law, 2, 8, seed);
        auto q = exactenum::enumerate_Q(Weighting::quenched(env, 0.9), 2, 8);
        for (int n : {2, 5, 8}) {
            auto slice = transfer::dp_quenched(env, h, 0.9, n, {});
            for (const auto& [x, w] : q.by_len[static_cast<size_t>(n)]) {
                double expect = std::exp(dot(h, x)) * w;
                double got = slice.value_at(x);
                if (std::fabs(got - expect) > 1e-12 * std::max(1.0, std::fabs(expect))) {
                    std::snprintf(buf, sizeof buf, "dp vs enumeration mismatch at n=%d", n);
                    c.require(false, buf);
                }
            }
        }
        // tilt folding equivalence
        auto folded = transfer::dp_quenched(env, h, 0.9, 8, {.fold_tilt = true});
        auto late = transfer::dp_quenched(env, h, 0.9, 8, {.fold_tilt = false});
        for (size_t i = 0; i < folded.vals.size(); ++i) {
            double a = folded.vals[i], b = late.vals[i];
            if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a))) {
                c.require(false, "tilt folding mismatch");
                break;
            }
        }
    }
    // log-space vs linear-space at n = 64, beta = 1
    {
        Environment env = sample_environment(law, 2, 64, 4242);
        transfer::DpOptions lin;
        lin.logspace_threshold = 1 << 20;
        transfer::DpOptions lg;
        lg.log_space = true;
        auto a = transfer::dp_quenched(env, h, 1.0, 64, lin);
        auto b = transfer::dp_quenched(env, h, 1.0, 64, lg);
        double worst = 0;
        for (size_t i = 0; i < a.vals.size(); ++i) {
            double va = a.vals[i];
            if (va <= 0) continue;
            double vb = b.value_at(b.box.point_at(i));
            worst = std::max(worst, std::fabs(va - vb) / va);
        }
        std::snprintf(buf, sizeof buf, "log/linear dp relative gap %.3e", worst);
        c.require(worst <= 1e-10, buf);
        c.require(!a.log_space && b.log_space, "space flags wrong");
    }
    return c;
}

// ---- C7: mixingale decay ----------------------------------------------------

Checker criterion7() {
    Checker c;
    char buf[160];
    auto law = PotentialLaw::bernoulli_trap(0.2);
    RealVec h = RealVec::on_axis(0.8);
    ConeSpec cone(2, h, ConeSpec::default_delta(2));
    auto tabs = exactenum::enumerate_basic(Weighting::annealed_of(law, 1.0), cone, h, 8);
    auto ilaw = renewal::make_irreducible_law(tabs.f.by_len, 8, 2, "c7");
    auto der = renewal::speed_and_diffusivity(ilaw);
    double vnorm = norm2(der.v);

    std::vector<int> ks;
    for (int k = 0; k <= 12; ++k) ks.push_back(k);
    auto prof = harness::mixingale_profile(law, cone, h, 1.0, ilaw.lambda, 4, 3, ks, vnorm);

    for (size_t i = 1; i < ks.size(); ++i) {
        if (prof.past[i] > prof.past[i - 1] + 1e-13) {
            std::snprintf(buf, sizeof buf, "past profile increases at k=%d", ks[i]);
            c.require(false, buf);
        }
        if (prof.future[i] > prof.future[i - 1] + 1e-13) {
            std::snprintf(buf, sizeof buf, "future profile increases at k=%d", ks[i]);
            c.require(false, buf);
        }
    }
    std::snprintf(buf, sizeof buf, "past profile does not clear (%.3e)", prof.past.back());
    c.require(prof.past.back() <= 1e-13, buf);
    std::snprintf(buf, sizeof buf, "future profile does not clear (%.3e)", prof.future.back());
    c.require(prof.future.back() <= 1e-13, buf);
    std::snprintf(buf, sizeof buf, "tower residual %.3e", prof.tower_residual);
    c.require(prof.tower_residual <= 1e-12, buf);
    c.require(prof.var_z > 0, "degenerate statistic");
    c.require(prof.past.front() > 1e-8, "past profile vacuous at k=0");
    c.require(prof.future.front() > 1e-5, "future profile vacuous at k=0");
    return c;
}

// ---- C8: weak/strong disorder trend proxies --------------------------------

struct EnsembleScan {
    std::vector<double> totals_n8, totals_n16, totals_n24;
    // per env: mean over the alpha grid of |S(a/sqrt n)/S(0) - gauss|
    std::vector<double> dev_n12, dev_n24;
};

EnsembleScan scan_ensemble(const PotentialLaw& law, int dims, double beta, double hmag, int n_env,
                           uint64_t seed, const SymMat& sigma, const RealVec& v,
                           const std::vector<RealVec>& alphas) {
    EnsembleScan out;
    RealVec h = RealVec::on_axis(hmag);
    std::vector<double> gauss(alphas.size());
    for (size_t a = 0; a < alphas.size(); ++a)
        gauss[a] = std::exp(-0.5 * quad_form(sigma, alphas[a], dims));
    for (int e = 0; e < n_env; ++e) {
        Environment env =
            sample_environment(law, dims, 24, derive_seed(seed, static_cast<uint64_t>(e)));
        transfer::dp_quenched_scan(env, h, beta, 24, {}, [&](const transfer::EndpointSlice& s) {
            if (s.n == 8) out.totals_n8.push_back(s.total());
            if (s.n == 16) out.totals_n16.push_back(s.total());
            if (s.n == 24) out.totals_n24.push_back(s.total());
            if (s.n == 12 || s.n == 24) {
                double s0 = s.total();
                if (s0 <= 0) return;
                double acc = 0;
                double root = std::sqrt(static_cast<double>(s.n));
                for (size_t a = 0; a < alphas.size(); ++a) {
                    RealVec as;
                    for (int d = 0; d < dims; ++d) as[d] = alphas[a][d] / root;
                    auto ratio = transfer::char_sum(s, as, v) / s0;
                    acc += std::abs(ratio - gauss[a]);
                }
                (s.n == 12 ? out.dev_n12 : out.dev_n24).push_back(acc / alphas.size());
            }
        });
    }
    return out;
}

Checker criterion8() {
    Checker c;
    char buf[200];

    // (a) + (b): D = 4, dilute traps, weak disorder. The Gaussian reference
    // uses the exact tilted-walk drift and diffusivity: renewal fits at
    // attainable D = 4 horizons leave an O(0.1) drift bias whose phase error
    // grows like sqrt(n) and buries the CLT trend, while the dilute-trap
    // correction to the closed form is O(p) = 2%.
    {
        auto law = PotentialLaw::bernoulli_trap(0.02);
        RealVec h = RealVec::on_axis(0.8);
        auto model = renewal::tilted_walk_model(4, h);

        std::vector<RealVec> alphas;
        alphas.push_back(RealVec::on_axis(2.5));
        alphas.push_back(RealVec::on_axis(3.2));
        auto scan = scan_ensemble(law, 4, 0.2, 0.8, 100, 808, model.sigma, model.v, alphas);

        auto w_of = [](const std::vector<double>& totals) {
            double mean = 0;
            for (double t : totals) mean += t;
            mean /= static_cast<double>(totals.size());
            std::vector<double> w;
            for (double t : totals) w.push_back(t / mean);
            return w;
        };
        double iqr8 = iqr_of(w_of(scan.totals_n8));
        double iqr24 = iqr_of(w_of(scan.totals_n24));
        std::snprintf(buf, sizeof buf, "(a) IQR grows %.3f -> %.3f (x%.2f > 1.5)", iqr8, iqr24,
                      iqr24 / iqr8);
        c.require(iqr24 <= 1.5 * iqr8, buf);

        double med12 = median_of(scan.dev_n12);
        double med24 = median_of(scan.dev_n24);
        std::snprintf(buf, sizeof buf, "(b) median clt deviation not decreasing: %.4f -> %.4f",
                      med12, med24);
        c.require(med24 < med12, buf);
    }

    // (c) strong-disorder contrast: D = 2 at beta = 2 with a beta-sensitive law
    {
        auto law = PotentialLaw::exponential(1.0);
        RealVec h = RealVec::on_axis(0.8);
        std::vector<double> w8, w24;
        std::vector<double> t8, t24;
        for (int e = 0; e < 100; ++e) {
            Environment env = sample_environment(law, 2, 24, derive_seed(909, static_cast<uint64_t>(e)));
            transfer::dp_quenched_scan(env, h, 2.0, 24, {}, [&](const transfer::EndpointSlice& s) {
                if (s.n == 8) t8.push_back(s.total());
                if (s.n == 24) t24.push_back(s.total());
            });
        }
        double mean8 = 0, mean24 = 0;
        for (double t : t8) mean8 += t;
        for (double t : t24) mean24 += t;
        mean8 /= static_cast<double>(t8.size());
        mean24 /= static_cast<double>(t24.size());
        for (double t : t8) w8.push_back(t / mean8);
        for (double t : t24) w24.push_back(t / mean24);
        double m8 = median_of(w8), m24 = median_of(w24);
        std::snprintf(buf, sizeof buf, "(c) median W drops %.4f -> %.4f (factor %.1f < 10)", m8,
                      m24, m8 / m24);
        c.require(m24 <= 0.1 * m8, buf);
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* name;
        double budget_s;
        std::function<Checker()> fn;
    };
    std::vector<Entry> entries = {
        {1, "renewal identity (quenched 10 envs + annealed, D=2 n<=8, D=3 n<=6, two cones)", 120,
         criterion1},
        {2, "beta=0 closed forms for lambda, v, Sigma (1e-6; lambda bound at N=10)", 60, criterion2},
        {3, "irreducible law normalization and tail rate", 60, criterion3},
        {4, "annealed CLT deviations decrease, slope in [-0.8,-0.3]", 120, criterion4},
        {5, "attractivity and replica inequalities (1e4 randomized + exhaustive)", 300, criterion5},
        {6, "dp/enumeration, tilt-folding and log-space equivalences", 120, criterion6},
        {7, "mixingale profile: monotone, clears exactly, tower residual", 120, criterion7},
        {8, "weak/strong disorder trend proxies (100 envs, D=4 and D=2)", 900, criterion8},
    };

    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const auto& e : entries) {
        if (only && e.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Checker ck = e.fn();
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > e.budget_s) {
            ck.ok = false;
            ck.detail += (ck.detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("[%s] C%d %s (%.1fs)\n", ck.ok ? "PASS" : "FAIL", e.id, e.name, dt);
        if (!ck.ok) {
            std::printf("       %s\n", ck.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
