#include "doctest.h"

#include <cmath>
#include <random>

#include "polylab/exactenum.hpp"
#include "polylab/replica.hpp"

using namespace polylab;
using namespace polylab::replica;

namespace {

PolymerPath rand_path(int dims, int len, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> axis(1, dims);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Step> steps;
    for (int i = 0; i < len; ++i)
        steps.push_back(static_cast<Step>((coin(rng) ? 1 : -1) * axis(rng)));
    return PolymerPath(dims, steps);
}

CaseSetup trap_setup(double p, double beta) {
    RealVec h = RealVec::on_axis(0.8);
    return CaseSetup{ConeSpec(2, h, ConeSpec::default_delta(2)), h, beta, 0.0,
                     PotentialLaw::bernoulli_trap(p)};
}

}  // namespace

TEST_CASE("interaction defect: closed cases") {
    auto law = PotentialLaw::bernoulli_trap(0.3);
    // disjoint supports
    auto a = PolymerPath::parse(2, "+1,+1");
    auto b = PolymerPath::parse(2, "-1,-1");
    CHECK(interaction_defect(a, b, law, 1.0) == 0.0);
    // deterministic law: linear phi, defect 0 for any pair
    auto det = PotentialLaw::deterministic(1.4);
    auto c = PolymerPath::parse(2, "+1,+2,-1");
    CHECK(interaction_defect(a, c, det, 0.9) == doctest::Approx(0.0).epsilon(1e-14));
    // identical self-avoiding path visiting k distinct sites once each
    auto s = PolymerPath::parse(2, "+1,+2,+1,+2");  // 4 distinct sites
    double expect = 4 * (-std::log(1 - 0.3));
    CHECK(interaction_defect(s, s, law, 2.0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("interaction defect is nonnegative on random pairs") {
    std::mt19937_64 rng(2024);
    auto law = PotentialLaw::exponential(1.0);
    std::uniform_int_distribution<int> len(1, 6);
    for (int rep = 0; rep < 1000; ++rep) {
        auto a = rand_path(2, len(rng), rng);
        auto b = rand_path(2, len(rng), rng);
        CHECK(interaction_defect(a, b, law, 0.8) >= -1e-13);
    }
}

TEST_CASE("last-step bound: closed and random cases") {
    auto law = PotentialLaw::bernoulli_trap(0.25);
    // four site-disjoint paths: the joint term decouples and the slack
    // collapses to (m + m') phi(1)
    auto g = PolymerPath::parse(2, "+1");
    auto gp = PolymerPath::parse(2, "-1");
    auto e = PolymerPath::parse(2, "+2");
    auto ep = PolymerPath::parse(2, "-2");
    double direct = (1 + 1) * phi_beta(law, 1.0, 1);
    CHECK(last_step_bound_check(g, gp, e, ep, law, 1.0) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(direct >= 0.0);
    // deterministic law: both braces are linear in the local times, leaving
    // exactly (m + m') beta v0
    auto det = PotentialLaw::deterministic(0.7);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(1, 6);
    for (int rep = 0; rep < 50; ++rep) {
        auto a = rand_path(2, len(rng), rng), b = rand_path(2, len(rng), rng);
        auto c = rand_path(2, len(rng), rng), d = rand_path(2, len(rng), rng);
        double expect = (c.length() + d.length()) * 1.1 * 0.7;
        CHECK(last_step_bound_check(a, b, c, d, det, 1.1) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
    // randomized quartets, no negative slack
    auto expo = PotentialLaw::exponential(0.8);
    for (int rep = 0; rep < 1000; ++rep) {
        auto a = rand_path(2, len(rng), rng), b = rand_path(2, len(rng), rng);
        auto c = rand_path(2, len(rng), rng), d = rand_path(2, len(rng), rng);
        CHECK(last_step_bound_check(a, b, c, d, expo, 1.3) >= -1e-12);
    }
}

TEST_CASE("factorization vanishes over disjoint dependence regions") {
    // Shortest irreducible pieces in this cone have length 3 (a length-2 piece
    // always has a break point at its middle vertex).
    auto setup = trap_setup(0.3, 1.0);
    CaseGeometry g;
    g.ell = 4;
    g.x = unit_point(0, 2) + unit_point(1, 2);     // (2, 2)
    g.x_prime = unit_point(0, 2) - unit_point(1, 2);  // (2, -2)
    g.y = unit_point(0, 2) + unit_point(1, 1);        // to (4, 3)
    g.y_prime = unit_point(0, 2) - unit_point(1, 1);  // to (4, -3)
    g.m = 3;
    g.m_prime = 3;
    // algebra: half space through the anchors, so both t's are measurable,
    // while the piece regions straddle the boundary
    auto alg = [](const Point& p) { return p[0] <= 2; };
    auto res = factorization_check(setup, g, alg);
    CHECK(res.disjoint);
    CHECK(std::abs(res.value) <= 1e-12);

    // overlapping regions: same anchor, mirrored targets
    CaseGeometry g2;
    g2.ell = 2;
    g2.x = g2.x_prime = unit_point(0, 2);
    g2.y = unit_point(0, 2) + unit_point(1, 1);
    g2.y_prime = unit_point(0, 2) - unit_point(1, 1);
    g2.m = g2.m_prime = 3;
    auto alg3 = [](const Point& p) { return p[0] <= 3; };

    // beta = 0: f = fbar identically, zero regardless of geometry
    auto setup0 = trap_setup(0.3, 0.0);
    auto res0 = factorization_check(setup0, g2, alg3);
    CHECK(std::abs(res0.value) <= 1e-14);

    // at beta > 0 the overlap makes it generically nonzero
    auto res2 = factorization_check(setup, g2, alg3);
    CHECK(!res2.disjoint);
    CHECK(std::abs(res2.value) > 1e-12);
}

TEST_CASE("factorization: anchor-revisiting pieces leak through disjoint regions") {
    // The piece +1,-1,+1 is irreducible and visits its anchor again at time 2,
    // so it shares the anchor site with the t-table ending there. Geometric
    // region disjointness then no longer forces an exact zero; the residue is
    // the exponentially small junction interaction.
    auto setup = trap_setup(0.3, 1.0);
    CaseGeometry g;
    g.ell = 4;
    g.x = unit_point(0, 2) + unit_point(1, 2);
    g.x_prime = unit_point(0, 2) - unit_point(1, 2);
    g.y = unit_point(0, 1);  // loop-back target
    g.y_prime = unit_point(0, 1);
    g.m = g.m_prime = 3;
    auto alg = [](const Point& p) { return p[0] <= 2; };
    auto res = factorization_check(setup, g, alg);
    CHECK(res.disjoint);
    CHECK(!res.supports_independent);
    CHECK(std::abs(res.value) > 1e-14);
    CHECK(std::abs(res.value) < 1e-4);
}

TEST_CASE("factorization value agrees with configuration enumeration") {
    // independent oracle: exhaustive trap configurations, with the inner
    // conditionals resummed over the free sites
    auto setup = trap_setup(0.3, 1.0);
    CaseGeometry g;
    g.ell = 2;
    g.x = g.x_prime = unit_point(0, 2);
    g.y = unit_point(0, 2) + unit_point(1, 1);
    g.y_prime = unit_point(0, 2) - unit_point(1, 1);
    g.m = g.m_prime = 3;
    auto alg = [](const Point& p) { return p[0] <= 3; };

    auto res = factorization_check(setup, g, alg);
    CHECK(!res.disjoint);

    // only sites the involved paths can actually visit matter: the t-paths
    // stay in the cone within L1 radius ell, the anchored pieces within the
    // anchor's cone within radius m (anchor revisits included)
    std::vector<Point> frozen_sites, free_sites;
    for (int x1 = 0; x1 <= 5; ++x1)
        for (int x2 = -5; x2 <= 5; ++x2) {
            Point p;
            p[0] = x1;
            p[1] = x2;
            if (p == Point{}) continue;
            bool t_site = l1_norm(p) <= g.ell && setup.cone.contains(p);
            Point rel = p - g.x;
            bool f_site = l1_norm(rel) <= g.m && setup.cone.contains(rel);
            if (!t_site && !f_site) continue;
            (alg(p) ? frozen_sites : free_sites).push_back(p);
        }
    REQUIRE(frozen_sites.size() <= 10);
    REQUIRE(free_sites.size() <= 6);

    auto wa = exactenum::Weighting::annealed_of(setup.law, setup.beta);
    auto fa = exactenum::enumerate_basic(wa, setup.cone, setup.h, g.m, Point{});
    double fbar = fa.f.at(g.y, g.m);
    double fbarp = fa.f.at(g.y_prime, g.m_prime);

    Box box(2, 8);
    double brute = 0;
    for (size_t mask = 0; mask < (size_t{1} << frozen_sites.size()); ++mask) {
        double prob = 1;
        std::vector<double> vals(box.size(), 0.0);
        for (size_t i = 0; i < frozen_sites.size(); ++i) {
            bool trap = mask & (size_t{1} << i);
            prob *= trap ? setup.law.p : 1 - setup.law.p;
            if (trap) vals[box.index(frozen_sites[i])] = kTrap;
        }
        // t and t' only read frozen sites, so they are fixed by the outer mask
        auto env = Environment::from_values(setup.law, 2, 8, 0, vals);
        auto w = exactenum::Weighting::quenched(env, setup.beta);
        auto t_tab = exactenum::enumerate_basic(w, setup.cone, setup.h, g.ell);
        double t1 = t_tab.t.at(g.x, g.ell);
        if (t1 == 0) continue;
        double cf = 0, cfp = 0;
        for (size_t sub = 0; sub < (size_t{1} << free_sites.size()); ++sub) {
            double p2 = 1;
            std::vector<double> v2 = vals;
            for (size_t j = 0; j < free_sites.size(); ++j) {
                bool trap = sub & (size_t{1} << j);
                p2 *= trap ? setup.law.p : 1 - setup.law.p;
                v2[box.index(free_sites[j])] = trap ? kTrap : 0.0;
            }
            auto env2 = Environment::from_values(setup.law, 2, 8, 0, v2);
            auto w2 = exactenum::Weighting::quenched(env2, setup.beta);
            auto fx = exactenum::enumerate_basic(w2, setup.cone, setup.h, g.m, g.x);
            cf += p2 * fx.f.at(g.y, g.m);
            cfp += p2 * fx.f.at(g.y_prime, g.m_prime);
        }
        brute += prob * t1 * t1 * (cf - fbar) * (cfp - fbarp);
    }
    CHECK(res.value == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("conditional monotonicity") {
    auto setup = trap_setup(0.25, 1.1);
    CaseGeometry g;
    g.ell = 2;
    g.x = unit_point(0, 2);
    g.x_prime = unit_point(0, 1) + unit_point(1, 1);
    g.y = unit_point(0, 1);
    g.y_prime = unit_point(0, 2);
    g.m = 1;
    g.m_prime = 2;

    // full algebra: conditioning changes nothing
    auto full = conditional_monotonicity_check(setup, g, [](const Point&) { return true; });
    CHECK(full.lhs == doctest::Approx(full.rhs).epsilon(1e-12));

    // trivial algebra: lhs factorizes into E[t t'] fbar fbar'
    auto triv = conditional_monotonicity_check(setup, g, [](const Point&) { return false; });
    CHECK(triv.lhs <= triv.rhs + 1e-12);

    // random geometries
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pick(0, 2);
    int done = 0;
    while (done < 60) {
        CaseGeometry rg;
        rg.ell = 1 + pick(rng);
        rg.x = unit_point(0, rg.ell - pick(rng) % rg.ell);
        rg.x[1] = pick(rng) - 1;
        if (l1_norm(rg.x) > rg.ell || ((l1_norm(rg.x) - rg.ell) & 1)) continue;
        rg.x_prime = rg.x;
        rg.x_prime[1] = -rg.x[1];
        rg.m = 1 + pick(rng);
        rg.m_prime = 1 + pick(rng);
        rg.y = unit_point(0, rg.m);
        rg.y_prime = unit_point(0, rg.m_prime);
        int level = pick(rng);
        auto alg = [level](const Point& p) { return p[0] <= level; };
        auto res = conditional_monotonicity_check(setup, rg, alg);
        if (res.rhs == 0) continue;
        CHECK(res.lhs <= res.rhs + 1e-12);
        ++done;
    }
}

TEST_CASE("second moments: degenerate disorder factorizes, traps associate") {
    RealVec v = RealVec::on_axis(0.5);
    // beta = 0
    {
        auto setup = trap_setup(0.3, 0.0);
        auto prof = second_moment_profile(setup, 4, v);
        for (const auto& e : prof.entries)
            CHECK(e.e_tt == doctest::Approx(e.e_t_e_t).epsilon(1e-12));
        CHECK(prof.lower_bound_ok);
    }
    // deterministic law
    {
        RealVec h = RealVec::on_axis(0.8);
        CaseSetup setup{ConeSpec(2, h, ConeSpec::default_delta(2)), h, 1.0, 0.0,
                        PotentialLaw::deterministic(0.9)};
        auto prof = second_moment_profile(setup, 4, v);
        for (const auto& e : prof.entries)
            CHECK(e.e_tt == doctest::Approx(e.e_t_e_t).epsilon(1e-12));
    }
    // trap law: strict positive association; the Gaussian-profile fit is
    // reported but carries little signal at desk-scale lengths
    {
        auto setup = trap_setup(0.1, 1.0);
        auto prof = second_moment_profile(setup, 5, RealVec::on_axis(0.55));
        CHECK(prof.lower_bound_ok);
        bool strict = false;
        for (const auto& e : prof.entries)
            if (e.e_tt > e.e_t_e_t * (1 + 1e-9)) strict = true;
        CHECK(strict);
        CHECK(std::isfinite(prof.fit_c2));
        CHECK(prof.fit_r2 >= 0.0);
        CHECK(prof.fit_r2 <= 1.0);
        CHECK(!profile_to_csv(prof, 2).empty());
    }
}
