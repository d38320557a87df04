#pragma once

#include <functional>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/polymer.hpp"

namespace polylab::disorder {

// Quenched observables built from finitely many paths are polynomials in the
// per-site visit variables u_x = e^{-beta V(x)},
//     obs = sum_paths coef * prod_x u_x^{ell(x)},
// so disorder expectations reduce to products of visit moments
// E u^c = exp(-phi_beta(c)), and conditional expectations freeze part of each
// monomial. Everything here is exact for i.i.d. laws; no configuration
// enumeration is involved.

struct SiteInterner {
    std::unordered_map<Point, int32_t, PointHash> ids;
    std::vector<Point> pts;

    int32_t intern(const Point& p) {
        auto [it, fresh] = ids.emplace(p, static_cast<int32_t>(pts.size()));
        if (fresh) pts.push_back(p);
        return it->second;
    }
    const Point& site(int32_t id) const { return pts[static_cast<size_t>(id)]; }
};

// sorted (site id, count) pairs
using Multiset = std::vector<std::pair<int32_t, int32_t>>;

Multiset merge(const Multiset& a, const Multiset& b);

struct Term {
    double coef = 0;
    Multiset sites;
};

struct Poly {
    std::vector<Term> terms;

    Poly& operator+=(const Poly& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    void add_const(double c) { terms.push_back({c, {}}); }
};

Poly product(const Poly& a, const Poly& b);

// merges identical multisets; keeps term counts bounded
Poly compact(const Poly& p);

// Visit-moment table m(c) = E u^c for one (law, beta).
struct MomentTable {
    const PotentialLaw* law;
    double beta;
    mutable std::vector<double> cache{1.0};

    double operator()(int32_t c) const {
        while (static_cast<int32_t>(cache.size()) <= c)
            cache.push_back(law->visit_moment(beta, static_cast<int64_t>(cache.size())));
        return cache[static_cast<size_t>(c)];
    }
};

double expect(const Poly& p, const MomentTable& m);

// E[p1 p2 ... pk] with local times added across factors at shared sites.
double expect_product(const std::vector<const Poly*>& ps, const MomentTable& m);

// E(p | values of the sites where `frozen` is true): frozen powers stay
// symbolic, free sites average to visit moments.
Poly conditioned(const Poly& p, const MomentTable& m,
                 const std::function<bool(const Point&)>& frozen, const SiteInterner& interner);

// plug u_x = e^{-beta V(x)} from a concrete environment into every site
double eval_at(const Poly& p, const Environment& env, double beta, const SiteInterner& interner);

// ---- path collectors --------------------------------------------------

enum class PathClass { cone_confined, irreducible };

// One term per path from `anchor`, coef = e^{h.(x-anchor)} e^{-lambda n} (2D)^{-n},
// multiset = absolute-site local times (gamma_1..gamma_n). Collected for every
// length 1..n_max; filter by endpoint/length at the use site.
struct PathTerm {
    Point endpoint;  // relative to anchor
    int length = 0;
    Term term;
};

std::vector<PathTerm> collect_cone_paths(const ConeSpec& cone, const RealVec& h, double lambda,
                                         const Point& anchor, int n_max, PathClass cls,
                                         SiteInterner& interner);

// convenience selectors
Poly select_poly(const std::vector<PathTerm>& paths, const Point& endpoint, int length);
Poly total_poly(const std::vector<PathTerm>& paths);  // sum over all endpoints/lengths

// Dependence region D(u, v) = (u + Y) cap (v - Y) cap Z^D by bounding-box scan.
std::vector<Point> dependence_region(const Point& u, const Point& v, const ConeSpec& cone);

}  // namespace polylab::disorder
