#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polylab/disorder.hpp"
#include "polylab/polymer.hpp"

namespace polylab::replica {

// Phi_beta(gamma_1,...,gamma_k) over summed local times.
double joint_phi(const std::vector<const PolymerPath*>& paths, const PotentialLaw& law, double beta);

// Phi(gamma) + Phi(gamma') - Phi(gamma, gamma') >= 0; zero when the vertex
// supports are disjoint. e^{defect} is the pairwise weight-coupling factor.
double interaction_defect(const PolymerPath& gamma, const PolymerPath& gamma_prime,
                          const PotentialLaw& law, double beta);

// {Phi(g,g',e,e') - Phi(g,g')} + {(m+m') phi(1) - Phi(e) - Phi(e')}, which
// subadditivity keeps >= 0.
double last_step_bound_check(const PolymerPath& gamma, const PolymerPath& gamma_prime,
                             const PolymerPath& eta, const PolymerPath& eta_prime,
                             const PotentialLaw& law, double beta);

// Geometry of one four-point case: two cone-confined anchors of length ell at
// x and x', and irreducible targets (y, m) from x and (y', m') from x'.
struct CaseGeometry {
    int ell = 0;
    Point x, x_prime;
    Point y, y_prime;  // displacements of the irreducible pieces
    int m = 0, m_prime = 0;
};

struct CaseSetup {
    ConeSpec cone;
    RealVec h;
    double beta = 0;
    double lambda = 0;
    PotentialLaw law;
};

struct FactorizationResult {
    double value = 0;
    bool disjoint = false;  // D(x,x+y) cap D(x',x'+y') empty
    // One of the pieces touches no site of the other three observables, so the
    // mean-zero factor splits off and the value is an exact zero. The geometric
    // flag above can hold while this fails: a piece may revisit its anchor,
    // which the t-table ending there also reads.
    bool supports_independent = false;
    size_t dependent_sites = 0;
};

// E[ t_x t_x' E(f - fbar | A) E(f' - fbar' | A) ], exact. The algebra A is a
// site predicate; pass {} for the trivial algebra. Vanishes when the
// dependence regions are disjoint and A sees neither (mean zero).
FactorizationResult factorization_check(const CaseSetup& s, const CaseGeometry& g,
                                        const std::function<bool(const Point&)>& algebra);

struct MonotonicityResult {
    double lhs = 0;  // E[t t' E(f|A) E(f'|A)]
    double rhs = 0;  // E[t t' f f']
};

MonotonicityResult conditional_monotonicity_check(const CaseSetup& s, const CaseGeometry& g,
                                                  const std::function<bool(const Point&)>& algebra);

struct SecondMomentEntry {
    Point x, x_prime;
    double e_tt = 0;       // E[t_x t_x']
    double e_t_e_t = 0;    // E[t_x] E[t_x']
};

struct SecondMomentProfile {
    int ell = 0;
    std::vector<SecondMomentEntry> entries;
    double fit_c2 = 0;       // slope of log E[tt'] against -(|x-lv|^2+|x'-lv|^2)/l
    double fit_r2 = 0;       // quality of that fit
    bool lower_bound_ok = true;  // E[tt'] >= E[t]E[t'] everywhere
};

// Exact second moments over all anchor pairs at length ell, with the
// Gaussian-profile fit and the positive-association lower bound.
SecondMomentProfile second_moment_profile(const CaseSetup& s, int ell, const RealVec& v);

std::string profile_to_csv(const SecondMomentProfile& p, int dims);

}  // namespace polylab::replica
