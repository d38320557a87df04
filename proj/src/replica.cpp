#include "polylab/replica.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace polylab::replica {

using namespace polylab::disorder;

double joint_phi(const std::vector<const PolymerPath*>& paths, const PotentialLaw& law,
                 double beta) {
    if (beta == 0.0) return 0.0;
    LocalTimeMap joint;
    for (const PolymerPath* p : paths)
        for (const auto& [site, c] : local_times(*p)) joint[site] += c;
    double phi = 0;
    for (const auto& [site, c] : joint) phi += phi_beta(law, beta, c);
    return phi;
}

double interaction_defect(const PolymerPath& gamma, const PolymerPath& gamma_prime,
                          const PotentialLaw& law, double beta) {
    return joint_phi({&gamma}, law, beta) + joint_phi({&gamma_prime}, law, beta) -
           joint_phi({&gamma, &gamma_prime}, law, beta);
}

double last_step_bound_check(const PolymerPath& gamma, const PolymerPath& gamma_prime,
                             const PolymerPath& eta, const PolymerPath& eta_prime,
                             const PotentialLaw& law, double beta) {
    double four = joint_phi({&gamma, &gamma_prime, &eta, &eta_prime}, law, beta);
    double two = joint_phi({&gamma, &gamma_prime}, law, beta);
    double single = joint_phi({&eta}, law, beta) + joint_phi({&eta_prime}, law, beta);
    double mm = static_cast<double>(eta.length() + eta_prime.length());
    double phi1 = beta > 0 ? phi_beta(law, beta, 1) : 0.0;
    return (four - two) + (mm * phi1 - single);
}

namespace {

struct CaseParts {
    SiteInterner interner;
    Poly t, t_prime;      // cone-confined polynomials from the origin
    Poly f, f_prime;      // anchored irreducible polynomials
    double fbar = 0, fbar_prime = 0;
    MomentTable moments;
};

CaseParts build_case(const CaseSetup& s, const CaseGeometry& g) {
    CaseParts parts{{}, {}, {}, {}, {}, 0.0, 0.0, MomentTable{&s.law, s.beta}};
    auto origin_paths = collect_cone_paths(s.cone, s.h, s.lambda, Point{}, g.ell,
                                           PathClass::cone_confined, parts.interner);
    parts.t = select_poly(origin_paths, g.x, g.ell);
    parts.t_prime = select_poly(origin_paths, g.x_prime, g.ell);
    auto fx = collect_cone_paths(s.cone, s.h, s.lambda, g.x, g.m, PathClass::irreducible,
                                 parts.interner);
    auto fxp = collect_cone_paths(s.cone, s.h, s.lambda, g.x_prime, g.m_prime,
                                  PathClass::irreducible, parts.interner);
    parts.f = select_poly(fx, g.y, g.m);
    parts.f_prime = select_poly(fxp, g.y_prime, g.m_prime);
    parts.fbar = expect(parts.f, parts.moments);
    parts.fbar_prime = expect(parts.f_prime, parts.moments);
    return parts;
}

}  // namespace

FactorizationResult factorization_check(const CaseSetup& s, const CaseGeometry& g,
                                        const std::function<bool(const Point&)>& algebra) {
    CaseParts parts = build_case(s, g);
    auto frozen = algebra ? algebra : [](const Point&) { return false; };

    Poly fc = parts.f;
    fc.add_const(-parts.fbar);
    Poly fc_prime = parts.f_prime;
    fc_prime.add_const(-parts.fbar_prime);
    Poly cf = conditioned(fc, parts.moments, frozen, parts.interner);
    Poly cf_prime = conditioned(fc_prime, parts.moments, frozen, parts.interner);

    FactorizationResult res;
    res.value = expect_product({&parts.t, &parts.t_prime, &cf, &cf_prime}, parts.moments);

    auto d1 = dependence_region(g.x, g.x + g.y, s.cone);
    auto d2 = dependence_region(g.x_prime, g.x_prime + g.y_prime, s.cone);
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    std::vector<Point> inter;
    std::set_intersection(d1.begin(), d1.end(), d2.begin(), d2.end(), std::back_inserter(inter));
    res.disjoint = inter.empty();
    res.dependent_sites = d1.size() + d2.size();

    auto ids_of = [](const Poly& p) {
        std::vector<int32_t> ids;
        for (const Term& t : p.terms)
            for (auto& [id, c] : t.sites) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    };
    auto intersects = [](const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) ++i;
            else if (b[j] < a[i]) ++j;
            else return true;
        }
        return false;
    };
    auto tt = ids_of(parts.t);
    auto ttp = ids_of(parts.t_prime);
    auto ff = ids_of(parts.f);
    auto ffp = ids_of(parts.f_prime);
    auto rest_of = [&](const std::vector<int32_t>& other_f) {
        std::vector<int32_t> rest = tt;
        rest.insert(rest.end(), ttp.begin(), ttp.end());
        rest.insert(rest.end(), other_f.begin(), other_f.end());
        std::sort(rest.begin(), rest.end());
        return rest;
    };
    res.supports_independent = !intersects(ffp, rest_of(ff)) || !intersects(ff, rest_of(ffp));
    return res;
}

MonotonicityResult conditional_monotonicity_check(const CaseSetup& s, const CaseGeometry& g,
                                                  const std::function<bool(const Point&)>& algebra) {
    CaseParts parts = build_case(s, g);
    auto frozen = algebra ? algebra : [](const Point&) { return false; };
    Poly cf = conditioned(parts.f, parts.moments, frozen, parts.interner);
    Poly cf_prime = conditioned(parts.f_prime, parts.moments, frozen, parts.interner);
    MonotonicityResult res;
    res.lhs = expect_product({&parts.t, &parts.t_prime, &cf, &cf_prime}, parts.moments);
    res.rhs = expect_product({&parts.t, &parts.t_prime, &parts.f, &parts.f_prime}, parts.moments);
    return res;
}

SecondMomentProfile second_moment_profile(const CaseSetup& s, int ell, const RealVec& v) {
    SecondMomentProfile prof;
    prof.ell = ell;
    SiteInterner interner;
    MomentTable moments{&s.law, s.beta};
    auto paths = collect_cone_paths(s.cone, s.h, s.lambda, Point{}, ell,
                                    PathClass::cone_confined, interner);

    // group by endpoint at length ell
    std::unordered_map<Point, Poly, PointHash> by_x;
    for (const PathTerm& pt : paths)
        if (pt.length == ell) by_x[pt.endpoint].terms.push_back(pt.term);

    std::vector<std::pair<Point, Poly>> anchors(by_x.begin(), by_x.end());
    std::sort(anchors.begin(), anchors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> xs, ys;
    for (size_t i = 0; i < anchors.size(); ++i) {
        double et_i = expect(anchors[i].second, moments);
        for (size_t j = i; j < anchors.size(); ++j) {
            SecondMomentEntry e;
            e.x = anchors[i].first;
            e.x_prime = anchors[j].first;
            e.e_tt = expect_product({&anchors[i].second, &anchors[j].second}, moments);
            e.e_t_e_t = et_i * expect(anchors[j].second, moments);
            if (e.e_tt < e.e_t_e_t - 1e-12 * std::max(1.0, e.e_t_e_t)) prof.lower_bound_ok = false;
            if (e.e_tt > 0) {
                double q = 0;
                for (int d = 0; d < s.cone.dims; ++d) {
                    double a = e.x[d] - ell * v[d], b = e.x_prime[d] - ell * v[d];
                    q += a * a + b * b;
                }
                xs.push_back(-q / ell);
                ys.push_back(std::log(e.e_tt));
            }
            prof.entries.push_back(e);
        }
    }
    // least-squares fit of log E[tt'] against -(|x-lv|^2 + |x'-lv|^2)/l
    if (xs.size() >= 3) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= xs.size();
        my /= xs.size();
        double sxy = 0, sxx = 0, syy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
            syy += (ys[i] - my) * (ys[i] - my);
        }
        if (sxx > 0 && syy > 0) {
            prof.fit_c2 = sxy / sxx;
            prof.fit_r2 = (sxy * sxy) / (sxx * syy);
        }
    }
    return prof;
}

std::string profile_to_csv(const SecondMomentProfile& p, int dims) {
    std::string out;
    out += "ell";
    for (int d = 0; d < dims; ++d) out += ",x" + std::to_string(d + 1);
    for (int d = 0; d < dims; ++d) out += ",xp" + std::to_string(d + 1);
    out += ",e_tt,e_t_e_t\n";
    char buf[256];
    for (const auto& e : p.entries) {
        char* q = buf;
        q += std::snprintf(q, sizeof buf, "%d", p.ell);
        for (int d = 0; d < dims; ++d)
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%d", e.x[d]);
        for (int d = 0; d < dims; ++d)
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%d", e.x_prime[d]);
        q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%.17g,%.17g\n", e.e_tt,
                           e.e_t_e_t);
        out.append(buf, static_cast<size_t>(q - buf));
    }
    return out;
}

}  // namespace polylab::replica
