#include "polylab/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "polylab/walker.hpp"

namespace polylab::disorder {

Multiset merge(const Multiset& a, const Multiset& b) {
    Multiset out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) out.push_back(a[i++]);
        else if (b[j].first < a[i].first) out.push_back(b[j++]);
        else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return out;
}

Poly product(const Poly& a, const Poly& b) {
    Poly out;
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const Term& ta : a.terms)
        for (const Term& tb : b.terms) out.terms.push_back({ta.coef * tb.coef, merge(ta.sites, tb.sites)});
    return out;
}

namespace {

struct MultisetHash {
    size_t operator()(const Multiset& m) const {
        uint64_t h = 0x2545f4914f6cdd1dULL;
        for (auto& [id, c] : m) {
            h ^= (static_cast<uint64_t>(static_cast<uint32_t>(id)) << 32) |
                 static_cast<uint32_t>(c);
            h *= 0x9e3779b97f4a7c15ULL;
            h ^= h >> 29;
        }
        return static_cast<size_t>(h);
    }
};

}  // namespace

Poly compact(const Poly& p) {
    std::unordered_map<Multiset, double, MultisetHash> acc;
    acc.reserve(p.terms.size());
    for (const Term& t : p.terms) acc[t.sites] += t.coef;
    Poly out;
    out.terms.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0.0) out.terms.push_back({c, m});
    std::sort(out.terms.begin(), out.terms.end(),
              [](const Term& a, const Term& b) { return a.sites < b.sites; });
    return out;
}

double expect(const Poly& p, const MomentTable& m) {
    double s = 0;
    for (const Term& t : p.terms) {
        double w = t.coef;
        for (auto& [id, c] : t.sites) w *= m(c);
        s += w;
    }
    return s;
}

namespace {

double expect_rec(const std::vector<const Poly*>& ps, size_t k, double coef, const Multiset& acc,
                  const MomentTable& m) {
    if (k == ps.size()) {
        double w = coef;
        for (auto& [id, c] : acc) w *= m(c);
        return w;
    }
    double s = 0;
    for (const Term& t : ps[k]->terms)
        s += expect_rec(ps, k + 1, coef * t.coef, merge(acc, t.sites), m);
    return s;
}

}  // namespace

double expect_product(const std::vector<const Poly*>& ps, const MomentTable& m) {
    if (ps.empty()) return 0;
    return expect_rec(ps, 0, 1.0, Multiset{}, m);
}

Poly conditioned(const Poly& p, const MomentTable& m,
                 const std::function<bool(const Point&)>& frozen, const SiteInterner& interner) {
    Poly out;
    out.terms.reserve(p.terms.size());
    for (const Term& t : p.terms) {
        Term r;
        r.coef = t.coef;
        for (auto& [id, c] : t.sites) {
            if (frozen(interner.site(id)))
                r.sites.emplace_back(id, c);
            else
                r.coef *= m(c);
        }
        out.terms.push_back(std::move(r));
    }
    return compact(out);
}

double eval_at(const Poly& p, const Environment& env, double beta, const SiteInterner& interner) {
    double s = 0;
    for (const Term& t : p.terms) {
        double w = t.coef;
        for (auto& [id, c] : t.sites) {
            double u = env.visit_weight(interner.site(id), beta);
            if (u == 0.0) {
                w = 0;
                break;
            }
            w *= std::pow(u, c);
        }
        s += w;
    }
    return s;
}

namespace {

struct CollectVisitor {
    const RealVec& h;
    double lambda;
    Point anchor;
    PathClass cls;
    SiteInterner& interner;
    int dims;
    std::vector<PathTerm>& out;

    // running state
    std::vector<Point> rel;          // relative vertices after time 0
    LocalTimeMap lt;                 // relative local times
    std::vector<double> coefs{1.0};  // tilt * (2D)^{-n} * e^{-lambda n}

    bool push(const Point& v, int) {
        Point step = rel.empty() ? v : v - rel.back();
        double f = std::exp(dot(h, step) - lambda) / (2.0 * dims);
        rel.push_back(v);
        ++lt[v];
        coefs.push_back(coefs.back() * f);
        return true;
    }
    void pop() {
        auto it = lt.find(rel.back());
        if (--(it->second) == 0) lt.erase(it);
        rel.pop_back();
        coefs.pop_back();
    }
    void at_node(const Point& x, int n, bool confined, bool irreducible) {
        if (n == 0) return;
        if (cls == PathClass::cone_confined ? !confined : !irreducible) return;
        PathTerm pt;
        pt.endpoint = x;
        pt.length = n;
        pt.term.coef = coefs.back();
        pt.term.sites.reserve(lt.size());
        for (auto& [site, c] : lt)
            pt.term.sites.emplace_back(interner.intern(anchor + site), c);
        std::sort(pt.term.sites.begin(), pt.term.sites.end());
        out.push_back(std::move(pt));
    }
};

}  // namespace

std::vector<PathTerm> collect_cone_paths(const ConeSpec& cone, const RealVec& h, double lambda,
                                         const Point& anchor, int n_max, PathClass cls,
                                         SiteInterner& interner) {
    std::vector<PathTerm> out;
    CollectVisitor vis{h, lambda, anchor, cls, interner, cone.dims, out, {}, {}, {1.0}};
    ConeWalker walker(cone, n_max, vis);
    walker.run();
    return out;
}

Poly select_poly(const std::vector<PathTerm>& paths, const Point& endpoint, int length) {
    Poly p;
    for (const PathTerm& pt : paths)
        if (pt.length == length && pt.endpoint == endpoint) p.terms.push_back(pt.term);
    return p;
}

Poly total_poly(const std::vector<PathTerm>& paths) {
    Poly p;
    p.terms.reserve(paths.size());
    for (const PathTerm& pt : paths) p.terms.push_back(pt.term);
    return p;
}

std::vector<Point> dependence_region(const Point& u, const Point& v, const ConeSpec& cone) {
    // D(u,v) is empty unless v - u lies in the cone; its points satisfy
    // |y - u| <= (v - u).h / (delta |h|) which bounds the scan box.
    std::vector<Point> out;
    Point d = v - u;
    if (!cone.contains(d)) return out;
    int R = static_cast<int>(std::ceil(dot(cone.h, d) / (cone.delta * cone.h_norm()))) + 1;
    Point cur;
    std::function<void(int)> scan = [&](int axis) {
        if (axis == cone.dims) {
            if (cone.contains(cur) && cone.contains(d - cur)) out.push_back(u + cur);
            return;
        }
        for (int c = -R; c <= R; ++c) {
            cur[axis] = c;
            scan(axis + 1);
        }
        cur[axis] = 0;
    };
    scan(0);
    return out;
}

}  // namespace polylab::disorder
