#include "polylab/exactenum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "polylab/walker.hpp"

namespace polylab::exactenum {

int default_cap(int dims) {
    if (dims <= 2) return 10;
    if (dims == 3) return 7;
    return 6;
}

namespace {

void check_cap(int dims, int n_max, int cap_override) {
    int cap = cap_override > 0 ? cap_override : default_cap(dims);
    if (n_max > cap)
        throw CapacityError("enumeration length " + std::to_string(n_max) + " exceeds cap " +
                            std::to_string(cap) + " in D=" + std::to_string(dims));
}

// Per-direction step factor e^{h.e} / (2D); directions indexed axis*2 + (sign<0).
std::array<double, 2 * kMaxDims> step_factors(int dims, const RealVec& h) {
    std::array<double, 2 * kMaxDims> f{};
    for (int a = 0; a < dims; ++a) {
        f[static_cast<size_t>(2 * a)] = std::exp(h[a]) / (2.0 * dims);
        f[static_cast<size_t>(2 * a + 1)] = std::exp(-h[a]) / (2.0 * dims);
    }
    return f;
}

size_t dir_index(const Point& step) {
    for (int a = 0; a < kMaxDims; ++a) {
        if (step[a] == 1) return static_cast<size_t>(2 * a);
        if (step[a] == -1) return static_cast<size_t>(2 * a + 1);
    }
    return 0;
}

// Cache of visit moments m(c) = E e^{-beta c V} for the annealed weighting.
struct MomentCache {
    const PotentialLaw* law;
    double beta;
    std::vector<double> m{1.0};

    double operator()(int c) {
        while (static_cast<int>(m.size()) <= c)
            m.push_back(law->visit_moment(beta, static_cast<int64_t>(m.size())));
        return m[static_cast<size_t>(c)];
    }
};

// Shared incremental path-weight state for both walkers.
struct WeightState {
    const Weighting* w;
    Point anchor;
    std::array<double, 2 * kMaxDims> tilt;
    MomentCache moments;
    LocalTimeMap lt;           // annealed local times (relative sites)
    std::vector<double> wstack{1.0};
    std::vector<Point> trail;  // relative vertices, for pop bookkeeping

    WeightState(const Weighting* w_, const Point& anchor_, const RealVec& h, int dims)
        : w(w_), anchor(anchor_), tilt(step_factors(dims, h)), moments{&w_->the_law(), w_->beta} {}

    // Returns false when the subtree carries weight exactly 0 (trap).
    bool push(const Point& rel) {
        Point step = trail.empty() ? rel : rel - trail.back();
        double factor = tilt[dir_index(step)];
        if (w->annealed()) {
            if (w->beta > 0) {
                int c = 0;
                auto it = lt.find(rel);
                if (it != lt.end()) c = it->second;
                factor *= moments(c + 1) / moments(c);
                lt[rel] = c + 1;
            }
        } else {
            double u = w->env->visit_weight(anchor + rel, w->beta);
            if (u == 0.0) return false;
            factor *= u;
        }
        trail.push_back(rel);
        wstack.push_back(wstack.back() * factor);
        return true;
    }

    void pop() {
        if (w->annealed() && w->beta > 0) {
            auto it = lt.find(trail.back());
            if (--(it->second) == 0) lt.erase(it);
        }
        trail.pop_back();
        wstack.pop_back();
    }

    double weight() const { return wstack.back(); }
};

struct BasicVisitor {
    WeightState ws;
    LengthTables t, f;

    BasicVisitor(const Weighting* w, const Point& anchor, const RealVec& h, int dims, int n_max)
        : ws(w, anchor, h, dims),
          t(static_cast<size_t>(n_max) + 1),
          f(static_cast<size_t>(n_max) + 1) {}

    bool push(const Point& rel, int) { return ws.push(rel); }
    void pop() { ws.pop(); }

    void at_node(const Point& x, int n, bool confined, bool irreducible) {
        if (!confined) return;
        double w = ws.weight();
        t[static_cast<size_t>(n)][x] += w;
        if (irreducible) f[static_cast<size_t>(n)][x] += w;
    }
};

struct FullVisitor {
    WeightState ws;
    LengthTables q;

    FullVisitor(const Weighting* w, int dims, int n_max)
        : ws(w, Point{}, RealVec{}, dims), q(static_cast<size_t>(n_max) + 1) {}

    bool push(const Point& rel, int) { return ws.push(rel); }
    void pop() { ws.pop(); }
    void at_node(const Point& x, int n) { q[static_cast<size_t>(n)][x] += ws.weight(); }
};

void fill_meta(WeightTable& tab, const Weighting& w, int dims, const RealVec& h, double delta,
               const Point& anchor, double lambda) {
    tab.dims = dims;
    tab.h = h;
    tab.beta = w.beta;
    tab.delta = delta;
    tab.annealed = w.annealed();
    tab.env_seed = w.annealed() ? 0 : w.env->seed();
    tab.anchor = anchor;
    tab.lambda = lambda;
}

void check_box(const Weighting& w, const Point& anchor, int n_max) {
    if (w.annealed()) return;
    if (w.env->box_radius() < l1_norm(anchor) + n_max)
        throw ValidationError("enumeration needs box radius >= " +
                              std::to_string(l1_norm(anchor) + n_max));
}

}  // namespace

WeightTable enumerate_Q(const Weighting& w, int dims, int n_max, int cap_override) {
    check_cap(dims, n_max, cap_override);
    check_box(w, Point{}, n_max);
    FullVisitor vis(&w, dims, n_max);
    FullWalker walker(dims, n_max, vis);
    walker.run();
    WeightTable tab;
    tab.kind = TableKind::full_q;
    fill_meta(tab, w, dims, RealVec{}, 0.0, Point{}, 0.0);
    tab.by_len = std::move(vis.q);
    return tab;
}

double Q_of_h(const WeightTable& q, const RealVec& h, int n) {
    if (n < 0 || n > q.n_max()) return 0.0;
    double s = 0;
    for (const auto& [x, w] : q.by_len[static_cast<size_t>(n)]) s += std::exp(dot(h, x)) * w;
    return s;
}

BasicTables enumerate_basic(const Weighting& w, const ConeSpec& cone, const RealVec& h, int n_max,
                            const Point& anchor, double lambda, int cap_override) {
    check_cap(cone.dims, n_max, cap_override);
    check_box(w, anchor, n_max);
    BasicVisitor vis(&w, anchor, h, cone.dims, n_max);
    ConeWalker walker(cone, n_max, vis);
    walker.run();
    BasicTables out;
    out.t.kind = TableKind::cone_t;
    out.f.kind = TableKind::irreducible_f;
    fill_meta(out.t, w, cone.dims, h, cone.delta, anchor, lambda);
    fill_meta(out.f, w, cone.dims, h, cone.delta, anchor, lambda);
    out.t.by_len = std::move(vis.t);
    out.f.by_len = std::move(vis.f);
    return out;
}

namespace {

// Sites of D(0,z) a length <= n_max path from 0 to z can visit:
// y in Y, z - y in Y and |y|_1 + |z-y|_1 <= n_max.
void collect_region(const ConeSpec& cone, const Point& z, int n_max, int axis, Point& cur,
                    int budget, std::vector<Point>& out) {
    if (axis == cone.dims) {
        if (l1_norm(cur) + l1_norm(z - cur) <= n_max && cone.contains(cur) &&
            cone.contains(z - cur))
            out.push_back(cur);
        return;
    }
    for (int c = -budget; c <= budget; ++c) {
        cur[axis] = c;
        collect_region(cone, z, n_max, axis + 1, cur, budget - std::abs(c), out);
    }
    cur[axis] = 0;
}

void check_linear_weighting(const Weighting& w) {
    if (w.annealed() && w.beta > 0 && !w.the_law().linear_phi())
        throw ValidationError(
            "cone DP: annealed flavour requires a linear one-site potential "
            "(beta = 0 or the deterministic law)");
}

// Masked DP over D(0,z) for one endpoint; emits t_{z,k} for every feasible k.
template <class Emit>
void endpoint_dp(const Weighting& w, const ConeSpec& cone,
                 const std::array<double, 2 * kMaxDims>& tilt, double lin_u, int n_max,
                 const Point& anchor, const Point& z, std::vector<double>& a,
                 std::vector<double>& b, Emit&& emit) {
    const int dims = cone.dims;
    std::vector<Point> region;
    Point cur;
    collect_region(cone, z, n_max, 0, cur, n_max, region);
    std::sort(region.begin(), region.end());
    std::unordered_map<Point, int, PointHash> idx;
    idx.reserve(region.size() * 2);
    for (size_t i = 0; i < region.size(); ++i) idx[region[i]] = static_cast<int>(i);

    std::vector<int> from(region.size() * static_cast<size_t>(2 * dims), -1);
    std::vector<double> site_u(region.size(), 1.0);
    std::vector<int> reach(region.size()), coreach(region.size());
    for (size_t i = 0; i < region.size(); ++i) {
        for (int axis = 0; axis < dims; ++axis) {
            for (int sign : {+1, -1}) {
                Point src = region[i] - unit_point(axis, sign);
                auto it = idx.find(src);
                size_t d = static_cast<size_t>(2 * axis + (sign < 0 ? 1 : 0));
                if (it != idx.end()) from[i * static_cast<size_t>(2 * dims) + d] = it->second;
            }
        }
        site_u[i] = w.annealed() ? lin_u : w.env->visit_weight(anchor + region[i], w.beta);
        reach[i] = l1_norm(region[i]);
        coreach[i] = l1_norm(z - region[i]);
    }

    auto it0 = idx.find(Point{});
    auto itz = idx.find(z);
    if (it0 == idx.end() || itz == idx.end()) return;
    int zi = itz->second;

    a.assign(region.size(), 0.0);
    b.assign(region.size(), 0.0);
    a[static_cast<size_t>(it0->second)] = 1.0;
    int zmin = l1_norm(z);
    for (int k = 1; k <= n_max; ++k) {
        for (size_t i = 0; i < region.size(); ++i) {
            // only sites reachable at time k that can still make it to z matter
            if (reach[i] > k || ((k - reach[i]) & 1) || coreach[i] > n_max - k) {
                b[i] = 0.0;
                continue;
            }
            double s = 0;
            const int* fr = &from[i * static_cast<size_t>(2 * dims)];
            for (int d = 0; d < 2 * dims; ++d)
                if (fr[d] >= 0) s += tilt[static_cast<size_t>(d)] * a[static_cast<size_t>(fr[d])];
            b[i] = s * site_u[i];
        }
        std::swap(a, b);
        if (k >= zmin && (k - zmin) % 2 == 0) {
            double v = a[static_cast<size_t>(zi)];
            if (v != 0.0) emit(k, v);
        }
    }
}

std::vector<Point> cone_endpoints(const ConeSpec& cone, int n_max) {
    std::vector<Point> endpoints;
    Point cur;
    std::function<void(int, int)> scan = [&](int axis, int budget) {
        if (axis == cone.dims) {
            if (cur != Point{} && cone.contains(cur)) endpoints.push_back(cur);
            return;
        }
        for (int v = -budget; v <= budget; ++v) {
            cur[axis] = v;
            scan(axis + 1, budget - std::abs(v));
        }
        cur[axis] = 0;
    };
    scan(0, n_max);
    return endpoints;
}

}  // namespace

LengthTables cone_dp_tables(const Weighting& w, const ConeSpec& cone, const RealVec& h, int n_max,
                            const Point& anchor, double lambda) {
    check_linear_weighting(w);
    check_box(w, anchor, n_max);
    auto tilt = step_factors(cone.dims, h);
    double lin_u = (w.annealed() && w.beta > 0) ? w.the_law().visit_moment(w.beta, 1) : 1.0;

    LengthTables t(static_cast<size_t>(n_max) + 1);
    t[0][Point{}] = 1.0;
    std::vector<double> a, b;
    for (const Point& z : cone_endpoints(cone, n_max)) {
        endpoint_dp(w, cone, tilt, lin_u, n_max, anchor, z, a, b,
                    [&](int k, double v) { t[static_cast<size_t>(k)][z] = v; });
    }
    if (lambda != 0.0)
        for (int n = 0; n <= n_max; ++n)
            for (auto& [x, v] : t[static_cast<size_t>(n)]) v *= std::exp(-lambda * n);
    return t;
}

MomentSeq cone_dp_moment_sequences(const Weighting& w, const ConeSpec& cone, const RealVec& h,
                                   int n_max, const Point& anchor) {
    check_linear_weighting(w);
    check_box(w, anchor, n_max);
    const int dims = cone.dims;
    auto tilt = step_factors(dims, h);
    double lin_u = (w.annealed() && w.beta > 0) ? w.the_law().visit_moment(w.beta, 1) : 1.0;

    // Annealed weights and the cone are mirror-symmetric across any axis with
    // h = 0 there; fold one such axis to halve the endpoint set.
    int mirror_axis = -1;
    if (w.annealed()) {
        for (int i = 0; i < dims; ++i)
            if (h[i] == 0.0) {
                mirror_axis = i;
                break;
            }
    }

    MomentSeq seq;
    seq.dims = dims;
    seq.rows.assign(static_cast<size_t>(n_max) + 1, {});
    seq.rows[0][0] = 1.0;

    const int nm = MomentSeq::count(dims);
    std::array<double, 21> mono{};
    std::array<int, 21> deg_a{};  // degree of the mirror axis in each monomial
    std::vector<double> a, b;
    for (const Point& z : cone_endpoints(cone, n_max)) {
        if (mirror_axis >= 0 && z[mirror_axis] < 0) continue;
        double fold = (mirror_axis >= 0 && z[mirror_axis] > 0) ? 2.0 : 1.0;
        mono[0] = 1.0;
        deg_a[0] = 0;
        for (int i = 0; i < dims; ++i) {
            mono[static_cast<size_t>(MomentSeq::idx_x(i))] = z[i];
            deg_a[static_cast<size_t>(MomentSeq::idx_x(i))] = i == mirror_axis ? 1 : 0;
        }
        for (int i = 0; i < dims; ++i)
            for (int j = i; j < dims; ++j) {
                int id = MomentSeq::idx_xx(dims, i, j);
                mono[static_cast<size_t>(id)] = static_cast<double>(z[i]) * z[j];
                deg_a[static_cast<size_t>(id)] =
                    (i == mirror_axis ? 1 : 0) + (j == mirror_axis ? 1 : 0);
            }
        endpoint_dp(w, cone, tilt, lin_u, n_max, anchor, z, a, b, [&](int k, double v) {
            auto& row = seq.rows[static_cast<size_t>(k)];
            for (int m = 0; m < nm; ++m) {
                // odd mirror moments cancel against the reflected endpoint
                double fm = fold == 2.0 ? (deg_a[static_cast<size_t>(m)] & 1 ? 0.0 : 2.0) : 1.0;
                row[static_cast<size_t>(m)] += fm * v * mono[static_cast<size_t>(m)];
            }
        });
    }
    return seq;
}

LengthTables irreducible_from_t(const LengthTables& t) {
    int n_max = static_cast<int>(t.size()) - 1;
    LengthTables f(t.size());
    for (int n = 1; n <= n_max; ++n) {
        SliceMap acc = t[static_cast<size_t>(n)];
        for (int m = 1; m < n; ++m) {
            for (const auto& [x, tw] : t[static_cast<size_t>(m)]) {
                for (const auto& [y, fw] : f[static_cast<size_t>(n - m)]) acc[x + y] -= tw * fw;
            }
        }
        for (auto& [x, v] : acc) {
            if (std::abs(v) < 1e-300) v = 0.0;
            f[static_cast<size_t>(n)][x] = v;
        }
        std::erase_if(f[static_cast<size_t>(n)], [](const auto& kv) { return kv.second == 0.0; });
    }
    return f;
}

double verify_renewal(const WeightTable& t,
                      const std::function<const WeightTable&(const Point&)>& f_at, int n) {
    if (n < 1 || n > t.n_max()) throw ValidationError("verify_renewal: n out of table range");
    SliceMap conv;
    for (int m = 0; m < n; ++m) {
        for (const auto& [x, rawtw] : t.by_len[static_cast<size_t>(m)]) {
            double tw = rawtw * std::exp(-t.lambda * m);
            if (tw == 0.0) continue;
            const WeightTable& fx = f_at(x);
            if (!t.params_match(fx))
                throw ValidationError("verify_renewal: mismatched table parameters");
            for (const auto& [y, rawfw] : fx.by_len[static_cast<size_t>(n - m)])
                conv[x + y] += tw * rawfw * std::exp(-fx.lambda * (n - m));
        }
    }
    double resid = 0;
    for (const auto& [z, cv] : conv) resid = std::max(resid, std::abs(t.at(z, n) - cv));
    for (const auto& [z, _] : t.by_len[static_cast<size_t>(n)])
        if (!conv.count(z)) resid = std::max(resid, std::abs(t.at(z, n)));
    return resid;
}

std::vector<double> renewal_residuals(const Weighting& w, const ConeSpec& cone, const RealVec& h,
                                      int n_max, int cap_override) {
    BasicTables base = enumerate_basic(w, cone, h, n_max, Point{}, 0.0, cap_override);
    std::unordered_map<Point, WeightTable, PointHash> cache;
    cache.emplace(Point{}, base.f);
    auto f_at = [&](const Point& x) -> const WeightTable& {
        auto it = cache.find(x);
        if (it == cache.end()) {
            it = cache
                     .emplace(x, enumerate_basic(w, cone, h, n_max - l1_norm(x), x, 0.0,
                                                 cap_override)
                                     .f)
                     .first;
            // pad so by_len has full range
            it->second.by_len.resize(static_cast<size_t>(n_max) + 1);
        }
        return it->second;
    };
    std::vector<double> res;
    for (int n = 1; n <= n_max; ++n) res.push_back(verify_renewal(base.t, f_at, n));
    return res;
}

std::string table_to_csv(const WeightTable& t) {
    std::string out;
    char buf[256];
    const char* kind = t.kind == TableKind::full_q ? "full_q"
                       : t.kind == TableKind::cone_t ? "cone_t"
                                                     : "irreducible_f";
    std::snprintf(buf, sizeof buf,
                  "# kind=%s dims=%d beta=%.17g delta=%.17g flavor=%s lambda=%.17g\n", kind, t.dims,
                  t.beta, t.delta, t.annealed ? "annealed" : "quenched", t.lambda);
    out += buf;
    out += "n";
    for (int d = 0; d < t.dims; ++d) out += ",x" + std::to_string(d + 1);
    out += ",weight\n";
    for (int n = 0; n <= t.n_max(); ++n) {
        std::vector<std::pair<Point, double>> rows(t.by_len[static_cast<size_t>(n)].begin(),
                                                   t.by_len[static_cast<size_t>(n)].end());
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [x, w] : rows) {
            char* q = buf;
            q += std::snprintf(q, sizeof buf, "%d", n);
            for (int d = 0; d < t.dims; ++d)
                q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%d", x[d]);
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), ",%.17g\n",
                               w * std::exp(-t.lambda * n));
            out.append(buf, static_cast<size_t>(q - buf));
        }
    }
    return out;
}

}  // namespace polylab::exactenum
