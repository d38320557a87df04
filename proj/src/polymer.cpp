#include "polylab/polymer.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace polylab {

PolymerPath::PolymerPath(int dims_, std::vector<Step> steps_) : dims(dims_), steps(std::move(steps_)) {
    if (dims < 1 || dims > kMaxDims) throw ValidationError("PolymerPath: dims out of range");
    for (Step s : steps) {
        int axis = std::abs(static_cast<int>(s)) - 1;
        if (s == 0 || axis >= dims) throw ValidationError("PolymerPath: bad step encoding");
    }
}

Point PolymerPath::endpoint() const {
    Point p;
    for (Step s : steps) p = p + step_vector(s);
    return p;
}

std::vector<Point> PolymerPath::vertices() const {
    std::vector<Point> vs;
    vs.reserve(steps.size() + 1);
    Point p;
    vs.push_back(p);
    for (Step s : steps) {
        p = p + step_vector(s);
        vs.push_back(p);
    }
    return vs;
}

PolymerPath PolymerPath::parse(int dims, const std::string& literal) {
    std::vector<Step> steps;
    std::stringstream ss(literal);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int sign = 0;
        size_t i = 0;
        if (tok[0] == '+') sign = 1, i = 1;
        else if (tok[0] == '-') sign = -1, i = 1;
        else throw ValidationError("path literal: step must start with + or -: '" + tok + "'");
        int axis = std::atoi(tok.c_str() + i);
        if (axis < 1 || axis > dims)
            throw ValidationError("path literal: axis out of range in '" + tok + "'");
        steps.push_back(static_cast<Step>(sign * axis));
    }
    return PolymerPath(dims, std::move(steps));
}

std::string PolymerPath::literal() const {
    std::string s;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (i) s += ',';
        s += steps[i] > 0 ? '+' : '-';
        s += std::to_string(std::abs(static_cast<int>(steps[i])));
    }
    return s;
}

LocalTimeMap local_times(const PolymerPath& path, bool include_origin) {
    LocalTimeMap lt;
    Point p;
    if (include_origin) lt[p] = 1;
    for (Step s : path.steps) {
        p = p + step_vector(s);
        ++lt[p];
    }
    return lt;
}

ConeSpec::ConeSpec(int dims_, RealVec h_, double delta_) : dims(dims_), h(h_), delta(delta_) {
    if (dims < 1 || dims > kMaxDims) throw ValidationError("ConeSpec: dims out of range");
    h_norm_ = norm2(h);
    if (h_norm_ == 0.0) throw ValidationError("ConeSpec: h must be non-zero");
    double dmax = 1.0 / std::sqrt(static_cast<double>(dims));
    if (!(delta > 0.0 && delta < dmax))
        throw ValidationError("ConeSpec: delta must lie in (0, 1/sqrt(D))");
    // delta < 1/sqrt(D) guarantees a lattice direction inside the cone; verify anyway.
    bool has_dir = false;
    for (int i = 0; i < dims && !has_dir; ++i)
        for (int sign : {+1, -1})
            if (contains(unit_point(i, sign))) {
                has_dir = true;
                break;
            }
    if (!has_dir) throw ValidationError("ConeSpec: cone contains no lattice direction");
}

bool is_cone_confined(const PolymerPath& path, const ConeSpec& cone) {
    auto vs = path.vertices();
    const Point& last = vs.back();
    for (const Point& v : vs) {
        if (!cone.contains(v)) return false;         // v - gamma_0
        if (!cone.contains(last - v)) return false;  // gamma_n - v
    }
    return true;
}

std::vector<int> break_points(const PolymerPath& path, const ConeSpec& cone) {
    auto vs = path.vertices();
    int n = path.length();
    std::vector<int> bps;
    for (int k = 1; k < n; ++k) {
        bool ok = true;
        for (int j = 0; j < k && ok; ++j)
            if (!cone.contains(vs[k] - vs[j])) ok = false;
        for (int j = k + 1; j <= n && ok; ++j)
            if (!cone.contains(vs[j] - vs[k])) ok = false;
        if (ok) bps.push_back(k);
    }
    return bps;
}

std::vector<PolymerPath> irreducible_split(const PolymerPath& path, const ConeSpec& cone) {
    if (!is_cone_confined(path, cone))
        throw ValidationError("irreducible_split: path is not cone-confined");
    std::vector<int> bps = break_points(path, cone);
    std::vector<PolymerPath> pieces;
    int prev = 0;
    auto cut = [&](int to) {
        pieces.emplace_back(path.dims,
                            std::vector<Step>(path.steps.begin() + prev, path.steps.begin() + to));
        prev = to;
    };
    for (int k : bps) cut(k);
    cut(path.length());
    return pieces;
}

double quenched_weight(const PolymerPath& path, const Environment& env, const RealVec& h,
                       double beta) {
    if (path.dims != env.dims()) throw ValidationError("quenched_weight: dims mismatch");
    Point p;
    double energy = 0.0;
    bool trapped = false;
    for (Step s : path.steps) {
        p = p + step_vector(s);
        if (!env.contains(p)) throw ValidationError("quenched_weight: path exits the box");
        if (beta > 0) {
            double v = env.value(p);
            if (v == kTrap) trapped = true;
            else energy += v;
        }
    }
    if (trapped) return 0.0;
    double logw = dot(h, p) - beta * energy -
                  static_cast<double>(path.length()) * std::log(2.0 * path.dims);
    return std::exp(logw);
}

double interaction_phi(const PolymerPath& path, const PotentialLaw& law, double beta) {
    if (beta == 0.0) return 0.0;
    double phi = 0.0;
    for (const auto& [site, ell] : local_times(path)) phi += phi_beta(law, beta, ell);
    return phi;
}

double annealed_weight(const PolymerPath& path, const PotentialLaw& law, const RealVec& h,
                       double beta) {
    double logw = dot(h, path.endpoint()) - interaction_phi(path, law, beta) -
                  static_cast<double>(path.length()) * std::log(2.0 * path.dims);
    return std::exp(logw);
}

}  // namespace polylab
