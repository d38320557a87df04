#include "polylab/environment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace polylab {

bool PotentialLaw::is_normalized() const {
    switch (kind) {
        case Kind::deterministic: return v0 == 0.0;
        case Kind::bernoulli_trap: return true;  // P(V=0) = 1 - p_inf > 0
        case Kind::two_point: return v0 == 0.0 || (v1 == 0.0 && p > 0);
        case Kind::exponential: return true;  // density positive at 0
    }
    return false;
}

double PotentialLaw::visit_moment(double beta, int64_t ell) const {
    if (beta == 0.0 || ell == 0) return 1.0;
    double be = beta * static_cast<double>(ell);
    switch (kind) {
        case Kind::deterministic: return std::exp(-be * v0);
        case Kind::bernoulli_trap: return 1.0 - p;  // e^{-beta ell V} in {0,1}
        case Kind::two_point: return (1.0 - p) * std::exp(-be * v0) + p * std::exp(-be * v1);
        case Kind::exponential: return rate / (rate + be);
    }
    return 1.0;
}

double PotentialLaw::sample_value(uint64_t seed, const Point& site) const {
    switch (kind) {
        case Kind::deterministic: return v0;
        case Kind::bernoulli_trap: {
            if (p == 0.0) return 0.0;
            return site_u01(seed, site) < p ? kTrap : 0.0;
        }
        case Kind::two_point: return site_u01(seed, site) < p ? v1 : v0;
        case Kind::exponential: {
            double u = site_u01(seed, site);
            return -std::log1p(-u) / rate;
        }
    }
    return 0.0;
}

std::string PotentialLaw::spec_string() const {
    char buf[128];
    switch (kind) {
        case Kind::deterministic: std::snprintf(buf, sizeof buf, "det:v=%.17g", v0); break;
        case Kind::bernoulli_trap: std::snprintf(buf, sizeof buf, "bernoulli:p=%.17g", p); break;
        case Kind::two_point:
            std::snprintf(buf, sizeof buf, "twopoint:v0=%.17g,v1=%.17g,p=%.17g", v0, v1, p);
            break;
        case Kind::exponential: std::snprintf(buf, sizeof buf, "exp:rate=%.17g", rate); break;
    }
    return buf;
}

namespace {

// parses "k1=v1,k2=v2" into pairs
std::vector<std::pair<std::string, double>> parse_kv(const std::string& s) {
    std::vector<std::pair<std::string, double>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("law spec: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        try {
            size_t pos = 0;
            double d = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
            out.emplace_back(key, d);
        } catch (const std::exception&) {
            throw ValidationError("law spec: cannot parse number '" + val + "'");
        }
    }
    return out;
}

double take(std::vector<std::pair<std::string, double>>& kv, const std::string& key) {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
        if (it->first == key) {
            double v = it->second;
            kv.erase(it);
            return v;
        }
    }
    throw ValidationError("law spec: missing parameter '" + key + "'");
}

}  // namespace

PotentialLaw PotentialLaw::parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto kv = parse_kv(rest);
    PotentialLaw law;
    if (name == "det") {
        law = deterministic(take(kv, "v"));
    } else if (name == "bernoulli") {
        law = bernoulli_trap(take(kv, "p"));
    } else if (name == "twopoint") {
        double v0 = take(kv, "v0"), v1 = take(kv, "v1"), p = take(kv, "p");
        law = two_point(v0, v1, p);
    } else if (name == "exp") {
        law = exponential(take(kv, "rate"));
    } else {
        throw ValidationError("unknown law '" + name + "' (expected det|bernoulli|twopoint|exp)");
    }
    if (!kv.empty()) throw ValidationError("law spec: unexpected parameter '" + kv.front().first + "'");
    return law;
}

double phi_beta(const PotentialLaw& law, double beta, int64_t ell) {
    if (beta < 0) throw ValidationError("phi_beta: beta must be >= 0");
    if (ell < 1) throw ValidationError("phi_beta: ell must be >= 1");
    if (beta == 0.0) return 0.0;
    switch (law.kind) {
        case PotentialLaw::Kind::deterministic: return beta * static_cast<double>(ell) * law.v0;
        case PotentialLaw::Kind::bernoulli_trap: return -std::log1p(-law.p);
        case PotentialLaw::Kind::exponential:
            return std::log1p(beta * static_cast<double>(ell) / law.rate);
        case PotentialLaw::Kind::two_point: return -std::log(law.visit_moment(beta, ell));
    }
    return 0.0;
}

AttractivityReport check_attractivity(const PotentialLaw& law, double beta, int L) {
    if (L < 2) throw ValidationError("check_attractivity: L must be >= 2");
    AttractivityReport rep;
    rep.checked_up_to = L;
    const double tol = 1e-12;
    for (int ell = 1; ell <= L; ++ell) {
        double pl = phi_beta(law, beta, ell);
        if (beta > 0 && !(pl > 0)) rep.violations.push_back({ell, 0, pl, 0.0, "positivity"});
        for (int m = 1; m <= L; ++m) {
            double pm = phi_beta(law, beta, m);
            double plm = phi_beta(law, beta, ell + m);
            if (plm < pl - tol) rep.violations.push_back({ell, m, plm, pl, "monotonicity"});
            if (plm > pl + pm + tol) rep.violations.push_back({ell, m, plm, pl + pm, "subadditivity"});
        }
    }
    return rep;
}

Environment sample_environment(const PotentialLaw& law, int dims, int box_radius, uint64_t seed) {
    if (dims > kMaxDims) throw CapacityError("sample_environment: dims > 5 unsupported");
    if (dims < 2) throw ValidationError("sample_environment: dims must be >= 2");
    if (box_radius < 1) throw ValidationError("sample_environment: box_radius must be >= 1");
    Box box(dims, box_radius);
    std::vector<double> vals(box.size());
    for (size_t i = 0; i < vals.size(); ++i) vals[i] = law.sample_value(seed, box.point_at(i));
    return Environment(law, dims, box_radius, seed, std::move(vals));
}

double Environment::trap_fraction() const {
    size_t traps = 0;
    for (double v : values_)
        if (v == kTrap) ++traps;
    return static_cast<double>(traps) / static_cast<double>(values_.size());
}

std::string to_polyenv(const Environment& env) {
    std::string out;
    out.reserve(env.values().size() * 24 + 128);
    char buf[160];
    std::snprintf(buf, sizeof buf, "POLYENV v1 dims=%d radius=%d law=%s seed=%" PRIu64 "\n",
                  env.dims(), env.box_radius(), env.law().spec_string().c_str(), env.seed());
    out += buf;
    const Box& box = env.box();
    // point_at iterates coordinates lexicographically by construction
    for (size_t i = 0; i < box.size(); ++i) {
        Point p = box.point_at(i);
        char* q = buf;
        for (int d = 0; d < env.dims(); ++d)
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), "%d ", p[d]);
        double v = env.values()[i];
        if (v == kTrap)
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), "inf");
        else
            q += std::snprintf(q, sizeof buf - static_cast<size_t>(q - buf), "%.17g", v);
        *q++ = '\n';
        out.append(buf, static_cast<size_t>(q - buf));
    }
    return out;
}

Environment from_polyenv(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw ValidationError("POLYENV: empty input");
    int dims = 0, radius = 0;
    char lawbuf[96];
    uint64_t seed = 0;
    if (std::sscanf(header.c_str(), "POLYENV v1 dims=%d radius=%d law=%95s seed=%" SCNu64, &dims,
                    &radius, lawbuf, &seed) != 4)
        throw ValidationError("POLYENV: bad header '" + header + "'");
    PotentialLaw law = PotentialLaw::parse(lawbuf);
    Box box(dims, radius);
    std::vector<double> vals(box.size());
    std::string line;
    size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Point p;
        for (int d = 0; d < dims; ++d)
            if (!(ls >> p[d])) throw ValidationError("POLYENV: bad site line '" + line + "'");
        std::string tok;
        if (!(ls >> tok)) throw ValidationError("POLYENV: missing value in '" + line + "'");
        double v;
        if (tok == "inf")
            v = kTrap;
        else
            v = std::stod(tok);
        if (!box.contains(p)) throw ValidationError("POLYENV: site outside declared box");
        vals[box.index(p)] = v;
        ++count;
    }
    if (count != box.size()) throw ValidationError("POLYENV: wrong number of sites");
    return Environment(law, dims, radius, seed, std::move(vals));
}

void save_polyenv(const Environment& env, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << to_polyenv(env);
}

Environment load_polyenv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_polyenv(ss.str());
}

}  // namespace polylab
