#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/polymer.hpp"

namespace polylab::exactenum {

using SliceMap = std::unordered_map<Point, double, PointHash>;
using LengthTables = std::vector<SliceMap>;  // indexed by length n = 0..n_max

// Quenched (fixed environment) or annealed (law) weighting of path energies.
struct Weighting {
    const Environment* env = nullptr;
    const PotentialLaw* law = nullptr;
    double beta = 0.0;

    bool annealed() const { return env == nullptr; }
    const PotentialLaw& the_law() const { return annealed() ? *law : env->law(); }

    static Weighting quenched(const Environment& e, double beta) { return {&e, nullptr, beta}; }
    static Weighting annealed_of(const PotentialLaw& l, double beta) { return {nullptr, &l, beta}; }
};

// Enumeration hard caps; overridable per call.
int default_cap(int dims);

enum class TableKind { full_q, cone_t, irreducible_f };

// Tables store raw weights; the e^{-lambda n} normalization is applied at read
// time so one enumeration serves many lambda candidates.
struct WeightTable {
    TableKind kind = TableKind::full_q;
    int dims = 2;
    RealVec h;        // zero for full_q tables (tilt applied via Q_of_h)
    double beta = 0;
    double delta = 0;  // 0 for full_q
    bool annealed = false;
    uint64_t env_seed = 0;
    Point anchor;      // shifted-environment anchor for quenched f tables
    double lambda = 0;
    LengthTables by_len;

    int n_max() const { return static_cast<int>(by_len.size()) - 1; }

    double at(const Point& x, int n) const {
        if (n < 0 || n > n_max()) return 0.0;
        auto it = by_len[static_cast<size_t>(n)].find(x);
        if (it == by_len[static_cast<size_t>(n)].end()) return 0.0;
        return it->second * std::exp(-lambda * n);
    }

    double mass(int n) const {
        if (n < 0 || n > n_max()) return 0.0;
        double s = 0;
        for (const auto& [x, w] : by_len[static_cast<size_t>(n)]) s += w;
        return s * std::exp(-lambda * n);
    }

    bool params_match(const WeightTable& o) const {
        return dims == o.dims && h == o.h && beta == o.beta && delta == o.delta &&
               annealed == o.annealed && (annealed || env_seed == o.env_seed) && lambda == o.lambda;
    }
};

// Full partition functions Q_n(x) for n <= n_max, by exhaustive traversal of
// all (2D)^n paths (quenched runs prune trapped subtrees). Tables are raw
// (h = 0); apply the tilt with Q_of_h.
WeightTable enumerate_Q(const Weighting& w, int dims, int n_max, int cap_override = -1);

// Q_n(h) = sum_x e^{h.x} Q_n(x)
double Q_of_h(const WeightTable& q, const RealVec& h, int n);

struct BasicTables {
    WeightTable t;  // cone-confined
    WeightTable f;  // irreducible
};

// Basic partition functions restricted to cone-confined / irreducible paths
// from `anchor` (quenched flavour reads the environment at absolute sites, so
// anchoring realizes the shifted-environment weights f^{theta_x omega}).
BasicTables enumerate_basic(const Weighting& w, const ConeSpec& cone, const RealVec& h, int n_max,
                            const Point& anchor = Point{}, double lambda = 0.0,
                            int cap_override = -1);

// Cone-confined tables by per-endpoint masked dynamic programming over the
// lens D(0,z) = Y cap (z - Y). Exact whenever the path energy factorizes over
// time steps: any quenched weighting, and annealed weightings with a linear
// one-site potential (beta = 0 or the deterministic law). Much larger horizons
// than the exhaustive enumeration.
LengthTables cone_dp_tables(const Weighting& w, const ConeSpec& cone, const RealVec& h, int n_max,
                            const Point& anchor = Point{}, double lambda = 0.0);

// Triangular inversion of the renewal convolution: recovers irreducible tables
// from cone-confined ones. Valid under the same factorization condition.
LengthTables irreducible_from_t(const LengthTables& t);

// Endpoint-moment sequences of the cone-confined tables:
//   rows[n][k] = sum_x t_{x,n} x^{alpha_k},
// with alpha_k running over the monomials 1, x_i, x_i x_j (i <= j). They carry
// everything needed for lambda, v and Sigma without storing x-resolved tables,
// so the horizon can be pushed far beyond what irreducible_from_t can afford.
struct MomentSeq {
    int dims = 2;
    std::vector<std::array<double, 21>> rows;  // count(dims) entries used

    static int count(int dims) { return 1 + dims + dims * (dims + 1) / 2; }
    static int idx_x(int i) { return 1 + i; }
    static int idx_xx(int dims, int i, int j) {  // requires i <= j
        return 1 + dims + i * dims - i * (i - 1) / 2 + (j - i);
    }
    int n_max() const { return static_cast<int>(rows.size()) - 1; }
};

// Same weighting restrictions as cone_dp_tables.
MomentSeq cone_dp_moment_sequences(const Weighting& w, const ConeSpec& cone, const RealVec& h,
                                   int n_max, const Point& anchor = Point{});

// Max_z | t_{z,n} - sum_{m<n} sum_x t_{x,m} f^{(x)}_{z-x,n-m} | with the
// convention t_{0,0} = 1. `f_at` supplies the irreducible table anchored at x;
// annealed flavours may ignore the anchor (translation invariance).
double verify_renewal(const WeightTable& t, const std::function<const WeightTable&(const Point&)>& f_at,
                      int n);

// Convenience: builds all tables (anchored f's on demand, cached) and returns
// residuals for n = 1..n_max.
std::vector<double> renewal_residuals(const Weighting& w, const ConeSpec& cone, const RealVec& h,
                                      int n_max, int cap_override = -1);

// CSV export: columns n, x1..xD, weight. Header line records kind and params.
std::string table_to_csv(const WeightTable& t);

}  // namespace polylab::exactenum
