#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/lattice.hpp"

namespace polylab {

// Step encoding: +(axis+1) / -(axis+1), e.g. +1 = +e1, -2 = -e2.
using Step = int8_t;

inline Point step_vector(Step s) {
    int axis = std::abs(static_cast<int>(s)) - 1;
    return unit_point(axis, s > 0 ? 1 : -1);
}

// Nearest-neighbour trajectory started at the origin.
struct PolymerPath {
    int dims = 2;
    std::vector<Step> steps;

    PolymerPath() = default;
    PolymerPath(int dims_, std::vector<Step> steps_);

    int length() const { return static_cast<int>(steps.size()); }

    Point endpoint() const;
    std::vector<Point> vertices() const;  // gamma_0 = 0 ... gamma_n

    // Path literal "+1,-2,+1"; empty string is the length-0 path.
    static PolymerPath parse(int dims, const std::string& literal);
    std::string literal() const;
};

// Visit counts. By default counts gamma_1..gamma_n (the convention used by the
// quenched energy); include_origin adds the visit at time 0.
using LocalTimeMap = std::unordered_map<Point, int, PointHash>;

LocalTimeMap local_times(const PolymerPath& path, bool include_origin = false);

// Positive cone { x . h >= delta |x| |h| }. delta must lie in (0, 1/sqrt(D)).
struct ConeSpec {
    int dims = 2;
    RealVec h;
    double delta = 0.0;

    ConeSpec() = default;
    ConeSpec(int dims_, RealVec h_, double delta_);

    static double default_delta(int dims) { return 0.5 / std::sqrt(static_cast<double>(dims)); }
    static ConeSpec on_axis(int dims, double h_mag, double delta = 0.0) {
        return ConeSpec(dims, RealVec::on_axis(h_mag), delta == 0.0 ? default_delta(dims) : delta);
    }

    bool contains(const Point& x) const {
        double xh = dot(h, x);
        return xh >= delta * norm2(x) * h_norm_;
    }

    double h_norm() const { return h_norm_; }

   private:
    double h_norm_ = 0.0;
};

inline bool in_cone(const Point& x, const ConeSpec& cone) { return cone.contains(x); }

// Every vertex lies in (gamma_0 + Y) and (gamma_n - Y).
bool is_cone_confined(const PolymerPath& path, const ConeSpec& cone);

// Interior indices k that split the path into two cone-confined halves:
// gamma_j in gamma_k - Y for j <= k and gamma_j in gamma_k + Y for j >= k.
std::vector<int> break_points(const PolymerPath& path, const ConeSpec& cone);

// Maximal decomposition into irreducible cone-confined pieces. Throws on a
// non-cone-confined input. Concatenating the pieces restores the path.
std::vector<PolymerPath> irreducible_split(const PolymerPath& path, const ConeSpec& cone);

// exp(h.X - beta sum_{i>=1} V(gamma_i)) (2D)^{-n}; exactly 0 when a trap is
// visited (beta > 0). A vertex outside the box is an error, not weight 0.
double quenched_weight(const PolymerPath& path, const Environment& env, const RealVec& h,
                       double beta);

// Phi_beta(gamma) = sum_x phi_beta(ell_gamma(x)) over gamma_1..gamma_n.
double interaction_phi(const PolymerPath& path, const PotentialLaw& law, double beta);

// exp(h.X - Phi_beta(gamma)) (2D)^{-n} = E quenched_weight.
double annealed_weight(const PolymerPath& path, const PotentialLaw& law, const RealVec& h,
                       double beta);

}  // namespace polylab
