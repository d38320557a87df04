#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polylab/errors.hpp"
#include "polylab/lattice.hpp"
#include "polylab/rng.hpp"

namespace polylab {

inline constexpr double kTrap = std::numeric_limits<double>::infinity();

// One-site potential law. All mass lives on [0, +inf]; +inf encodes a trap.
// Conventions:
//   * beta = 0 switches the potential off entirely (phi == 0, unit visit
//     weights), so the beta -> 0 limit of the path measure is the free walk.
//   * For beta > 0 a trap visit costs weight exactly 0.
struct PotentialLaw {
    enum class Kind { deterministic, bernoulli_trap, two_point, exponential };

    Kind kind = Kind::deterministic;
    double v0 = 0.0;    // deterministic / two_point low value
    double v1 = 0.0;    // two_point high value
    double p = 0.0;     // bernoulli_trap p_inf, or two_point P(V = v1)
    double rate = 1.0;  // exponential rate

    static PotentialLaw deterministic(double v) {
        if (v < 0) throw ValidationError("deterministic law: v0 must be >= 0");
        PotentialLaw l;
        l.kind = Kind::deterministic;
        l.v0 = v;
        return l;
    }
    static PotentialLaw bernoulli_trap(double p_inf) {
        if (p_inf < 0 || p_inf >= 1) throw ValidationError("bernoulli_trap: need p_inf in [0,1)");
        PotentialLaw l;
        l.kind = Kind::bernoulli_trap;
        l.p = p_inf;
        return l;
    }
    static PotentialLaw two_point(double v0, double v1, double p) {
        if (v0 < 0 || v1 < 0) throw ValidationError("two_point: values must be >= 0");
        if (p < 0 || p > 1) throw ValidationError("two_point: need p in [0,1]");
        PotentialLaw l;
        l.kind = Kind::two_point;
        l.v0 = v0;
        l.v1 = v1;
        l.p = p;
        return l;
    }
    static PotentialLaw exponential(double rate) {
        if (rate <= 0) throw ValidationError("exponential: rate must be > 0");
        PotentialLaw l;
        l.kind = Kind::exponential;
        l.rate = rate;
        return l;
    }

    bool has_traps() const { return kind == Kind::bernoulli_trap && p > 0; }
    double trap_prob() const { return kind == Kind::bernoulli_trap ? p : 0.0; }

    // 0 in supp(V)?  two_point with v0 > 0 is allowed for experiments but gets
    // flagged in reports.
    bool is_normalized() const;

    // phi(ell) linear in the local time <=> site visits factorize exactly over
    // disjoint time stretches. True for the deterministic law (and trivially at
    // beta = 0, which is handled by the callers).
    bool linear_phi() const { return kind == Kind::deterministic; }

    // E exp(-beta * ell * V); the "visit moment". Equals exp(-phi_beta(ell)).
    double visit_moment(double beta, int64_t ell) const;

    // Draw one value from (seed, site).
    double sample_value(uint64_t seed, const Point& site) const;

    std::string spec_string() const;
    static PotentialLaw parse(const std::string& spec);
};

// phi_beta(ell) = -log E exp(-beta ell V), evaluated in closed form per law.
double phi_beta(const PotentialLaw& law, double beta, int64_t ell);

struct AttractivityReport {
    struct Violation {
        int ell;
        int m;
        double lhs;
        double rhs;
        std::string what;
    };
    std::vector<Violation> violations;
    int checked_up_to = 0;
    bool ok() const { return violations.empty(); }
};

// Checks 0 < phi(ell) <= phi(ell+m) <= phi(ell) + phi(m) on 1 <= ell, m <= L.
// Strict positivity is skipped at beta = 0.
AttractivityReport check_attractivity(const PotentialLaw& law, double beta, int L);

// A sampled realization of the potential on the box { |x|_inf <= box_radius }.
// Values regenerate bit-identically from (law, dims, box_radius, seed).
class Environment {
   public:
    Environment(PotentialLaw law, int dims, int box_radius, uint64_t seed,
                std::vector<double> values)
        : law_(law), dims_(dims), box_(dims, box_radius), seed_(seed), values_(std::move(values)) {
        if (values_.size() != box_.size()) throw ValidationError("Environment: value count mismatch");
    }

    int dims() const { return dims_; }
    int box_radius() const { return box_.radius; }
    uint64_t seed() const { return seed_; }
    const PotentialLaw& law() const { return law_; }
    const Box& box() const { return box_; }
    const std::vector<double>& values() const { return values_; }

    bool contains(const Point& p) const { return box_.contains(p); }

    double value(const Point& p) const {
        if (!box_.contains(p)) throw ValidationError("Environment: site outside box");
        return values_[box_.index(p)];
    }

    bool is_trap(const Point& p) const { return value(p) == kTrap; }

    // e^{-beta V(x)}, with the beta = 0 convention (== 1 everywhere).
    double visit_weight(const Point& p, double beta) const {
        if (beta == 0.0) return 1.0;
        double v = value(p);
        if (v == kTrap) return 0.0;
        return std::exp(-beta * v);
    }

    double trap_fraction() const;

    // Test hook: build an environment from explicit values.
    static Environment from_values(PotentialLaw law, int dims, int box_radius, uint64_t seed,
                                   std::vector<double> values) {
        return Environment(law, dims, box_radius, seed, std::move(values));
    }

   private:
    PotentialLaw law_;
    int dims_;
    Box box_;
    uint64_t seed_;
    std::vector<double> values_;
};

// i.i.d. field on the box; deterministic in all arguments. dims > 5 raises a
// capacity error, dims < 2 or radius < 1 a validation error.
Environment sample_environment(const PotentialLaw& law, int dims, int box_radius, uint64_t seed);

// POLYENV v1 text format. Round-trips bit-exactly.
std::string to_polyenv(const Environment& env);
Environment from_polyenv(const std::string& text);
void save_polyenv(const Environment& env, const std::string& path);
Environment load_polyenv(const std::string& path);

}  // namespace polylab
