#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "polylab/disorder.hpp"
#include "polylab/renewal.hpp"
#include "polylab/transfer.hpp"

namespace polylab::harness {

// Half-space sigma-algebra at level m: sites with x.e1 <= floor(m |v|).
// The hyperplane heights m|v| are continuum quantities; the floor fixes the
// lattice convention once and for all.
struct HalfSpaceAlgebra {
    int level = 0;
    double v_norm = 0;
    int threshold = 0;

    HalfSpaceAlgebra() = default;
    HalfSpaceAlgebra(int level_, double v_norm_)
        : level(level_),
          v_norm(v_norm_),
          threshold(static_cast<int>(std::floor(level_ * v_norm_))) {}

    bool contains(const Point& p) const { return p[0] <= threshold; }
};

struct SeriesResult {
    std::string experiment;
    std::vector<int> ns;
    std::vector<double> values;
    std::vector<double> errors;   // 0 when exact
    std::vector<double> companion;  // op-specific second series
    uint64_t seed = 0;
};

// Sinai partial sums s_n = 1 + sum_{l<=n} sum_x t_{x,l} (f^{(x)} - fbar), with
// the cone-confined quenched tables from masked DP, anchored irreducible sums
// from enumeration up to f_horizon, and everything e^{-lambda n}-shifted with
// the model's lambda. Companion series: kappa0 * t_n.
SeriesResult s_series(const Environment& env, const ConeSpec& cone, const RealVec& h, double beta,
                      const renewal::RenewalModel& model, int n_max, int f_horizon);

enum class CondMode { exact, monte_carlo };

struct CondExpectation {
    double value = 0;
    double stderr_ = 0;  // 0 in exact mode
    bool fully_measurable = false;    // dependence region inside the algebra
    bool fully_independent = false;   // dependence region disjoint from it
};

// E(f^{(x)}_{y,m} | A) evaluated at the frozen half-space of `env`. Exact mode
// averages the free sites in closed form; MC mode resamples them.
CondExpectation cond_expect_f(const Point& anchor, const Point& y, int m,
                              const HalfSpaceAlgebra& algebra, const Environment& env,
                              const ConeSpec& cone, const RealVec& h, double beta, double lambda,
                              CondMode mode = CondMode::exact, int mc_samples = 256,
                              uint64_t mc_seed = 1);

struct MixingaleProfile {
    int ell = 0;
    std::vector<int> ks;
    std::vector<double> past;    // E[(E(Z_l | A_{l-k}))^2]
    std::vector<double> future;  // E[(Z_l - E(Z_l | A_{l+k}))^2]
    double var_z = 0;            // E[Z_l^2]
    double decay_exponent = 0;   // fit of log past against log(1+k)
    double tower_residual = 0;   // |E[E(Z|A)] - E[Z]| at the widest k
};

// Exact conditional second moments of the centered statistic
// Z_l = sum_x t_{x,l} (f^{(x)} - fbar) - E[.], per filtration distance k.
MixingaleProfile mixingale_profile(const PotentialLaw& law, const ConeSpec& cone, const RealVec& h,
                                   double beta, double lambda, int ell, int f_horizon,
                                   const std::vector<int>& ks, double v_norm);

// Monte Carlo counterpart over an environment ensemble (outer expectation
// estimated, inner conditioning exact).
MixingaleProfile mixingale_profile_mc(const PotentialLaw& law, const ConeSpec& cone,
                                      const RealVec& h, double beta, double lambda, int ell,
                                      int f_horizon, const std::vector<int>& ks, double v_norm,
                                      int dims, int n_env, uint64_t seed);

struct EnsembleSpec {
    PotentialLaw law;
    int dims = 2;
    int n_env = 32;
    uint64_t seed = 1;
    int jobs = 1;
};

struct CltStat {
    RealVec alpha;
    double gauss = 0;                   // exp(-alpha.Sigma alpha / 2)
    std::vector<double> deviations;     // per environment, |ratio - gauss|
    double median = 0;
    double iqr_lo = 0, iqr_hi = 0;
};

struct QuenchedCltResult {
    int n = 0;
    std::vector<CltStat> stats;
    int zero_mass_envs = 0;
};

// Ratios S_n(alpha/sqrt n)/S_n(0) from unrestricted DP slices, against the
// model Gaussian; median and IQR across the ensemble.
QuenchedCltResult quenched_clt(const EnsembleSpec& ens, const RealVec& h, double beta,
                               const renewal::RenewalModel& model,
                               const std::vector<RealVec>& alphas, int n,
                               const transfer::DpOptions& dp = {});

struct LlnResult {
    int n = 0;
    double eps = 0;
    std::vector<double> tails;  // per environment
    double median = 0;
};

// Q_{n,h}(|X/n - v| > eps) per environment.
LlnResult empirical_lln(const EnsembleSpec& ens, const RealVec& h, double beta, const RealVec& v,
                        int n, double eps, const transfer::DpOptions& dp = {});

}  // namespace polylab::harness
