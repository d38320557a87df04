#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/exactenum.hpp"
#include "polylab/lattice.hpp"

namespace polylab::transfer {

struct DpOptions {
    int window_radius = -1;       // -1: the exact reachable ball (radius n)
    bool fold_tilt = true;        // tilt folded into step weights
    bool log_space = false;       // evolve log-values with log-sum-exp
    int logspace_threshold = 64;  // auto-switch when n >= threshold
    int jobs = 1;                 // parallel environments in ensemble helpers
};

// Endpoint distribution Q_n(x) over a dense window. Values are either linear
// or logarithmic (log 0 == -inf), flagged by log_space.
struct EndpointSlice {
    int dims = 2;
    int n = 0;
    Box box;
    bool log_space = false;
    bool tilt_applied = false;
    RealVec h;
    double beta = 0;
    uint64_t env_seed = 0;
    std::vector<double> vals;
    double leaked_mass = 0;  // weight dropped at the window boundary

    double value_at(const Point& p) const;  // linear scale
    double total() const;                   // linear scale (stable LSE when log)
};

// Q_k^omega(x) = u(x) (2D)^{-1} sum_e e^{h.e} Q_{k-1}^omega(x - e), Q_0 = delta_0.
// Requires env.box_radius >= n (or an explicit window, with the leaked mass
// reported on the slice).
EndpointSlice dp_quenched(const Environment& env, const RealVec& h, double beta, int n,
                          const DpOptions& opt = {});

// Runs the same recursion once and hands every intermediate slice to the
// callback (slices share the window of the final n).
void dp_quenched_scan(const Environment& env, const RealVec& h, double beta, int n,
                      const DpOptions& opt, const std::function<void(const EndpointSlice&)>& sink);

// S(alpha) = sum_z Q(z) e^{i alpha . (z - n v)}
std::complex<double> char_sum(const EndpointSlice& slice, const RealVec& alpha, const RealVec& v);

struct McEstimate {
    double mean = 0;
    double stderr_ = 0;
    int n_env = 0;
    std::vector<double> per_env;  // ordered by seed index
};

// Monte Carlo estimate of Q_n(h) = E Q_n^omega(h) over i.i.d. environments
// seeded from `seed`. Deterministic in all arguments.
McEstimate mc_annealed(const PotentialLaw& law, int dims, const RealVec& h, double beta, int n,
                       int n_env, uint64_t seed, const DpOptions& opt = {});

struct RatioSeries {
    std::vector<int> ns;
    std::vector<double> w;        // W_n = Q_n^omega(h) / Q_n(h)
    std::vector<double> w_err;    // propagated denominator error (0 in exact mode)
    std::vector<uint8_t> zeroed;  // quenched numerator hit exactly 0
};

struct RatioOptions {
    int exact_upto = -1;  // annealed denominators by enumeration up to here (default: cap)
    int mc_envs = 64;     // beyond that, mc_annealed with this many environments
    uint64_t mc_seed = 1;
    DpOptions dp;
};

RatioSeries ratio_series(const Environment& env, const RealVec& h, double beta, int n_max,
                         const RatioOptions& opt = {});

}  // namespace polylab::transfer
