#pragma once

#include <complex>
#include <string>
#include <vector>

#include "polylab/exactenum.hpp"
#include "polylab/lattice.hpp"

namespace polylab::renewal {

using exactenum::LengthTables;
using exactenum::SliceMap;

struct LambdaSolution {
    double lambda = 0;
    double nu_hat = 0;       // fitted tail rate of the shifted masses
    double trunc_bound = 0;  // exp(-nu_hat * N)
    double residual = 0;     // |G(lambda) - 1|
};

// Root of G(lambda) = sum_{n<=N, x} e^{-lambda n} F_{x,n} = 1. Bisection down
// to 1e-6 then Newton to |G - 1| <= 1e-12. Bracket [0, max_n (1/n) log S_n + 1];
// throws NumericalError when the bracket carries no sign change. Inputs that
// are already normalized up to truncation (G(0) within 1e-9 below 1) are
// accepted and give a root at most marginally below zero.
LambdaSolution solve_lambda(const LengthTables& raw_f, int N);
LambdaSolution solve_lambda_masses(const std::vector<double>& raw_mass, int N);

// Normalized irreducible step law {f_{x,n}} with its provenance.
struct IrreducibleLaw {
    int dims = 2;
    double lambda = 0;
    int horizon = 0;
    double nu_hat = 0;
    double trunc_bound = 0;
    LengthTables f;  // f[n], n in 1..horizon, already e^{-lambda n}-shifted
    std::string provenance;

    double mass(int n) const;
    double total_mass() const;
    double mean_len() const;  // kappa(0)
};

IrreducibleLaw make_irreducible_law(const LengthTables& raw_f, int N, int dims,
                                    std::string provenance);

// mu(z): root of sum f_{x,n} e^{z.x - mu n} = 1, mu(0) = 0 exactly.
// Throws NumericalError when z lies outside the safe domain of the truncated law.
double mu_of_z(const IrreducibleLaw& law, const RealVec& z);

// Same root equation on the imaginary axis, z = i alpha.
std::complex<double> mu_of_imag(const IrreducibleLaw& law, const RealVec& alpha);

struct Derivatives {
    RealVec v;
    SymMat sigma;
    double kappa0 = 0;
    bool sigma_positive_definite = false;
    std::vector<double> sigma_eigenvalues;
};

// v = grad mu(0) = E[x]/E[n], Sigma = Hess mu(0) = E[(x-nv)(x-nv)^T]/E[n] by
// implicit differentiation of the root equation; kappa0 = E[n].
Derivatives speed_and_diffusivity(const IrreducibleLaw& law);

// High-horizon route: the renewal convolution closes on the endpoint-moment
// sequences, so lambda, v and Sigma follow from scalar triangular inversions
// of sum_x t_{x,n} x^alpha without x-resolved irreducible tables.
struct SequenceModel {
    double lambda = 0;
    double nu_hat = 0;
    double trunc_bound = 0;
    int horizon = 0;
    Derivatives der;
    std::vector<double> f_mass;  // shifted irreducible masses per length
};

SequenceModel model_from_sequences(const exactenum::MomentSeq& t_seq);

struct RenewalModel {
    int dims = 2;
    RealVec h;
    double beta = 0;
    double delta = 0;
    double lambda = 0;
    RealVec v;
    SymMat sigma;
    double kappa0 = 0;
    double nu_hat = 0;
    int horizon = 0;
    std::string provenance;
    std::vector<double> sigma_eigenvalues;
    bool sigma_positive_definite = false;
};

RenewalModel make_model(const IrreducibleLaw& law, const RealVec& h, double beta, double delta);

// Exact model of the free tilted walk (beta = 0): lambda(h) = log of the
// tilted step sum, v and Sigma its gradient and Hessian in closed form. The
// renewal pipeline converges to this model as the horizon grows.
RenewalModel tilted_walk_model(int dims, const RealVec& h);

struct MassReport {
    std::vector<double> t;        // t_n, n = 0..n_max, scalar renewal recursion
    double kappa0 = 0;
    std::vector<double> err;      // |t_n kappa0 - 1|
    double fitted_rate = 0;       // exponential decay rate of err (0 if not fit)
};

MassReport renewal_mass(const IrreducibleLaw& law, int n_max);

struct CltPoint {
    double alpha_mag = 0;
    RealVec alpha;
    int n = 0;
    std::complex<double> s_n;  // S_n(alpha/sqrt n)
    double deviation = 0;      // |kappa0 S_n - exp(-alpha.Sigma alpha/2)|
};

struct CltReport {
    std::vector<CltPoint> points;
    std::vector<double> slopes;  // log-log fit of deviation vs n, one per alpha
};

// S_n(alpha/sqrt n) via the scalar complex renewal recursion
// T_n(a) = sum_m F_m(a) T_{n-m}(a), then S_n = e^{-i a . n v} T_n.
CltReport annealed_clt_check(const IrreducibleLaw& law, const Derivatives& der,
                             const std::vector<RealVec>& alphas, const std::vector<int>& n_list);

// Multidimensional renewal convolution: t_{x,n} tables from the law.
LengthTables renewal_convolve(const IrreducibleLaw& law, int n_max);

// Largest c > 0 with t_{x,n} <= exp(-c |x-nv|^2/n) / (c sqrt(n^{d+1})) over the
// whole table (n >= 1).
double local_bound_check(const LengthTables& t, const RealVec& v, int dims);

std::string model_to_json(const RenewalModel& m);

}  // namespace polylab::renewal
