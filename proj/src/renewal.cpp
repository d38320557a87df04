#include "polylab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "polylab/errors.hpp"

namespace polylab::renewal {

namespace {

double g_of_lambda(const std::vector<double>& mass, int N, double lambda, double* dg = nullptr) {
    double g = 0, d = 0;
    for (int n = 1; n <= N && n < static_cast<int>(mass.size()); ++n) {
        double s = mass[static_cast<size_t>(n)];
        double e = std::exp(-lambda * n);
        g += s * e;
        d -= n * s * e;
    }
    if (dg) *dg = d;
    return g;
}

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    if (n < 2) return 0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return den == 0 ? 0 : num / den;
}

// Tail-rate fit over the last third of available lengths. Slice masses are
// used rather than accumulated tails: truncated tails are kinked near the
// horizon (the final points miss all beyond-horizon mass), which biases the
// fitted rate steep and makes the reported bound e^{-nu N} too optimistic.
double fit_nu(const std::vector<double>& masses) {
    int N = static_cast<int>(masses.size()) - 1;
    std::vector<double> xs, ys;
    for (int n = std::max(1, N - N / 3); n <= N; ++n) {
        double m = masses[static_cast<size_t>(n)];
        if (m <= 0) continue;
        xs.push_back(n);
        ys.push_back(std::log(m));
    }
    double slope = ls_slope(xs, ys);
    return slope < 0 ? -slope : 0.0;
}

}  // namespace

LambdaSolution solve_lambda_masses(const std::vector<double>& raw_mass, int N) {
    if (N < 1 || static_cast<int>(raw_mass.size()) <= 1)
        throw ValidationError("solve_lambda: empty weight tables");
    N = std::min(N, static_cast<int>(raw_mass.size()) - 1);

    double hi = 0;
    bool any = false;
    for (int n = 1; n <= N; ++n) {
        double s = raw_mass[static_cast<size_t>(n)];
        if (s > 0) {
            any = true;
            hi = std::max(hi, std::log(s) / n);
        }
    }
    if (!any) throw ValidationError("solve_lambda: no positive weights");
    hi += 1.0;

    // A truncated law at a moderate drift can be sub-normalized (G(0) < 1); the
    // root is then negative and still the right normalization, so the bracket
    // extends below zero instead of failing there.
    double lo = 0.0;
    double glo = g_of_lambda(raw_mass, N, lo);
    while (glo < 1.0 && lo > -64.0) {
        lo -= 1.0;
        glo = g_of_lambda(raw_mass, N, lo);
    }
    double ghi = g_of_lambda(raw_mass, N, hi);
    if (glo < 1.0 || ghi > 1.0)
        throw NumericalError("solve_lambda: no sign change in bracket (N too small?)");

    for (int it = 0; it < 80 && hi - lo > 1e-6; ++it) {
        double mid = 0.5 * (lo + hi);
        (g_of_lambda(raw_mass, N, mid) >= 1.0 ? lo : hi) = mid;
    }
    double lam = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        double dg = 0;
        double g = g_of_lambda(raw_mass, N, lam, &dg);
        if (std::abs(g - 1.0) <= 1e-13 || dg == 0) break;
        lam -= (g - 1.0) / dg;
    }
    LambdaSolution sol;
    sol.lambda = lam;
    sol.residual = std::abs(g_of_lambda(raw_mass, N, lam) - 1.0);
    if (sol.residual > 1e-12) throw NumericalError("solve_lambda: Newton failed to converge");

    std::vector<double> masses(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n)
        masses[static_cast<size_t>(n)] = raw_mass[static_cast<size_t>(n)] * std::exp(-lam * n);
    sol.nu_hat = fit_nu(masses);
    sol.trunc_bound = std::exp(-sol.nu_hat * N);
    return sol;
}

LambdaSolution solve_lambda(const LengthTables& raw_f, int N) {
    std::vector<double> mass(raw_f.size(), 0.0);
    for (size_t n = 1; n < raw_f.size(); ++n)
        for (const auto& [x, w] : raw_f[n]) mass[n] += w;
    return solve_lambda_masses(mass, N);
}

double IrreducibleLaw::mass(int n) const {
    if (n < 1 || n > horizon) return 0.0;
    double s = 0;
    for (const auto& [x, w] : f[static_cast<size_t>(n)]) s += w;
    return s;
}

double IrreducibleLaw::total_mass() const {
    double s = 0;
    for (int n = 1; n <= horizon; ++n) s += mass(n);
    return s;
}

double IrreducibleLaw::mean_len() const {
    double s = 0;
    for (int n = 1; n <= horizon; ++n) s += n * mass(n);
    return s;
}

IrreducibleLaw make_irreducible_law(const LengthTables& raw_f, int N, int dims,
                                    std::string provenance) {
    LambdaSolution sol = solve_lambda(raw_f, N);
    IrreducibleLaw law;
    law.dims = dims;
    law.lambda = sol.lambda;
    law.horizon = std::min(N, static_cast<int>(raw_f.size()) - 1);
    law.nu_hat = sol.nu_hat;
    law.trunc_bound = sol.trunc_bound;
    law.provenance = std::move(provenance);
    law.f.resize(static_cast<size_t>(law.horizon) + 1);
    for (int n = 1; n <= law.horizon; ++n) {
        double e = std::exp(-sol.lambda * n);
        for (const auto& [x, w] : raw_f[static_cast<size_t>(n)]) {
            double v = w * e;
            if (v < 0) {
                if (v < -1e-12) throw NumericalError("make_irreducible_law: negative weight");
                v = 0;  // roundoff from triangular inversion
            }
            if (v > 0) law.f[static_cast<size_t>(n)][x] = v;
        }
    }
    return law;
}

namespace {

struct MuParts {
    double g = 0, dg = 0;  // value and d/dmu
};

MuParts mu_eval(const IrreducibleLaw& law, const RealVec& z, double mu) {
    MuParts p;
    for (int n = 1; n <= law.horizon; ++n) {
        double e = std::exp(-mu * n);
        for (const auto& [x, w] : law.f[static_cast<size_t>(n)]) {
            double t = w * std::exp(dot(z, x)) * e;
            p.g += t;
            p.dg -= n * t;
        }
    }
    return p;
}

}  // namespace

double mu_of_z(const IrreducibleLaw& law, const RealVec& z) {
    if (norm2(z) == 0.0) return 0.0;
    double mu = 0.0;
    bool done = false;
    for (int it = 0; it < 200; ++it) {
        MuParts p = mu_eval(law, z, mu);
        if (!std::isfinite(p.g) || p.dg == 0)
            throw NumericalError("mu_of_z: root escape (z too large)");
        double step = (p.g - 1.0) / p.dg;
        mu -= step;
        if (std::abs(step) < 1e-15) {
            done = true;
            break;
        }
    }
    if (!done || !std::isfinite(mu)) throw NumericalError("mu_of_z: Newton did not converge");
    // The truncated root only approximates the true one when the defining sum
    // still converges with margin: its per-length terms must keep decaying over
    // the last third of the horizon.
    {
        std::vector<double> xs, ys;
        for (int n = std::max(1, law.horizon - law.horizon / 3); n <= law.horizon; ++n) {
            double g = 0;
            for (const auto& [x, w] : law.f[static_cast<size_t>(n)])
                g += w * std::exp(dot(z, x) - mu * n);
            if (g > 0) {
                xs.push_back(n);
                ys.push_back(std::log(g));
            }
        }
        if (xs.size() >= 3 && ls_slope(xs, ys) >= 0)
            throw NumericalError("mu_of_z: z outside the safe domain of the truncated law");
    }
    return mu;
}

std::complex<double> mu_of_imag(const IrreducibleLaw& law, const RealVec& alpha) {
    if (norm2(alpha) == 0.0) return {0.0, 0.0};
    std::complex<double> mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        std::complex<double> g = 0, dg = 0;
        for (int n = 1; n <= law.horizon; ++n) {
            for (const auto& [x, w] : law.f[static_cast<size_t>(n)]) {
                std::complex<double> t =
                    w * std::exp(std::complex<double>(0.0, dot(alpha, x)) - mu * double(n));
                g += t;
                dg -= double(n) * t;
            }
        }
        if (dg == std::complex<double>(0.0)) throw NumericalError("mu_of_imag: singular derivative");
        std::complex<double> step = (g - 1.0) / dg;
        mu -= step;
        if (std::abs(step) < 1e-15) return mu;
    }
    throw NumericalError("mu_of_imag: Newton did not converge");
}

Derivatives speed_and_diffusivity(const IrreducibleLaw& law) {
    double En = 0;
    RealVec Ex;
    for (int n = 1; n <= law.horizon; ++n) {
        for (const auto& [x, w] : law.f[static_cast<size_t>(n)]) {
            En += n * w;
            for (int i = 0; i < law.dims; ++i) Ex[i] += x[i] * w;
        }
    }
    if (En <= 0) throw NumericalError("speed_and_diffusivity: degenerate law");
    Derivatives d;
    d.kappa0 = En;
    for (int i = 0; i < law.dims; ++i) d.v[i] = Ex[i] / En;
    for (int n = 1; n <= law.horizon; ++n) {
        for (const auto& [x, w] : law.f[static_cast<size_t>(n)]) {
            for (int i = 0; i < law.dims; ++i) {
                double ci = x[i] - n * d.v[i];
                for (int j = 0; j < law.dims; ++j) {
                    double cj = x[j] - n * d.v[j];
                    d.sigma.at(i, j) += w * ci * cj / En;
                }
            }
        }
    }
    d.sigma_eigenvalues = sym_eigenvalues(d.sigma, law.dims);
    d.sigma_positive_definite = true;
    for (double ev : d.sigma_eigenvalues)
        if (ev <= 0) d.sigma_positive_definite = false;
    return d;
}

SequenceModel model_from_sequences(const exactenum::MomentSeq& t_seq) {
    const int dims = t_seq.dims;
    const int N = t_seq.n_max();
    const int nm = exactenum::MomentSeq::count(dims);
    if (N < 2) throw ValidationError("model_from_sequences: horizon too small");

    // scalar triangular inversions of T = T * F, lowest moment first
    std::vector<std::array<double, 21>> F(static_cast<size_t>(N) + 1, std::array<double, 21>{});
    auto T = [&](int n, int m) { return t_seq.rows[static_cast<size_t>(n)][static_cast<size_t>(m)]; };
    for (int n = 1; n <= N; ++n) {
        double s = T(n, 0);
        for (int m = 1; m < n; ++m) s -= T(m, 0) * F[static_cast<size_t>(n - m)][0];
        F[static_cast<size_t>(n)][0] = s;
    }
    for (int i = 1; i <= dims; ++i) {
        for (int n = 1; n <= N; ++n) {
            double s = T(n, i);
            for (int m = 1; m < n; ++m)
                s -= T(m, i) * F[static_cast<size_t>(n - m)][0] +
                     T(m, 0) * F[static_cast<size_t>(n - m)][static_cast<size_t>(i)];
            F[static_cast<size_t>(n)][static_cast<size_t>(i)] = s;
        }
    }
    for (int i = 0; i < dims; ++i) {
        for (int j = i; j < dims; ++j) {
            int ij = exactenum::MomentSeq::idx_xx(dims, i, j);
            int xi = exactenum::MomentSeq::idx_x(i), xj = exactenum::MomentSeq::idx_x(j);
            for (int n = 1; n <= N; ++n) {
                double s = T(n, ij);
                for (int m = 1; m < n; ++m) {
                    const auto& Fr = F[static_cast<size_t>(n - m)];
                    s -= T(m, ij) * Fr[0] + T(m, xi) * Fr[static_cast<size_t>(xj)] +
                         T(m, xj) * Fr[static_cast<size_t>(xi)] +
                         T(m, 0) * Fr[static_cast<size_t>(ij)];
                }
                F[static_cast<size_t>(n)][static_cast<size_t>(ij)] = s;
            }
        }
    }
    (void)nm;

    std::vector<double> raw_mass(static_cast<size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) raw_mass[static_cast<size_t>(n)] = F[static_cast<size_t>(n)][0];
    LambdaSolution sol = solve_lambda_masses(raw_mass, N);

    SequenceModel out;
    out.lambda = sol.lambda;
    out.nu_hat = sol.nu_hat;
    out.trunc_bound = sol.trunc_bound;
    out.horizon = N;
    out.f_mass.assign(static_cast<size_t>(N) + 1, 0.0);

    double En = 0, En2 = 0;
    RealVec Ex, Enx;
    SymMat Exx;
    for (int n = 1; n <= N; ++n) {
        double e = std::exp(-sol.lambda * n);
        const auto& Fr = F[static_cast<size_t>(n)];
        out.f_mass[static_cast<size_t>(n)] = Fr[0] * e;
        En += n * Fr[0] * e;
        En2 += static_cast<double>(n) * n * Fr[0] * e;
        for (int i = 0; i < dims; ++i) {
            double fx = Fr[static_cast<size_t>(exactenum::MomentSeq::idx_x(i))] * e;
            Ex[i] += fx;
            Enx[i] += n * fx;
            for (int j = i; j < dims; ++j)
                Exx.at(i, j) += Fr[static_cast<size_t>(exactenum::MomentSeq::idx_xx(dims, i, j))] * e;
        }
    }
    if (En <= 0) throw NumericalError("model_from_sequences: degenerate law");
    Derivatives& d = out.der;
    d.kappa0 = En;
    for (int i = 0; i < dims; ++i) d.v[i] = Ex[i] / En;
    for (int i = 0; i < dims; ++i) {
        for (int j = i; j < dims; ++j) {
            double cov = Exx.at(i, j) - d.v[j] * Enx[i] - d.v[i] * Enx[j] + d.v[i] * d.v[j] * En2;
            d.sigma.at(i, j) = d.sigma.at(j, i) = cov / En;
        }
    }
    d.sigma_eigenvalues = sym_eigenvalues(d.sigma, dims);
    d.sigma_positive_definite = true;
    for (double ev : d.sigma_eigenvalues)
        if (ev <= 0) d.sigma_positive_definite = false;
    return out;
}

RenewalModel make_model(const IrreducibleLaw& law, const RealVec& h, double beta, double delta) {
    Derivatives der = speed_and_diffusivity(law);
    RenewalModel m;
    m.dims = law.dims;
    m.h = h;
    m.beta = beta;
    m.delta = delta;
    m.lambda = law.lambda;
    m.v = der.v;
    m.sigma = der.sigma;
    m.kappa0 = der.kappa0;
    m.nu_hat = law.nu_hat;
    m.horizon = law.horizon;
    m.provenance = law.provenance;
    m.sigma_eigenvalues = der.sigma_eigenvalues;
    m.sigma_positive_definite = der.sigma_positive_definite;
    return m;
}

RenewalModel tilted_walk_model(int dims, const RealVec& h) {
    RenewalModel m;
    m.dims = dims;
    m.h = h;
    m.beta = 0.0;
    double S = 0;
    for (int i = 0; i < dims; ++i) S += std::cosh(h[i]);
    S /= dims;
    m.lambda = std::log(S);
    for (int i = 0; i < dims; ++i) m.v[i] = std::sinh(h[i]) / (dims * S);
    for (int i = 0; i < dims; ++i) {
        for (int j = 0; j < dims; ++j) {
            m.sigma.at(i, j) = -m.v[i] * m.v[j];
            if (i == j) m.sigma.at(i, i) += std::cosh(h[i]) / (dims * S);
        }
    }
    m.kappa0 = 0;  // no renewal fit behind this model
    m.nu_hat = 0;
    m.horizon = 0;
    m.provenance = "tilted walk closed form";
    m.sigma_eigenvalues = sym_eigenvalues(m.sigma, dims);
    m.sigma_positive_definite = true;
    for (double ev : m.sigma_eigenvalues)
        if (ev <= 0) m.sigma_positive_definite = false;
    return m;
}

MassReport renewal_mass(const IrreducibleLaw& law, int n_max) {
    MassReport rep;
    std::vector<double> fm(static_cast<size_t>(law.horizon) + 1, 0.0);
    for (int n = 1; n <= law.horizon; ++n) fm[static_cast<size_t>(n)] = law.mass(n);
    rep.t.assign(static_cast<size_t>(n_max) + 1, 0.0);
    rep.t[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        double s = 0;
        for (int m = 1; m <= std::min(n, law.horizon); ++m)
            s += fm[static_cast<size_t>(m)] * rep.t[static_cast<size_t>(n - m)];
        rep.t[static_cast<size_t>(n)] = s;
    }
    rep.kappa0 = law.mean_len();
    rep.err.resize(rep.t.size());
    for (size_t n = 0; n < rep.t.size(); ++n) rep.err[n] = std::abs(rep.t[n] * rep.kappa0 - 1.0);
    std::vector<double> xs, ys;
    for (int n = n_max / 2; n <= n_max; ++n) {
        double e = rep.err[static_cast<size_t>(n)];
        if (e > 1e-280) {
            xs.push_back(n);
            ys.push_back(std::log(e));
        }
    }
    double slope = ls_slope(xs, ys);
    rep.fitted_rate = slope < 0 ? -slope : 0.0;
    return rep;
}

CltReport annealed_clt_check(const IrreducibleLaw& law, const Derivatives& der,
                             const std::vector<RealVec>& alphas, const std::vector<int>& n_list) {
    CltReport rep;
    for (const RealVec& alpha : alphas) {
        std::vector<double> lx, ly;
        for (int n : n_list) {
            double scale = 1.0 / std::sqrt(static_cast<double>(n));
            RealVec a;
            for (int i = 0; i < law.dims; ++i) a[i] = alpha[i] * scale;
            // F_m(a) = sum_x f_{x,m} e^{i a.x}
            std::vector<std::complex<double>> F(static_cast<size_t>(law.horizon) + 1);
            for (int m = 1; m <= law.horizon; ++m) {
                std::complex<double> s = 0;
                for (const auto& [x, w] : law.f[static_cast<size_t>(m)])
                    s += w * std::exp(std::complex<double>(0.0, dot(a, x)));
                F[static_cast<size_t>(m)] = s;
            }
            std::vector<std::complex<double>> T(static_cast<size_t>(n) + 1);
            T[0] = 1.0;
            for (int k = 1; k <= n; ++k) {
                std::complex<double> s = 0;
                for (int m = 1; m <= std::min(k, law.horizon); ++m)
                    s += F[static_cast<size_t>(m)] * T[static_cast<size_t>(k - m)];
                T[static_cast<size_t>(k)] = s;
            }
            double av = dot(a, der.v) * n;
            std::complex<double> S = T[static_cast<size_t>(n)] *
                                     std::exp(std::complex<double>(0.0, -av));
            double gauss = std::exp(-0.5 * quad_form(der.sigma, alpha, law.dims));
            CltPoint pt;
            pt.alpha = alpha;
            pt.alpha_mag = norm2(alpha);
            pt.n = n;
            pt.s_n = S;
            pt.deviation = std::abs(der.kappa0 * S - gauss);
            rep.points.push_back(pt);
            if (pt.deviation > 0) {
                lx.push_back(std::log(static_cast<double>(n)));
                ly.push_back(std::log(pt.deviation));
            }
        }
        rep.slopes.push_back(ls_slope(lx, ly));
    }
    return rep;
}

LengthTables renewal_convolve(const IrreducibleLaw& law, int n_max) {
    LengthTables t(static_cast<size_t>(n_max) + 1);
    t[0][Point{}] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        SliceMap& out = t[static_cast<size_t>(n)];
        for (int m = 1; m <= std::min(n, law.horizon); ++m) {
            for (const auto& [y, fw] : law.f[static_cast<size_t>(m)]) {
                for (const auto& [x, tw] : t[static_cast<size_t>(n - m)]) out[x + y] += tw * fw;
            }
        }
    }
    return t;
}

double local_bound_check(const LengthTables& t, const RealVec& v, int dims) {
    auto holds = [&](double c) {
        for (int n = 1; n < static_cast<int>(t.size()); ++n) {
            double pref = 1.0 / (c * std::sqrt(std::pow(static_cast<double>(n), dims)));
            for (const auto& [x, w] : t[static_cast<size_t>(n)]) {
                if (w <= 0) continue;
                double q = 0;
                for (int i = 0; i < dims; ++i) {
                    double d = x[i] - n * v[i];
                    q += d * d;
                }
                if (w > pref * std::exp(-c * q / n)) return false;
            }
        }
        return true;
    };
    double lo = 1e-9, hi = 1e3;
    if (!holds(lo)) return 0.0;
    while (holds(hi)) hi *= 2;  // generous tables; bounded by exponent growth
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::string model_to_json(const RenewalModel& m) {
    std::string s = "{\n";
    char buf[256];
    auto add = [&](const char* key, const std::string& val, bool last = false) {
        s += "  \"";
        s += key;
        s += "\": " + val + (last ? "\n" : ",\n");
    };
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    add("schema", "\"polylab.renewal_model.v1\"");
    add("dims", std::to_string(m.dims));
    {
        std::string v = "[";
        for (int i = 0; i < m.dims; ++i) v += (i ? "," : "") + num(m.h[i]);
        add("h", v + "]");
    }
    add("beta", num(m.beta));
    add("delta", num(m.delta));
    add("lambda", num(m.lambda));
    {
        std::string v = "[";
        for (int i = 0; i < m.dims; ++i) v += (i ? "," : "") + num(m.v[i]);
        add("v", v + "]");
    }
    {
        std::string v = "[";
        for (int i = 0; i < m.dims; ++i) {
            v += i ? ",[" : "[";
            for (int j = 0; j < m.dims; ++j) v += (j ? "," : "") + num(m.sigma.at(i, j));
            v += "]";
        }
        add("sigma", v + "]");
    }
    {
        std::string v = "[";
        for (size_t i = 0; i < m.sigma_eigenvalues.size(); ++i)
            v += (i ? "," : "") + num(m.sigma_eigenvalues[i]);
        add("sigma_eigenvalues", v + "]");
    }
    add("sigma_positive_definite", m.sigma_positive_definite ? "true" : "false");
    add("kappa0", num(m.kappa0));
    add("nu_hat", num(m.nu_hat));
    add("horizon", std::to_string(m.horizon));
    add("provenance", "\"" + m.provenance + "\"", true);
    s += "}\n";
    return s;
}

}  // namespace polylab::renewal
