#include "polylab/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace polylab::transfer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct StepWeights {
    std::array<double, 2 * kMaxDims> lin{};
    std::array<double, 2 * kMaxDims> log{};
};

StepWeights step_weights(int dims, const RealVec& h, bool fold_tilt) {
    StepWeights sw;
    for (int a = 0; a < dims; ++a) {
        double hp = fold_tilt ? h[a] : 0.0;
        sw.lin[static_cast<size_t>(2 * a)] = std::exp(hp) / (2.0 * dims);
        sw.lin[static_cast<size_t>(2 * a + 1)] = std::exp(-hp) / (2.0 * dims);
    }
    for (int d = 0; d < 2 * dims; ++d)
        sw.log[static_cast<size_t>(d)] = std::log(sw.lin[static_cast<size_t>(d)]);
    return sw;
}

void run_parallel(int jobs, int count, const std::function<void(int)>& work) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) work(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

double EndpointSlice::value_at(const Point& p) const {
    if (!box.contains(p)) return 0.0;
    double v = vals[box.index(p)];
    return log_space ? std::exp(v) : v;
}

double EndpointSlice::total() const {
    if (!log_space) {
        double s = 0;
        for (double v : vals) s += v;
        return s;
    }
    double m = kNegInf;
    for (double v : vals) m = std::max(m, v);
    if (m == kNegInf) return 0.0;
    double s = 0;
    for (double v : vals)
        if (v != kNegInf) s += std::exp(v - m);
    return std::exp(m) * s;
}

void dp_quenched_scan(const Environment& env, const RealVec& h, double beta, int n,
                      const DpOptions& opt, const std::function<void(const EndpointSlice&)>& sink) {
    if (n < 0) throw ValidationError("dp_quenched: negative length");
    int radius = opt.window_radius < 0 ? n : opt.window_radius;
    if (env.box_radius() < radius)
        throw ValidationError("dp_quenched: window exceeds the environment box (radius " +
                              std::to_string(radius) + " > " + std::to_string(env.box_radius()) +
                              ")");
    const int dims = env.dims();
    const bool log_space = opt.log_space || n >= opt.logspace_threshold;
    const Box box(dims, radius);
    const size_t size = box.size();
    const StepWeights sw = step_weights(dims, h, opt.fold_tilt);

    std::vector<double> u(size);
    for (size_t i = 0; i < size; ++i) {
        double w = env.visit_weight(box.point_at(i), beta);
        u[i] = log_space ? (w > 0 ? std::log(w) : kNegInf) : w;
    }

    EndpointSlice slice;
    slice.dims = dims;
    slice.box = box;
    slice.log_space = log_space;
    slice.tilt_applied = opt.fold_tilt;
    slice.h = h;
    slice.beta = beta;
    slice.env_seed = env.seed();
    slice.vals.assign(size, log_space ? kNegInf : 0.0);
    slice.vals[box.index(Point{})] = log_space ? 0.0 : 1.0;
    slice.n = 0;

    auto emit = [&](EndpointSlice& s) {
        if (opt.fold_tilt) {
            sink(s);
            return;
        }
        // unfolded mode: fold e^{h.x} at readout, on a copy, so the recursion
        // keeps evolving the raw values
        EndpointSlice view = s;
        for (size_t i = 0; i < size; ++i) {
            Point p = box.point_at(i);
            if (log_space)
                view.vals[i] += dot(h, p);
            else
                view.vals[i] *= std::exp(dot(h, p));
        }
        view.tilt_applied = true;
        sink(view);
    };

    emit(slice);

    std::vector<double> next(size);
    std::array<size_t, kMaxDims> stride{};
    for (int a = 0; a < dims; ++a) stride[static_cast<size_t>(a)] = box.stride(a);
    const int side = box.side();

    std::array<int32_t, kMaxDims> c{};  // odometer coordinates in [0, side)
    for (int k = 1; k <= n; ++k) {
        const std::vector<double>& cur = slice.vals;
        double leaked = 0;
        c.fill(0);
        for (size_t i = 0; i < size; ++i) {
            if (!log_space) {
                double s = 0;
                for (int a = 0; a < dims; ++a) {
                    if (c[static_cast<size_t>(a)] > 0)
                        s += sw.lin[static_cast<size_t>(2 * a)] *
                             cur[i - stride[static_cast<size_t>(a)]];
                    if (c[static_cast<size_t>(a)] < side - 1)
                        s += sw.lin[static_cast<size_t>(2 * a + 1)] *
                             cur[i + stride[static_cast<size_t>(a)]];
                }
                next[i] = s * u[i];
            } else {
                double m = kNegInf;
                std::array<double, 2 * kMaxDims> terms;
                int nt = 0;
                for (int a = 0; a < dims; ++a) {
                    if (c[static_cast<size_t>(a)] > 0) {
                        double t = cur[i - stride[static_cast<size_t>(a)]] +
                                   sw.log[static_cast<size_t>(2 * a)];
                        terms[static_cast<size_t>(nt++)] = t;
                        m = std::max(m, t);
                    }
                    if (c[static_cast<size_t>(a)] < side - 1) {
                        double t = cur[i + stride[static_cast<size_t>(a)]] +
                                   sw.log[static_cast<size_t>(2 * a + 1)];
                        terms[static_cast<size_t>(nt++)] = t;
                        m = std::max(m, t);
                    }
                }
                if (m != kNegInf && u[i] != kNegInf) {
                    double s = 0;
                    for (int t = 0; t < nt; ++t)
                        if (terms[static_cast<size_t>(t)] != kNegInf)
                            s += std::exp(terms[static_cast<size_t>(t)] - m);
                    next[i] = m + std::log(s) + u[i];
                } else {
                    next[i] = kNegInf;
                }
            }
            // boundary leak bound (visit factors are <= 1 for V >= 0, so this
            // upper-bounds what a larger window would have carried outward)
            if (radius < n) {
                double v = log_space ? (cur[i] == kNegInf ? 0.0 : std::exp(cur[i])) : cur[i];
                if (v > 0) {
                    for (int a = 0; a < dims; ++a) {
                        if (c[static_cast<size_t>(a)] == side - 1)
                            leaked += v * sw.lin[static_cast<size_t>(2 * a)];
                        if (c[static_cast<size_t>(a)] == 0)
                            leaked += v * sw.lin[static_cast<size_t>(2 * a + 1)];
                    }
                }
            }
            for (int a = dims - 1; a >= 0; --a) {
                if (++c[static_cast<size_t>(a)] < side) break;
                c[static_cast<size_t>(a)] = 0;
            }
        }
        slice.vals.swap(next);
        slice.n = k;
        slice.leaked_mass += leaked;
        emit(slice);
    }
}

EndpointSlice dp_quenched(const Environment& env, const RealVec& h, double beta, int n,
                          const DpOptions& opt) {
    EndpointSlice out;
    dp_quenched_scan(env, h, beta, n, opt, [&](const EndpointSlice& s) {
        if (s.n == n) out = s;
    });
    return out;
}

std::complex<double> char_sum(const EndpointSlice& slice, const RealVec& alpha, const RealVec& v) {
    std::complex<double> s = 0;
    const Box& box = slice.box;
    for (size_t i = 0; i < slice.vals.size(); ++i) {
        double w =
            slice.log_space ? (slice.vals[i] == kNegInf ? 0.0 : std::exp(slice.vals[i])) : slice.vals[i];
        if (w == 0.0) continue;
        Point p = box.point_at(i);
        double phase = 0;
        for (int d = 0; d < slice.dims; ++d)
            phase += alpha[d] * (static_cast<double>(p[d]) - slice.n * v[d]);
        s += w * std::exp(std::complex<double>(0.0, phase));
    }
    return s;
}

McEstimate mc_annealed(const PotentialLaw& law, int dims, const RealVec& h, double beta, int n,
                       int n_env, uint64_t seed, const DpOptions& opt) {
    if (n_env < 2) throw ValidationError("mc_annealed: need n_env >= 2");
    McEstimate est;
    est.n_env = n_env;
    est.per_env.assign(static_cast<size_t>(n_env), 0.0);
    int radius = opt.window_radius < 0 ? std::max(1, n) : opt.window_radius;
    DpOptions dopt = opt;
    dopt.window_radius = radius;
    run_parallel(opt.jobs, n_env, [&](int i) {
        Environment env =
            sample_environment(law, dims, radius, derive_seed(seed, static_cast<uint64_t>(i)));
        est.per_env[static_cast<size_t>(i)] = dp_quenched(env, h, beta, n, dopt).total();
    });
    double m = 0;
    for (double q : est.per_env) m += q;
    m /= n_env;
    double var = 0;
    for (double q : est.per_env) var += (q - m) * (q - m);
    var /= (n_env - 1);
    est.mean = m;
    est.stderr_ = std::sqrt(var / n_env);
    return est;
}

RatioSeries ratio_series(const Environment& env, const RealVec& h, double beta, int n_max,
                         const RatioOptions& opt) {
    RatioSeries rs;
    std::vector<double> qn(static_cast<size_t>(n_max) + 1, 0.0);
    dp_quenched_scan(env, h, beta, n_max, opt.dp,
                     [&](const EndpointSlice& s) { qn[static_cast<size_t>(s.n)] = s.total(); });

    int exact_upto = opt.exact_upto < 0 ? std::min(n_max, exactenum::default_cap(env.dims()))
                                        : std::min(n_max, opt.exact_upto);
    exactenum::WeightTable ann;
    if (exact_upto >= 1)
        ann = exactenum::enumerate_Q(exactenum::Weighting::annealed_of(env.law(), beta), env.dims(),
                                     exact_upto, exact_upto);

    // one shared environment ensemble covers every length beyond the exact range
    std::vector<double> mc_mean(static_cast<size_t>(n_max) + 1, 0.0);
    std::vector<double> mc_err(static_cast<size_t>(n_max) + 1, 0.0);
    if (exact_upto < n_max) {
        std::vector<std::vector<double>> totals(
            static_cast<size_t>(opt.mc_envs),
            std::vector<double>(static_cast<size_t>(n_max) + 1, 0.0));
        run_parallel(opt.dp.jobs, opt.mc_envs, [&](int i) {
            Environment e = sample_environment(env.law(), env.dims(), n_max,
                                               derive_seed(opt.mc_seed, static_cast<uint64_t>(i)));
            dp_quenched_scan(e, h, beta, n_max, opt.dp, [&](const EndpointSlice& s) {
                totals[static_cast<size_t>(i)][static_cast<size_t>(s.n)] = s.total();
            });
        });
        for (int n = exact_upto + 1; n <= n_max; ++n) {
            double m = 0;
            for (int i = 0; i < opt.mc_envs; ++i)
                m += totals[static_cast<size_t>(i)][static_cast<size_t>(n)];
            m /= opt.mc_envs;
            double var = 0;
            for (int i = 0; i < opt.mc_envs; ++i) {
                double d = totals[static_cast<size_t>(i)][static_cast<size_t>(n)] - m;
                var += d * d;
            }
            var /= (opt.mc_envs - 1);
            mc_mean[static_cast<size_t>(n)] = m;
            mc_err[static_cast<size_t>(n)] = std::sqrt(var / opt.mc_envs);
        }
    }

    for (int n = 1; n <= n_max; ++n) {
        double denom, derr;
        if (n <= exact_upto) {
            denom = exactenum::Q_of_h(ann, h, n);
            derr = 0;
        } else {
            denom = mc_mean[static_cast<size_t>(n)];
            derr = mc_err[static_cast<size_t>(n)];
        }
        if (denom <= 0) throw NumericalError("ratio_series: vanishing annealed denominator");
        double wn = qn[static_cast<size_t>(n)] / denom;
        rs.ns.push_back(n);
        rs.w.push_back(wn);
        rs.w_err.push_back(wn * derr / denom);
        rs.zeroed.push_back(qn[static_cast<size_t>(n)] == 0.0 ? 1 : 0);
    }
    return rs;
}

}  // namespace polylab::transfer
