#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polylab/environment.hpp"
#include "polylab/exactenum.hpp"
#include "polylab/harness.hpp"
#include "polylab/polymer.hpp"
#include "polylab/renewal.hpp"
#include "polylab/replica.hpp"
#include "polylab/transfer.hpp"
#include "polylab/version.hpp"

namespace py = pybind11;
using namespace polylab;

namespace {

Point to_point(const std::vector<int>& xs) {
    if (xs.size() > static_cast<size_t>(kMaxDims)) throw ValidationError("point has too many coordinates");
    Point p;
    for (size_t i = 0; i < xs.size(); ++i) p[static_cast<int>(i)] = xs[i];
    return p;
}

std::vector<int> from_point(const Point& p, int dims) {
    std::vector<int> xs(static_cast<size_t>(dims));
    for (int i = 0; i < dims; ++i) xs[static_cast<size_t>(i)] = p[i];
    return xs;
}

RealVec to_vec(const std::vector<double>& xs) {
    RealVec v;
    if (xs.size() == 1) {
        v[0] = xs[0];
    } else {
        if (xs.size() > static_cast<size_t>(kMaxDims)) throw ValidationError("vector too long");
        for (size_t i = 0; i < xs.size(); ++i) v[static_cast<int>(i)] = xs[i];
    }
    return v;
}

py::dict table_dict(const exactenum::WeightTable& t) {
    py::dict out;
    for (int n = 0; n <= t.n_max(); ++n) {
        for (const auto& [x, w] : t.by_len[static_cast<size_t>(n)]) {
            py::tuple key(t.dims + 1);
            key[0] = n;
            for (int d = 0; d < t.dims; ++d) key[d + 1] = x[d];
            out[key] = w * std::exp(-t.lambda * n);
        }
    }
    return out;
}

py::dict model_dict(const renewal::RenewalModel& m) {
    py::dict d;
    d["dims"] = m.dims;
    d["lambda"] = m.lambda;
    std::vector<double> v(static_cast<size_t>(m.dims));
    for (int i = 0; i < m.dims; ++i) v[static_cast<size_t>(i)] = m.v[i];
    d["v"] = v;
    std::vector<std::vector<double>> sig(static_cast<size_t>(m.dims),
                                         std::vector<double>(static_cast<size_t>(m.dims)));
    for (int i = 0; i < m.dims; ++i)
        for (int j = 0; j < m.dims; ++j) sig[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.sigma.at(i, j);
    d["sigma"] = sig;
    d["kappa0"] = m.kappa0;
    d["nu_hat"] = m.nu_hat;
    d["horizon"] = m.horizon;
    d["sigma_positive_definite"] = m.sigma_positive_definite;
    d["provenance"] = m.provenance;
    return d;
}

renewal::RenewalModel model_enum(const PotentialLaw& law, int dims, const std::vector<double>& h,
                                 double beta, double delta, int n_max) {
    RealVec hv = to_vec(h);
    ConeSpec cone(dims, hv, delta > 0 ? delta : ConeSpec::default_delta(dims));
    auto tabs = exactenum::enumerate_basic(exactenum::Weighting::annealed_of(law, beta), cone, hv,
                                           n_max);
    auto ilaw = renewal::make_irreducible_law(tabs.f.by_len, n_max, dims, "annealed enumeration");
    return renewal::make_model(ilaw, hv, beta, cone.delta);
}

renewal::RenewalModel model_dp0(const PotentialLaw& law, int dims, const std::vector<double>& h,
                                double beta, double delta, int n_max) {
    RealVec hv = to_vec(h);
    ConeSpec cone(dims, hv, delta > 0 ? delta : ConeSpec::default_delta(dims));
    auto seq = exactenum::cone_dp_moment_sequences(exactenum::Weighting::annealed_of(law, beta),
                                                   cone, hv, n_max);
    auto sm = renewal::model_from_sequences(seq);
    renewal::RenewalModel m;
    m.dims = dims;
    m.h = hv;
    m.beta = beta;
    m.delta = cone.delta;
    m.lambda = sm.lambda;
    m.v = sm.der.v;
    m.sigma = sm.der.sigma;
    m.kappa0 = sm.der.kappa0;
    m.nu_hat = sm.nu_hat;
    m.horizon = sm.horizon;
    m.provenance = "cone dp moment sequences";
    m.sigma_eigenvalues = sm.der.sigma_eigenvalues;
    m.sigma_positive_definite = sm.der.sigma_positive_definite;
    return m;
}

}  // namespace

PYBIND11_MODULE(_polylab, m) {
    m.doc() = "stretched polymers in random potentials: exact enumeration, transfer "
              "operators and renewal analysis";
    m.attr("__version__") = kVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<PotentialLaw>(m, "PotentialLaw")
        .def_static("parse", &PotentialLaw::parse)
        .def_static("deterministic", &PotentialLaw::deterministic)
        .def_static("bernoulli_trap", &PotentialLaw::bernoulli_trap)
        .def_static("two_point", &PotentialLaw::two_point)
        .def_static("exponential", &PotentialLaw::exponential)
        .def("spec", &PotentialLaw::spec_string)
        .def("is_normalized", &PotentialLaw::is_normalized)
        .def("has_traps", &PotentialLaw::has_traps)
        .def("__repr__", [](const PotentialLaw& l) { return "PotentialLaw(" + l.spec_string() + ")"; });

    m.def("phi_beta", [](const PotentialLaw& law, double beta, int64_t ell) {
        return phi_beta(law, beta, ell);
    });
    m.def("check_attractivity", [](const PotentialLaw& law, double beta, int L) {
        auto rep = check_attractivity(law, beta, L);
        return std::make_pair(rep.ok(), rep.violations.size());
    });

    py::class_<Environment>(m, "Environment")
        .def_property_readonly("dims", &Environment::dims)
        .def_property_readonly("box_radius", &Environment::box_radius)
        .def_property_readonly("seed", &Environment::seed)
        .def("value", [](const Environment& e, const std::vector<int>& x) { return e.value(to_point(x)); })
        .def("is_trap", [](const Environment& e, const std::vector<int>& x) { return e.is_trap(to_point(x)); })
        .def("trap_fraction", &Environment::trap_fraction)
        .def("to_text", &to_polyenv)
        .def_static("from_text", &from_polyenv);

    m.def("sample_environment", &sample_environment, py::arg("law"), py::arg("dims"),
          py::arg("box_radius"), py::arg("seed"));
    m.def("save_polyenv", &save_polyenv);
    m.def("load_polyenv", &load_polyenv);

    py::class_<PolymerPath>(m, "PolymerPath")
        .def(py::init([](int dims, const std::string& literal) {
            return PolymerPath::parse(dims, literal);
        }))
        .def_property_readonly("length", &PolymerPath::length)
        .def("endpoint", [](const PolymerPath& p) { return from_point(p.endpoint(), p.dims); })
        .def("literal", &PolymerPath::literal)
        .def("__repr__", [](const PolymerPath& p) { return "PolymerPath(" + p.literal() + ")"; });

    py::class_<ConeSpec>(m, "ConeSpec")
        .def(py::init([](int dims, const std::vector<double>& h, double delta) {
            return ConeSpec(dims, to_vec(h), delta);
        }), py::arg("dims"), py::arg("h"), py::arg("delta"))
        .def_property_readonly("delta", [](const ConeSpec& c) { return c.delta; })
        .def_static("default_delta", &ConeSpec::default_delta);

    m.def("in_cone", [](const std::vector<int>& x, const ConeSpec& cone) {
        return in_cone(to_point(x), cone);
    });
    m.def("is_cone_confined", &is_cone_confined);
    m.def("irreducible_split", &irreducible_split);
    m.def("local_times", [](const PolymerPath& p, bool include_origin) {
        std::map<std::vector<int>, int> out;
        for (const auto& [site, c] : local_times(p, include_origin)) out[from_point(site, p.dims)] = c;
        return out;
    }, py::arg("path"), py::arg("include_origin") = false);

    m.def("quenched_weight", [](const PolymerPath& p, const Environment& env,
                                const std::vector<double>& h, double beta) {
        return quenched_weight(p, env, to_vec(h), beta);
    });
    m.def("annealed_weight", [](const PolymerPath& p, const PotentialLaw& law,
                                const std::vector<double>& h, double beta) {
        return annealed_weight(p, law, to_vec(h), beta);
    });

    py::class_<exactenum::WeightTable>(m, "WeightTable")
        .def_property_readonly("n_max", &exactenum::WeightTable::n_max)
        .def("at", [](const exactenum::WeightTable& t, const std::vector<int>& x, int n) {
            return t.at(to_point(x), n);
        })
        .def("mass", &exactenum::WeightTable::mass)
        .def("entries", &table_dict)
        .def("to_csv", &exactenum::table_to_csv);

    m.def("enumerate_q", [](const PotentialLaw& law, double beta, int dims, int n_max) {
        return exactenum::enumerate_Q(exactenum::Weighting::annealed_of(law, beta), dims, n_max);
    }, py::arg("law"), py::arg("beta"), py::arg("dims"), py::arg("n_max"));
    m.def("enumerate_q_quenched", [](const Environment& env, double beta, int n_max) {
        return exactenum::enumerate_Q(exactenum::Weighting::quenched(env, beta), env.dims(), n_max);
    });
    m.def("q_of_h", [](const exactenum::WeightTable& t, const std::vector<double>& h, int n) {
        return exactenum::Q_of_h(t, to_vec(h), n);
    });

    m.def("enumerate_basic", [](const PotentialLaw& law, double beta, const ConeSpec& cone,
                                const std::vector<double>& h, int n_max) {
        auto tabs = exactenum::enumerate_basic(exactenum::Weighting::annealed_of(law, beta), cone,
                                               to_vec(h), n_max);
        return std::make_pair(tabs.t, tabs.f);
    });
    m.def("enumerate_basic_quenched", [](const Environment& env, double beta, const ConeSpec& cone,
                                         const std::vector<double>& h, int n_max,
                                         const std::vector<int>& anchor) {
        auto tabs = exactenum::enumerate_basic(exactenum::Weighting::quenched(env, beta), cone,
                                               to_vec(h), n_max, to_point(anchor));
        return std::make_pair(tabs.t, tabs.f);
    }, py::arg("env"), py::arg("beta"), py::arg("cone"), py::arg("h"), py::arg("n_max"),
       py::arg("anchor") = std::vector<int>{});

    m.def("renewal_residuals", [](const PotentialLaw& law, double beta, const ConeSpec& cone,
                                  const std::vector<double>& h, int n_max) {
        return exactenum::renewal_residuals(exactenum::Weighting::annealed_of(law, beta), cone,
                                            to_vec(h), n_max);
    });
    m.def("renewal_residuals_quenched", [](const Environment& env, double beta, const ConeSpec& cone,
                                           const std::vector<double>& h, int n_max) {
        return exactenum::renewal_residuals(exactenum::Weighting::quenched(env, beta), cone,
                                            to_vec(h), n_max);
    });

    py::class_<renewal::RenewalModel>(m, "RenewalModel")
        .def("as_dict", &model_dict)
        .def("to_json", &renewal::model_to_json)
        .def_property_readonly("lambda_", [](const renewal::RenewalModel& m_) { return m_.lambda; })
        .def_property_readonly("kappa0", [](const renewal::RenewalModel& m_) { return m_.kappa0; })
        .def_property_readonly("nu_hat", [](const renewal::RenewalModel& m_) { return m_.nu_hat; });

    m.def("renewal_model", &model_enum, py::arg("law"), py::arg("dims"), py::arg("h"),
          py::arg("beta"), py::arg("delta") = 0.0, py::arg("n_max") = 8);
    m.def("renewal_model_dp0", &model_dp0, py::arg("law"), py::arg("dims"), py::arg("h"),
          py::arg("beta"), py::arg("delta") = 0.0, py::arg("n_max") = 64,
          "high-horizon route for linear one-site potentials (beta = 0 or deterministic)");

    py::class_<transfer::EndpointSlice>(m, "EndpointSlice")
        .def_property_readonly("n", [](const transfer::EndpointSlice& s) { return s.n; })
        .def("total", &transfer::EndpointSlice::total)
        .def("value_at", [](const transfer::EndpointSlice& s, const std::vector<int>& x) {
            return s.value_at(to_point(x));
        })
        .def("char_sum", [](const transfer::EndpointSlice& s, const std::vector<double>& alpha,
                            const std::vector<double>& v) {
            return transfer::char_sum(s, to_vec(alpha), to_vec(v));
        });

    m.def("dp_quenched", [](const Environment& env, const std::vector<double>& h, double beta,
                            int n, int window) {
        transfer::DpOptions opt;
        opt.window_radius = window;
        return transfer::dp_quenched(env, to_vec(h), beta, n, opt);
    }, py::arg("env"), py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("window") = -1);

    m.def("mc_annealed", [](const PotentialLaw& law, int dims, const std::vector<double>& h,
                            double beta, int n, int n_env, uint64_t seed) {
        auto est = transfer::mc_annealed(law, dims, to_vec(h), beta, n, n_env, seed);
        return std::make_pair(est.mean, est.stderr_);
    });

    m.def("ratio_series", [](const Environment& env, const std::vector<double>& h, double beta,
                             int n_max) {
        auto rs = transfer::ratio_series(env, to_vec(h), beta, n_max, {});
        return py::make_tuple(rs.ns, rs.w, rs.w_err, rs.zeroed);
    });

    m.def("interaction_defect", &replica::interaction_defect);
    m.def("last_step_bound_check", &replica::last_step_bound_check);
}
