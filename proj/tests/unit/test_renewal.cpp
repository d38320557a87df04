#include "doctest.h"

#include <cmath>

#include "polylab/renewal.hpp"

using namespace polylab;
using namespace polylab::renewal;
using exactenum::LengthTables;
using exactenum::Weighting;

namespace {

// closed forms for the tilted simple walk in D dimensions, on-axis h
struct TiltedWalk {
    int dims;
    double h;
    double S() const {
        double s = std::cosh(h);
        for (int i = 1; i < dims; ++i) s += 1.0;
        return s / dims;
    }
    double lambda() const { return std::log(S()); }
    double v1() const { return std::sinh(h) / (dims * S()); }
    double sigma11() const { return std::cosh(h) / (dims * S()) - v1() * v1(); }
    double sigma_perp() const { return 1.0 / (dims * S()); }
};

IrreducibleLaw beta0_law(int dims, double h_mag, int N) {
    auto law = PotentialLaw::deterministic(0.0);
    RealVec h = RealVec::on_axis(h_mag);
    ConeSpec cone(dims, h, ConeSpec::default_delta(dims));
    auto t = exactenum::cone_dp_tables(Weighting::annealed_of(law, 0.0), cone, h, N);
    auto raw_f = exactenum::irreducible_from_t(t);
    return make_irreducible_law(raw_f, N, dims, "beta0 cone dp");
}

LengthTables geometric_raw(double q, int N) {
    LengthTables raw(static_cast<size_t>(N) + 1);
    for (int m = 1; m <= N; ++m)
        raw[static_cast<size_t>(m)][unit_point(0, 1)] = (1 - q) * std::pow(q, m - 1);
    return raw;
}

}  // namespace

TEST_CASE("lambda: rescaling raw weights shifts the root exactly") {
    auto raw = geometric_raw(0.4, 30);
    auto base = solve_lambda(raw, 30);
    double c = 0.37;
    LengthTables scaled = raw;
    for (int n = 1; n <= 30; ++n)
        for (auto& [x, w] : scaled[static_cast<size_t>(n)]) w *= std::exp(c * n);
    auto shifted = solve_lambda(scaled, 30);
    CHECK(shifted.lambda == doctest::Approx(base.lambda + c).epsilon(1e-12));
}

TEST_CASE("lambda for the beta = 0 walk approaches the closed form from below") {
    TiltedWalk tw{2, 1.0};
    auto law24 = beta0_law(2, 1.0, 24);
    auto law48 = beta0_law(2, 1.0, 48);
    CHECK(law24.nu_hat > 0);
    CHECK(law24.lambda < tw.lambda());  // dropped tail mass biases the root down
    CHECK(law48.lambda < tw.lambda());
    CHECK(std::abs(law48.lambda - tw.lambda()) < std::abs(law24.lambda - tw.lambda()));
    CHECK(std::abs(law48.lambda - tw.lambda()) < 1e-3);

    // horizon self-consistency: N vs N+2 within the reported truncation bound
    auto law26 = beta0_law(2, 1.0, 26);
    CHECK(std::abs(law26.lambda - law24.lambda) <= law24.trunc_bound);
}

TEST_CASE("lambda solver handles sub-normalized truncations and rejects empty input") {
    LengthTables raw(5);
    raw[1][unit_point(0, 1)] = 0.01;  // G(0) < 1: root below zero
    auto sol = solve_lambda(raw, 4);
    CHECK(sol.lambda == doctest::Approx(std::log(0.01)).epsilon(1e-10));
    LengthTables none(5);
    CHECK_THROWS_AS(solve_lambda(none, 4), ValidationError);
}

TEST_CASE("normalized law sums to one and has positive tail rate") {
    auto law = beta0_law(2, 1.0, 24);
    CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.nu_hat > 0.05);
    // residual mass 1 - sum_{n<=k} decays exponentially, at a rate comparable
    // to the fitted one
    std::vector<double> ks, logs;
    double acc = 0;
    for (int n = 1; n <= law.horizon; ++n) {
        acc += law.mass(n);
        if (n >= law.horizon / 2 && 1.0 - acc > 0) {
            ks.push_back(n);
            logs.push_back(std::log(1.0 - acc));
        }
    }
    REQUIRE(ks.size() >= 4);
    double num = 0, den = 0, mk = 0, ml = 0;
    for (size_t i = 0; i < ks.size(); ++i) mk += ks[i], ml += logs[i];
    mk /= ks.size();
    ml /= ks.size();
    for (size_t i = 0; i < ks.size(); ++i) {
        num += (ks[i] - mk) * (logs[i] - ml);
        den += (ks[i] - mk) * (ks[i] - mk);
    }
    double rate = -num / den;
    CHECK(rate > 0.5 * law.nu_hat);
    CHECK(rate < 3.0 * law.nu_hat);
}

TEST_CASE("mu: root properties and the tilt identity") {
    auto law = beta0_law(2, 1.0, 40);
    CHECK(mu_of_z(law, RealVec{}) == 0.0);

    // tilt identity lambda(h+z) - lambda(h) = mu(z), at the truncation accuracy
    TiltedWalk tw{2, 1.0};
    for (double z1 : {-0.10, -0.05, 0.05, 0.10}) {
        TiltedWalk tz{2, 1.0 + z1};
        double mu = mu_of_z(law, RealVec::on_axis(z1));
        CHECK(std::abs(mu - (tz.lambda() - tw.lambda())) <= law.trunc_bound + 1e-10);
        // cross-check against the root solver at the tilted drift
        auto tilted = beta0_law(2, 1.0 + z1, 40);
        CHECK(std::abs(mu - (tilted.lambda - law.lambda)) <=
              law.trunc_bound + tilted.trunc_bound + 1e-10);
    }

    // convexity along the first axis by midpoint inequality
    for (double a : {-0.08, -0.02, 0.02}) {
        double m0 = mu_of_z(law, RealVec::on_axis(a));
        double m1 = mu_of_z(law, RealVec::on_axis(a + 0.04));
        double mid = mu_of_z(law, RealVec::on_axis(a + 0.02));
        CHECK(mid <= 0.5 * (m0 + m1) + 1e-12);
    }

    CHECK_THROWS_AS(mu_of_z(law, RealVec::on_axis(25.0)), NumericalError);
}

TEST_CASE("speed and diffusivity: implicit formulas vs finite differences") {
    auto law = beta0_law(2, 1.0, 40);
    auto der = speed_and_diffusivity(law);

    const double eps = 1e-4;
    for (int i = 0; i < 2; ++i) {
        RealVec zp, zm;
        zp[i] = eps;
        zm[i] = -eps;
        double fd = (mu_of_z(law, zp) - mu_of_z(law, zm)) / (2 * eps);
        CHECK(der.v[i] == doctest::Approx(fd).epsilon(1e-6));
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            RealVec zpp, zpm, zmp, zmm;
            zpp[i] += eps; zpp[j] += eps;
            zpm[i] += eps; zpm[j] -= eps;
            zmp[i] -= eps; zmp[j] += eps;
            zmm[i] -= eps; zmm[j] -= eps;
            double fd = (mu_of_z(law, zpp) - mu_of_z(law, zpm) - mu_of_z(law, zmp) +
                         mu_of_z(law, zmm)) /
                        (4 * eps * eps);
            double ref = der.sigma.at(i, j);
            if (std::abs(ref) < 1e-10)
                CHECK(std::abs(fd) < 1e-6);
            else
                CHECK(ref == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("moment-sequence route agrees with the table route") {
    auto pl = PotentialLaw::deterministic(0.0);
    RealVec h = RealVec::on_axis(1.0);
    ConeSpec cone(2, h, 0.25);
    auto w = Weighting::annealed_of(pl, 0.0);
    const int N = 36;

    auto seq = exactenum::cone_dp_moment_sequences(w, cone, h, N);
    auto sm = model_from_sequences(seq);

    auto t = exactenum::cone_dp_tables(w, cone, h, N);
    auto raw = exactenum::irreducible_from_t(t);
    auto law = make_irreducible_law(raw, N, 2, "tables");
    auto der = speed_and_diffusivity(law);

    CHECK(sm.lambda == doctest::Approx(law.lambda).epsilon(1e-12));
    CHECK(sm.der.kappa0 == doctest::Approx(der.kappa0).epsilon(1e-10));
    for (int i = 0; i < 2; ++i) CHECK(sm.der.v[i] == doctest::Approx(der.v[i]).epsilon(1e-10));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(sm.der.sigma.at(i, j) ==
                  doctest::Approx(der.sigma.at(i, j)).epsilon(1e-9));
    for (int n = 1; n <= N; ++n)
        CHECK(sm.f_mass[static_cast<size_t>(n)] == doctest::Approx(law.mass(n)).epsilon(1e-9));
}

TEST_CASE("beta = 0 closed forms for v and Sigma (truncation-limited)") {
    TiltedWalk tw{2, 1.0};
    auto pl = PotentialLaw::deterministic(0.0);
    RealVec h = RealVec::on_axis(1.0);
    ConeSpec cone(2, h, 0.25);
    auto seq = exactenum::cone_dp_moment_sequences(Weighting::annealed_of(pl, 0.0), cone, h, 80);
    auto sm = model_from_sequences(seq);
    const auto& der = sm.der;
    // tail truncation at N = 80 leaves ~1e-4 bias in v and ~2e-3 in Sigma_11;
    // the acceptance suite pushes the horizon far enough for 1e-6.
    CHECK(der.v[0] == doctest::Approx(tw.v1()).epsilon(3e-4));
    CHECK(std::abs(der.v[1]) < 1e-10);  // lattice symmetry
    CHECK(der.sigma.at(0, 0) == doctest::Approx(tw.sigma11()).epsilon(8e-3));
    CHECK(der.sigma.at(1, 1) == doctest::Approx(tw.sigma_perp()).epsilon(1e-3));
    CHECK(std::abs(der.sigma.at(0, 1)) < 1e-10);
    CHECK(der.sigma_positive_definite);
}

TEST_CASE("renewal mass: deterministic and geometric step laws") {
    {
        LengthTables raw(2);
        raw[1][unit_point(0, 1)] = 1.0;
        auto law = make_irreducible_law(raw, 1, 2, "unit step");
        auto rep = renewal_mass(law, 50);
        CHECK(rep.kappa0 == doctest::Approx(1.0));
        for (double t : rep.t) CHECK(t == doctest::Approx(1.0).epsilon(1e-14));
    }
    {
        double q = 0.35;
        auto law = make_irreducible_law(geometric_raw(q, 60), 60, 2, "geometric");
        auto rep = renewal_mass(law, 40);
        for (int n = 1; n <= 40; ++n)
            CHECK(rep.t[static_cast<size_t>(n)] == doctest::Approx(1 - q).epsilon(1e-10));
        CHECK(1.0 / rep.kappa0 == doctest::Approx(1 - q).epsilon(1e-10));
    }
}

TEST_CASE("renewal mass error decays exponentially for the walk law") {
    auto law = beta0_law(2, 1.0, 24);
    auto rep = renewal_mass(law, 200);
    CHECK(rep.err[200] < 1e-8);
    CHECK(rep.fitted_rate > 0.05);
    CHECK(rep.err[200] < rep.err[40]);
}

TEST_CASE("annealed clt: reflection symmetry and alpha = 0") {
    auto law = beta0_law(2, 1.0, 24);
    auto der = speed_and_diffusivity(law);
    std::vector<RealVec> alphas = {RealVec::on_axis(0.0), RealVec::on_axis(0.8),
                                   RealVec::on_axis(-0.8)};
    auto rep = annealed_clt_check(law, der, alphas, {30, 120});
    // alpha = 0 reduces to the renewal mass limit; deviation shrinks with n
    CHECK(rep.points[1].deviation < 1e-5);
    CHECK(rep.points[1].deviation < rep.points[0].deviation);
    // reflection alpha -> -alpha conjugates S
    CHECK(rep.points[2].s_n.real() == doctest::Approx(rep.points[4].s_n.real()).epsilon(1e-12));
    CHECK(rep.points[2].s_n.imag() == doctest::Approx(-rep.points[4].s_n.imag()).epsilon(1e-12));
    CHECK(std::abs(rep.points[2].deviation - rep.points[4].deviation) < 1e-12);
}

TEST_CASE("imaginary-axis mu agrees with the clt phase") {
    auto law = beta0_law(2, 1.0, 30);
    auto mu = mu_of_imag(law, RealVec::on_axis(0.3));
    // e^{-n mu(i a)} T_n(a) -> 1/kappa(a): check |T_n| ~ e^{-n Re mu} growth rate
    CHECK(std::abs(mu_of_imag(law, RealVec{}).real()) < 1e-15);
    CHECK(std::isfinite(mu.real()));
    CHECK(std::isfinite(mu.imag()));
    // mu(ia) + mu(-ia) is real by symmetry of the law in its second argument
    auto mu2 = mu_of_imag(law, RealVec::on_axis(-0.3));
    CHECK(mu.real() == doctest::Approx(mu2.real()).epsilon(1e-10));
    CHECK(mu.imag() == doctest::Approx(-mu2.imag()).epsilon(1e-10));
}

TEST_CASE("local bound: positive constant, stable between horizons") {
    auto law = beta0_law(2, 1.0, 20);
    auto der = speed_and_diffusivity(law);
    auto t40 = renewal_convolve(law, 40);
    auto t60 = renewal_convolve(law, 60);
    for (int n = 1; n <= 60; ++n)
        for (const auto& [x, w] : t60[static_cast<size_t>(n)]) CHECK(l1_norm(x) <= n);
    double c40 = local_bound_check(t40, der.v, 2);
    double c60 = local_bound_check(t60, der.v, 2);
    CHECK(c40 > 0);
    CHECK(c60 > 0);
    CHECK(std::abs(c40 - c60) <= 0.2 * c40);
}

TEST_CASE("closed-form walk model agrees with the fitted pipeline") {
    RealVec h = RealVec::on_axis(1.0);
    auto closed = tilted_walk_model(2, h);
    TiltedWalk tw{2, 1.0};
    CHECK(closed.lambda == doctest::Approx(tw.lambda()).epsilon(1e-14));
    CHECK(closed.v[0] == doctest::Approx(tw.v1()).epsilon(1e-14));
    CHECK(closed.sigma.at(0, 0) == doctest::Approx(tw.sigma11()).epsilon(1e-14));
    CHECK(closed.sigma_positive_definite);
    // the fitted route approaches it
    auto pl = PotentialLaw::deterministic(0.0);
    ConeSpec cone(2, h, 0.25);
    auto seq = exactenum::cone_dp_moment_sequences(Weighting::annealed_of(pl, 0.0), cone, h, 60);
    auto sm = renewal::model_from_sequences(seq);
    CHECK(std::abs(sm.der.v[0] - closed.v[0]) < 1e-3);
    CHECK(std::abs(sm.lambda - closed.lambda) < 1e-4);
}

TEST_CASE("model serialization carries the fitted quantities") {
    auto law = beta0_law(2, 1.0, 16);
    auto model = make_model(law, RealVec::on_axis(1.0), 0.0, ConeSpec::default_delta(2));
    std::string js = model_to_json(model);
    CHECK(js.find("\"lambda\"") != std::string::npos);
    CHECK(js.find("\"sigma\"") != std::string::npos);
    CHECK(js.find("\"kappa0\"") != std::string::npos);
    CHECK(model.sigma_positive_definite);
}
