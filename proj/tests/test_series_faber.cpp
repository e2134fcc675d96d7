#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ellw/faber.hpp"
#include "ellw/series.hpp"
#include "oracles.hpp"

using namespace ellw;

namespace {
ModularParam mp(double y) { return ModularParam(cplx(0.0, y)); }

// S' and S'' from the direct defining series only.
cplx sp_direct(cplx w, cplx tau) {
    return oracle::theta_direct(1, w, tau, 1) / oracle::theta_direct(1, w, tau) -
           oracle::theta_direct(4, w, tau, 1) / oracle::theta_direct(4, w, tau);
}
cplx spp_direct(cplx w, cplx tau) {
    auto e2 = [&](int a) {
        const cplx t0 = oracle::theta_direct(a, w, tau);
        const cplx t1 = oracle::theta_direct(a, w, tau, 1);
        const cplx t2 = oracle::theta_direct(a, w, tau, 2);
        return t2 / t0 - (t1 / t0) * (t1 / t0);
    };
    return e2(1) - e2(4);
}
}  // namespace

TEST_CASE("TailSeries arithmetic") {
    const TailSeries a({cplx(1.0, 0.0), cplx(0.0, 2.0)});  // z^-1 + 2i z^-2
    const TailSeries b({cplx(0.0, 0.0), cplx(3.0, 0.0)});  // 3 z^-2
    const TailSeries ab = tail_mul(a, b, 4);
    CHECK(ab.coeff(1) == cplx(0.0, 0.0));
    CHECK(ab.coeff(2) == cplx(0.0, 0.0));
    CHECK(ab.coeff(3) == cplx(3.0, 0.0));
    CHECK(ab.coeff(4) == cplx(0.0, 6.0));

    // eval agrees with the naive sum
    const cplx z(3.0, 1.0);
    CHECK(std::abs(a.eval(z) - (1.0 / z + cplx(0.0, 2.0) / (z * z))) < 1e-16);

    // composition: u + u^2 with u = z^-1 gives z^-1 + z^-2
    const TailSeries u({cplx(1.0, 0.0)});
    const cplx tt[] = {cplx(1.0, 0.0), cplx(1.0, 0.0)};
    const TailSeries comp = compose_taylor_tail(std::span<const cplx>(tt, 2), u, 3);
    CHECK(comp.coeff(1) == cplx(1.0, 0.0));
    CHECK(comp.coeff(2) == cplx(1.0, 0.0));
    CHECK(comp.coeff(3) == cplx(0.0, 0.0));

    CHECK_THROWS_AS(TailSeries(std::vector<cplx>{}), DomainError);
}

TEST_CASE("series division recurrence") {
    // f/g with f = 1 + u, g = 1 - u: h = 1 + 2u + 2u^2 + ...
    const std::vector<cplx> f = {1.0, 1.0}, g = {1.0, -1.0};
    const auto h = series_divide(f, g, 4);
    CHECK(std::abs(h[0] - 1.0) < 1e-15);
    for (int j = 1; j <= 4; ++j) CHECK(std::abs(h[static_cast<size_t>(j)] - 2.0) < 1e-15);
    CHECK_THROWS_AS(series_divide(f, std::vector<cplx>{0.0, 1.0}, 2), DegenerateError);
}

TEST_CASE("faber: first-order coefficient is exactly c1 S'(v)") {
    const ModularParam tau = mp(1.1);
    const cplx v(0.29, 0.13);
    const TailSeries series({cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)});
    const FaberCoefficients fc = faber_coeffs(series, v, tau);
    // same rounding path: bitwise equality with c1 * stored S'(v)
    CHECK(fc.bprime[0] == series.coeff(1) * fc.sprime_v);
    // and the stored S'(v) agrees with the direct-series route
    CHECK(std::abs(fc.sprime_v - sp_direct(v, tau.tau())) < 1e-13 * std::abs(fc.sprime_v));
}

TEST_CASE("faber: second order against the symbolic composition oracle") {
    const ModularParam tau = mp(1.1);
    const cplx v(0.29, 0.13);
    const cplx c1(1.0, 0.0), c2(0.3, -0.2);
    const FaberCoefficients fc = faber_coeffs(TailSeries({c1, c2}), v, tau);
    const cplx want = 2.0 * c2 * sp_direct(v, tau.tau()) + c1 * c1 * spp_direct(v, tau.tau());
    CHECK(std::abs(fc.bprime[1] - want) < 1e-12 * (1.0 + std::abs(want)));
}

TEST_CASE("faber: contour-extraction oracle on |z| = 30") {
    const ModularParam tau = mp(1.1);
    const cplx tc = tau.tau();
    const cplx v(0.29, 0.13);
    const std::vector<cplx> c = {cplx(1.0, 0.0), cplx(0.3, -0.2), cplx(0.1, 0.05),
                                 cplx(-0.2, 0.1), cplx(0.05, 0.0), cplx(0.0, -0.1)};
    const TailSeries series(c);
    const FaberCoefficients fc = faber_coeffs(series, v, tau);
    auto f = [&](cplx z) {
        const cplx u = series.eval(z);
        return std::log(oracle::theta_direct(1, u + v, tc) * oracle::theta_direct(4, v, tc) /
                        (oracle::theta_direct(4, u + v, tc) * oracle::theta_direct(1, v, tc)));
    };
    for (int k = 1; k <= 6; ++k) {
        const cplx got = fc.bprime[static_cast<size_t>(k) - 1] / static_cast<double>(k);
        const cplx want = oracle::contour_coefficient(f, k, 30.0, 4096);
        INFO("k=" << k);
        CHECK(std::abs(got - want) < 1e-8);
    }
}

TEST_CASE("faber: linearity of B'_1 and oracle equivalence under scaling") {
    const ModularParam tau = mp(0.9);
    const cplx v(0.21, 0.09);
    const std::vector<cplx> c = {cplx(0.7, 0.1), cplx(-0.2, 0.4), cplx(0.1, -0.3)};
    const cplx lam(1.7, -0.4);
    std::vector<cplx> cl = c;
    for (auto& z : cl) z *= lam;
    const FaberCoefficients fc = faber_coeffs(TailSeries(c), v, tau);
    const FaberCoefficients fl = faber_coeffs(TailSeries(cl), v, tau);
    CHECK(std::abs(fl.bprime[0] - lam * fc.bprime[0]) < 1e-12 * std::abs(fl.bprime[0]));
    // higher orders mix per composition: check against the contour oracle
    auto f = [&](cplx z) {
        const cplx u = TailSeries(cl).eval(z);
        return std::log(
            oracle::theta_direct(1, u + v, tau.tau()) * oracle::theta_direct(4, v, tau.tau()) /
            (oracle::theta_direct(4, u + v, tau.tau()) * oracle::theta_direct(1, v, tau.tau())));
    };
    for (int k = 2; k <= 3; ++k) {
        const cplx want = oracle::contour_coefficient(f, k, 20.0, 2048);
        CHECK(std::abs(fl.bprime[static_cast<size_t>(k) - 1] / static_cast<double>(k) - want) <
              1e-10);
    }
}

TEST_CASE("generating relation: d/dv of the S-expansion is the S'-expansion") {
    const ModularParam tau = mp(1.2);
    const cplx v(0.27, 0.11);
    const int n = 6;
    const std::vector<cplx> c = {cplx(1.0, 0.0),  cplx(0.2, -0.1), cplx(-0.15, 0.3),
                                 cplx(0.1, 0.02), cplx(0.0, -0.2), cplx(0.05, 0.05)};
    const TailSeries series(c);

    const double h = 1e-4;
    auto bk_over_k = [&](cplx w, int k) {
        return faber_coeffs(series, w, tau).bprime[static_cast<size_t>(k) - 1] /
               static_cast<double>(k);
    };
    // right side: coefficient extraction of S'(u(z)+v)
    const auto sp = sprime_taylor(v, tau, n);
    const TailSeries sp_comp =
        compose_taylor_tail(std::span<const cplx>(sp.data() + 1, static_cast<size_t>(n)), series, n);
    for (int k = 1; k <= n; ++k) {
        const cplx d1 = (bk_over_k(v + h, k) - bk_over_k(v - h, k)) / (2.0 * h);
        const cplx d2 = (bk_over_k(v + h / 2.0, k) - bk_over_k(v - h / 2.0, k)) / h;
        const cplx lhs = (4.0 * d2 - d1) / 3.0;  // Richardson
        const cplx rhs = sp_comp.coeff(k);
        INFO("k=" << k);
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("velocity table") {
    const ModularParam tau = mp(1.3);
    const double eta = 0.62, kappa = 0.18;
    const std::vector<cplx> c = {cplx(1.0, 0.0), cplx(0.25, -0.15), cplx(-0.1, 0.2)};
    std::vector<cplx> cb;
    for (const cplx& z : c) cb.push_back(std::conj(z));

    const VelocityTable vt = velocity_table(eta, kappa, c, cb, tau, 3);
    CHECK(vt.phi[0] == cplx(1.0, 0.0));
    const cplx want_psi0 = -sp_direct(vt.xibar, tau.tau()) / sp_direct(vt.xi, tau.tau());
    CHECK(std::abs(vt.psi[0] - want_psi0) < 1e-12 * (1.0 + std::abs(want_psi0)));

    // conjugate-symmetric data: psi_k = -conj(B'_k(xi)) / S'(xi)
    const FaberCoefficients fc = faber_coeffs(TailSeries(c), vt.xi, tau);
    for (int k = 1; k <= 3; ++k) {
        const cplx want = -std::conj(fc.bprime[static_cast<size_t>(k) - 1]) / vt.sprime_xi;
        CHECK(std::abs(vt.psi[static_cast<size_t>(k)] - want) < 1e-12 * (1.0 + std::abs(want)));
    }

    // S'(xi) vanishes at xi = 1/2 (theta2 zero): degenerate
    CHECK_THROWS_AS(velocity_table(1.0, 0.0, c, cb, tau, 2), DegenerateError);
    // order exceeding the stored series
    CHECK_THROWS_AS(velocity_table(eta, kappa, c, cb, tau, 5), DomainError);
}
