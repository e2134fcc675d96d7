#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ellw/theta.hpp"
#include "oracles.hpp"

using namespace ellw;

namespace {
ModularParam mp(double re, double im) { return ModularParam(cplx(re, im)); }
ModularParam mp(cplx tau) { return ModularParam(tau); }
}  // namespace

TEST_CASE("theta values at the standard point tau = i") {
    const ModularParam tau = mp(0.0, 1.0);

    // theta1 is odd: exact zero at u = 0
    CHECK(theta_eval(ThetaIndex::one, ModularPoint(0.0, tau)) == cplx(0.0, 0.0));

    // straight-line oracle without argument reduction
    const cplx t3 = theta_eval(ThetaIndex::three, ModularPoint(0.0, tau));
    CHECK(std::abs(t3 - oracle::theta_direct(3, 0.0, cplx(0.0, 1.0))) < 1e-15);
    CHECK(t3.real() == Catch::Approx(1.0864348).margin(1e-6));

    // two independent q-sums agree at the self-dual point
    const cplx t2 = theta_eval(ThetaIndex::two, ModularPoint(0.0, tau));
    const cplx t4 = theta_eval(ThetaIndex::four, ModularPoint(0.0, tau));
    CHECK(t2.real() == Catch::Approx(0.9135791).margin(1e-6));
    CHECK(std::abs(t2 - t4) < 1e-12);
    CHECK(std::abs(t2 - oracle::theta_direct(2, 0.0, cplx(0.0, 1.0))) < 1e-15);
    CHECK(std::abs(t4 - oracle::theta_direct(4, 0.0, cplx(0.0, 1.0))) < 1e-15);
}

TEST_CASE("theta derivatives match the direct series for generic arguments") {
    const cplx tau(0.13, 0.9);
    const ModularParam tp = mp(tau);
    const cplx u(0.27, -0.34);
    for (int a = 1; a <= 4; ++a) {
        for (int d = 0; d <= 4; ++d) {
            const cplx got = theta_eval(theta_index(a), ModularPoint(u, tp), d);
            const cplx want = oracle::theta_direct(a, u, tau, d);
            INFO("a=" << a << " d=" << d);
            CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("argument reduction reproduces far-out evaluations") {
    const cplx tau(0.0, 0.7);
    const ModularParam tp = mp(tau);
    const cplx u(0.21, 0.17);
    // shift by m + n tau and compare against the direct series at the shifted point
    for (int m : {-3, 2}) {
        for (int n : {-2, 3}) {
            const cplx us = u + static_cast<double>(m) + static_cast<double>(n) * tau;
            for (int a = 1; a <= 4; ++a) {
                const cplx got = theta_eval(theta_index(a), ModularPoint(us, tp));
                const cplx want = oracle::theta_direct(a, us, tau, 0, 80);
                INFO("a=" << a << " m=" << m << " n=" << n);
                CHECK(std::abs(got - want) <= 1e-11 * (1.0 + std::abs(want)));
            }
        }
    }
    // first derivative through the reduction prefactor
    const cplx us = u - 2.0 + 2.0 * tau;
    for (int a = 1; a <= 4; ++a) {
        const cplx got = theta_eval(theta_index(a), ModularPoint(us, tp), 1);
        const cplx want = oracle::theta_direct(a, us, tau, 1, 80);
        CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("parity and quasi-periodicity over random lattice-avoiding samples") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ud(-0.45, 0.45), yd(0.4, 2.2);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const double y = yd(rng);
        const cplx tau(0.0, y);
        const ModularParam tp = mp(tau);
        const cplx u(ud(rng), ud(rng) * y);
        bool near = false;
        for (int a = 1; a <= 4; ++a)
            near = near || theta_zero_distance(theta_index(a), u, tp) < 0.05;
        if (near) continue;
        ++checked;
        const cplx lam = std::exp(-detail::kI * kPi * tau - 2.0 * kPi * detail::kI * u);
        for (int a = 1; a <= 4; ++a) {
            const ThetaIndex ai = theta_index(a);
            const cplx t_u = theta_eval(ai, ModularPoint(u, tp));
            const cplx t_mu = theta_eval(ai, ModularPoint(-u, tp));
            const double parity = a == 1 ? std::abs(t_mu + t_u) : std::abs(t_mu - t_u);
            CHECK(parity < 1e-13 * (1.0 + std::abs(t_u)));

            const cplx t_u1 = theta_eval(ai, ModularPoint(u + 1.0, tp));
            const double sign1 = (a == 1 || a == 2) ? -1.0 : 1.0;
            CHECK(std::abs(t_u1 - sign1 * t_u) < 1e-12 * (1.0 + std::abs(t_u)));

            const cplx t_ut = theta_eval(ai, ModularPoint(u + tau, tp));
            const double signt = (a == 1 || a == 4) ? -1.0 : 1.0;
            CHECK(std::abs(t_ut - signt * lam * t_u) < 1e-12 * (1.0 + std::abs(lam * t_u)));
        }
    }
    CHECK(checked > 700);
}

TEST_CASE("heat relation: 4 pi i d_tau theta = d_u^2 theta") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ud(-0.45, 0.45), yd(0.4, 2.0), xd(-0.3, 0.3);
    for (int i = 0; i < 250; ++i) {
        const cplx tau(xd(rng), yd(rng));
        const ModularParam tp = mp(tau);
        const cplx u(ud(rng), ud(rng) * tau.imag());
        for (int a = 1; a <= 4; ++a) {
            const ModularPoint p(u, tp);
            const cplx lhs = cplx(0.0, 4.0 * kPi) * theta_tau_derivative(theta_index(a), p);
            const cplx rhs = theta_eval(theta_index(a), p, 2);
            INFO("a=" << a << " u=" << u << " tau=" << tau);
            CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
        }
    }
    // FD-in-tau oracle at one point (independent of the term-wise route)
    const cplx tau(0.0, 1.1);
    const cplx u(0.23, 0.31);
    auto f = [&](cplx t) { return oracle::theta_direct(3, u, t); };
    const cplx fd = oracle::richardson_diff(f, tau, 1e-4);
    const cplx got = theta_tau_derivative(ThetaIndex::three, ModularPoint(u, mp(tau)));
    CHECK(std::abs(got - fd) < 1e-9);
}

TEST_CASE("theta1prime identity on a tau grid") {
    for (double y : {0.3, 0.5, 1.0, 2.0, 3.0}) {
        const ModularParam tp = mp(0.0, y);
        const ModularPoint p0(0.0, tp);
        const cplx lhs = theta_eval(ThetaIndex::one, p0, 1);
        const cplx rhs = kPi * theta_eval(ThetaIndex::two, p0) * theta_eval(ThetaIndex::three, p0) *
                         theta_eval(ThetaIndex::four, p0);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    }
}

TEST_CASE("conjugation symmetry for purely imaginary tau") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(-0.45, 0.45), yd(0.4, 2.0);
    for (int i = 0; i < 200; ++i) {
        const ModularParam tp = mp(0.0, yd(rng));
        const cplx u(ud(rng), ud(rng) * tp.y());
        for (int a = 1; a <= 4; ++a) {
            const cplx t_cu = theta_eval(theta_index(a), ModularPoint(std::conj(u), tp));
            const cplx t_u = theta_eval(theta_index(a), ModularPoint(u, tp));
            CHECK(std::abs(t_cu - std::conj(t_u)) < 1e-13 * (1.0 + std::abs(t_u)));
        }
    }
}

TEST_CASE("log derivative: simple pole of theta1 near u = 0") {
    const ModularParam tau = mp(0.0, 1.0);
    const cplx e1 = theta_log_derivative(ThetaIndex::one, ModularPoint(0.01, tau));
    CHECK(std::abs(e1 - 100.0) < 1.0);  // E1(u) ~ 1/u + O(u)

    // theta2 even => E2(0) = 0
    CHECK(std::abs(theta_log_derivative(ThetaIndex::two, ModularPoint(0.0, tau))) < 1e-14);

    // FD + Richardson oracle at a generic point
    const ModularParam tp = mp(0.0, 1.2);
    const cplx u(0.3, 0.1);
    auto logth = [&](cplx w) { return std::log(oracle::theta_direct(1, w, cplx(0.0, 1.2))); };
    const cplx fd = oracle::richardson_diff(logth, u, 1e-4);
    const cplx got = theta_log_derivative(ThetaIndex::one, ModularPoint(u, tp));
    CHECK(std::abs(got - fd) < 1e-10);
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(mp(0.0, 0.01), DomainError);  // below y_min
    CHECK_THROWS_AS(theta_index(5), DomainError);
    const ModularParam tau = mp(0.0, 1.0);
    CHECK_THROWS_AS(theta_eval(ThetaIndex::one, ModularPoint(0.1, tau), 5), DomainError);
    CHECK_THROWS_AS(theta_log_derivative(ThetaIndex::one, ModularPoint(cplx(1e-5, 0.0), tau)),
                    PoleError);
    // term cap
    ThetaConfig tight;
    tight.max_terms = 2;
    tight.y_min = 0.05;
    CHECK_THROWS_AS(theta_eval(ThetaIndex::three, ModularPoint(0.3, mp(0.0, 0.06)), 0, tight),
                    TruncationError);
    // NaN rejection
    CHECK_THROWS_AS(ModularPoint(cplx(std::nan(""), 0.0), tau), DomainError);
}

TEST_CASE("tau derivative examples") {
    const ModularParam tau = mp(0.0, 1.0);
    // theta1(0|tau) = 0 for all tau, so its tau-derivative vanishes
    CHECK(std::abs(theta_tau_derivative(ThetaIndex::one, ModularPoint(0.0, tau))) < 1e-15);
    // single-term asymptotics for large y: d_tau theta3(0) ~ 2 i pi e^{i pi tau}
    const cplx big(0.0, 6.0);
    const cplx got = theta_tau_derivative(ThetaIndex::three, ModularPoint(0.0, mp(big)));
    const cplx lead = 2.0 * oracle::I * oracle::pi * std::exp(oracle::I * oracle::pi * big);
    CHECK(std::abs(got - lead) < 1e-4 * std::abs(lead));
}
