#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "ellw/config.hpp"
#include "ellw/errors.hpp"

// Jacobi theta functions theta_a(u|tau), a = 1..4, with the unit/tau period
// lattice convention (q = e^{i pi tau}):
//
//   theta1(u) = 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi u)
//   theta2(u) = 2 sum_{k>=0}        q^{(k+1/2)^2} cos((2k+1) pi u)
//   theta3(u) = 1 + 2 sum_{k>=1}        q^{k^2} cos(2 pi k u)
//   theta4(u) = 1 + 2 sum_{k>=1} (-1)^k q^{k^2} cos(2 pi k u)
//
// theta1 is odd, the others even. Before summation the argument is reduced by
// integer lattice shifts u -> u - m - n*tau and the exact quasi-periodicity
// prefactors are reapplied, so evaluations stay accurate for arguments far
// from the fundamental cell. Analytic u- and tau-derivatives are produced by
// term-wise differentiation of the same series (never finite differences).

namespace ellw {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;

enum class ThetaIndex : int { one = 1, two = 2, three = 3, four = 4 };

inline ThetaIndex theta_index(int a) {
    if (a < 1 || a > 4) throw DomainError("theta index must be in {1,2,3,4}, got " + std::to_string(a));
    return static_cast<ThetaIndex>(a);
}

inline int as_int(ThetaIndex a) { return static_cast<int>(a); }

// Modular parameter tau with Im tau >= y_min.
class ModularParam {
  public:
    explicit ModularParam(cplx tau, const ThetaConfig& cfg = {}) : tau_(tau) {
        if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
            throw DomainError("tau must be finite");
        if (tau.imag() < cfg.y_min)
            throw DomainError("Im tau = " + std::to_string(tau.imag()) + " below y_min = " +
                              std::to_string(cfg.y_min));
        purely_imaginary_ = std::abs(tau.real()) < 1e-14;
    }

    cplx tau() const { return tau_; }
    double y() const { return tau_.imag(); }
    bool purely_imaginary() const { return purely_imaginary_; }

  private:
    cplx tau_;
    bool purely_imaginary_;
};

// Argument of a theta-level function: u together with tau.
struct ModularPoint {
    ModularPoint(cplx u, ModularParam tau) : u(u), tau(tau) {
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
            throw DomainError("u must be finite");
    }
    cplx u;
    ModularParam tau;
};

namespace detail {

inline constexpr cplx kI{0.0, 1.0};

// Lattice reduction u = v + m + n*tau with |Re v| <= 1/2 (+rounding) and
// |Im v| <= Im(tau)/2. theta_a(u) = K * exp(-2 pi i n v) * theta_a(v) with
// K = mu_a(m) * eps_a^n * q^{-n^2}:
//   mu = (-1)^m for a = 1,2 (unit shift), 1 otherwise,
//   eps = -1 for a = 1,4 (tau shift sign), +1 for a = 2,3.
struct Reduction {
    cplx v;
    long long m = 0, n = 0;
    cplx K{1.0, 0.0};
};

inline Reduction reduce_argument(ThetaIndex a, cplx u, cplx tau) {
    Reduction r;
    r.n = std::llround(u.imag() / tau.imag());
    cplx v1 = u - static_cast<double>(r.n) * tau;
    r.m = std::llround(v1.real());
    r.v = v1 - static_cast<double>(r.m);
    if (r.m == 0 && r.n == 0) return r;
    const int ai = as_int(a);
    double sign = 1.0;
    if ((ai == 1 || ai == 2) && (r.m % 2 != 0)) sign = -sign;
    if ((ai == 1 || ai == 4) && (r.n % 2 != 0)) sign = -sign;
    // q^{-n^2} = exp(-i pi tau n^2)
    const double n2 = static_cast<double>(r.n) * static_cast<double>(r.n);
    r.K = sign * std::exp(-kI * kPi * tau * n2);
    return r;
}

// Term-wise q-series at an already-reduced argument v. Writes
// d/dv^j theta_a(v|tau) for j = 0..order into out. If tau_deriv is non-null,
// also accumulates the partial tau-derivative (term-wise i pi m_k^2 factors).
inline void theta_series(ThetaIndex a, cplx v, cplx tau, int order, cplx* out,
                         cplx* tau_deriv, const ThetaConfig& cfg) {
    const int ai = as_int(a);
    const bool half = (ai == 1 || ai == 2);           // half-integer indices
    const bool sin_base = (ai == 1);                  // theta1 is the sine series
    const cplx q2 = std::exp(kI * kPi * tau * 2.0);   // q^2
    // running q^{m_k^2} and the step ratio q^{m_{k+1}^2 - m_k^2}
    cplx qpow = half ? std::exp(kI * kPi * tau * 0.25) : cplx{1.0, 0.0};
    cplx qstep = half ? q2 : std::exp(kI * kPi * tau);  // q^2 (half) or q (int, k=0->1)
    // e^{+-2 pi i m_k v}, stepped by e^{+-2 pi i v}
    const cplx estep_p = std::exp(2.0 * kPi * kI * v);
    const cplx estep_n = std::exp(-2.0 * kPi * kI * v);
    cplx ep = half ? std::exp(kPi * kI * v) : cplx{1.0, 0.0};
    cplx en = half ? std::exp(-kPi * kI * v) : cplx{1.0, 0.0};

    std::vector<double> scale(static_cast<size_t>(order) + 1, 0.0);
    double scale_tau = 0.0;
    for (int j = 0; j <= order; ++j) out[j] = 0.0;
    if (tau_deriv) *tau_deriv = 0.0;

    if (!half) {
        // constant term of theta3/theta4
        out[0] = 1.0;
        scale[0] = 1.0;
        ep = estep_p;
        en = estep_n;
        qpow = std::exp(kI * kPi * tau);  // q^{1^2}
        qstep = std::exp(kI * kPi * tau) * q2;  // q^{(k+1)^2 - k^2} starting at k=1
    }

    const int k_begin = half ? 0 : 1;
    for (int k = k_begin; ; ++k) {
        if (k - k_begin >= cfg.max_terms)
            throw TruncationError("theta q-series hit the " + std::to_string(cfg.max_terms) +
                                  "-term cap before converging");
        const double mk = half ? (k + 0.5) : static_cast<double>(k);
        double coeff = 2.0;
        if (ai == 1 && (k % 2 != 0)) coeff = -coeff;
        if (ai == 4 && (k % 2 != 0)) coeff = -coeff;
        const cplx base = coeff * qpow;
        const cplx s = (ep - en) / (2.0 * kI);  // sin(2 pi m_k v)
        const cplx c = (ep + en) * 0.5;         // cos(2 pi m_k v)

        bool converged = true;
        double fac = 1.0;  // (2 pi m_k)^j
        for (int j = 0; j <= order; ++j) {
            // j-th derivative of sin -> {sin, cos, -sin, -cos}; of cos -> {cos, -sin, -cos, sin}
            cplx trig;
            const int phase = (sin_base ? j : j + 1) % 4;
            switch (phase) {
                case 0: trig = s; break;
                case 1: trig = c; break;
                case 2: trig = -s; break;
                default: trig = -c; break;
            }
            const cplx term = base * fac * trig;
            out[j] += term;
            const double tmag = std::abs(term);
            scale[j] = std::max({scale[j], std::abs(out[j]), tmag});
            if (tmag > cfg.term_tol * scale[j]) converged = false;
            fac *= 2.0 * kPi * mk;
        }
        if (tau_deriv) {
            const cplx term = base * (kI * kPi * mk * mk) * (sin_base ? s : c);
            *tau_deriv += term;
            const double tmag = std::abs(term);
            scale_tau = std::max({scale_tau, std::abs(*tau_deriv), tmag});
            if (tmag > cfg.term_tol * scale_tau) converged = false;
        }
        qpow *= qstep;
        qstep *= q2;
        ep *= estep_p;
        en *= estep_n;
        if (converged && k - k_begin >= 1) break;
    }
}

inline long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

// Derivatives d^j/du^j theta_a(u|tau) for j = 0..order, with argument
// reduction. order is only capped by the series conditioning (callers in the
// Taylor machinery go up to ~18); the public theta_eval enforces the du <= 4
// contract itself.
inline void theta_derivs(ThetaIndex a, cplx u, const ModularParam& tau, int order,
                         std::span<cplx> out, const ThetaConfig& cfg = {}) {
    if (order < 0 || out.size() < static_cast<size_t>(order) + 1)
        throw DomainError("theta_derivs: bad order/output span");
    const auto red = detail::reduce_argument(a, u, tau.tau());
    std::vector<cplx> inner(static_cast<size_t>(order) + 1);
    detail::theta_series(a, red.v, tau.tau(), order, inner.data(), nullptr, cfg);
    if (red.n == 0) {
        for (int j = 0; j <= order; ++j) out[j] = red.K * inner[j];
        return;
    }
    const cplx pref = red.K * std::exp(-2.0 * kPi * detail::kI * static_cast<double>(red.n) * red.v);
    const cplx g{0.0, -2.0 * kPi * static_cast<double>(red.n)};  // d/dv of the exponential
    for (int d = 0; d <= order; ++d) {
        cplx acc = 0.0;
        cplx gp = 1.0;
        for (int j = d; j >= 0; --j) {  // gp = g^{d-j}
            acc += static_cast<double>(detail::binom(d, j)) * gp * inner[j];
            gp *= g;
        }
        out[d] = pref * acc;
    }
}

// d^{du_order}/du^{du_order} theta_a(u|tau); du_order <= 4 by contract.
inline cplx theta_eval(ThetaIndex a, const ModularPoint& p, int du_order = 0,
                       const ThetaConfig& cfg = {}) {
    if (du_order < 0 || du_order > 4)
        throw DomainError("theta_eval: du_order must be in [0,4]");
    std::vector<cplx> out(static_cast<size_t>(du_order) + 1);
    theta_derivs(a, p.u, p.tau, du_order, out, cfg);
    return out[static_cast<size_t>(du_order)];
}

// Distance from u to the zero lattice of theta_a, measured in the reduced
// fundamental cell. Zeros: theta1 at 0, theta2 at 1/2, theta3 at (1+tau)/2,
// theta4 at tau/2 (mod 1, tau).
inline double theta_zero_distance(ThetaIndex a, cplx u, const ModularParam& tau) {
    const cplx t = tau.tau();
    cplx base;
    switch (as_int(a)) {
        case 1: base = 0.0; break;
        case 2: base = 0.5; break;
        case 3: base = 0.5 + 0.5 * t; break;
        default: base = 0.5 * t; break;
    }
    cplx w = u - base;
    const long long n = std::llround(w.imag() / t.imag());
    cplx v1 = w - static_cast<double>(n) * t;
    const long long m = std::llround(v1.real());
    const cplx v = v1 - static_cast<double>(m);
    double dist = std::numeric_limits<double>::infinity();
    for (int mm = -1; mm <= 1; ++mm)
        for (int nn = -1; nn <= 1; ++nn)
            dist = std::min(dist, std::abs(v - (static_cast<double>(mm) + static_cast<double>(nn) * t)));
    return dist;
}

inline void require_off_zero(ThetaIndex a, cplx u, const ModularParam& tau, const char* where,
                             const ThetaConfig& cfg = {}) {
    const double d = theta_zero_distance(a, u, tau);
    if (d < cfg.pole_guard) throw PoleError(where, as_int(a), u, d, cfg.pole_guard);
}

// E^{(a)}(u) = d/du log theta_a(u|tau). Lattice shifts contribute the exact
// -2 pi i n offset from the quasi-periodicity prefactor.
inline cplx theta_log_derivative(ThetaIndex a, const ModularPoint& p, const ThetaConfig& cfg = {}) {
    require_off_zero(a, p.u, p.tau, "theta_log_derivative", cfg);
    const auto red = detail::reduce_argument(a, p.u, p.tau.tau());
    cplx inner[2];
    detail::theta_series(a, red.v, p.tau.tau(), 1, inner, nullptr, cfg);
    return -2.0 * kPi * detail::kI * static_cast<double>(red.n) + inner[1] / inner[0];
}

// Analytic partial d/dtau theta_a(u|tau) at fixed u, by term-wise
// differentiation (each q-series term carries i pi m_k^2). With the reduction
// u = v + m + n tau the fixed-u chain rule gives
//   d_tau theta(u) = P(v) [ i pi n^2 theta(v) - n theta'(v) + dot-theta(v) ].
inline cplx theta_tau_derivative(ThetaIndex a, const ModularPoint& p, const ThetaConfig& cfg = {}) {
    const auto red = detail::reduce_argument(a, p.u, p.tau.tau());
    cplx inner[2];
    cplx tdot;
    detail::theta_series(a, red.v, p.tau.tau(), 1, inner, &tdot, cfg);
    if (red.n == 0) return red.K * tdot;
    const double n = static_cast<double>(red.n);
    const cplx pref = red.K * std::exp(-2.0 * kPi * detail::kI * n * red.v);
    return pref * (detail::kI * kPi * n * n * inner[0] - n * inner[1] + tdot);
}

}  // namespace ellw
