#pragma once

#include <complex>
#include <vector>

#include "ellw/elliptic.hpp"
#include "ellw/loewner.hpp"
#include "ellw/series.hpp"

// Elliptic Faber coefficients and reduction velocities. Composing the local
// expansion of S around v with a Laurent tail u(z) = sum c_k z^{-k} produces
//   S(u(z)+v) = S(v) + sum_{k>=1} z^{-k} B'_k(v) / k,
// which defines B'_k operationally as k times the z^{-k} coefficient (the
// printed z^0 term of the source expansion is S'(v), which Taylor composition
// cannot produce; we keep the coefficient-extraction definition and the
// convention B'_0(v) = S'(v)). Velocities of the reduced hydrodynamic
// hierarchy are phi_k = B'_k(xi)/S'(xi) and psi_k = -Bb'_k(xibar)/S'(xi),
// the barred coefficients coming from the conjugate series.

namespace ellw {

struct FaberCoefficients {
    int order = 0;
    cplx v;                    // expansion base point
    cplx sprime_v;             // B'_0(v) = S'(v), from the same Taylor machinery
    std::vector<cplx> bprime;  // bprime[k-1] = B'_k(v), k = 1..order
};

inline FaberCoefficients faber_coeffs(const TailSeries& series, cplx v, const ModularParam& tau,
                                      const ThetaConfig& cfg = {}) {
    const int n = series.order();
    // sp[j] = S^{(j+1)}(v) / j!  ->  Taylor tail a_m = S^{(m)}(v)/m! = sp[m-1]/m
    const auto sp = sprime_taylor(v, tau, n - 1, cfg);
    std::vector<cplx> taylor_tail(static_cast<size_t>(n));
    for (int m = 1; m <= n; ++m)
        taylor_tail[static_cast<size_t>(m) - 1] = sp[static_cast<size_t>(m) - 1] / static_cast<double>(m);
    const TailSeries composed = compose_taylor_tail(taylor_tail, series, n);
    FaberCoefficients fc;
    fc.order = n;
    fc.v = v;
    fc.sprime_v = sp[0];
    fc.bprime.resize(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k)
        fc.bprime[static_cast<size_t>(k) - 1] = static_cast<double>(k) * composed.coeff(k);
    return fc;
}

// phi_k, psi_k at one reduction state; index k runs 0..order.
struct VelocityTable {
    int order = 0;
    cplx xi, xibar;
    cplx tau;
    cplx sprime_xi, sprime_xibar;
    std::vector<cplx> phi, psi;
};

// Component-level evaluation; eta and kappa may be complex (continued states).
inline VelocityTable velocity_table(cplx eta, cplx kappa, const std::vector<cplx>& series,
                                    const std::vector<cplx>& series_bar, const ModularParam& tau,
                                    int order, const ThetaConfig& cfg = {}) {
    if (order < 0) throw DomainError("velocity_table: order must be >= 0");
    if (order > static_cast<int>(series.size()) || order > static_cast<int>(series_bar.size()))
        throw DomainError("velocity_table: order exceeds the stored series order");
    const cplx xi = eta / 2.0 + detail::kI * kappa;
    const cplx xibar = eta - xi;

    VelocityTable vt;
    vt.order = order;
    vt.xi = xi;
    vt.xibar = xibar;
    vt.tau = tau.tau();
    vt.phi.assign(static_cast<size_t>(order) + 1, cplx{0.0, 0.0});
    vt.psi.assign(static_cast<size_t>(order) + 1, cplx{0.0, 0.0});

    if (order == 0) {
        vt.sprime_xi = sprime(xi, tau, cfg);
        vt.sprime_xibar = sprime(xibar, tau, cfg);
        if (std::abs(vt.sprime_xi) <= 1e-10)
            throw DegenerateError("velocity_table: |S'(xi)| below 1e-10");
        vt.phi[0] = 1.0;
        vt.psi[0] = -vt.sprime_xibar / vt.sprime_xi;
        return vt;
    }

    const auto fc = faber_coeffs(TailSeries(series).truncated(order), xi, tau, cfg);
    const auto fcb = faber_coeffs(TailSeries(series_bar).truncated(order), xibar, tau, cfg);
    vt.sprime_xi = fc.sprime_v;
    vt.sprime_xibar = fcb.sprime_v;
    if (std::abs(vt.sprime_xi) <= 1e-10)
        throw DegenerateError("velocity_table: |S'(xi)| below 1e-10");
    vt.phi[0] = 1.0;
    vt.psi[0] = -vt.sprime_xibar / vt.sprime_xi;
    for (int k = 1; k <= order; ++k) {
        vt.phi[static_cast<size_t>(k)] = fc.bprime[static_cast<size_t>(k) - 1] / vt.sprime_xi;
        vt.psi[static_cast<size_t>(k)] = -fcb.bprime[static_cast<size_t>(k) - 1] / vt.sprime_xi;
    }
    return vt;
}

inline VelocityTable velocities(const ReductionState& state, int order, const ThetaConfig& cfg = {}) {
    const ModularParam tau(cplx(0.0, state.y), cfg);
    return velocity_table(state.eta, state.kappa, state.series, state.series_bar, tau, order, cfg);
}

inline VelocityTable velocities(const ComplexReductionState& state, cplx tau, cplx kappa, int order,
                                const ThetaConfig& cfg = {}) {
    return velocity_table(state.eta, kappa, state.c, state.cb, ModularParam(tau, cfg), order, cfg);
}

}  // namespace ellw
