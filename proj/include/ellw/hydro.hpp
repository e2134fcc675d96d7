#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ellw/hodograph.hpp"
#include "ellw/parallel.hpp"

// Finite-difference verification of the reduced hydrodynamic hierarchy
//   d(tau)/d(t_k) = phi_k d(tau)/d(t_0),   d(tau)/d(tb_k) = psi_k d(tau)/d(t_0)
// on a grid of time vectors, via the hodograph solution. The partials treat
// t_k and tb_k as independent coordinates, so each centered difference
// re-solves the full complex hodograph relation at perturbed times; since
// tau(t) is holomorphic, a real step in each coordinate recovers the complex
// partial to O(h^2).

namespace ellw {

struct HydroOptions {
    double fd_step = 1e-4;
    SolveOptions solve;
    ComplexSolveOptions complex_solve;
    bool richardson = true;          // repeat at h/2 and estimate orders
    bool cross_derivatives = true;   // mixed-partial symmetry at the middle node
    double order_floor = 1e-11;      // skip order estimates below this residual
    int threads = 0;
};

struct HydroNode {
    TimesVector times;
    double y_star = 0.0;
    cplx lhs_residual;               // lhs - Phi at i y_star (Im = reality diagnostic)
    cplx tau_star;                   // complex root anchoring the FD checks
    std::vector<double> phi_res;     // k = 1..K
    std::vector<double> psi_res;     // k = 0..K
    double l11_res = 0.0;
};

struct EquationStats {
    std::string name;
    double max_h = 0.0;
    double max_h2 = 0.0;             // only when richardson ran
    double median_order = 0.0;
    int order_samples = 0;
};

struct HydroReport {
    double h = 0.0;
    int K = 0;
    std::vector<HydroNode> nodes;
    std::vector<HydroNode> nodes_half;
    std::vector<EquationStats> equations;
    bool cross_checked = false;
    double cross_res_h = 0.0, cross_res_h2 = 0.0, cross_order = 0.0;
};

namespace detail {

inline HydroNode hydro_node(const TimesVector& times, const ProfileFunction& phi,
                            const ReductionProvider& red, double lo, double hi, double h,
                            const HydroOptions& opts) {
    HydroNode node;
    node.times = times;
    const SolveResult sr = hodograph_solve(times, phi, red, lo, hi, opts.solve);
    node.y_star = sr.y_star;
    node.lhs_residual = sr.residual;

    const FullTimes base = lock_conjugates(times);
    node.tau_star = hodograph_solve_complex(base, phi, red, cplx(0.0, sr.y_star), opts.complex_solve);

    auto root_at = [&](int k, bool bar, double dh) {
        FullTimes ft = base;
        (bar ? ft.tbar : ft.t)[static_cast<size_t>(k)] += dh;
        return hodograph_solve_complex(ft, phi, red, node.tau_star, opts.complex_solve);
    };
    auto partial = [&](int k, bool bar) {
        return (root_at(k, bar, +h) - root_at(k, bar, -h)) / (2.0 * h);
    };

    const cplx dt0 = partial(0, false);
    const cplx dt0b = partial(0, true);
    const VelocityTable vt = red.velocities_at_complex(node.tau_star);

    const int K = times.K();
    node.phi_res.resize(static_cast<size_t>(K));
    node.psi_res.resize(static_cast<size_t>(K) + 1);
    for (int k = 1; k <= K; ++k)
        node.phi_res[static_cast<size_t>(k) - 1] =
            std::abs(partial(k, false) - vt.phi[static_cast<size_t>(k)] * dt0) / std::abs(dt0);
    node.psi_res[0] = std::abs(dt0b - vt.psi[0] * dt0) / std::abs(dt0);
    for (int k = 1; k <= K; ++k)
        node.psi_res[static_cast<size_t>(k)] =
            std::abs(partial(k, true) - vt.psi[static_cast<size_t>(k)] * dt0) / std::abs(dt0);

    const cplx l11 = vt.sprime_xibar * dt0 + vt.sprime_xi * dt0b;
    node.l11_res = std::abs(l11) / (1.0 + std::max(std::abs(vt.sprime_xibar * dt0),
                                                   std::abs(vt.sprime_xi * dt0b)));
    return node;
}

// d(tau)/d(t_j) of [phi_k * d(tau)/d(t_0)], the FD route to the mixed partial
// d^2 tau / d t_j d t_k.
inline cplx hydro_mixed_partial(const TimesVector& times, const ProfileFunction& phi,
                                const ReductionProvider& red, cplx seed, int j, int k, double h,
                                const HydroOptions& opts) {
    const FullTimes base = lock_conjugates(times);
    auto Dk = [&](double dj) {
        FullTimes ft = base;
        ft.t[static_cast<size_t>(j)] += dj;
        const cplx tau_c = hodograph_solve_complex(ft, phi, red, seed, opts.complex_solve);
        const VelocityTable vt = red.velocities_at_complex(tau_c);
        FullTimes fp = ft, fm = ft;
        fp.t[0] += h;
        fm.t[0] -= h;
        const cplx dt0 = (hodograph_solve_complex(fp, phi, red, tau_c, opts.complex_solve) -
                          hodograph_solve_complex(fm, phi, red, tau_c, opts.complex_solve)) /
                         (2.0 * h);
        return vt.phi[static_cast<size_t>(k)] * dt0;
    };
    return (Dk(+h) - Dk(-h)) / (2.0 * h);
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline HydroReport hydrodynamic_residuals(const std::vector<TimesVector>& grid,
                                          const ProfileFunction& phi,
                                          const ReductionProvider& reduction, double bracket_lo,
                                          double bracket_hi, const HydroOptions& opts = {}) {
    if (grid.empty()) throw DomainError("hydrodynamic_residuals: empty grid");
    const int K = grid.front().K();
    for (const auto& tv : grid)
        if (tv.K() != K) throw DomainError("hydrodynamic_residuals: inhomogeneous grid");

    HydroReport rep;
    rep.h = opts.fd_step;
    rep.K = K;
    rep.nodes.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()),
                 [&](int i) {
                     rep.nodes[static_cast<size_t>(i)] =
                         detail::hydro_node(grid[static_cast<size_t>(i)], phi, reduction,
                                            bracket_lo, bracket_hi, opts.fd_step, opts);
                 },
                 opts.threads);
    if (opts.richardson) {
        rep.nodes_half.resize(grid.size());
        parallel_for(static_cast<int>(grid.size()),
                     [&](int i) {
                         rep.nodes_half[static_cast<size_t>(i)] =
                             detail::hydro_node(grid[static_cast<size_t>(i)], phi, reduction,
                                                bracket_lo, bracket_hi, opts.fd_step / 2.0, opts);
                     },
                     opts.threads);
    }

    // per-equation aggregates
    auto collect = [&](const std::string& name, auto getter) {
        EquationStats es;
        es.name = name;
        std::vector<double> orders;
        for (size_t i = 0; i < rep.nodes.size(); ++i) {
            const double rh = getter(rep.nodes[i]);
            es.max_h = std::max(es.max_h, rh);
            if (!rep.nodes_half.empty()) {
                const double rh2 = getter(rep.nodes_half[i]);
                es.max_h2 = std::max(es.max_h2, rh2);
                if (rh > opts.order_floor && rh2 > opts.order_floor / 8.0)
                    orders.push_back(std::log2(rh / rh2));
            }
        }
        es.median_order = detail::median(orders);
        es.order_samples = static_cast<int>(orders.size());
        rep.equations.push_back(es);
    };
    for (int k = 1; k <= K; ++k)
        collect("l9_phi_" + std::to_string(k),
                [k](const HydroNode& n) { return n.phi_res[static_cast<size_t>(k) - 1]; });
    for (int k = 0; k <= K; ++k)
        collect("l9_psi_" + std::to_string(k),
                [k](const HydroNode& n) { return n.psi_res[static_cast<size_t>(k)]; });
    collect("l11", [](const HydroNode& n) { return n.l11_res; });

    if (opts.cross_derivatives && K >= 2) {
        const TimesVector& mid = grid[grid.size() / 2];
        const HydroNode& mid_node = rep.nodes[grid.size() / 2];
        auto cross = [&](double h) {
            const cplx m12 =
                detail::hydro_mixed_partial(mid, phi, reduction, mid_node.tau_star, 1, 2, h, opts);
            const cplx m21 =
                detail::hydro_mixed_partial(mid, phi, reduction, mid_node.tau_star, 2, 1, h, opts);
            return std::abs(m12 - m21) / (1.0 + std::max(std::abs(m12), std::abs(m21)));
        };
        rep.cross_res_h = cross(opts.fd_step);
        rep.cross_res_h2 = cross(opts.fd_step / 2.0);
        rep.cross_order = rep.cross_res_h2 > 0.0 ? std::log2(rep.cross_res_h / rep.cross_res_h2) : 0.0;
        rep.cross_checked = true;
    }
    return rep;
}

}  // namespace ellw
