#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ellw/driving.hpp"
#include "ellw/elliptic.hpp"
#include "ellw/ode.hpp"
#include "ellw/series.hpp"
#include "ellw/theta.hpp"

// Coupled elliptic Loewner flow. With tau = i y and xi = eta/2 + i kappa(y),
// xibar = eta - xi, the flow advances
//   4 pi  d(eta)/dy = -E(xi) - E(xibar)                       (real)
//   4 pi  d(u_j)/dy = -E(u_j + xi) + E(xi)                    (per marked point)
//   4 pi  d(ub_j)/dy = -E(ub_j + xibar) + E(xibar)
// and the Laurent-tail coefficients c_k of u(z) = sum c_k z^{-k} by matching
// powers of z^{-1} in -E(u(z)+xi) + E(xi) = -sum_m E^(m)(xi) u^m / m!.
// All right-hand sides are holomorphic in tau, so the same vector field also
// continues states off the purely-imaginary axis (used by the hodograph FD
// machinery).

namespace ellw {

struct LabeledPoint {
    std::string label;
    cplx value;
};

// Full state advanced by the flow. kappa caches the driving value at y.
struct ReductionState {
    double y = 0.0;
    double eta = 0.0;
    double kappa = 0.0;
    std::vector<LabeledPoint> u_points;
    std::vector<LabeledPoint> ubar_points;
    std::vector<cplx> series;      // c_1..c_N (may be empty)
    std::vector<cplx> series_bar;  // cb_1..cb_N

    cplx xi() const { return cplx(eta / 2.0, kappa); }
    cplx xibar() const { return cplx(eta / 2.0, -kappa); }
};

struct LoewnerOptions {
    StepControl step;
    ThetaConfig theta;
    double reality_eps = 1e-12;
    LoewnerOptions() {
        step.rtol = 1e-9;
        step.atol = 1e-12;
        step.max_step = 0.02;
    }
};

// State with every component complexified (eta included), as used on complex
// tau paths.
struct ComplexReductionState {
    cplx eta;
    std::vector<cplx> u, ub, c, cb;
};

namespace detail {

struct Layout {
    std::vector<std::string> u_labels, ub_labels;
    int n_c = 0, n_cb = 0;
    int complex_count() const {
        return 1 + static_cast<int>(u_labels.size() + ub_labels.size()) + n_c + n_cb;
    }
};

inline Layout layout_of(const ReductionState& s) {
    Layout l;
    for (const auto& p : s.u_points) l.u_labels.push_back(p.label);
    for (const auto& p : s.ubar_points) l.ub_labels.push_back(p.label);
    l.n_c = static_cast<int>(s.series.size());
    l.n_cb = static_cast<int>(s.series_bar.size());
    return l;
}

inline ComplexReductionState complexify(const ReductionState& s) {
    ComplexReductionState c;
    c.eta = s.eta;
    for (const auto& p : s.u_points) c.u.push_back(p.value);
    for (const auto& p : s.ubar_points) c.ub.push_back(p.value);
    c.c = s.series;
    c.cb = s.series_bar;
    return c;
}

}  // namespace detail

// d(state)/d(tau) at complex tau; every entry of the result is the
// tau-derivative of the matching state entry.
inline ComplexReductionState loewner_rhs_tau(const ComplexReductionState& st, cplx tau, cplx kappa,
                                             const ThetaConfig& cfg = {}) {
    const ModularParam mp(tau, cfg);
    const cplx xi = st.eta / 2.0 + detail::kI * kappa;
    const cplx xibar = st.eta - xi;
    const cplx e_xi = e_combined(xi, mp, cfg);
    const cplx e_xibar = e_combined(xibar, mp, cfg);

    ComplexReductionState d;
    d.eta = (-e_xi - e_xibar) / kFourPiI;
    d.u.reserve(st.u.size());
    for (const cplx& u : st.u) d.u.push_back((-e_combined(u + xi, mp, cfg) + e_xi) / kFourPiI);
    d.ub.reserve(st.ub.size());
    for (const cplx& ub : st.ub)
        d.ub.push_back((-e_combined(ub + xibar, mp, cfg) + e_xibar) / kFourPiI);

    auto series_rhs = [&](const std::vector<cplx>& c, cplx base) {
        std::vector<cplx> out;
        if (c.empty()) return out;
        const int n = static_cast<int>(c.size());
        auto et = e_combined_taylor(base, mp, n, cfg);  // et[m] = E^(m)(base)/m!
        const TailSeries tail =
            compose_taylor_tail(std::span<const cplx>(et.data() + 1, static_cast<size_t>(n)),
                                TailSeries(c), n);
        out.resize(static_cast<size_t>(n));
        for (int k = 1; k <= n; ++k) out[static_cast<size_t>(k) - 1] = -tail.coeff(k) / kFourPiI;
        return out;
    };
    d.c = series_rhs(st.c, xi);
    d.cb = series_rhs(st.cb, xibar);
    return d;
}

// Time-derivative of a ReductionState along the real flow variable y
// (tau = i y, d/dy = i d/dtau). eta's derivative is returned as an exact real
// number after checking that conjugation symmetry killed its imaginary part.
inline ReductionState loewner_rhs(const ReductionState& state, const DrivingFunction& kappa,
                                  const LoewnerOptions& opts = {}) {
    ReductionState d = state;  // copy labels/shape
    const double kap = kappa(state.y);
    const auto dtau =
        loewner_rhs_tau(detail::complexify(state), cplx(0.0, state.y), kap, opts.theta);
    const cplx deta = detail::kI * dtau.eta;
    if (std::abs(deta.imag()) > opts.reality_eps * std::max(1.0, std::abs(deta)))
        throw RealityError("loewner_rhs: d(eta)/dy has imaginary part " +
                           std::to_string(deta.imag()));
    d.y = 1.0;
    d.eta = deta.real();
    d.kappa = 0.0;
    for (size_t j = 0; j < d.u_points.size(); ++j) d.u_points[j].value = detail::kI * dtau.u[j];
    for (size_t j = 0; j < d.ubar_points.size(); ++j)
        d.ubar_points[j].value = detail::kI * dtau.ub[j];
    for (size_t j = 0; j < d.series.size(); ++j) d.series[j] = detail::kI * dtau.c[j];
    for (size_t j = 0; j < d.series_bar.size(); ++j) d.series_bar[j] = detail::kI * dtau.cb[j];
    return d;
}

// Dense-output trajectory of the real-axis flow plus complex continuation.
class LoewnerTrajectory {
  public:
    LoewnerTrajectory(Trajectory traj, detail::Layout layout, DrivingFunction kappa,
                      LoewnerOptions opts)
        : traj_(std::move(traj)), layout_(std::move(layout)), kappa_(std::move(kappa)),
          opts_(std::move(opts)) {}

    double y_begin() const { return traj_.t_begin(); }
    double y_end() const { return traj_.t_end(); }
    bool covers(double y) const { return traj_.covers(y); }
    const DrivingFunction& kappa() const { return kappa_; }
    const LoewnerOptions& options() const { return opts_; }

    ReductionState at(double y) const {
        const auto flat = traj_.sample(y);
        ReductionState s;
        s.y = y;
        s.kappa = kappa_(y);
        size_t i = 0;
        s.eta = flat[i++];
        auto next = [&]() {
            const double re = flat[i], im = flat[i + 1];
            i += 2;
            return cplx(re, im);
        };
        for (const auto& lbl : layout_.u_labels) s.u_points.push_back({lbl, next()});
        for (const auto& lbl : layout_.ub_labels) s.ubar_points.push_back({lbl, next()});
        for (int k = 0; k < layout_.n_c; ++k) s.series.push_back(next());
        for (int k = 0; k < layout_.n_cb; ++k) s.series_bar.push_back(next());
        return s;
    }

    // Analytic continuation of the state to complex tau with Im tau inside
    // the covered y-range: anchor on the axis, then integrate the holomorphic
    // vector field along the horizontal segment.
    ComplexReductionState at_complex(cplx tau) const {
        const double ya = tau.imag();
        if (!covers(ya))
            throw RangeError("LoewnerTrajectory::at_complex: Im tau outside trajectory range");
        ReductionState anchor = at(ya);
        ComplexReductionState cs = detail::complexify(anchor);
        const double x = tau.real();
        if (x == 0.0) return cs;

        const int nc = layout_.complex_count();
        std::vector<double> flat(2 * static_cast<size_t>(nc));
        auto pack = [&](const ComplexReductionState& s, std::vector<double>& out) {
            size_t i = 0;
            auto put = [&](cplx z) {
                out[i++] = z.real();
                out[i++] = z.imag();
            };
            put(s.eta);
            for (const cplx& z : s.u) put(z);
            for (const cplx& z : s.ub) put(z);
            for (const cplx& z : s.c) put(z);
            for (const cplx& z : s.cb) put(z);
        };
        auto unpack = [&](const std::vector<double>& in) {
            ComplexReductionState s;
            size_t i = 0;
            auto get = [&]() {
                const cplx z(in[i], in[i + 1]);
                i += 2;
                return z;
            };
            s.eta = get();
            for (size_t j = 0; j < layout_.u_labels.size(); ++j) s.u.push_back(get());
            for (size_t j = 0; j < layout_.ub_labels.size(); ++j) s.ub.push_back(get());
            for (int k = 0; k < layout_.n_c; ++k) s.c.push_back(get());
            for (int k = 0; k < layout_.n_cb; ++k) s.cb.push_back(get());
            return s;
        };
        pack(cs, flat);

        // path tau(s) = i ya + s x, s in [0,1]; d/ds = x * d/dtau
        OdeRhs rhs = [&](double s, const std::vector<double>& yv, std::vector<double>& dy) {
            const ComplexReductionState st = unpack(yv);
            const cplx tau_s(s * x, ya);
            const cplx kap = kappa_.eval_complex(tau_s / detail::kI);
            const ComplexReductionState dt = loewner_rhs_tau(st, tau_s, kap, opts_.theta);
            std::vector<double> packed(dy.size());
            ComplexReductionState scaled = dt;
            scaled.eta *= x;
            for (auto& z : scaled.u) z *= x;
            for (auto& z : scaled.ub) z *= x;
            for (auto& z : scaled.c) z *= x;
            for (auto& z : scaled.cb) z *= x;
            pack(scaled, packed);
            dy = packed;
        };
        StepControl sc = opts_.step;
        sc.rtol = std::min(sc.rtol, 1e-12);
        sc.atol = std::min(sc.atol, 1e-14);
        sc.max_step = 1.0;
        sc.initial_step = 0.25;
        Trajectory t = dopri5_integrate(rhs, 0.0, 1.0, flat, sc);
        return unpack(t.sample(1.0));
    }

  private:
    Trajectory traj_;
    detail::Layout layout_;
    DrivingFunction kappa_;
    LoewnerOptions opts_;
};

struct LoewnerOutcome {
    LoewnerTrajectory trajectory;
    bool blew_up = false;
    double last_good_y = 0.0;
    std::string blowup_detail;
};

// Integrate the flow from initial.y to y_end; a pole-guard blow-up ends the
// run early with the partial trajectory preserved.
inline LoewnerOutcome loewner_integrate_partial(const ReductionState& initial,
                                                const DrivingFunction& kappa, double y_end,
                                                const LoewnerOptions& opts = {}) {
    const auto layout = detail::layout_of(initial);
    const int nc = layout.complex_count();
    std::vector<double> y0(static_cast<size_t>(2 * nc - 1));
    {
        size_t i = 0;
        y0[i++] = initial.eta;
        auto put = [&](cplx z) {
            y0[i++] = z.real();
            y0[i++] = z.imag();
        };
        for (const auto& p : initial.u_points) put(p.value);
        for (const auto& p : initial.ubar_points) put(p.value);
        for (const cplx& z : initial.series) put(z);
        for (const cplx& z : initial.series_bar) put(z);
    }

    OdeRhs rhs = [&layout, &kappa, &opts](double y, const std::vector<double>& yv,
                                          std::vector<double>& dy) {
        ComplexReductionState st;
        size_t i = 0;
        st.eta = yv[i++];
        auto get = [&]() {
            const cplx z(yv[i], yv[i + 1]);
            i += 2;
            return z;
        };
        for (size_t j = 0; j < layout.u_labels.size(); ++j) st.u.push_back(get());
        for (size_t j = 0; j < layout.ub_labels.size(); ++j) st.ub.push_back(get());
        for (int k = 0; k < layout.n_c; ++k) st.c.push_back(get());
        for (int k = 0; k < layout.n_cb; ++k) st.cb.push_back(get());

        const double kap = kappa(y);
        const ComplexReductionState dt = loewner_rhs_tau(st, cplx(0.0, y), kap, opts.theta);
        const cplx deta = detail::kI * dt.eta;
        if (std::abs(deta.imag()) > opts.reality_eps * std::max(1.0, std::abs(deta)))
            throw RealityError("loewner flow: d(eta)/dy has imaginary part " +
                               std::to_string(deta.imag()));
        size_t o = 0;
        dy[o++] = deta.real();
        auto putd = [&](cplx z) {
            const cplx dz = detail::kI * z;
            dy[o++] = dz.real();
            dy[o++] = dz.imag();
        };
        for (const cplx& z : dt.u) putd(z);
        for (const cplx& z : dt.ub) putd(z);
        for (const cplx& z : dt.c) putd(z);
        for (const cplx& z : dt.cb) putd(z);
    };

    auto raw = dopri5_integrate_partial(rhs, initial.y, y_end, std::move(y0), opts.step);
    LoewnerOutcome out{
        LoewnerTrajectory(std::move(raw.trajectory), layout, kappa, opts),
        raw.blew_up, raw.last_good_t, raw.blowup_detail};
    return out;
}

inline LoewnerTrajectory loewner_integrate(const ReductionState& initial,
                                           const DrivingFunction& kappa, double y_end,
                                           const LoewnerOptions& opts = {}) {
    auto out = loewner_integrate_partial(initial, kappa, y_end, opts);
    if (out.blew_up) throw BlowUpError(out.last_good_y, out.blowup_detail);
    return std::move(out.trajectory);
}

// --- Reduction-consistency identities ----------------------------------------
//
// At a reduction state, every total tau-derivative dS(w)/dtau below is
// evaluated through the one chain-rule formula
//   4 pi i dS(w)/dtau = S'(w)(4 pi i d_tau w + 2 E^(2)(w)) + pi^2 theta4^4(0)
// with d_tau w assembled from the flow equations, and compared against the
// closed S'-product forms. The associated product relations couple the same
// derivatives pairwise. Everything here must vanish identically for any
// admissible (eta, kappa, u1, u2, ub1, tau); that is the consistency claim of
// the one-variable reduction.

struct IdentityResidual {
    std::string name;
    double value;
};

struct IdentityResiduals {
    std::vector<IdentityResidual> items;
    double max_value() const {
        double m = 0.0;
        for (const auto& it : items) m = std::max(m, it.value);
        return m;
    }
    double operator[](const std::string& name) const {
        for (const auto& it : items)
            if (it.name == name) return it.value;
        throw DomainError("IdentityResiduals: unknown identity " + name);
    }
};

inline IdentityResiduals consistency_residuals(double eta, double kappa_value, cplx u1, cplx u2,
                                               cplx ubar1, const ModularParam& tau,
                                               const ThetaConfig& cfg = {},
                                               SPrimeForm form = SPrimeForm::analytic) {
    const cplx xi(eta / 2.0, kappa_value);
    const cplx xibar(eta / 2.0, -kappa_value);

    const cplx e_u1xi = e_combined(u1 + xi, tau, cfg);
    const cplx e_u2xi = e_combined(u2 + xi, tau, cfg);
    const cplx e_xi = e_combined(xi, tau, cfg);
    const cplx e_xieta = e_combined(xi - eta, tau, cfg);
    const cplx e_ub1xib = e_combined(ubar1 + xibar, tau, cfg);
    const cplx e_xib = e_combined(xibar, tau, cfg);

    auto dS = [&](cplx w, cplx four_pi_i_dtau_w) {
        return total_s_derivative(ModularPoint(w, tau), four_pi_i_dtau_w / kFourPiI, cfg, form);
    };
    const cplx A1 = dS(u1, -e_u1xi + e_xi);
    const cplx A2 = dS(u2, -e_u2xi + e_xi);
    const cplx A12 = dS(u1 - u2, -e_u1xi + e_u2xi);
    const cplx B2 = dS(u2 + eta, -e_u2xi + e_xieta);
    const cplx D = dS(cplx(eta, 0.0), e_xieta - e_xi);
    const cplx Ab1 = dS(ubar1, -e_ub1xib + e_xib);
    const cplx C6 = dS(ubar1 + u2 + eta, -e_ub1xib - e_u2xi);

    // d log(rho)/dtau along the flow: the c_1 equation gives
    // 4 pi i d(log c_1)/dtau = -E'(xi); theta2(0), theta3(0) contribute their
    // analytic partial tau-derivatives.
    const ModularPoint p20(0.0, tau), p30(0.0, tau);
    const cplx logrho_dot =
        (-e_combined_prime(xi, tau, cfg) +
         kFourPiI * (theta_tau_derivative(ThetaIndex::two, p20, cfg) /
                         theta_eval(ThetaIndex::two, p20, 0, cfg) +
                     theta_tau_derivative(ThetaIndex::three, p30, cfg) /
                         theta_eval(ThetaIndex::three, p30, 0, cfg))) /
        kFourPiI;

    auto sp = [&](cplx w) { return sprime_as(form, w, tau, cfg); };
    const cplx sp_u1xi = sp(u1 + xi), sp_u2xi = sp(u2 + xi), sp_xi = sp(xi);
    const cplx sp_xieta = sp(xi - eta), sp_ub1xib = sp(ubar1 + xibar), sp_xib = sp(xibar);
    const cplx sp_xibeta = sp(xibar - eta), sp_mu2xi = sp(-u2 - xi);

    auto nres = [](cplx a, cplx b) {
        return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
    };
    IdentityResiduals r;
    r.items = {
        {"ap1", nres(kFourPiI * A1, sp_u1xi * sp_xi)},
        {"ap2", nres(kFourPiI * logrho_dot, sp_xi * sp_xi)},
        {"ap3", nres(kFourPiI * B2, sp_u2xi * sp_xieta)},
        {"ap3a", nres(kFourPiI * A12, sp_u1xi * sp_u2xi)},
        {"ap4", nres(kFourPiI * D, sp_xi * sp_xieta)},
        {"ap4_conj", nres(sp_xi * sp_xieta, sp_xib * sp_xibeta)},
        {"ap5", nres(kFourPiI * Ab1, sp_ub1xib * sp_xib)},
        {"ap6", nres(kFourPiI * C6, sp_ub1xib * sp_mu2xi)},
        {"ss5", nres(A1 * A2, logrho_dot * A12)},
        {"ss6", nres(A1 * B2, D * A12)},
        {"ss7", nres(Ab1 * A2, D * C6)},
    };
    return r;
}

// State-level wrapper; needs two marked u-points and one ubar-point.
inline IdentityResiduals consistency_residuals(const ReductionState& state,
                                               const ThetaConfig& cfg = {},
                                               SPrimeForm form = SPrimeForm::analytic) {
    if (state.u_points.size() < 2 || state.ubar_points.empty())
        throw DomainError("consistency_residuals: need >= 2 u-points and >= 1 ubar-point");
    const ModularParam tau(cplx(0.0, state.y), cfg);
    return consistency_residuals(state.eta, state.kappa, state.u_points[0].value,
                                 state.u_points[1].value, state.ubar_points[0].value, tau, cfg,
                                 form);
}

}  // namespace ellw
