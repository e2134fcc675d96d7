#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ellw/driving.hpp"
#include "ellw/faber.hpp"
#include "ellw/loewner.hpp"

// Hodograph solution of the reduced hydrodynamic hierarchy. The implicit
// relation
//   t_0 phi_0 + sum_{k=1..K} t_k phi_k(xi(tau)) + sum_{k=0..K} tb_k psi_k(xi(tau)) = Phi(tau)
// determines tau as a function of the times (the t_0 phi_0 = t_0 term is kept
// so that implicit differentiation reproduces d(tau)/d(t_k) = phi_k
// d(tau)/d(t_0) with phi_0 = 1). The user-facing solve finds the real
// y = Im tau root of the real part and reports the imaginary part as a
// reality diagnostic. The FD verification machinery perturbs t_k and tb_k
// independently, which moves the root off the imaginary axis; those solves
// run a complex Newton on the full relation over the analytically continued
// reduction state.

namespace ellw {

// Real form: tb_k = conj(t_k), tb_0 = t_0.
struct TimesVector {
    double t0 = 0.0;
    std::vector<cplx> t;  // t_1..t_K
    int K() const { return static_cast<int>(t.size()); }
};

// Internal coordinates with independent conjugate times, index 0..K.
struct FullTimes {
    std::vector<cplx> t, tbar;
    int K() const { return static_cast<int>(t.size()) - 1; }
};

inline FullTimes lock_conjugates(const TimesVector& tv) {
    FullTimes ft;
    ft.t.resize(static_cast<size_t>(tv.K()) + 1);
    ft.tbar.resize(ft.t.size());
    ft.t[0] = tv.t0;
    for (int k = 1; k <= tv.K(); ++k) ft.t[static_cast<size_t>(k)] = tv.t[static_cast<size_t>(k) - 1];
    for (size_t i = 0; i < ft.t.size(); ++i) ft.tbar[i] = std::conj(ft.t[i]);
    return ft;
}

// Profile function Phi(y), y = Im tau.
class ProfileFunction {
  public:
    enum class Kind { polynomial_in_y, table };

    static ProfileFunction polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw ConfigError("profile: polynomial needs >= 1 coefficient");
        ProfileFunction p;
        p.kind_ = Kind::polynomial_in_y;
        p.coeffs_ = std::move(coeffs);
        return p;
    }

    static ProfileFunction table(std::vector<double> knots, std::vector<double> values) {
        ProfileFunction p;
        p.kind_ = Kind::table;
        p.tab_ = DrivingFunction::table(std::move(knots), std::move(values));
        return p;
    }

    double operator()(double y) const { return eval_complex(cplx(y, 0.0)).real(); }

    cplx eval_complex(cplx y) const {
        if (kind_ == Kind::polynomial_in_y) {
            cplx acc = 0.0;
            for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * y + coeffs_[i];
            return acc;
        }
        return tab_->eval_complex(y);
    }

    double derivative(double y) const {
        if (kind_ == Kind::polynomial_in_y) {
            double acc = 0.0;
            for (size_t i = coeffs_.size(); i-- > 1;) acc = acc * y + static_cast<double>(i) * coeffs_[i];
            return acc;
        }
        const double h = 1e-6 * (1.0 + std::abs(y));
        return ((*tab_)(y + h) - (*tab_)(y - h)) / (2.0 * h);
    }

    Kind kind() const { return kind_; }

  private:
    Kind kind_ = Kind::polynomial_in_y;
    std::vector<double> coeffs_;
    std::optional<DrivingFunction> tab_;
};

// Velocity access over a precomputed trajectory, on the axis (dense output)
// and off it (analytic continuation).
class ReductionProvider {
  public:
    ReductionProvider(LoewnerTrajectory trajectory, int order, ThetaConfig cfg = {})
        : traj_(std::move(trajectory)), order_(order), cfg_(cfg) {
        if (order_ < 0) throw DomainError("ReductionProvider: order must be >= 0");
    }

    int order() const { return order_; }
    const LoewnerTrajectory& trajectory() const { return traj_; }

    ReductionState state_at(double y) const { return traj_.at(y); }

    VelocityTable velocities_at(double y) const { return velocities(traj_.at(y), order_, cfg_); }

    VelocityTable velocities_at_complex(cplx tau) const {
        const ComplexReductionState cs = traj_.at_complex(tau);
        const cplx kap = traj_.kappa().eval_complex(tau / detail::kI);
        return velocities(cs, tau, kap, order_, cfg_);
    }

  private:
    LoewnerTrajectory traj_;
    int order_;
    ThetaConfig cfg_;
};

inline cplx hodograph_lhs_full(const FullTimes& ft, const VelocityTable& vt) {
    if (ft.K() > vt.order) throw DomainError("hodograph_lhs: K exceeds velocity-table order");
    cplx acc = 0.0;
    for (int k = 0; k <= ft.K(); ++k) {
        acc += ft.t[static_cast<size_t>(k)] * vt.phi[static_cast<size_t>(k)];
        acc += ft.tbar[static_cast<size_t>(k)] * vt.psi[static_cast<size_t>(k)];
    }
    return acc;
}

// Real-form hodograph sum at tau = i y (includes the t_0 phi_0 term).
inline cplx hodograph_lhs(const TimesVector& times, double y, const ReductionProvider& reduction) {
    return hodograph_lhs_full(lock_conjugates(times), reduction.velocities_at(y));
}

struct SolveOptions {
    double tol = 1e-10;      // |Re(lhs - Phi)| at the root
    int max_iter = 100;
    double fd_scale = 1e-6;  // Newton derivative step = fd_scale * (1 + |y|)
    std::optional<double> seed;
};

struct SolveResult {
    double y_star = 0.0;
    cplx residual;  // lhs - Phi at i y_star; Im part is the reality diagnostic
    int iterations = 0;
};

// Safeguarded Newton (bisection fallback) for Re(hodograph_lhs - Phi) = 0 on
// [bracket_lo, bracket_hi]. Without a sign change the bracket is rejected
// unless opts.seed turns it into a pure Newton run.
inline SolveResult hodograph_solve(const TimesVector& times, const ProfileFunction& phi,
                                   const ReductionProvider& reduction, double bracket_lo,
                                   double bracket_hi, const SolveOptions& opts = {}) {
    const FullTimes ft = lock_conjugates(times);
    auto full = [&](double y) { return hodograph_lhs_full(ft, reduction.velocities_at(y)) - phi(y); };
    auto r = [&](double y) { return full(y).real(); };

    double lo = std::min(bracket_lo, bracket_hi), hi = std::max(bracket_lo, bracket_hi);
    double rlo = 0.0, rhi = 0.0;
    bool bracketed = false;
    if (!opts.seed) {
        rlo = r(lo);
        rhi = r(hi);
        if (!(rlo == 0.0 || rhi == 0.0) && rlo * rhi > 0.0)
            throw NoBracketError("hodograph_solve: no sign change of Re(lhs - Phi) on [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
        bracketed = true;
    }

    double x = opts.seed ? *opts.seed : 0.5 * (lo + hi);
    for (int it = 1; it <= opts.max_iter; ++it) {
        const cplx fx = full(x);
        if (std::abs(fx.real()) < opts.tol) return SolveResult{x, fx, it};
        const double h = opts.fd_scale * (1.0 + std::abs(x));
        const double d = (r(x + h) - r(x - h)) / (2.0 * h);
        double xn = d != 0.0 ? x - fx.real() / d : x;
        if (bracketed) {
            // keep the bracket shrinking
            if (fx.real() * rlo > 0.0) {
                lo = x;
                rlo = fx.real();
            } else {
                hi = x;
                rhi = fx.real();
            }
            if (!(xn > lo && xn < hi) || d == 0.0) xn = 0.5 * (lo + hi);
        } else if (d == 0.0) {
            throw MaxIterError("hodograph_solve: zero derivative away from a root");
        }
        x = xn;
    }
    throw MaxIterError("hodograph_solve: no convergence in " + std::to_string(opts.max_iter) +
                       " iterations");
}

struct ComplexSolveOptions {
    double tol = 1e-13;
    int max_iter = 60;
    double fd_step = 1e-7;
};

// Newton in complex tau on the full relation; used off the real-form slice.
inline cplx hodograph_solve_complex(const FullTimes& ft, const ProfileFunction& phi,
                                    const ReductionProvider& reduction, cplx seed,
                                    const ComplexSolveOptions& opts = {}) {
    auto G = [&](cplx tau) {
        return hodograph_lhs_full(ft, reduction.velocities_at_complex(tau)) -
               phi.eval_complex(tau / detail::kI);
    };
    double scale = 1.0;
    for (size_t i = 0; i < ft.t.size(); ++i) scale += std::abs(ft.t[i]) + std::abs(ft.tbar[i]);

    cplx tau = seed;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const cplx g = G(tau);
        if (std::abs(g) < opts.tol * scale) return tau;
        const double h = opts.fd_step * (1.0 + std::abs(tau));
        const cplx d = (G(tau + h) - G(tau - h)) / (2.0 * h);
        if (std::abs(d) == 0.0)
            throw DegenerateError("hodograph_solve_complex: vanishing derivative");
        tau -= g / d;
    }
    throw MaxIterError("hodograph_solve_complex: no convergence");
}

}  // namespace ellw
