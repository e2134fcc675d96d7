#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ellw/errors.hpp"

// Dormand-Prince 5(4) embedded pair with the classic quartic dense-output
// interpolant. The right-hand side may throw PoleError to veto a trial step;
// the stepper then halves the step, and after max_pole_halvings consecutive
// rejections reports a blow-up at the last accepted point. This is the
// detect-don't-regularize policy Loewner-type flows need.

namespace ellw {

struct StepControl {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_min = 1e-12;
    double max_step = 0.05;
    double initial_step = 0.0;  // 0 = choose automatically
    double safety = 0.9;
    double fac_min = 0.2;
    double fac_max = 5.0;
    int max_pole_halvings = 40;
    long max_steps = 2000000;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

namespace dopri {
// Butcher tableau of DOPRI5 (Dormand & Prince 1980), FSAL form.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dopri

// One accepted step with its dense-output coefficients.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;
};

class Trajectory {
  public:
    Trajectory() = default;
    Trajectory(double t_begin, double t_end, std::vector<DenseStep> steps)
        : t_begin_(t_begin), t_end_(t_end), steps_(std::move(steps)) {}

    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    bool covers(double t) const {
        const double lo = std::min(t_begin_, t_end_), hi = std::max(t_begin_, t_end_);
        const double slack = 1e-12 * (1.0 + hi - lo);
        return t >= lo - slack && t <= hi + slack;
    }

    std::vector<double> sample(double t) const {
        if (steps_.empty()) throw RangeError("Trajectory::sample: empty trajectory");
        if (!covers(t))
            throw RangeError("Trajectory::sample: t = " + std::to_string(t) +
                             " outside [" + std::to_string(t_begin_) + ", " +
                             std::to_string(t_end_) + "]");
        // binary search over steps (time may run in either direction)
        const double dir = t_end_ >= t_begin_ ? 1.0 : -1.0;
        size_t lo = 0, hi = steps_.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            const double tr = steps_[mid].t0 + steps_[mid].h;
            if (dir * (t - tr) > 0.0)
                lo = mid + 1;
            else
                hi = mid;
        }
        const DenseStep& s = steps_[lo];
        const double x = (t - s.t0) / s.h;
        const double x1 = 1.0 - x;
        const size_t n = s.r1.size();
        std::vector<double> y(n);
        for (size_t i = 0; i < n; ++i)
            y[i] = s.r1[i] + x * (s.r2[i] + x1 * (s.r3[i] + x * (s.r4[i] + x1 * s.r5[i])));
        return y;
    }

    const std::vector<DenseStep>& steps() const { return steps_; }

  private:
    double t_begin_ = 0.0, t_end_ = 0.0;
    std::vector<DenseStep> steps_;
};

struct IntegrateOutcome {
    Trajectory trajectory;
    bool blew_up = false;
    double last_good_t = 0.0;
    std::string blowup_detail;
};

// Integrate from t0 to t1 (either direction). Pole vetoes shrink the step;
// a persistent veto ends the integration with blew_up set (integrate() below
// turns that into a BlowUpError).
inline IntegrateOutcome dopri5_integrate_partial(const OdeRhs& f, double t0, double t1,
                                                 std::vector<double> y, const StepControl& sc) {
    using namespace dopri;
    const size_t n = y.size();
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    std::vector<DenseStep> steps;
    IntegrateOutcome out;

    if (span == 0.0) {
        out.trajectory = Trajectory(t0, t1, {});
        out.last_good_t = t0;
        return out;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n);
    double t = t0;
    double h = sc.initial_step > 0.0 ? sc.initial_step : std::min(sc.max_step, span / 50.0);
    h = std::min(h, span);

    auto finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };

    int halvings = 0;
    bool have_k1 = false;
    std::string last_veto;
    for (long step_count = 0;; ++step_count) {
        if (step_count > sc.max_steps) throw MaxIterError("dopri5: step budget exhausted");
        const double remaining = std::abs(t1 - t);
        if (remaining <= 1e-14 * (1.0 + span)) break;
        h = std::min(h, remaining);
        const double hs = dir * h;

        bool veto = false;
        double err = 0.0;
        try {
            if (!have_k1) {
                f(t, y, k1);
                have_k1 = true;
            }
            for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
            f(t + c2 * hs, ytmp, k2);
            for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            f(t + c3 * hs, ytmp, k3);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(t + c4 * hs, ytmp, k4);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(t + c5 * hs, ytmp, k5);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                       a65 * k5[i]);
            f(t + hs, ytmp, k6);
            for (size_t i = 0; i < n; ++i)
                y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                     a76 * k6[i]);
            f(t + hs, y1, k7);

            if (!finite(y1)) {
                veto = true;
                last_veto = "non-finite state";
            } else {
                double acc = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                            e6 * k6[i] + e7 * k7[i]);
                    const double sci = sc.atol + sc.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
                    acc += (ei / sci) * (ei / sci);
                }
                err = std::sqrt(acc / static_cast<double>(n));
                if (!std::isfinite(err)) {
                    veto = true;
                    last_veto = "non-finite error estimate";
                }
            }
        } catch (const PoleError& pe) {
            veto = true;
            last_veto = pe.what();
        }

        if (veto) {
            // k1 at the unchanged (t, y) stays valid if it was computed
            ++halvings;
            h *= 0.5;
            if (halvings > sc.max_pole_halvings || h < sc.h_min) {
                out.blew_up = true;
                out.blowup_detail = last_veto;
                break;
            }
            continue;
        }

        if (err <= 1.0) {
            // accept: record dense-output coefficients
            DenseStep ds;
            ds.t0 = t;
            ds.h = hs;
            ds.r1 = y;
            ds.r2.resize(n);
            ds.r3.resize(n);
            ds.r4.resize(n);
            ds.r5.resize(n);
            for (size_t i = 0; i < n; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                ds.r2[i] = ydiff;
                ds.r3[i] = bspl;
                ds.r4[i] = ydiff - hs * k7[i] - bspl;
                ds.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
            }
            steps.push_back(std::move(ds));
            t += hs;
            y = y1;
            k1 = k7;  // FSAL
            have_k1 = true;
            halvings = 0;
            const double fac = std::clamp(sc.safety * std::pow(err > 0.0 ? err : 1e-10, -0.2),
                                          sc.fac_min, sc.fac_max);
            h = std::min(h * fac, sc.max_step);
        } else {
            const double fac = std::clamp(sc.safety * std::pow(err, -0.2), sc.fac_min, 1.0);
            h *= fac;
            // only error-controlled shrinking underflows; pole vetoes are
            // counted separately and end in a blow-up report
            if (h < sc.h_min) throw StepSizeError(t);
        }
    }

    out.last_good_t = t;
    out.trajectory = Trajectory(t0, out.blew_up ? t : t1, std::move(steps));
    return out;
}

inline Trajectory dopri5_integrate(const OdeRhs& f, double t0, double t1, std::vector<double> y0,
                                   const StepControl& sc) {
    auto out = dopri5_integrate_partial(f, t0, t1, std::move(y0), sc);
    if (out.blew_up) throw BlowUpError(out.last_good_t, out.blowup_detail);
    return out.trajectory;
}

}  // namespace ellw
