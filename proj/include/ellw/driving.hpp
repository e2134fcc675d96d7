#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ellw/errors.hpp"

namespace ellw {

using cplx = std::complex<double>;

// Real-valued driving function kappa(y), y = Im tau. eval_complex continues
// the defining formula to complex y (needed when the hodograph machinery
// leaves the purely-imaginary tau axis); for the piecewise kinds the segment
// is selected by Re(y).
class DrivingFunction {
  public:
    enum class Kind { constant, piecewise_linear, sinusoid, table };

    static DrivingFunction constant(double value) {
        DrivingFunction k;
        k.kind_ = Kind::constant;
        k.p_ = {value};
        return k;
    }

    // amplitude * sin(omega * y + phase) + offset
    static DrivingFunction sinusoid(double amplitude, double omega, double phase, double offset) {
        DrivingFunction k;
        k.kind_ = Kind::sinusoid;
        k.p_ = {amplitude, omega, phase, offset};
        return k;
    }

    // Linear interpolation between knots, linear extrapolation outside.
    static DrivingFunction piecewise_linear(std::vector<double> knots, std::vector<double> values) {
        return from_knots(Kind::piecewise_linear, std::move(knots), std::move(values));
    }

    // Linear interpolation between knots; out-of-domain evaluation is an error.
    static DrivingFunction table(std::vector<double> knots, std::vector<double> values) {
        return from_knots(Kind::table, std::move(knots), std::move(values));
    }

    Kind kind() const { return kind_; }

    double operator()(double y) const { return eval_complex(cplx(y, 0.0)).real(); }

    cplx eval_complex(cplx y) const {
        switch (kind_) {
            case Kind::constant:
                return p_[0];
            case Kind::sinusoid:
                return p_[0] * std::sin(p_[1] * y + p_[2]) + p_[3];
            case Kind::piecewise_linear:
            case Kind::table: {
                const double x = y.real();
                if (kind_ == Kind::table && (x < knots_.front() || x > knots_.back()))
                    throw DomainError("driving function: y = " + std::to_string(x) +
                                      " outside table domain [" + std::to_string(knots_.front()) +
                                      ", " + std::to_string(knots_.back()) + "]");
                size_t i = segment(x);
                const double x0 = knots_[i], x1 = knots_[i + 1];
                const double v0 = values_[i], v1 = values_[i + 1];
                const double slope = (v1 - v0) / (x1 - x0);
                return v0 + slope * (y - x0);
            }
        }
        throw DomainError("driving function: unknown kind");
    }

  private:
    static DrivingFunction from_knots(Kind kind, std::vector<double> knots, std::vector<double> values) {
        if (knots.size() < 2 || knots.size() != values.size())
            throw ConfigError("driving function: need >= 2 knots and matching values");
        for (size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1]))
                throw ConfigError("driving function: knots must be strictly increasing");
        for (double v : values)
            if (!std::isfinite(v)) throw ConfigError("driving function: values must be finite");
        DrivingFunction k;
        k.kind_ = kind;
        k.knots_ = std::move(knots);
        k.values_ = std::move(values);
        return k;
    }

    size_t segment(double x) const {
        size_t lo = 0, hi = knots_.size() - 1;
        if (x <= knots_.front()) return 0;
        if (x >= knots_.back()) return knots_.size() - 2;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (knots_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    Kind kind_ = Kind::constant;
    std::vector<double> p_;
    std::vector<double> knots_, values_;
};

}  // namespace ellw
