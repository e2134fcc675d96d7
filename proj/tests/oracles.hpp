#pragma once

// Independent oracles for the test suites. Nothing here shares code with the
// library paths it checks: theta values come from the defining two-sided
// exponential sums without argument reduction, derivatives from central
// differences with Richardson extrapolation, series coefficients from
// trapezoid-rule contour extraction.

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Straight-line summation of the defining series, k in [-terms, terms].
inline cplx theta_direct(int a, cplx u, cplx tau, int du = 0, int terms = 60) {
    cplx acc = 0.0;
    for (int k = -terms; k <= terms; ++k) {
        cplx m, shift;
        double sign = 1.0;
        switch (a) {
            case 1:
                m = k + 0.5;
                shift = 0.5;
                sign = -1.0;
                break;
            case 2:
                m = k + 0.5;
                shift = 0.0;
                break;
            case 3:
                m = static_cast<double>(k);
                shift = 0.0;
                break;
            default:
                m = static_cast<double>(k);
                shift = 0.5;
                break;
        }
        cplx term = std::exp(I * pi * tau * m * m + 2.0 * pi * I * (u + shift) * m);
        for (int d = 0; d < du; ++d) term *= 2.0 * pi * I * m;
        acc += sign * term;
    }
    return acc;
}

inline cplx central_diff(const std::function<cplx(cplx)>& f, cplx x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Richardson-extrapolated first derivative, O(h^4).
inline cplx richardson_diff(const std::function<cplx(cplx)>& f, cplx x, double h) {
    const cplx d1 = central_diff(f, x, h);
    const cplx d2 = central_diff(f, x, h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// Trapezoid-rule Fourier extraction of the z^{-k} coefficient of f on |z| = R.
inline cplx contour_coefficient(const std::function<cplx(cplx)>& f, int k, double R, int samples) {
    cplx acc = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * pi * j / samples;
        const cplx z = R * std::exp(I * th);
        acc += f(z) * std::exp(I * static_cast<double>(k) * th);
    }
    acc /= static_cast<double>(samples);
    return acc * std::pow(R, k);
}

inline double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::abs(want);
}

// Observed convergence order from errors at h and h/2.
inline double observed_order(double err_h, double err_h2) { return std::log2(err_h / err_h2); }

}  // namespace oracle
