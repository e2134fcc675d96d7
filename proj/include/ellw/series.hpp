#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "ellw/errors.hpp"

// Dense truncated series arithmetic at desk scale (orders <= ~16). Two shapes
// appear throughout: Taylor tails sum_{m>=1} a_m u^m (coefficients of a local
// expansion) and Laurent tails u(z) = sum_{k>=1} c_k z^{-k}.

namespace ellw {

using cplx = std::complex<double>;

// Truncated coefficients c_1..c_N of u(z) = sum c_k z^{-k}.
class TailSeries {
  public:
    explicit TailSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw DomainError("TailSeries: order must be >= 1");
        for (const cplx& c : c_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw DomainError("TailSeries: coefficients must be finite");
    }

    int order() const { return static_cast<int>(c_.size()); }

    // c_k, 1-based; zero beyond the truncation order.
    cplx coeff(int k) const {
        if (k < 1) throw DomainError("TailSeries::coeff: k must be >= 1");
        return k <= order() ? c_[static_cast<size_t>(k) - 1] : cplx{0.0, 0.0};
    }

    const std::vector<cplx>& coeffs() const { return c_; }

    cplx eval(cplx z) const {
        // Horner in w = 1/z
        const cplx w = 1.0 / z;
        cplx acc = 0.0;
        for (int k = order(); k >= 1; --k) acc = (acc + c_[static_cast<size_t>(k) - 1]) * w;
        return acc;
    }

    TailSeries conjugated() const {
        std::vector<cplx> out(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) out[i] = std::conj(c_[i]);
        return TailSeries(std::move(out));
    }

    TailSeries truncated(int n) const {
        if (n < 1) throw DomainError("TailSeries::truncated: order must be >= 1");
        std::vector<cplx> out(static_cast<size_t>(n), cplx{0.0, 0.0});
        for (int k = 1; k <= n && k <= order(); ++k) out[static_cast<size_t>(k) - 1] = coeff(k);
        return TailSeries(std::move(out));
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const cplx& c : c_) m = std::max(m, std::abs(c));
        return m;
    }

  private:
    std::vector<cplx> c_;
};

// (a*b) truncated at z^{-N}; the product of tails starts at z^{-2}.
inline TailSeries tail_mul(const TailSeries& a, const TailSeries& b, int n) {
    std::vector<cplx> out(static_cast<size_t>(n), cplx{0.0, 0.0});
    for (int i = 1; i <= a.order(); ++i) {
        if (i + 1 > n) break;
        for (int j = 1; j <= b.order() && i + j <= n; ++j)
            out[static_cast<size_t>(i + j) - 1] += a.coeff(i) * b.coeff(j);
    }
    return TailSeries(std::move(out));
}

// sum_{m=1..M} taylor_tail[m-1] * u(z)^m truncated at z^{-N}, where
// taylor_tail[m-1] is the coefficient of u^m. Only m <= N contributes because
// u^m starts at z^{-m}.
inline TailSeries compose_taylor_tail(std::span<const cplx> taylor_tail, const TailSeries& u, int n) {
    std::vector<cplx> acc(static_cast<size_t>(n), cplx{0.0, 0.0});
    TailSeries upow = u.truncated(n);
    const int m_max = std::min<int>(static_cast<int>(taylor_tail.size()), n);
    for (int m = 1; m <= m_max; ++m) {
        if (m > 1) upow = tail_mul(upow, u, n);
        for (int k = m; k <= n; ++k)
            acc[static_cast<size_t>(k) - 1] += taylor_tail[static_cast<size_t>(m) - 1] * upow.coeff(k);
    }
    return TailSeries(std::move(acc));
}

// Power-series division h = f / g to the given order (inclusive), where f, g
// hold Taylor coefficients starting at u^0 and g[0] != 0.
inline std::vector<cplx> series_divide(std::span<const cplx> f, std::span<const cplx> g, int order) {
    if (g.empty() || std::abs(g[0]) == 0.0) throw DegenerateError("series_divide: g(0) = 0");
    std::vector<cplx> h(static_cast<size_t>(order) + 1, cplx{0.0, 0.0});
    for (int j = 0; j <= order; ++j) {
        cplx acc = j < static_cast<int>(f.size()) ? f[static_cast<size_t>(j)] : cplx{0.0, 0.0};
        for (int i = 1; i <= j; ++i) {
            if (i < static_cast<int>(g.size()))
                acc -= g[static_cast<size_t>(i)] * h[static_cast<size_t>(j - i)];
        }
        h[static_cast<size_t>(j)] = acc / g[0];
    }
    return h;
}

}  // namespace ellw
