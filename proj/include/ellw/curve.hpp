#pragma once

#include <complex>

#include "ellw/elliptic.hpp"
#include "ellw/theta.hpp"

// Uniformized elliptic spectral curve. Points of the curve
//   W + 1/W - R^2 (P + 1/P) = C
// are parametrized by a complex coordinate u through
//   f(u) = theta4(u)/theta1(u),  g(u) = theta4(u+eta)/theta1(u+eta),
//   P = f g,  W = f / g,
// which satisfies the curve identically once
//   R = theta1(eta)/theta4(eta),
//   C = 2 theta4^2(0) theta2(eta) theta3(eta) / (theta4^2(eta) theta2(0) theta3(0)).

namespace ellw {

struct CurveParams {
    double eta;
    ModularParam tau;
    double R;
    double C;
};

namespace detail {

inline double real_checked(cplx z, const char* what) {
    if (std::abs(z.imag()) >= 1e-12 * std::max(1.0, std::abs(z)))
        throw RealityError(std::string(what) + " has imaginary part " + std::to_string(z.imag()));
    return z.real();
}

}  // namespace detail

// eta is a real point on the curve, kept in (pole_guard, 1 - pole_guard).
inline CurveParams curve_params(double eta, const ModularParam& tau, const ThetaConfig& cfg = {}) {
    if (!tau.purely_imaginary())
        throw DomainError("curve_params: tau must be purely imaginary");
    if (!(eta > cfg.pole_guard && eta < 1.0 - cfg.pole_guard))
        throw DomainError("curve_params: eta must lie in (pole_guard, 1 - pole_guard)");
    require_off_zero(ThetaIndex::four, eta, tau, "curve_params", cfg);
    const ModularPoint pe(eta, tau), p0(0.0, tau);
    const cplx th1e = theta_eval(ThetaIndex::one, pe, 0, cfg);
    const cplx th4e = theta_eval(ThetaIndex::four, pe, 0, cfg);
    const cplx th40 = theta_eval(ThetaIndex::four, p0, 0, cfg);
    const cplx Rc = th1e / th4e;
    const cplx Cc = 2.0 * th40 * th40 * theta_eval(ThetaIndex::two, pe, 0, cfg) *
                    theta_eval(ThetaIndex::three, pe, 0, cfg) /
                    (th4e * th4e * theta_eval(ThetaIndex::two, p0, 0, cfg) *
                     theta_eval(ThetaIndex::three, p0, 0, cfg));
    return CurveParams{eta, tau, detail::real_checked(Rc, "R"), detail::real_checked(Cc, "C")};
}

struct CurvePointValues {
    cplx f, g, P, W;
};

inline CurvePointValues curve_point(cplx u, const CurveParams& params, const ThetaConfig& cfg = {}) {
    require_off_zero(ThetaIndex::one, u, params.tau, "curve_point", cfg);
    require_off_zero(ThetaIndex::one, u + params.eta, params.tau, "curve_point", cfg);
    const ModularPoint pu(u, params.tau), pg(u + params.eta, params.tau);
    CurvePointValues v;
    v.f = theta_eval(ThetaIndex::four, pu, 0, cfg) / theta_eval(ThetaIndex::one, pu, 0, cfg);
    v.g = theta_eval(ThetaIndex::four, pg, 0, cfg) / theta_eval(ThetaIndex::one, pg, 0, cfg);
    v.P = v.f * v.g;
    v.W = v.f / v.g;
    return v;
}

// |W + 1/W - R^2 (P + 1/P) - C|, the raw residual of the curve equation.
inline double t3_residual(const CurvePointValues& v, const CurveParams& params) {
    return std::abs(v.W + 1.0 / v.W - params.R * params.R * (v.P + 1.0 / v.P) - params.C);
}

// Residual of R^2 (f^2 g^2 + 1) + C f g = f^2 + g^2, normalized by the
// largest participating term.
inline double t6_residual(const CurvePointValues& v, const CurveParams& params) {
    const cplx f2 = v.f * v.f, g2 = v.g * v.g;
    const cplx lhs = params.R * params.R * (f2 * g2 + 1.0) + params.C * v.f * v.g;
    const cplx rhs = f2 + g2;
    const double scale = 1.0 + std::max({std::abs(params.R * params.R * f2 * g2),
                                         std::abs(params.C * v.f * v.g), std::abs(f2), std::abs(g2)});
    return std::abs(lhs - rhs) / scale;
}

// The two quotient identities standing behind the uniformized hierarchy
// equations. For mixed = false:
//   (W1 - W2)/(1 - P1 P2) =
//     [theta1(eta)/theta4(eta)]
//     [theta1(u1+eta) theta1(u2+eta) / (theta4(u1+eta) theta4(u2+eta))]
//     [theta1(u1-u2)/theta4(u1-u2)],
// for mixed = true the analogous identity with (1 - W1 Wb2)/(1 - P1 Pb2) and
// the factor theta1(u1+ub2+eta)/theta4(u1+ub2+eta), where the barred values
// come from evaluating the same curve functions at ub2.
inline double quotient_identity_residual(cplx u1, cplx u2_or_ubar2, const CurveParams& params,
                                         bool mixed, const ThetaConfig& cfg = {}) {
    const cplx u2 = u2_or_ubar2;
    const auto v1 = curve_point(u1, params, cfg);
    const auto v2 = curve_point(u2, params, cfg);
    const cplx den = 1.0 - v1.P * v2.P;  // P at the barred point plays Pb2 when mixed
    if (std::abs(den) < 1e-10)
        throw DegenerateError("quotient_identity_residual: |1 - P1 P2| below 1e-10");

    const cplx cross = mixed ? u1 + u2 + params.eta : u1 - u2;
    require_off_zero(ThetaIndex::four, cross, params.tau, "quotient_identity_residual", cfg);
    require_off_zero(ThetaIndex::four, u1 + params.eta, params.tau, "quotient_identity_residual", cfg);
    require_off_zero(ThetaIndex::four, u2 + params.eta, params.tau, "quotient_identity_residual", cfg);

    const cplx lhs = (mixed ? 1.0 - v1.W * v2.W : v1.W - v2.W) / den;

    const ModularParam& tau = params.tau;
    auto ratio14 = [&](cplx w) {
        return theta_eval(ThetaIndex::one, ModularPoint(w, tau), 0, cfg) /
               theta_eval(ThetaIndex::four, ModularPoint(w, tau), 0, cfg);
    };
    const cplx rhs = params.R * ratio14(u1 + params.eta) * ratio14(u2 + params.eta) * ratio14(cross);
    return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

// rho = pi c_1 theta2(0) theta3(0): the z -> infinity normalization constant
// of the uniformizing map.
inline cplx rho_from_c1(cplx c1, const ModularParam& tau, const ThetaConfig& cfg = {}) {
    const ModularPoint p0(0.0, tau);
    return kPi * c1 * theta_eval(ThetaIndex::two, p0, 0, cfg) * theta_eval(ThetaIndex::three, p0, 0, cfg);
}

}  // namespace ellw
