#pragma once

#include <array>
#include <string>
#include <vector>

#include "ellw/curve.hpp"
#include "ellw/elliptic.hpp"
#include "ellw/loewner.hpp"
#include "ellw/parallel.hpp"
#include "ellw/report.hpp"
#include "ellw/sampling.hpp"

// Seed-deterministic residual suites over random admissible points. Each
// sample is drawn from its own (seed, index)-derived generator and rejected
// while any involved theta argument sits inside the sampling guard, so runs
// are reproducible at any worker count.

namespace ellw {

enum class Suite { ss2, ss3, curve, quotient, ap, landen };

inline const char* suite_name(Suite s) {
    switch (s) {
        case Suite::ss2: return "ss2";
        case Suite::ss3: return "ss3";
        case Suite::curve: return "curve";
        case Suite::quotient: return "quotient";
        case Suite::ap: return "ap";
        case Suite::landen: return "landen";
    }
    return "?";
}

inline double suite_default_tolerance(Suite s) {
    switch (s) {
        case Suite::curve: return 1e-11;
        case Suite::landen: return 1e-11;
        default: return 1e-10;
    }
}

struct VerifyOptions {
    long samples = 1000;
    uint64_t seed = 0;
    double tol = 0.0;  // 0 = suite default
    SPrimeForm sprime_form = SPrimeForm::analytic;
    int threads = 0;
    SampleRanges ranges;
    ThetaConfig theta;
};

namespace detail {

struct SampleOutcome {
    std::vector<double> residuals;
    SampleCounters counters;
};

inline bool off_zeros(cplx u, const ModularParam& tau, std::initializer_list<ThetaIndex> which,
                      double guard) {
    for (ThetaIndex a : which)
        if (theta_zero_distance(a, u, tau) < guard) return false;
    return true;
}

using enum ThetaIndex;

inline SampleOutcome verify_sample(Suite suite, uint64_t seed, long index,
                                   const VerifyOptions& opt) {
    auto rng = sample_rng(seed, static_cast<uint64_t>(index));
    const SampleRanges& R = opt.ranges;
    const ThetaConfig& cfg = opt.theta;
    const double g = R.guard;
    SampleOutcome out;

    const double y = uniform(rng, R.y_lo, R.y_hi);
    const ModularParam tau(cplx(0.0, y), cfg);

    switch (suite) {
        case Suite::ss2: {
            const cplx u = sample_admissible(
                [&] { return sample_u(rng, R, y); },
                [&](cplx c) { return off_zeros(c, tau, {one, two, four}, g); }, out.counters, R.max_tries);
            out.residuals = {identity_residual_ss2(ModularPoint(u, tau), cfg, opt.sprime_form)};
            break;
        }
        case Suite::ss3: {
            const auto xs = sample_admissible(
                [&] { return std::array<cplx, 2>{sample_u(rng, R, y), sample_u(rng, R, y)}; },
                [&](const std::array<cplx, 2>& c) {
                    return off_zeros(c[0], tau, {one, four}, g) &&
                           off_zeros(c[1], tau, {one, four}, g) &&
                           off_zeros(c[0] - c[1], tau, {one, two, four}, g);
                },
                out.counters, R.max_tries);
            out.residuals = {identity_residual_ss3(xs[0], xs[1], tau, cfg, opt.sprime_form)};
            break;
        }
        case Suite::curve: {
            struct Draw {
                double eta;
                cplx u;
            };
            const auto d = sample_admissible(
                [&] { return Draw{uniform(rng, R.eta_lo, R.eta_hi), sample_u(rng, R, y)}; },
                [&](const Draw& c) {
                    return off_zeros(c.u, tau, {one, four}, g) &&
                           off_zeros(c.u + c.eta, tau, {one, four}, g);
                },
                out.counters, R.max_tries);
            const CurveParams cp = curve_params(d.eta, tau, cfg);
            const CurvePointValues v = curve_point(d.u, cp, cfg);
            out.residuals = {t3_residual(v, cp), t6_residual(v, cp)};
            break;
        }
        case Suite::quotient: {
            struct Draw {
                double eta;
                cplx u1, u2;
            };
            const auto d = sample_admissible(
                [&] {
                    return Draw{uniform(rng, R.eta_lo, R.eta_hi), sample_u(rng, R, y),
                                sample_u(rng, R, y)};
                },
                [&](const Draw& c) {
                    if (!off_zeros(c.u1, tau, {one, four}, g) ||
                        !off_zeros(c.u2, tau, {one, four}, g))
                        return false;
                    if (!off_zeros(c.u1 + c.eta, tau, {one, four}, g) ||
                        !off_zeros(c.u2 + c.eta, tau, {one, four}, g))
                        return false;
                    if (!off_zeros(c.u1 - c.u2, tau, {four}, g) ||
                        !off_zeros(c.u1 + c.u2 + c.eta, tau, {four}, g))
                        return false;
                    // reject degenerate quotient denominators
                    const CurveParams cp = curve_params(c.eta, tau, cfg);
                    const cplx P1 = curve_point(c.u1, cp, cfg).P;
                    const cplx P2 = curve_point(c.u2, cp, cfg).P;
                    return std::abs(1.0 - P1 * P2) > 1e-6;
                },
                out.counters, R.max_tries);
            const CurveParams cp = curve_params(d.eta, tau, cfg);
            out.residuals = {quotient_identity_residual(d.u1, d.u2, cp, false, cfg),
                             quotient_identity_residual(d.u1, d.u2, cp, true, cfg)};
            break;
        }
        case Suite::ap: {
            struct Draw {
                double eta, kappa;
                cplx u1, u2, ub1;
            };
            const auto d = sample_admissible(
                [&] {
                    return Draw{uniform(rng, R.eta_lo, R.eta_hi),
                                uniform(rng, -R.kappa_max, R.kappa_max), sample_u(rng, R, y),
                                sample_u(rng, R, y), sample_u(rng, R, y)};
                },
                [&](const Draw& c) {
                    const cplx xi(c.eta / 2.0, c.kappa);
                    const cplx xibar(c.eta / 2.0, -c.kappa);
                    // S'/E^(2) arguments of the total derivatives
                    for (cplx w : {c.u1, c.u2, c.u1 - c.u2, c.u2 + c.eta, cplx(c.eta, 0.0), c.ub1,
                                   c.ub1 + c.u2 + c.eta})
                        if (!off_zeros(w, tau, {one, two, four}, g)) return false;
                    // E / S' arguments on the product sides
                    for (cplx w : {c.u1 + xi, c.u2 + xi, xi, xi - c.eta, c.ub1 + xibar, xibar,
                                   xibar - c.eta})
                        if (!off_zeros(w, tau, {one, four}, g)) return false;
                    return true;
                },
                out.counters, R.max_tries);
            const auto res =
                consistency_residuals(d.eta, d.kappa, d.u1, d.u2, d.ub1, tau, cfg, opt.sprime_form);
            out.residuals.reserve(res.items.size());
            for (const auto& item : res.items) out.residuals.push_back(item.value);
            break;
        }
        case Suite::landen: {
            const cplx u = sample_admissible(
                [&] { return sample_u(rng, R, y); },
                [&](cplx c) { return off_zeros(c, tau, {one, four}, g); }, out.counters, R.max_tries);
            const cplx lhs = e_combined(u, tau, cfg);
            const ModularParam tau_half(cplx(0.0, y / 2.0), cfg);
            const cplx rhs = log_derivative(one, u, tau_half, cfg);
            out.residuals = {std::abs(lhs - rhs) / (1.0 + std::abs(lhs))};
            break;
        }
    }
    return out;
}

inline std::vector<std::string> suite_stat_names(Suite s) {
    switch (s) {
        case Suite::ss2: return {"ss2"};
        case Suite::ss3: return {"ss3"};
        case Suite::curve: return {"t3", "t6"};
        case Suite::quotient: return {"quotient_unmixed", "quotient_mixed"};
        case Suite::ap:
            return {"ap1", "ap2", "ap3", "ap3a", "ap4", "ap4_conj", "ap5", "ap6", "ss5", "ss6",
                    "ss7"};
        case Suite::landen: return {"landen"};
    }
    return {};
}

}  // namespace detail

inline ResidualReport run_suite(Suite suite, const VerifyOptions& opt) {
    const auto names = detail::suite_stat_names(suite);
    const size_t m = names.size();
    const long n = opt.samples;
    std::vector<detail::SampleOutcome> outcomes(static_cast<size_t>(n));
    parallel_for(static_cast<int>(n),
                 [&](int i) {
                     outcomes[static_cast<size_t>(i)] =
                         detail::verify_sample(suite, opt.seed, i, opt);
                 },
                 opt.threads);

    const double tol = opt.tol > 0.0 ? opt.tol : suite_default_tolerance(suite);
    ResidualReport rep;
    rep.suite = suite_name(suite);
    rep.samples = n;
    rep.seed = opt.seed;
    rep.stats.resize(m);
    long attempted = 0, rejected = 0;
    for (const auto& oc : outcomes) {
        attempted += oc.counters.attempted;
        rejected += oc.counters.rejected;
    }
    for (size_t j = 0; j < m; ++j) {
        ResidualStat& st = rep.stats[j];
        st.name = names[j];
        st.attempted = attempted;
        st.rejected = rejected;
        st.tolerance = tol;
        double acc = 0.0;
        for (const auto& oc : outcomes) {
            st.max_residual = std::max(st.max_residual, oc.residuals[j]);
            acc += oc.residuals[j];
        }
        st.mean_residual = n > 0 ? acc / static_cast<double>(n) : 0.0;
        st.pass = st.max_residual < tol;
    }
    return rep;
}

inline Suite parse_suite(const std::string& s) {
    if (s == "ss2") return Suite::ss2;
    if (s == "ss3") return Suite::ss3;
    if (s == "curve") return Suite::curve;
    if (s == "quotient") return Suite::quotient;
    if (s == "ap") return Suite::ap;
    if (s == "landen") return Suite::landen;
    throw ConfigError("unknown suite '" + s + "' (expected all|ss2|ss3|curve|quotient|ap|landen)");
}

inline std::vector<Suite> all_suites() {
    return {Suite::ss2, Suite::ss3, Suite::curve, Suite::quotient, Suite::ap, Suite::landen};
}

}  // namespace ellw
