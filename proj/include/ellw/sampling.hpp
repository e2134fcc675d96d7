#pragma once

#include <cstdint>
#include <random>

#include "ellw/theta.hpp"

// Deterministic sampling for the residual suites. Sample i of a run is fully
// determined by (master seed, i), so fan-out across any number of workers
// reproduces identical draws.

namespace ellw {

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

inline std::mt19937_64 sample_rng(uint64_t master_seed, uint64_t index) {
    return std::mt19937_64(detail::splitmix64(master_seed ^ detail::splitmix64(index + 1)));
}

// Ranges for admissible random points. The sampling guard is deliberately
// wider than the evaluation pole_guard: suite tolerances are stated for
// generic points, not for near-pole stress tests.
struct SampleRanges {
    double y_lo = 0.35, y_hi = 2.5;
    double guard = 0.05;          // min distance from the relevant zero lattices
    double eta_lo = 0.1, eta_hi = 0.9;
    double kappa_max = 0.5;
    double u_re = 0.5;            // |Re u| bound
    double u_im_frac = 0.45;      // |Im u| <= frac * y
    int max_tries = 200;
};

struct SampleCounters {
    long attempted = 0;
    long rejected = 0;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx sample_u(std::mt19937_64& rng, const SampleRanges& r, double y) {
    return cplx(uniform(rng, -r.u_re, r.u_re), uniform(rng, -r.u_im_frac * y, r.u_im_frac * y));
}

// Draw until all guard predicates pass; counts rejections. pred returns true
// when a candidate is admissible.
template <typename Draw, typename Pred>
auto sample_admissible(Draw draw, Pred pred, SampleCounters& counters, int max_tries) {
    for (int k = 0; k < max_tries; ++k) {
        ++counters.attempted;
        auto cand = draw();
        if (pred(cand)) return cand;
        ++counters.rejected;
    }
    throw PoleCascadeError("sample_admissible: no admissible sample in " +
                           std::to_string(max_tries) + " tries");
}

}  // namespace ellw
