#pragma once

namespace ellw {

// Central tolerance table. Every knob here is overridable per call; the
// defaults are the documented ones (see README, "Tolerances").
struct ThetaConfig {
    // Lower bound on Im tau. Guarantees |q| = e^{-pi Im tau} <= e^{-pi y_min},
    // so the q-series converges well inside the term cap at double precision.
    double y_min = 0.05;

    // Minimum distance (in the fundamental cell) from the zero lattice of a
    // theta function before a log-derivative / ratio evaluation is refused.
    double pole_guard = 1e-3;

    // q-series stop rule: quit once the latest term is below term_tol times
    // the running scale of the sum (max of |partial sum| and peak |term|).
    double term_tol = 1e-17;

    // Hard cap on q-series terms; exceeding it raises TruncationError.
    int max_terms = 200;
};

}  // namespace ellw
