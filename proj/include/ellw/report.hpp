#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellw/errors.hpp"

namespace ellw {

using ordered_json = nlohmann::ordered_json;

// Machine-readable outcome of one identity within a residual suite.
struct ResidualStat {
    std::string name;
    long attempted = 0;
    long rejected = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ResidualReport {
    std::string suite;
    long samples = 0;
    uint64_t seed = 0;
    std::vector<ResidualStat> stats;

    bool passed() const {
        for (const auto& s : stats)
            if (!s.pass) return false;
        return true;
    }
};

inline ordered_json to_json(const ResidualStat& s) {
    return ordered_json{{"name", s.name},
                        {"attempted", s.attempted},
                        {"rejected", s.rejected},
                        {"max_residual", s.max_residual},
                        {"mean_residual", s.mean_residual},
                        {"tolerance", s.tolerance},
                        {"pass", s.pass}};
}

inline ordered_json to_json(const ResidualReport& r) {
    ordered_json stats = ordered_json::array();
    for (const auto& s : r.stats) stats.push_back(to_json(s));
    return ordered_json{{"suite", r.suite},
                        {"samples", r.samples},
                        {"seed", r.seed},
                        {"pass", r.passed()},
                        {"stats", stats}};
}

inline ordered_json complex_json(std::complex<double> z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace ellw
