#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ellw/hydro.hpp"
#include "ellw/loewner.hpp"

// CSV emitters. Numbers are printed with %.17g so identical runs produce
// byte-identical files.

namespace ellw {

inline std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_trajectory_csv(std::ostream& os, const LoewnerTrajectory& traj, int samples) {
    const ReductionState probe = traj.at(traj.y_begin());
    os << "y,eta,kappa";
    for (const auto& p : probe.u_points) os << ",re_u_" << p.label << ",im_u_" << p.label;
    for (const auto& p : probe.ubar_points) os << ",re_ubar_" << p.label << ",im_ubar_" << p.label;
    for (size_t k = 1; k <= probe.series.size(); ++k) os << ",re_c_" << k << ",im_c_" << k;
    for (size_t k = 1; k <= probe.series_bar.size(); ++k) os << ",re_cbar_" << k << ",im_cbar_" << k;
    os << "\n";
    const double y0 = traj.y_begin(), y1 = traj.y_end();
    for (int i = 0; i < samples; ++i) {
        const double y = samples == 1 ? y0 : y0 + (y1 - y0) * i / static_cast<double>(samples - 1);
        const ReductionState s = traj.at(y);
        os << csv_num(s.y) << ',' << csv_num(s.eta) << ',' << csv_num(s.kappa);
        for (const auto& p : s.u_points)
            os << ',' << csv_num(p.value.real()) << ',' << csv_num(p.value.imag());
        for (const auto& p : s.ubar_points)
            os << ',' << csv_num(p.value.real()) << ',' << csv_num(p.value.imag());
        for (const cplx& c : s.series) os << ',' << csv_num(c.real()) << ',' << csv_num(c.imag());
        for (const cplx& c : s.series_bar)
            os << ',' << csv_num(c.real()) << ',' << csv_num(c.imag());
        os << "\n";
    }
}

inline void write_hodograph_csv(std::ostream& os, const HydroReport& rep) {
    const int K = rep.K;
    os << "t0";
    for (int k = 1; k <= K; ++k) os << ",re_t" << k << ",im_t" << k;
    os << ",y_star,re_residual,im_residual\n";
    for (const auto& node : rep.nodes) {
        os << csv_num(node.times.t0);
        for (int k = 1; k <= K; ++k)
            os << ',' << csv_num(node.times.t[static_cast<size_t>(k) - 1].real()) << ','
               << csv_num(node.times.t[static_cast<size_t>(k) - 1].imag());
        os << ',' << csv_num(node.y_star) << ',' << csv_num(node.lhs_residual.real()) << ','
           << csv_num(node.lhs_residual.imag()) << "\n";
    }
}

}  // namespace ellw
