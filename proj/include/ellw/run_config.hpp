#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellw/driving.hpp"
#include "ellw/hodograph.hpp"
#include "ellw/loewner.hpp"

// JSON run configurations for the CLI. Schemas are strict: unknown keys are
// rejected so silently misspelled options cannot alter a run.

namespace ellw {

using json = nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::set<std::string>& required, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    for (const auto& key : required)
        if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
}

inline double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline cplx get_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require_keys(j, {"re", "im"}, {"re", "im"}, where);
    return {get_number(j, "re", where), get_number(j, "im", where)};
}

inline std::vector<double> get_number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline DrivingFunction parse_kappa(const json& j) {
    require_keys(j, {"kind", "value", "amplitude", "omega", "phase", "offset", "knots", "values"},
                 {"kind"}, "kappa");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        require_keys(j, {"kind", "value"}, {"kind", "value"}, "kappa(constant)");
        return DrivingFunction::constant(get_number(j, "value", "kappa"));
    }
    if (kind == "sinusoid") {
        require_keys(j, {"kind", "amplitude", "omega", "phase", "offset"},
                     {"kind", "amplitude", "omega"}, "kappa(sinusoid)");
        return DrivingFunction::sinusoid(get_number(j, "amplitude", "kappa"),
                                         get_number(j, "omega", "kappa"),
                                         j.contains("phase") ? get_number(j, "phase", "kappa") : 0.0,
                                         j.contains("offset") ? get_number(j, "offset", "kappa") : 0.0);
    }
    if (kind == "piecewise_linear" || kind == "table") {
        require_keys(j, {"kind", "knots", "values"}, {"kind", "knots", "values"}, "kappa(" + kind + ")");
        auto knots = get_number_list(j.at("knots"), "kappa.knots");
        auto values = get_number_list(j.at("values"), "kappa.values");
        return kind == "table" ? DrivingFunction::table(std::move(knots), std::move(values))
                               : DrivingFunction::piecewise_linear(std::move(knots), std::move(values));
    }
    throw ConfigError("kappa: unknown kind '" + kind + "'");
}

inline ProfileFunction parse_profile(const json& j) {
    require_keys(j, {"kind", "coeffs", "knots", "values"}, {"kind"}, "phi");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "polynomial_in_y") {
        require_keys(j, {"kind", "coeffs"}, {"kind", "coeffs"}, "phi(polynomial_in_y)");
        return ProfileFunction::polynomial(get_number_list(j.at("coeffs"), "phi.coeffs"));
    }
    if (kind == "table") {
        require_keys(j, {"kind", "knots", "values"}, {"kind", "knots", "values"}, "phi(table)");
        return ProfileFunction::table(get_number_list(j.at("knots"), "phi.knots"),
                                      get_number_list(j.at("values"), "phi.values"));
    }
    throw ConfigError("phi: unknown kind '" + kind + "'");
}

struct LoewnerRunConfig {
    double y_start = 0.0, y_end = 0.0;
    double eta0 = 0.0;
    DrivingFunction kappa = DrivingFunction::constant(0.0);
    ReductionState initial;  // fully assembled initial state
    int samples = 101;       // dense-output rows in the CSV
    int residual_samples = 17;
    double residual_tol = 1e-8;  // ap/SS residual gate along the trajectory
    LoewnerOptions options;
    std::string output_csv;
    std::string report_json;
};

// Initial pointwise values may be given directly ("value") or as the series
// tail evaluated at a marked z ("z"); the latter is the default way to seed
// u(z, y0) from c_k(y0).
inline LoewnerRunConfig parse_loewner_config(const json& j) {
    require_keys(j,
                 {"y_start", "y_end", "eta0", "kappa", "series", "series_bar", "u_points",
                  "ubar_points", "samples", "residual_samples", "residual_tol", "rtol", "atol",
                  "max_step", "output_csv", "report_json"},
                 {"y_start", "y_end", "eta0", "kappa"}, "loewner config");
    LoewnerRunConfig cfg;
    cfg.y_start = get_number(j, "y_start", "loewner config");
    cfg.y_end = get_number(j, "y_end", "loewner config");
    cfg.eta0 = get_number(j, "eta0", "loewner config");
    cfg.kappa = parse_kappa(j.at("kappa"));

    ReductionState& st = cfg.initial;
    st.y = cfg.y_start;
    st.eta = cfg.eta0;
    st.kappa = cfg.kappa(cfg.y_start);

    if (j.contains("series")) {
        const json& js = j.at("series");
        require_keys(js, {"order", "c"}, {"order"}, "series");
        const int order = js.at("order").get<int>();
        if (order < 1) throw ConfigError("series.order must be >= 1");
        st.series.assign(static_cast<size_t>(order), cplx{0.0, 0.0});
        st.series[0] = 1.0;  // default tail c_1 = 1, c_k = 0
        if (js.contains("c")) {
            const json& jc = js.at("c");
            if (!jc.is_array() || jc.size() > static_cast<size_t>(order))
                throw ConfigError("series.c must be an array of <= order entries");
            for (size_t i = 0; i < jc.size(); ++i) st.series[i] = get_complex(jc[i], "series.c");
        }
    }
    if (j.contains("series_bar")) {
        const json& jb = j.at("series_bar");
        if (jb.is_string() && jb.get<std::string>() == "conjugate") {
            for (const cplx& c : st.series) st.series_bar.push_back(std::conj(c));
        } else {
            if (!jb.is_array()) throw ConfigError("series_bar: expected \"conjugate\" or an array");
            for (const auto& v : jb) st.series_bar.push_back(get_complex(v, "series_bar"));
        }
    } else {
        for (const cplx& c : st.series) st.series_bar.push_back(std::conj(c));
    }

    auto parse_points = [&](const json& arr, const char* where) {
        std::vector<LabeledPoint> pts;
        if (!arr.is_array()) throw ConfigError(std::string(where) + ": expected an array");
        for (const auto& p : arr) {
            require_keys(p, {"label", "value", "z"}, {"label"}, where);
            LabeledPoint lp;
            lp.label = p.at("label").get<std::string>();
            if (p.contains("value") == p.contains("z"))
                throw ConfigError(std::string(where) + ": give exactly one of 'value' or 'z'");
            if (p.contains("value")) {
                lp.value = get_complex(p.at("value"), where);
            } else {
                if (st.series.empty())
                    throw ConfigError(std::string(where) + ": 'z' initialization needs a series");
                lp.value = TailSeries(st.series).eval(get_complex(p.at("z"), where));
            }
            pts.push_back(std::move(lp));
        }
        return pts;
    };
    if (j.contains("u_points")) st.u_points = parse_points(j.at("u_points"), "u_points");
    if (j.contains("ubar_points")) {
        const json& jb = j.at("ubar_points");
        if (jb.is_string() && jb.get<std::string>() == "conjugate") {
            for (const auto& p : st.u_points)
                st.ubar_points.push_back({"bar_" + p.label, std::conj(p.value)});
        } else {
            st.ubar_points = parse_points(jb, "ubar_points");
        }
    } else {
        for (const auto& p : st.u_points)
            st.ubar_points.push_back({"bar_" + p.label, std::conj(p.value)});
    }

    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("residual_samples")) cfg.residual_samples = j.at("residual_samples").get<int>();
    if (j.contains("residual_tol")) cfg.residual_tol = get_number(j, "residual_tol", "loewner config");
    if (cfg.samples < 2) throw ConfigError("samples must be >= 2");
    if (j.contains("rtol")) cfg.options.step.rtol = get_number(j, "rtol", "loewner config");
    if (j.contains("atol")) cfg.options.step.atol = get_number(j, "atol", "loewner config");
    if (j.contains("max_step")) cfg.options.step.max_step = get_number(j, "max_step", "loewner config");
    if (j.contains("output_csv")) cfg.output_csv = j.at("output_csv").get<std::string>();
    if (j.contains("report_json")) cfg.report_json = j.at("report_json").get<std::string>();
    return cfg;
}

struct HodographRunConfig {
    json loewner;  // nested loewner run describing the reduction
    int velocity_order = 0;
    TimesVector times;
    ProfileFunction phi = ProfileFunction::polynomial({0.0});
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double fd_step = 1e-4;
    double residual_tol_factor = 1e3;  // pass threshold = factor * h^2
    // grid: vary Re/Im of chosen time coordinates over uniform ranges
    struct Axis {
        std::string coord;  // "t0", "re_t<k>", "im_t<k>"
        double min = 0.0, max = 0.0;
        int count = 1;
    };
    std::vector<Axis> axes;
    std::string output_csv;
    std::string report_json;
};

inline HodographRunConfig parse_hodograph_config(const json& j) {
    require_keys(j,
                 {"reduction", "order", "t0", "times", "phi", "bracket", "fd_step", "grid",
                  "residual_tol_factor", "output_csv", "report_json"},
                 {"reduction", "order", "t0", "times", "phi", "bracket"}, "hodograph config");
    HodographRunConfig cfg;
    cfg.loewner = j.at("reduction");
    cfg.velocity_order = j.at("order").get<int>();
    cfg.times.t0 = get_number(j, "t0", "hodograph config");
    for (const auto& v : j.at("times")) cfg.times.t.push_back(get_complex(v, "times"));
    cfg.phi = parse_profile(j.at("phi"));
    const auto br = get_number_list(j.at("bracket"), "bracket");
    if (br.size() != 2) throw ConfigError("bracket: expected [lo, hi]");
    cfg.bracket_lo = br[0];
    cfg.bracket_hi = br[1];
    if (j.contains("fd_step")) cfg.fd_step = get_number(j, "fd_step", "hodograph config");
    if (j.contains("residual_tol_factor"))
        cfg.residual_tol_factor = get_number(j, "residual_tol_factor", "hodograph config");
    if (j.contains("grid")) {
        for (const auto& a : j.at("grid")) {
            require_keys(a, {"coord", "min", "max", "count"}, {"coord", "min", "max", "count"},
                         "grid axis");
            HodographRunConfig::Axis ax;
            ax.coord = a.at("coord").get<std::string>();
            ax.min = get_number(a, "min", "grid axis");
            ax.max = get_number(a, "max", "grid axis");
            ax.count = a.at("count").get<int>();
            if (ax.count < 1) throw ConfigError("grid axis: count must be >= 1");
            cfg.axes.push_back(std::move(ax));
        }
    }
    if (j.contains("output_csv")) cfg.output_csv = j.at("output_csv").get<std::string>();
    if (j.contains("report_json")) cfg.report_json = j.at("report_json").get<std::string>();
    return cfg;
}

// Apply one grid coordinate to a TimesVector.
inline void set_time_coord(TimesVector& tv, const std::string& coord, double value) {
    if (coord == "t0") {
        tv.t0 = value;
        return;
    }
    const bool re = coord.rfind("re_t", 0) == 0;
    const bool im = coord.rfind("im_t", 0) == 0;
    if (!re && !im) throw ConfigError("grid axis: unknown coord '" + coord + "'");
    const int k = std::stoi(coord.substr(4));
    if (k < 1 || k > tv.K()) throw ConfigError("grid axis: index out of range in '" + coord + "'");
    cplx& t = tv.t[static_cast<size_t>(k) - 1];
    t = re ? cplx(value, t.imag()) : cplx(t.real(), value);
}

// Expand the grid axes into the full list of time vectors (row-major in axis
// order, last axis fastest).
inline std::vector<TimesVector> expand_grid(const TimesVector& base,
                                            const std::vector<HodographRunConfig::Axis>& axes) {
    std::vector<TimesVector> out;
    if (axes.empty()) {
        out.push_back(base);
        return out;
    }
    std::vector<int> idx(axes.size(), 0);
    for (;;) {
        TimesVector tv = base;
        for (size_t a = 0; a < axes.size(); ++a) {
            const auto& ax = axes[a];
            const double v = ax.count == 1 ? ax.min
                                           : ax.min + (ax.max - ax.min) * idx[a] /
                                                          static_cast<double>(ax.count - 1);
            set_time_coord(tv, ax.coord, v);
        }
        out.push_back(std::move(tv));
        size_t a = axes.size();
        while (a-- > 0) {
            if (++idx[a] < axes[a].count) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
    }
}

}  // namespace ellw
