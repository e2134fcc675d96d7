#pragma once

#include <cctype>
#include <complex>
#include <cstdio>
#include <string>

#include "ellw/errors.hpp"

namespace ellw {

// Parse "a+bi" / "a-bi" / "a" / "bi" / "i" (case-insensitive i, optional
// whitespace). Exponents in either part are fine: "1e-3+2.5e4i".
inline std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("empty complex literal");

    auto parse_num = [](const std::string& part, const std::string& whole) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &pos);
        } catch (const std::exception&) {
            throw ConfigError("bad complex literal '" + whole + "'");
        }
        if (pos != part.size()) throw ConfigError("bad complex literal '" + whole + "'");
        return v;
    };

    const char last = static_cast<char>(std::tolower(static_cast<unsigned char>(s.back())));
    if (last != 'i') return {parse_num(s, text), 0.0};

    const std::string body = s.substr(0, s.size() - 1);
    // split at the last +/- that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, parse_num(body, text)};
    return {parse_num(body.substr(0, split), text), parse_num(body.substr(split), text)};
}

inline std::string format_complex(std::complex<double> z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    std::string out = buf;
    std::snprintf(buf, sizeof buf, "%+.17g", z.imag());
    out += buf;
    out += "i";
    return out;
}

}  // namespace ellw
