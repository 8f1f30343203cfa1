#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlopc/scalar_kernels.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// One CSV row of the sweep harness.
// ---------------------------------------------------------------------------

struct SweepRecord {
    double re_z = 0.0, im_z = 0.0;
    double re_E = 0.0, im_E = 0.0;
    std::optional<double> err_mixed{}; // absent without --oracle
    long n_nodes = 0;
    int region_index = 0;
    double mu = 0.0, h = 0.0;
    long long time_ns = 0;
};

inline constexpr std::string_view csv_header =
    "re_z,im_z,re_E,im_E,err_mixed,n_nodes,region_index,mu,h,time_ns";

/// Shortest round-trip scientific notation with a bare decimal exponent:
/// 2.718281828459045e0, 1e-2, 0e0.
inline std::string format_float(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    std::string s(buf, res.ptr);
    auto epos = s.find('e');
    std::string mant = s.substr(0, epos);
    std::string exp = s.substr(epos + 1);
    bool neg_exp = !exp.empty() && exp[0] == '-';
    std::size_t i = neg_exp || (!exp.empty() && exp[0] == '+') ? 1 : 0;
    while (i + 1 < exp.size() && exp[i] == '0') ++i;
    return mant + "e" + (neg_exp ? "-" : "") + exp.substr(i);
}

inline std::string format_complex(Complex v) {
    bool neg = std::signbit(v.imag());
    return format_float(v.real()) + (neg ? " - " : " + ") +
           format_float(neg ? -v.imag() : v.imag()) + " i";
}

inline std::string to_csv_row(const SweepRecord& r) {
    std::string out = format_float(r.re_z) + "," + format_float(r.im_z) + "," +
                      format_float(r.re_E) + "," + format_float(r.im_E) + ",";
    if (r.err_mixed) out += format_float(*r.err_mixed);
    out += "," + std::to_string(r.n_nodes) + "," + std::to_string(r.region_index) + "," +
           format_float(r.mu) + "," + format_float(r.h) + "," + std::to_string(r.time_ns);
    return out;
}

/// Log-spaced radii rmin .. rmax (inclusive endpoints).
inline std::vector<double> log_grid(double rmin, double rmax, int points) {
    if (!(rmin > 0.0 && rmax >= rmin && points >= 1))
        throw domain_error("log_grid: require 0 < rmin <= rmax and points >= 1");
    std::vector<double> out;
    if (points == 1) {
        out.push_back(rmin);
        return out;
    }
    double lr = std::log(rmax / rmin);
    for (int i = 0; i < points; ++i)
        out.push_back(rmin * std::exp(lr * double(i) / double(points - 1)));
    return out;
}

// ---------------------------------------------------------------------------
// Flag parsing helpers: complex literals "a+bi" / "a-bi" / "a" / "bi", and
// angles given in radians or as (coefficient) pi (/divisor).
// ---------------------------------------------------------------------------

inline std::optional<Complex> parse_complex(std::string_view s) {
    auto parse_num = [](std::string_view v, double& out, std::size_t& used) -> bool {
        char* end = nullptr;
        std::string tmp(v);
        out = std::strtod(tmp.c_str(), &end);
        used = static_cast<std::size_t>(end - tmp.c_str());
        return used > 0;
    };
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) return std::nullopt;

    // pure imaginary: "i", "-i", "2.5i"
    if (t.back() == 'i' || t.back() == 'I') {
        std::string body = t.substr(0, t.size() - 1);
        // search for a +/- splitting real and imaginary parts (not an exponent sign)
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') &&
                !(body[k - 1] == 'e' || body[k - 1] == 'E')) {
                double re, im;
                std::size_t u1, u2;
                if (!parse_num(body.substr(0, k), re, u1) || u1 != k) return std::nullopt;
                std::string ims = body.substr(k);
                if (ims == "+") im = 1.0;
                else if (ims == "-") im = -1.0;
                else if (!parse_num(ims, im, u2) || u2 != ims.size()) return std::nullopt;
                return Complex{re, im};
            }
        }
        double im;
        std::size_t u;
        if (body.empty()) return Complex{0.0, 1.0};
        if (body == "-") return Complex{0.0, -1.0};
        if (body == "+") return Complex{0.0, 1.0};
        if (!parse_num(body, im, u) || u != body.size()) return std::nullopt;
        return Complex{0.0, im};
    }
    double re;
    std::size_t u;
    if (!parse_num(t, re, u) || u != t.size()) return std::nullopt;
    return Complex{re, 0.0};
}

/// Angle in units of pi when "pi" appears ("pi", "-pi/2", "3pi/4", "0.5pi"),
/// otherwise plain radians.  pi_multiple is set accordingly so callers can
/// use the exact sinpi/cospi path.
struct Angle {
    double value = 0.0; // radians, or multiples of pi when is_pi_multiple
    bool is_pi_multiple = false;

    double radians() const { return is_pi_multiple ? value * pi : value; }
    double cos_of() const { return is_pi_multiple ? cospi(value) : std::cos(value); }
    double sin_of() const { return is_pi_multiple ? sinpi(value) : std::sin(value); }
};

inline std::optional<Angle> parse_angle(std::string_view s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) return std::nullopt;
    auto ppos = t.find("pi");
    if (ppos == std::string::npos) {
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size()) return std::nullopt;
        return Angle{v, false};
    }
    std::string head = t.substr(0, ppos), tail = t.substr(ppos + 2);
    double coeff = 1.0;
    if (head == "-") coeff = -1.0;
    else if (!head.empty() && head != "+") {
        char* end = nullptr;
        coeff = std::strtod(head.c_str(), &end);
        if (end != head.c_str() + head.size()) return std::nullopt;
    }
    if (!tail.empty()) {
        if (tail[0] != '/') return std::nullopt;
        char* end = nullptr;
        double div = std::strtod(tail.c_str() + 1, &end);
        if (end != tail.c_str() + tail.size() || div == 0.0) return std::nullopt;
        coeff /= div;
    }
    return Angle{coeff, true};
}

} // namespace mlopc
