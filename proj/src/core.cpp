#include "advkit/core.hpp"

#include <cmath>

namespace advkit {

std::string to_exact_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InputError("empty rational literal");
    auto dot = s.find('.');
    try {
        if (dot != std::string::npos) {
            std::string sign;
            if (s[0] == '-' || s[0] == '+') {
                sign = s[0] == '-' ? "-" : "";
                s = s.substr(1);
                dot -= 1;
            }
            std::string whole = s.substr(0, dot);
            std::string frac = s.substr(dot + 1);
            if (whole.empty()) whole = "0";
            for (char c : whole + frac)
                if (c < '0' || c > '9') throw InputError("bad decimal literal: " + std::string(text));
            mpz_class num(sign + whole + frac);
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
            Rational r(num, den);
            r.canonicalize();
            return r;
        }
        if (s.find_first_not_of("+-0123456789/") != std::string::npos)
            throw InputError("bad rational literal: " + std::string(text));
        if (s[0] == '+') s = s.substr(1);
        Rational r(s, 10);
        if (r.get_den() == 0) throw InputError("zero denominator: " + std::string(text));
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw InputError("bad rational literal: " + std::string(text));
    }
}

double to_double(const Rational& r) { return r.get_d(); }

Rational from_double(double v) {
    if (!std::isfinite(v)) throw InputError("non-finite double cannot become a rational");
    Rational r(v);
    r.canonicalize();
    return r;
}

}  // namespace advkit
