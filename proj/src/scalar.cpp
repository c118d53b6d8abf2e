#include "exdiff/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace exdiff {

namespace {

std::string rat_str(const mpq_class& q) {
    std::ostringstream os;
    os << q;  // gmp prints "num/den" in lowest terms, "num" when den == 1
    return os.str();
}

// Parses a rational number starting at s[pos]; advances pos.
mpq_class parse_rat(std::string_view s, size_t& pos) {
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) throw ParseError("expected number in scalar at '" + std::string(s.substr(start)) + "'");
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        size_t den_digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++den_digits;
        if (den_digits == 0) throw ParseError("expected denominator in scalar");
    }
    mpq_class q(std::string(s.substr(start, pos - start)));
    q.canonicalize();
    return q;
}

}  // namespace

std::string GaussianRational::str() const {
    bool has_re = sgn(re_) != 0;
    bool has_im = sgn(im_) != 0;
    if (!has_re && !has_im) return "0";
    std::string out;
    if (has_re) out += rat_str(re_);
    if (has_im) {
        std::string im = rat_str(im_);
        if (has_re && im[0] != '-') out += '+';
        if (im == "1")
            out += "i";
        else if (im == "-1")
            out += "-i";
        else
            out += im + "*i";
    }
    return out;
}

GaussianRational GaussianRational::parse(std::string_view s) {
    // strip spaces
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ParseError("empty scalar");

    mpq_class re(0), im(0);
    size_t pos = 0;
    while (pos < t.size()) {
        size_t term_start = pos;
        int sign = 1;
        if (t[pos] == '+') {
            ++pos;
        } else if (t[pos] == '-') {
            sign = -1;
            ++pos;
        } else if (term_start != 0) {
            throw ParseError("expected '+' or '-' in scalar '" + t + "'");
        }
        if (pos >= t.size()) throw ParseError("dangling sign in scalar '" + t + "'");
        if (t[pos] == 'i') {
            ++pos;
            im += sign;
            continue;
        }
        mpq_class q = parse_rat(t, pos);
        if (pos < t.size() && (t[pos] == '*' || t[pos] == 'i')) {
            if (t[pos] == '*') {
                ++pos;
                if (pos >= t.size() || t[pos] != 'i') throw ParseError("expected 'i' after '*' in scalar '" + t + "'");
            }
            ++pos;  // consume 'i'
            im += sign * q;
        } else {
            re += sign * q;
        }
    }
    return GaussianRational(re, im);
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << x.str(); }

}  // namespace exdiff
