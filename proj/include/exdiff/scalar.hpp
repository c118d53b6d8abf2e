#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exdiff {

// Error hierarchy shared by all modules.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct IndexRange : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct CapOverflow : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct ResidualNonzero : Error {
    using Error::Error;
};

/// Exact element of Q(i): re + im*i with arbitrary-precision rational parts.
/// Values are always normalized (lowest terms, positive denominators); GMP
/// keeps canonical form through arithmetic, so structural equality is
/// semantic equality.
class GaussianRational {
  public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long n) : re_(n), im_(0) {}
    GaussianRational(long num, long den) : re_(num, den), im_(0) { re_.canonicalize(); }
    GaussianRational(const mpq_class& re, const mpq_class& im) : re_(re), im_(im) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational zero() { return GaussianRational(); }
    static GaussianRational one() { return GaussianRational(1); }
    /// The imaginary unit.
    static GaussianRational i() { return GaussianRational(mpq_class(0), mpq_class(1)); }
    /// n*i for integer n.
    static GaussianRational i_times(long n) { return GaussianRational(mpq_class(0), mpq_class(n)); }
    static GaussianRational from_rational(long num, long den) { return GaussianRational(num, den); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational operator-() const { return GaussianRational(-re_, -im_, no_canon{}); }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw DivisionByZero();
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
        mpq_class i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    GaussianRational inverse() const {
        GaussianRational r = one();
        r /= *this;
        return r;
    }
    GaussianRational conj() const { return GaussianRational(re_, -im_, no_canon{}); }

    /// Multiply by an integer in place (hot path in mode enumeration).
    void scale_int(long n) {
        re_ *= n;
        im_ *= n;
    }
    /// Multiply by n*i in place.
    void scale_int_i(long n) {
        mpq_class r = im_ * (-n);
        im_ = re_ * n;
        re_ = std::move(r);
    }

    /// Canonical text form: "a/b+c/d*i" with zero parts and unit
    /// denominators omitted ("0", "3", "-1/2", "i", "-1/2*i", "1+i", ...).
    std::string str() const;
    /// Parse the textual form; accepts every string produced by str().
    static GaussianRational parse(std::string_view s);

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& x);

  private:
    struct no_canon {};
    GaussianRational(mpq_class re, mpq_class im, no_canon) : re_(std::move(re)), im_(std::move(im)) {}
    mpq_class re_;
    mpq_class im_;
};

using GR = GaussianRational;

}  // namespace exdiff
