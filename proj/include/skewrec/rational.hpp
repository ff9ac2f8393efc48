#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "skewrec/error.hpp"

namespace skewrec {

/// Exact rational with int64 numerator/denominator, always reduced,
/// denominator > 0. Intermediates run through __int128; a result that does
/// not fit back into int64 throws value_overflow instead of wrapping.
/// Measures and metric values are decided with these, never with floats.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}

    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0)
            throw argument_error("rational: zero denominator");
        __int128 n = num, d = den;
        if (d < 0) { n = -n; d = -d; }
        reduce_and_store(n, d);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    Rational operator+(const Rational& o) const {
        std::int64_t g = std::gcd(den_, o.den_);
        __int128 n = (__int128)num_ * (o.den_ / g) + (__int128)o.num_ * (den_ / g);
        __int128 d = (__int128)(den_ / g) * o.den_;
        return Rational(n, d, exact_tag{});
    }

    Rational operator-(const Rational& o) const {
        return *this + Rational(-o.num_, o.den_, no_reduce_tag{});
    }

    Rational operator*(const Rational& o) const {
        std::int64_t g1 = std::gcd(std::abs(num_), o.den_);
        std::int64_t g2 = std::gcd(den_, std::abs(o.num_));
        __int128 n = (__int128)(num_ / g1) * (o.num_ / g2);
        __int128 d = (__int128)(den_ / g2) * (o.den_ / g1);
        return Rational(n, d, exact_tag{});
    }

    Rational operator/(const Rational& o) const {
        if (o.num_ == 0)
            throw argument_error("rational: division by zero");
        return *this * Rational(o.den_, o.num_);
    }

    Rational operator-() const { return Rational(-num_, den_, no_reduce_tag{}); }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    // den_ > 0 on both sides, so cross-multiplication keeps the order.
    bool operator<(const Rational& o) const {
        return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
    }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    /// Smallest integer >= the value.
    std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if (num_ > 0 && num_ % den_ != 0) ++q;
        return q;
    }

    /// "3/4", or "3" when the denominator is 1.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "p/q", "p", and nothing else.
    static Rational parse(const std::string& text);

    double to_double() const { return (double)num_ / (double)den_; }

private:
    struct exact_tag {};
    struct no_reduce_tag {};

    Rational(std::int64_t n, std::int64_t d, no_reduce_tag) : num_(n), den_(d) {}

    Rational(__int128 n, __int128 d, exact_tag) {
        reduce_and_store(n, d);
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    void reduce_and_store(__int128 n, __int128 d) {
        __int128 g = gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n == 0) d = 1;
        constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw value_overflow("rational: value exceeds 64-bit range");
        num_ = (std::int64_t)n;
        den_ = (std::int64_t)d;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        size_t used = 0;
        if (slash == std::string::npos) {
            std::int64_t v = std::stoll(text, &used);
            if (used != text.size()) throw parse_error("rational: trailing characters in '" + text + "'");
            return Rational(v);
        }
        std::int64_t n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw parse_error("rational: bad numerator in '" + text + "'");
        std::string dpart = text.substr(slash + 1);
        std::int64_t d = std::stoll(dpart, &used);
        if (used != dpart.size()) throw parse_error("rational: bad denominator in '" + text + "'");
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        throw parse_error("rational: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
        throw value_overflow("rational: literal out of 64-bit range: '" + text + "'");
    }
}

} // namespace skewrec
