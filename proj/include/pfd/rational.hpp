#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace pfd {

using Rational = boost::rational<std::int64_t>;

// "a/b" always, denominator positive.
std::string to_string(const Rational& r);
// Accepts "a/b" or "a".
Rational parse_rational(const std::string& s);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
std::int64_t floor(const Rational& r);
std::int64_t ceil(const Rational& r);

// Exponent of p in |n|; n must be nonzero.
int vp_int(std::int64_t n, std::int64_t p);
bool is_prime(std::int64_t p);
std::int64_t ipow(std::int64_t b, int e);

// A rational valuation or +infinity.
class Valuation {
public:
    Valuation() : inf_(true) {}
    Valuation(Rational v) : inf_(false), v_(v) {}
    Valuation(std::int64_t v) : inf_(false), v_(v) {}
    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return inf_; }
    const Rational& value() const;

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }
    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.inf_ || b.inf_) return Valuation();
        return Valuation(a.v_ + b.v_);
    }

    std::string str() const { return inf_ ? "inf" : to_string(v_); }

private:
    bool inf_;
    Rational v_{0};
};

inline Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }
inline Valuation max(const Valuation& a, const Valuation& b) { return a < b ? b : a; }

}  // namespace pfd
