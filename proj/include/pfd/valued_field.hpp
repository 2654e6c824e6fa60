#pragma once

#include "pfd/errors.hpp"
#include "pfd/rational.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace pfd {

// Truncation data for K (char 0, pi = p) or its tilt (char p, pi = t).
// Exponents live in (1/p^level) Z; digits are kept for exponents < cap.
struct FieldParams {
    std::int64_t p = 2;
    bool char_p = false;
    int level = 0;
    Rational cap{8};

    FieldParams() = default;
    FieldParams(std::int64_t p_, bool char_p_, int level_, Rational cap_);

    std::int64_t scale() const { return ipow(p, level); }
    std::int64_t cap_index() const;
    // Index (numerator over p^level) of an exponent; level error if not representable.
    std::int64_t index_of(const Rational& e) const;
    Rational exponent_of(std::int64_t index) const { return Rational(index, scale()); }

    FieldParams with_cap(Rational c) const { return FieldParams(p, char_p, level, c); }
    FieldParams with_level(int h) const { return FieldParams(p, char_p, h, cap); }
    FieldParams flat() const { return FieldParams(p, true, level, cap); }
    FieldParams sharp() const { return FieldParams(p, false, level, cap); }

    friend bool operator==(const FieldParams& a, const FieldParams& b) {
        return a.p == b.p && a.char_p == b.char_p && a.level == b.level && a.cap == b.cap;
    }
    friend bool operator!=(const FieldParams& a, const FieldParams& b) { return !(a == b); }
};

class FieldElement {
public:
    FieldElement() = default;
    explicit FieldElement(const FieldParams& params) : params_(params) {}

    static FieldElement zero(const FieldParams& params) { return FieldElement(params); }
    static FieldElement one(const FieldParams& params) { return from_int(params, 1); }
    static FieldElement from_int(const FieldParams& params, std::int64_t n);
    static FieldElement from_rational(const FieldParams& params, const Rational& r);
    static FieldElement from_mpq(const FieldParams& params, const mpq_class& q);
    // digit * pi^e
    static FieldElement monomial(const FieldParams& params, const Rational& e, std::int64_t digit = 1);
    // Sums the terms with carries; drops exponents >= cap.
    static FieldElement make(const FieldParams& params,
                             const std::vector<std::pair<Rational, std::int64_t>>& terms);
    // Raw constructor from per-index integer coefficients starting at index lo.
    static FieldElement from_coefficients(const FieldParams& params, std::int64_t lo,
                                          std::vector<std::int64_t> coeffs);

    const FieldParams& params() const { return params_; }
    bool is_zero() const { return digits_.empty(); }
    Valuation valuation() const;
    bool is_topologically_nilpotent() const { return valuation() > Valuation(0); }
    bool is_power_bounded() const { return valuation() >= Valuation(0); }

    std::int64_t digit_at(const Rational& e) const;
    std::int64_t digit_at_index(std::int64_t k) const;
    std::int64_t low_index() const { return lo_; }
    std::int64_t high_index() const { return lo_ + static_cast<std::int64_t>(digits_.size()); }
    std::vector<std::pair<Rational, std::int64_t>> terms() const;
    std::vector<std::pair<std::int64_t, std::int64_t>> nonzero_indices() const;
    std::size_t num_nonzero() const;

    FieldElement operator-() const;
    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

    // For v(x) >= 0 the product is 1 below the cap; for v(x) < 0 only below cap + v(x).
    FieldElement invert() const;
    FieldElement pow(std::uint64_t n) const;
    // Exact multiplication by pi^e, truncated at the cap.
    FieldElement shift(const Rational& e) const;
    // Keeps exponents < e.
    FieldElement truncate_below(const Rational& e) const;
    FieldElement with_cap(const Rational& cap) const;
    FieldElement embed_level(int level) const;
    // Same digit pattern in the other characteristic (the residue correspondence below 1).
    FieldElement reinterpret(const FieldParams& params) const;

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.params_ == b.params_ && a.lo_ == b.lo_ && a.digits_ == b.digits_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
    FieldParams params_;
    std::int64_t lo_ = 0;
    std::vector<std::int32_t> digits_;  // digits_[j] sits at index lo_ + j; both ends nonzero
};

void require_same(const FieldParams& a, const FieldParams& b, const char* op);

// v_p(binom(p^h, i)).
Rational binomial_valuation(std::int64_t p, int h, std::int64_t i);

bool is_topologically_nilpotent(const FieldElement& x);
bool is_power_bounded(const FieldElement& x);

// p-adic valuation of a nonzero rational.
std::int64_t vp_mpq(const mpq_class& q, std::int64_t p);

}  // namespace pfd
