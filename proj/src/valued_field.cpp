#include "pfd/valued_field.hpp"

#include <algorithm>
#include <string>

namespace pfd {

FieldParams::FieldParams(std::int64_t p_, bool char_p_, int level_, Rational cap_)
    : p(p_), char_p(char_p_), level(level_), cap(cap_) {
    if (!is_prime(p)) fail(ErrorKind::Value, "p = " + std::to_string(p) + " is not prime");
    if (level < 0) fail(ErrorKind::Level, "negative level");
    if (ipow(p, level) > (std::int64_t(1) << 30)) fail(ErrorKind::Level, "level too large");
    if (scale() % cap.denominator() != 0)
        fail(ErrorKind::Level, "cap " + to_string(cap) + " not representable at level " +
                                   std::to_string(level));
}

std::int64_t FieldParams::cap_index() const { return cap.numerator() * (scale() / cap.denominator()); }

std::int64_t FieldParams::index_of(const Rational& e) const {
    std::int64_t s = scale();
    if (s % e.denominator() != 0)
        fail(ErrorKind::Level, "exponent " + to_string(e) + " needs level above " + std::to_string(level));
    return e.numerator() * (s / e.denominator());
}

void require_same(const FieldParams& a, const FieldParams& b, const char* op) {
    if (a != b) fail(ErrorKind::ParamsMismatch, std::string(op) + ": field params differ");
}

FieldElement FieldElement::from_coefficients(const FieldParams& params, std::int64_t lo,
                                             std::vector<std::int64_t> c) {
    FieldElement r(params);
    const std::int64_t cap = params.cap_index();
    if (lo >= cap) return r;
    if (lo + static_cast<std::int64_t>(c.size()) > cap) c.resize(static_cast<std::size_t>(cap - lo));
    const std::int64_t p = params.p;
    if (params.char_p) {
        for (auto& x : c) {
            x %= p;
            if (x < 0) x += p;
        }
    } else {
        // p copies at index k become one at k + scale; negative values borrow up to the cap.
        const std::int64_t s = params.scale();
        const std::int64_t room = cap - lo;
        for (std::int64_t k = 0; k < room; ++k) {
            if (k >= static_cast<std::int64_t>(c.size())) break;
            std::int64_t x = c[k];
            if (x >= 0 && x < p) continue;
            std::int64_t q = floor_div(x, p);
            c[k] = x - q * p;
            std::int64_t t = k + s;
            if (t < room) {
                if (t >= static_cast<std::int64_t>(c.size())) c.resize(static_cast<std::size_t>(t + 1), 0);
                c[t] += q;
            }
        }
    }
    std::size_t first = 0;
    while (first < c.size() && c[first] == 0) ++first;
    if (first == c.size()) return r;
    std::size_t last = c.size();
    while (c[last - 1] == 0) --last;
    r.lo_ = lo + static_cast<std::int64_t>(first);
    r.digits_.assign(c.begin() + static_cast<std::ptrdiff_t>(first),
                     c.begin() + static_cast<std::ptrdiff_t>(last));
    return r;
}

FieldElement FieldElement::make(const FieldParams& params,
                                const std::vector<std::pair<Rational, std::int64_t>>& terms) {
    if (terms.empty()) return FieldElement(params);
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> idx;
    idx.reserve(terms.size());
    for (const auto& [e, d] : terms) {
        std::int64_t k = params.index_of(e);
        if (d < 0 || d >= params.p)
            fail(ErrorKind::Value, "digit " + std::to_string(d) + " out of range for p = " + std::to_string(params.p));
        if (d == 0) continue;
        idx.emplace_back(k, d);
        if (!any || k < lo) lo = k;
        if (!any || k > hi) hi = k;
        any = true;
    }
    if (!any) return FieldElement(params);
    std::vector<std::int64_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
    for (auto [k, d] : idx) c[static_cast<std::size_t>(k - lo)] += d;
    return from_coefficients(params, lo, std::move(c));
}

FieldElement FieldElement::monomial(const FieldParams& params, const Rational& e, std::int64_t digit) {
    return make(params, {{e, digit}});
}

FieldElement FieldElement::from_int(const FieldParams& params, std::int64_t n) {
    return from_mpq(params, mpq_class(static_cast<long>(n)));
}

FieldElement FieldElement::from_rational(const FieldParams& params, const Rational& r) {
    return from_mpq(params, mpq_class(static_cast<long>(r.numerator()), static_cast<unsigned long>(r.denominator())));
}

std::int64_t vp_mpq(const mpq_class& q, std::int64_t p) {
    if (q == 0) fail(ErrorKind::Value, "v_p of zero");
    mpz_class pz = static_cast<long>(p);
    auto vz = [&](mpz_class z) {
        std::int64_t v = 0;
        if (z < 0) z = -z;
        while (mpz_divisible_p(z.get_mpz_t(), pz.get_mpz_t())) {
            z /= pz;
            ++v;
        }
        return v;
    };
    return vz(q.get_num()) - vz(q.get_den());
}

FieldElement FieldElement::from_mpq(const FieldParams& params, const mpq_class& q0) {
    FieldElement r(params);
    mpq_class q = q0;
    q.canonicalize();
    if (q == 0) return r;
    const long p = static_cast<long>(params.p);
    mpz_class pz = p;
    if (params.char_p) {
        mpz_class num = q.get_num(), den = q.get_den();
        if (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t()))
            fail(ErrorKind::Value, "rational with p in the denominator has no image in characteristic p");
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
        mpz_class d = (num * inv) % pz;
        if (d < 0) d += pz;
        return make(params, {{Rational(0), d.get_si()}});
    }
    std::int64_t v = vp_mpq(q, params.p);
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class pv;
    mpz_pow_ui(pv.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(v >= 0 ? v : -v));
    if (v > 0) num /= pv;
    if (v < 0) den /= pv;
    // integer digits needed: exponents v + j < cap
    std::int64_t m = ceil(params.cap - Rational(v));
    if (m <= 0) return r;
    mpz_class mod;
    mpz_pow_ui(mod.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class x = (num * inv) % mod;
    if (x < 0) x += mod;
    const std::int64_t s = params.scale();
    std::vector<std::int64_t> c(static_cast<std::size_t>((m - 1) * s + 1), 0);
    for (std::int64_t j = 0; j < m && x != 0; ++j) {
        mpz_class d = x % pz;
        x /= pz;
        c[static_cast<std::size_t>(j * s)] = d.get_si();
    }
    return from_coefficients(params, v * s, std::move(c));
}

Valuation FieldElement::valuation() const {
    if (digits_.empty()) return Valuation::infinity();
    return Valuation(params_.exponent_of(lo_));
}

std::int64_t FieldElement::digit_at_index(std::int64_t k) const {
    if (k < lo_ || k >= high_index()) return 0;
    return digits_[static_cast<std::size_t>(k - lo_)];
}

std::int64_t FieldElement::digit_at(const Rational& e) const { return digit_at_index(params_.index_of(e)); }

std::vector<std::pair<Rational, std::int64_t>> FieldElement::terms() const {
    std::vector<std::pair<Rational, std::int64_t>> out;
    for (std::size_t j = 0; j < digits_.size(); ++j)
        if (digits_[j] != 0) out.emplace_back(params_.exponent_of(lo_ + static_cast<std::int64_t>(j)), digits_[j]);
    return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> FieldElement::nonzero_indices() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::size_t j = 0; j < digits_.size(); ++j)
        if (digits_[j] != 0) out.emplace_back(lo_ + static_cast<std::int64_t>(j), digits_[j]);
    return out;
}

std::size_t FieldElement::num_nonzero() const {
    return static_cast<std::size_t>(std::count_if(digits_.begin(), digits_.end(), [](auto d) { return d != 0; }));
}

namespace {

FieldElement combine(const FieldElement& a, const FieldElement& b, int sign) {
    require_same(a.params(), b.params(), "add");
    if (b.is_zero()) return a;
    if (a.is_zero() && sign > 0) return b;
    std::int64_t lo = a.is_zero() ? b.low_index() : std::min(a.low_index(), b.low_index());
    std::int64_t hi = a.is_zero() ? b.high_index() : std::max(a.high_index(), b.high_index());
    std::vector<std::int64_t> c(static_cast<std::size_t>(hi - lo), 0);
    for (std::int64_t k = a.low_index(); k < a.high_index(); ++k) c[static_cast<std::size_t>(k - lo)] += a.digit_at_index(k);
    for (std::int64_t k = b.low_index(); k < b.high_index(); ++k)
        c[static_cast<std::size_t>(k - lo)] += sign * b.digit_at_index(k);
    return FieldElement::from_coefficients(a.params(), lo, std::move(c));
}

}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) { return combine(a, b, 1); }
FieldElement operator-(const FieldElement& a, const FieldElement& b) { return combine(a, b, -1); }

FieldElement FieldElement::operator-() const { return FieldElement(params_) - *this; }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same(a.params(), b.params(), "mul");
    if (a.is_zero() || b.is_zero()) return FieldElement(a.params());
    const std::int64_t cap = a.params().cap_index();
    const std::int64_t lo = a.lo_ + b.lo_;
    if (lo >= cap) return FieldElement(a.params());
    auto na = a.nonzero_indices();
    auto nb = b.nonzero_indices();
    std::int64_t hi = std::min(cap, a.high_index() + b.high_index() - 1);
    std::vector<std::int64_t> c(static_cast<std::size_t>(hi - lo), 0);
    for (auto [ia, da] : na) {
        for (auto [ib, db] : nb) {
            std::int64_t k = ia + ib;
            if (k >= cap) break;
            c[static_cast<std::size_t>(k - lo)] += da * db;
        }
    }
    return FieldElement::from_coefficients(a.params(), lo, std::move(c));
}

FieldElement FieldElement::pow(std::uint64_t n) const {
    FieldElement result = one(params_);
    FieldElement base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

FieldElement FieldElement::shift(const Rational& e) const {
    std::int64_t k = params_.index_of(e);
    if (digits_.empty()) return *this;
    std::vector<std::int64_t> c(digits_.begin(), digits_.end());
    return from_coefficients(params_, lo_ + k, std::move(c));
}

FieldElement FieldElement::truncate_below(const Rational& e) const {
    if (e >= params_.cap) return *this;
    return with_cap(e).with_cap(params_.cap);
}

FieldElement FieldElement::with_cap(const Rational& cap) const {
    FieldParams np = params_.with_cap(cap);
    if (digits_.empty()) return FieldElement(np);
    std::vector<std::int64_t> c(digits_.begin(), digits_.end());
    return from_coefficients(np, lo_, std::move(c));
}

FieldElement FieldElement::embed_level(int level) const {
    if (level < params_.level) fail(ErrorKind::Level, "cannot embed into a lower level");
    FieldParams np = params_.with_level(level);
    if (digits_.empty()) return FieldElement(np);
    std::int64_t f = ipow(params_.p, level - params_.level);
    std::vector<std::int64_t> c(static_cast<std::size_t>((digits_.size() - 1) * f + 1), 0);
    for (std::size_t j = 0; j < digits_.size(); ++j) c[j * static_cast<std::size_t>(f)] = digits_[j];
    return from_coefficients(np, lo_ * f, std::move(c));
}

FieldElement FieldElement::reinterpret(const FieldParams& params) const {
    if (params.p != params_.p || params.level != params_.level)
        fail(ErrorKind::ParamsMismatch, "reinterpret needs the same p and level");
    if (digits_.empty()) return FieldElement(params);
    std::vector<std::int64_t> c(digits_.begin(), digits_.end());
    return from_coefficients(params, lo_, std::move(c));
}

FieldElement FieldElement::invert() const {
    if (digits_.empty()) fail(ErrorKind::Division, "inverse of zero up to precision");
    const Rational v = params_.exponent_of(lo_);
    FieldElement u = shift(-v);
    // Newton: y <- y(2 - u y); the error valuation doubles in index units.
    std::int64_t d0 = u.digit_at_index(0);
    mpz_class inv, dz = static_cast<long>(d0), pz = static_cast<long>(params_.p);
    mpz_invert(inv.get_mpz_t(), dz.get_mpz_t(), pz.get_mpz_t());
    FieldElement y = from_int(params_, inv.get_si());
    const FieldElement two = from_int(params_, 2);
    const std::int64_t target = params_.cap_index() + 1;
    for (std::int64_t prec = 1; prec < target; prec *= 2) y = y * (two - u * y);
    return y.shift(-v);
}

Rational binomial_valuation(std::int64_t p, int h, std::int64_t i) {
    std::int64_t n = ipow(p, h);
    if (i < 0 || i > n) fail(ErrorKind::Value, "binomial index out of range");
    if (i == 0 || i == n) return Rational(0);
    // Kummer: the number of carries adding i and p^h - i in base p equals h - v_p(i).
    return Rational(h - vp_int(i, p));
}

bool is_topologically_nilpotent(const FieldElement& x) { return x.is_topologically_nilpotent(); }
bool is_power_bounded(const FieldElement& x) { return x.is_power_bounded(); }

}  // namespace pfd
