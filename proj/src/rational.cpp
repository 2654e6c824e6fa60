#include "pfd/rational.hpp"

#include "pfd/errors.hpp"

#include <cctype>

namespace pfd {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Level: return "level_error";
    case ErrorKind::Value: return "value_error";
    case ErrorKind::ParamsMismatch: return "params_mismatch";
    case ErrorKind::Division: return "division_error";
    case ErrorKind::Convergence: return "convergence_error";
    case ErrorKind::Cap: return "cap_error";
    case ErrorKind::Singularity: return "singularity_error";
    case ErrorKind::Certification: return "certification_failure";
    case ErrorKind::Integrity: return "integrity_error";
    case ErrorKind::Precondition: return "precondition_error";
    case ErrorKind::Precision: return "precision_error";
    case ErrorKind::Approximation: return "approximation_failure";
    case ErrorKind::Constraint: return "constraint_error";
    case ErrorKind::Parse: return "parse_error";
    }
    return "error";
}

std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
    auto parse_int = [&](const std::string& t) -> std::int64_t {
        if (t.empty()) fail(ErrorKind::Parse, "bad rational '" + s + "'");
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) fail(ErrorKind::Parse, "bad rational '" + s + "'");
        for (std::size_t j = i; j < t.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(t[j])))
                fail(ErrorKind::Parse, "bad rational '" + s + "'");
        try {
            return std::stoll(t);
        } catch (const std::exception&) {
            fail(ErrorKind::Parse, "rational out of range '" + s + "'");
        }
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    std::int64_t num = parse_int(s.substr(0, slash));
    std::int64_t den = parse_int(s.substr(slash + 1));
    if (den == 0) fail(ErrorKind::Parse, "zero denominator in '" + s + "'");
    return Rational(num, den);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t floor(const Rational& r) { return floor_div(r.numerator(), r.denominator()); }
std::int64_t ceil(const Rational& r) { return ceil_div(r.numerator(), r.denominator()); }

int vp_int(std::int64_t n, std::int64_t p) {
    if (n == 0) fail(ErrorKind::Value, "v_p of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

const Rational& Valuation::value() const {
    if (inf_) fail(ErrorKind::Value, "infinite valuation has no value");
    return v_;
}

}  // namespace pfd
