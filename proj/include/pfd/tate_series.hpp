#pragma once

#include "pfd/valued_field.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pfd {

// Exponent vectors are numerators over the field scale p^level.
using Exps = std::vector<std::int64_t>;

struct SeriesParams {
    FieldParams field;
    std::vector<std::string> vars;
    std::int64_t deg_cap = 8;
    std::vector<int> var_levels;  // defaults to field.level

    SeriesParams() = default;
    SeriesParams(FieldParams f, std::vector<std::string> v, std::int64_t d, std::vector<int> levels = {});

    std::size_t nvars() const { return vars.size(); }
    int var_index(const std::string& name) const;  // -1 when absent
    std::int64_t deg_cap_index() const { return deg_cap * field.scale(); }
    std::int64_t var_step(std::size_t i) const;      // index granularity of variable i

    friend bool operator==(const SeriesParams& a, const SeriesParams& b) {
        return a.field == b.field && a.vars == b.vars && a.deg_cap == b.deg_cap && a.var_levels == b.var_levels;
    }
    friend bool operator!=(const SeriesParams& a, const SeriesParams& b) { return !(a == b); }
};

using ParamsPtr = std::shared_ptr<const SeriesParams>;

ParamsPtr make_params(FieldParams f, std::vector<std::string> vars, std::int64_t deg_cap,
                      std::vector<int> levels = {});

class TateSeries {
public:
    using TermMap = std::map<Exps, FieldElement>;

    TateSeries() = default;
    explicit TateSeries(ParamsPtr params) : params_(std::move(params)) {}

    static TateSeries constant(ParamsPtr params, const FieldElement& c);
    static TateSeries monomial(ParamsPtr params, const std::vector<Rational>& exps, const FieldElement& c);
    static TateSeries monomial_index(ParamsPtr params, const Exps& exps, const FieldElement& c);
    static TateSeries variable(ParamsPtr params, const std::string& name);

    const ParamsPtr& params_ptr() const { return params_; }
    const SeriesParams& params() const { return *params_; }
    const FieldParams& field() const { return params_->field; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // Adds c x^e, dropping terms above the degree cap and zero coefficients.
    void add_term(const Exps& e, const FieldElement& c);
    FieldElement coefficient(const Exps& e) const;
    FieldElement constant_term() const;

    Valuation gauss_norm() const;
    std::int64_t weighted_degree_index(const Exps& e) const;
    Rational degree() const;
    std::int64_t degree_in(const std::vector<int>& vars) const;  // integer part sum over vars (index units)

    TateSeries operator-() const;
    friend TateSeries operator+(const TateSeries& a, const TateSeries& b);
    friend TateSeries operator-(const TateSeries& a, const TateSeries& b);
    friend TateSeries operator*(const TateSeries& a, const TateSeries& b);
    TateSeries& operator+=(const TateSeries& b);
    TateSeries& operator-=(const TateSeries& b);
    TateSeries scalar_mul(const FieldElement& c) const;
    TateSeries pow(std::uint64_t n) const;

    // Sets variable i to eps in {0,1}, keeping the variable list.
    TateSeries set_variable(std::size_t i, int eps) const;
    // Sets variable i to eps and removes it from the variable list.
    TateSeries face_restrict(std::size_t i, int eps) const;
    // Largest exponent level among the given variables (all when empty).
    int support_level(const std::vector<int>& vars = {}) const;
    // Multiplies the exponents of the selected variables by p.
    TateSeries frobenius_pullback(const std::vector<int>& vars) const;
    // Drops terms whose exponents (in the selected variables; all when empty) exceed level h.
    TateSeries truncate_level(int h, const std::vector<int>& vars = {}) const;
    // Keeps terms whose total degree in vars is exactly d (index units).
    TateSeries homogeneous_part(const std::vector<int>& vars, std::int64_t d_index) const;
    TateSeries truncate_degree(const std::vector<int>& vars, std::int64_t max_index) const;
    TateSeries with_coeff_cap(const Rational& cap) const;
    // Re-expresses the series over target params; variables are matched by name.
    TateSeries embed(const ParamsPtr& target) const;
    // All coefficients have valuation >= v.
    bool vanishes_below(const Rational& v) const;

    friend bool operator==(const TateSeries& a, const TateSeries& b);
    friend bool operator!=(const TateSeries& a, const TateSeries& b) { return !(a == b); }

private:
    ParamsPtr params_;
    TermMap terms_;
};

void require_same(const SeriesParams& a, const SeriesParams& b, const char* op);

Valuation gauss_norm(const TateSeries& f);

// Composite series. Assigned variables must have integer exponents unless the
// image is 0, 1 or a coefficient-one monomial. Unassigned variables map to the
// target variable of the same name.
TateSeries substitute(const TateSeries& f, const std::map<std::string, TateSeries>& assignment,
                      const ParamsPtr& target, bool check_unit_ball = true);

TateSeries face_restrict(const TateSeries& f, std::size_t r, int eps);
int support_level(const TateSeries& f);
TateSeries frobenius_pullback(const TateSeries& f, const std::vector<int>& vars);

// Inverse of a series c(1 + u) with c a field unit-or-not and v(u) > 0.
TateSeries invert_series(const TateSeries& f);

// Level of an exponent numerator: smallest h with k / p^H in (1/p^h) Z.
int index_level(std::int64_t k, const FieldParams& field);

namespace kernels {
TateSeries mul_serial(const TateSeries& a, const TateSeries& b);
TateSeries mul_parallel(const TateSeries& a, const TateSeries& b);
}  // namespace kernels

}  // namespace pfd
