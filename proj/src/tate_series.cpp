#include "pfd/tate_series.hpp"

#include <algorithm>
#include <omp.h>

namespace pfd {

SeriesParams::SeriesParams(FieldParams f, std::vector<std::string> v, std::int64_t d, std::vector<int> levels)
    : field(f), vars(std::move(v)), deg_cap(d), var_levels(std::move(levels)) {
    if (deg_cap < 0) fail(ErrorKind::Value, "negative degree cap");
    if (var_levels.empty()) var_levels.assign(vars.size(), field.level);
    if (var_levels.size() != vars.size()) fail(ErrorKind::Value, "var_levels size mismatch");
    for (int h : var_levels)
        if (h < 0 || h > field.level) fail(ErrorKind::Level, "variable level exceeds field level");
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) fail(ErrorKind::Value, "duplicate variable " + vars[i]);
}

int SeriesParams::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

std::int64_t SeriesParams::var_step(std::size_t i) const { return ipow(field.p, field.level - var_levels[i]); }

ParamsPtr make_params(FieldParams f, std::vector<std::string> vars, std::int64_t deg_cap, std::vector<int> levels) {
    return std::make_shared<const SeriesParams>(f, std::move(vars), deg_cap, std::move(levels));
}

void require_same(const SeriesParams& a, const SeriesParams& b, const char* op) {
    if (&a != &b && a != b) fail(ErrorKind::ParamsMismatch, std::string(op) + ": series params differ");
}

int index_level(std::int64_t k, const FieldParams& field) {
    if (k == 0) return 0;
    int v = 0;
    std::int64_t x = k < 0 ? -k : k;
    while (v < field.level && x % field.p == 0) {
        x /= field.p;
        ++v;
    }
    return field.level - v;
}

TateSeries TateSeries::constant(ParamsPtr params, const FieldElement& c) {
    TateSeries r(params);
    r.add_term(Exps(r.params_->nvars(), 0), c);
    return r;
}

TateSeries TateSeries::monomial_index(ParamsPtr params, const Exps& exps, const FieldElement& c) {
    TateSeries r(std::move(params));
    if (exps.size() != r.params_->nvars()) fail(ErrorKind::Value, "exponent vector size mismatch");
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0) fail(ErrorKind::Value, "negative exponent");
        if (exps[i] % r.params_->var_step(i) != 0)
            fail(ErrorKind::Level, "exponent of " + r.params_->vars[i] + " exceeds its level");
    }
    r.add_term(exps, c);
    return r;
}

TateSeries TateSeries::monomial(ParamsPtr params, const std::vector<Rational>& exps, const FieldElement& c) {
    Exps e;
    for (const auto& x : exps) e.push_back(params->field.index_of(x));
    return monomial_index(std::move(params), e, c);
}

TateSeries TateSeries::variable(ParamsPtr params, const std::string& name) {
    int i = params->var_index(name);
    if (i < 0) fail(ErrorKind::Value, "unknown variable " + name);
    Exps e(params->nvars(), 0);
    e[static_cast<std::size_t>(i)] = params->field.scale();
    return monomial_index(params, e, FieldElement::one(params->field));
}

std::int64_t TateSeries::weighted_degree_index(const Exps& e) const {
    std::int64_t d = 0;
    for (auto x : e) d += x;
    return d;
}

void TateSeries::add_term(const Exps& e, const FieldElement& c) {
    if (c.is_zero()) return;
    require_same(c.params(), params_->field, "add_term");
    if (weighted_degree_index(e) > params_->deg_cap_index()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

FieldElement TateSeries::coefficient(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? FieldElement(params_->field) : it->second;
}

FieldElement TateSeries::constant_term() const { return coefficient(Exps(params_->nvars(), 0)); }

Valuation TateSeries::gauss_norm() const {
    Valuation v = Valuation::infinity();
    for (const auto& [e, c] : terms_) v = min(v, c.valuation());
    return v;
}

Valuation gauss_norm(const TateSeries& f) { return f.gauss_norm(); }

Rational TateSeries::degree() const {
    std::int64_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, weighted_degree_index(e));
    return Rational(d, params_->field.scale());
}

std::int64_t TateSeries::degree_in(const std::vector<int>& vars) const {
    std::int64_t d = 0;
    for (const auto& [e, c] : terms_) {
        std::int64_t s = 0;
        for (int i : vars) s += e[static_cast<std::size_t>(i)];
        d = std::max(d, s);
    }
    return d;
}

TateSeries TateSeries::operator-() const {
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

TateSeries& TateSeries::operator+=(const TateSeries& b) {
    require_same(*params_, *b.params_, "add");
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
}

TateSeries& TateSeries::operator-=(const TateSeries& b) {
    require_same(*params_, *b.params_, "sub");
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
}

TateSeries operator+(const TateSeries& a, const TateSeries& b) {
    TateSeries r = a;
    r += b;
    return r;
}

TateSeries operator-(const TateSeries& a, const TateSeries& b) {
    TateSeries r = a;
    r -= b;
    return r;
}

namespace kernels {

TateSeries mul_serial(const TateSeries& a, const TateSeries& b) {
    require_same(a.params(), b.params(), "mul");
    TateSeries r(a.params_ptr());
    const std::int64_t cap = a.params().deg_cap_index();
    Exps e(a.params().nvars());
    for (const auto& [ea, ca] : a.terms()) {
        std::int64_t da = a.weighted_degree_index(ea);
        for (const auto& [eb, cb] : b.terms()) {
            if (da + a.weighted_degree_index(eb) > cap) continue;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

TateSeries mul_parallel(const TateSeries& a, const TateSeries& b) {
    require_same(a.params(), b.params(), "mul");
    std::vector<const std::pair<const Exps, FieldElement>*> left;
    left.reserve(a.size());
    for (const auto& t : a.terms()) left.push_back(&t);
    const std::int64_t cap = a.params().deg_cap_index();
    const int nt = omp_get_max_threads();
    std::vector<TateSeries> partial(static_cast<std::size_t>(nt), TateSeries(a.params_ptr()));
#pragma omp parallel num_threads(nt)
    {
        TateSeries& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
        Exps e(a.params().nvars());
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(left.size()); ++k) {
            const auto& [ea, ca] = *left[static_cast<std::size_t>(k)];
            std::int64_t da = a.weighted_degree_index(ea);
            for (const auto& [eb, cb] : b.terms()) {
                if (da + a.weighted_degree_index(eb) > cap) continue;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                mine.add_term(e, ca * cb);
            }
        }
    }
    TateSeries r(a.params_ptr());
    for (const auto& part : partial) r += part;
    return r;
}

}  // namespace kernels

TateSeries operator*(const TateSeries& a, const TateSeries& b) {
    if (a.size() * b.size() >= 4096) return kernels::mul_parallel(a, b);
    return kernels::mul_serial(a, b);
}

TateSeries TateSeries::scalar_mul(const FieldElement& c) const {
    TateSeries r(params_);
    for (const auto& [e, x] : terms_) r.add_term(e, x * c);
    return r;
}

TateSeries TateSeries::pow(std::uint64_t n) const {
    TateSeries result = constant(params_, FieldElement::one(params_->field));
    TateSeries base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

TateSeries TateSeries::set_variable(std::size_t i, int eps) const {
    if (i >= params_->nvars()) fail(ErrorKind::Value, "variable index out of range");
    if (eps != 0 && eps != 1) fail(ErrorKind::Value, "face value must be 0 or 1");
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) {
            r.add_term(e, c);
        } else if (eps == 1) {
            Exps f = e;
            f[i] = 0;
            r.add_term(f, c);
        }
    }
    return r;
}

TateSeries TateSeries::face_restrict(std::size_t i, int eps) const {
    TateSeries kept = set_variable(i, eps);
    auto vars = params_->vars;
    auto levels = params_->var_levels;
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
    levels.erase(levels.begin() + static_cast<std::ptrdiff_t>(i));
    TateSeries r(make_params(params_->field, vars, params_->deg_cap, levels));
    for (const auto& [e, c] : kept.terms_) {
        Exps f = e;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        r.terms_.emplace(std::move(f), c);
    }
    return r;
}

TateSeries face_restrict(const TateSeries& f, std::size_t r, int eps) { return f.face_restrict(r, eps); }

int TateSeries::support_level(const std::vector<int>& vars) const {
    int h = 0;
    for (const auto& [e, c] : terms_) {
        if (vars.empty()) {
            for (auto k : e) h = std::max(h, index_level(k, params_->field));
        } else {
            for (int i : vars) h = std::max(h, index_level(e[static_cast<std::size_t>(i)], params_->field));
        }
    }
    return h;
}

int support_level(const TateSeries& f) { return f.support_level(); }

TateSeries TateSeries::frobenius_pullback(const std::vector<int>& vars) const {
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) {
        Exps f = e;
        for (int i : vars) f[static_cast<std::size_t>(i)] *= params_->field.p;
        if (weighted_degree_index(f) > params_->deg_cap_index())
            fail(ErrorKind::Cap, "frobenius pullback exceeds the degree cap");
        r.terms_.emplace(std::move(f), c);
    }
    return r;
}

TateSeries frobenius_pullback(const TateSeries& f, const std::vector<int>& vars) {
    return f.frobenius_pullback(vars);
}

TateSeries TateSeries::truncate_level(int h, const std::vector<int>& vars) const {
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) {
        bool keep = true;
        for (std::size_t i = 0; i < e.size() && keep; ++i) {
            if (!vars.empty() && std::find(vars.begin(), vars.end(), static_cast<int>(i)) == vars.end()) continue;
            if (index_level(e[i], params_->field) > h) keep = false;
        }
        if (keep) r.terms_.emplace(e, c);
    }
    return r;
}

TateSeries TateSeries::homogeneous_part(const std::vector<int>& vars, std::int64_t d_index) const {
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) {
        std::int64_t s = 0;
        for (int i : vars) s += e[static_cast<std::size_t>(i)];
        if (s == d_index) r.terms_.emplace(e, c);
    }
    return r;
}

TateSeries TateSeries::truncate_degree(const std::vector<int>& vars, std::int64_t max_index) const {
    TateSeries r(params_);
    for (const auto& [e, c] : terms_) {
        std::int64_t s = 0;
        for (int i : vars) s += e[static_cast<std::size_t>(i)];
        if (s <= max_index) r.terms_.emplace(e, c);
    }
    return r;
}

TateSeries TateSeries::with_coeff_cap(const Rational& cap) const {
    auto np = make_params(params_->field.with_cap(cap), params_->vars, params_->deg_cap, params_->var_levels);
    TateSeries r(np);
    for (const auto& [e, c] : terms_) r.add_term(e, c.with_cap(cap));
    return r;
}

TateSeries TateSeries::embed(const ParamsPtr& target) const {
    const FieldParams& src = params_->field;
    const FieldParams& dst = target->field;
    if (src.p != dst.p || src.char_p != dst.char_p) fail(ErrorKind::ParamsMismatch, "embed: different base field");
    if (dst.level < src.level) fail(ErrorKind::Level, "embed: target level below source level");
    const std::int64_t f = ipow(src.p, dst.level - src.level);
    std::vector<int> map(params_->nvars());
    for (std::size_t i = 0; i < params_->nvars(); ++i) map[i] = target->var_index(params_->vars[i]);
    TateSeries r(target);
    for (const auto& [e, c] : terms_) {
        Exps g(target->nvars(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (map[i] < 0) fail(ErrorKind::Value, "embed: variable " + params_->vars[i] + " missing in target");
            std::int64_t x = e[i] * f;
            if (x % target->var_step(static_cast<std::size_t>(map[i])) != 0)
                fail(ErrorKind::Level, "embed: exponent exceeds target variable level");
            g[static_cast<std::size_t>(map[i])] = x;
        }
        FieldElement cc = c;
        if (dst.level != src.level) cc = cc.embed_level(dst.level);
        if (dst.cap != src.cap) cc = cc.with_cap(dst.cap);
        r.add_term(g, cc);
    }
    return r;
}

bool TateSeries::vanishes_below(const Rational& v) const {
    for (const auto& [e, c] : terms_)
        if (c.valuation() < Valuation(v)) return false;
    return true;
}

bool operator==(const TateSeries& a, const TateSeries& b) {
    if (!a.params_ || !b.params_) return a.params_ == b.params_;
    return (a.params_ == b.params_ || *a.params_ == *b.params_) && a.terms_ == b.terms_;
}

TateSeries substitute(const TateSeries& f, const std::map<std::string, TateSeries>& assignment,
                      const ParamsPtr& target, bool check_unit_ball) {
    const SeriesParams& sp = f.params();
    const FieldParams& tf = target->field;
    if (tf.p != sp.field.p || tf.char_p != sp.field.char_p || tf.level < sp.field.level)
        fail(ErrorKind::ParamsMismatch, "substitute: incompatible target field");
    for (const auto& [name, g] : assignment) {
        require_same(g.params(), *target, "substitute");
        if (check_unit_ball && g.gauss_norm() < Valuation(0))
            fail(ErrorKind::Convergence, "substitute: image of " + name + " leaves the unit ball");
    }
    const std::int64_t src_scale = sp.field.scale();
    const std::int64_t lift = ipow(tf.p, tf.level - sp.field.level);
    const std::size_t n = sp.nvars();
    std::vector<const TateSeries*> img(n, nullptr);
    std::vector<int> tidx(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = assignment.find(sp.vars[i]);
        if (it != assignment.end()) img[i] = &it->second;
        else tidx[i] = target->var_index(sp.vars[i]);
    }
    std::vector<std::vector<TateSeries>> powers(n);
    const FieldElement one = FieldElement::one(tf);
    auto power_of = [&](std::size_t i, std::int64_t k) -> const TateSeries& {
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(TateSeries::constant(target, one));
        while (static_cast<std::int64_t>(pw.size()) <= k) pw.push_back(pw.back() * *img[i]);
        return pw[static_cast<std::size_t>(k)];
    };
    TateSeries result(target);
    for (const auto& [e, c] : f.terms()) {
        FieldElement cc = c;
        if (tf.level != sp.field.level) cc = cc.embed_level(tf.level);
        if (tf.cap != sp.field.cap) cc = cc.with_cap(tf.cap);
        Exps mono(target->nvars(), 0);
        TateSeries term = TateSeries::constant(target, cc);
        bool zero = cc.is_zero();
        for (std::size_t i = 0; i < n && !zero; ++i) {
            if (e[i] == 0) continue;
            if (!img[i]) {
                if (tidx[i] < 0) fail(ErrorKind::Value, "substitute: variable " + sp.vars[i] + " has no image");
                mono[static_cast<std::size_t>(tidx[i])] += e[i] * lift;
                continue;
            }
            const TateSeries& g = *img[i];
            if (e[i] % src_scale == 0) {
                term = term * power_of(i, e[i] / src_scale);
                continue;
            }
            // fractional power: only 0, 1 and coefficient-one monomials have canonical roots here
            if (g.is_zero()) {
                zero = true;
            } else if (g.size() == 1 && g.terms().begin()->second == one) {
                const Exps& ge = g.terms().begin()->first;
                Exps scaled(ge.size());
                for (std::size_t j = 0; j < ge.size(); ++j) {
                    if ((ge[j] * e[i]) % src_scale != 0)
                        fail(ErrorKind::Level, "substitute: fractional power leaves the target level");
                    scaled[j] = ge[j] * e[i] / src_scale;
                }
                term = term * TateSeries::monomial_index(target, scaled, one);
            } else {
                fail(ErrorKind::Value, "substitute: fractional power of " + sp.vars[i] + " needs a monomial image");
            }
        }
        if (zero || term.is_zero()) continue;
        bool trivial = std::all_of(mono.begin(), mono.end(), [](auto x) { return x == 0; });
        if (!trivial) term = term * TateSeries::monomial_index(target, mono, one);
        result += term;
    }
    return result;
}

TateSeries invert_series(const TateSeries& f) {
    FieldElement c = f.constant_term();
    if (c.is_zero()) fail(ErrorKind::Division, "series without constant term is not invertible");
    FieldElement ci = c.invert();
    TateSeries one = TateSeries::constant(f.params_ptr(), FieldElement::one(f.field()));
    TateSeries u = f.scalar_mul(ci) - one;
    if (u.is_zero()) return TateSeries::constant(f.params_ptr(), ci);
    if (u.gauss_norm() <= Valuation(0))
        fail(ErrorKind::Convergence, "series is not a unit of the Tate algebra");
    TateSeries sum = one;
    TateSeries term = one;
    TateSeries mu = -u;
    for (int k = 0; k < 100000; ++k) {
        term = term * mu;
        if (term.is_zero()) break;
        sum += term;
    }
    return sum.scalar_mul(ci);
}

}  // namespace pfd
