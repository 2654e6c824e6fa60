#include "pfd/tilt_engine.hpp"

namespace pfd {

FieldElement teichmuller(const FieldParams& params, std::int64_t digit) {
    if (params.char_p) fail(ErrorKind::Value, "teichmuller lifts live in characteristic 0");
    if (digit <= 0 || digit >= params.p) fail(ErrorKind::Value, "teichmuller digit must be a unit residue");
    const std::uint64_t e = static_cast<std::uint64_t>(params.p - 1);
    FieldElement x = FieldElement::from_int(params, digit);
    const FieldElement one = FieldElement::one(params);
    const FieldElement pm1 = FieldElement::from_int(params, params.p - 1);
    // Newton: x <- x - (x^{p-1} - 1) / ((p-1) x^{p-2})
    for (int it = 0; it < 200; ++it) {
        FieldElement g = x.pow(e) - one;
        if (g.is_zero()) break;
        FieldElement dg = pm1 * x.pow(e - 1);
        x = x - g * dg.invert();
    }
    if (!(x.pow(e) - one).is_zero()) fail(ErrorKind::Integrity, "teichmuller iteration did not converge");
    return x;
}

TiltElement from_flat(const FieldElement& y, int depth) {
    const FieldParams& fp = y.params();
    if (!fp.char_p) fail(ErrorKind::Value, "from_flat expects a characteristic-p element");
    if (depth < 0) fail(ErrorKind::Value, "negative depth");
    const FieldParams kp = fp.sharp();
    const std::int64_t root = ipow(fp.p, depth);
    FieldElement xm(kp);
    for (auto [k, c] : y.nonzero_indices()) {
        if (k % root != 0)
            fail(ErrorKind::Level, "depth " + std::to_string(depth) + " exceeds the level of the flat element");
        xm += teichmuller(kp, c).shift(kp.exponent_of(k / root));
    }
    TiltElement t;
    t.depth = depth;
    t.flat = y;
    t.sequence.assign(static_cast<std::size_t>(depth + 1), FieldElement(kp));
    t.sequence[static_cast<std::size_t>(depth)] = xm;
    for (int i = depth - 1; i >= 0; --i)
        t.sequence[static_cast<std::size_t>(i)] = t.sequence[static_cast<std::size_t>(i + 1)].pow(static_cast<std::uint64_t>(fp.p));
    return t;
}

TiltElement flat_of_monomial(const FieldParams& flat_params, std::int64_t c, const Rational& e, int depth) {
    if (!flat_params.char_p) fail(ErrorKind::Value, "flat params must have characteristic p");
    if (depth > flat_params.level) fail(ErrorKind::Level, "depth exceeds level");
    return from_flat(FieldElement::monomial(flat_params, e, c), depth);
}

namespace {

// Digits of x at exponents < 1, as an element of the other characteristic.
FieldElement residue_pattern(const FieldElement& x, const FieldParams& target) {
    return x.truncate_below(Rational(1)).reinterpret(target.with_cap(x.params().cap)).with_cap(target.cap);
}

FieldElement root_flat(const FieldElement& y, int i) {
    const std::int64_t r = ipow(y.params().p, i);
    std::vector<std::pair<Rational, std::int64_t>> terms;
    for (auto [k, c] : y.nonzero_indices()) {
        if (k % r != 0) fail(ErrorKind::Level, "flat root leaves the level");
        terms.emplace_back(y.params().exponent_of(k / r), c);
    }
    return FieldElement::make(y.params(), terms);
}

}  // namespace

void check_integrity(const TiltElement& x) {
    if (x.depth < 0 || x.sequence.size() != static_cast<std::size_t>(x.depth + 1))
        fail(ErrorKind::Integrity, "sequence length does not match depth");
    const std::int64_t p = x.flat.params().p;
    for (int i = 0; i < x.depth; ++i) {
        if (x.sequence[static_cast<std::size_t>(i + 1)].pow(static_cast<std::uint64_t>(p)) != x.sequence[static_cast<std::size_t>(i)])
            fail(ErrorKind::Integrity, "x_" + std::to_string(i + 1) + "^p != x_" + std::to_string(i));
    }
    if (x.flat.is_power_bounded()) {
        for (int i = 0; i <= x.depth; ++i) {
            FieldElement lhs = residue_pattern(x.sequence[static_cast<std::size_t>(i)], x.flat.params());
            FieldElement rhs = root_flat(x.flat, i).truncate_below(Rational(1));
            if (lhs != rhs) fail(ErrorKind::Integrity, "x_" + std::to_string(i) + " does not reduce to the flat value");
        }
    }
}

FieldElement sharp(const TiltElement& x) {
    check_integrity(x);
    const std::uint64_t p = static_cast<std::uint64_t>(x.flat.params().p);
    auto raise = [&](int i) {
        FieldElement z = x.sequence[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) z = z.pow(p);
        return z;
    };
    FieldElement z = raise(x.depth);
    if (x.depth > 0 && raise(x.depth - 1) != z) fail(ErrorKind::Integrity, "sharp did not stabilize");
    return z;
}

TiltElement mul(const TiltElement& a, const TiltElement& b) {
    if (a.depth != b.depth) fail(ErrorKind::Value, "tilt depths differ");
    TiltElement c;
    c.depth = a.depth;
    c.flat = a.flat * b.flat;
    for (int i = 0; i <= a.depth; ++i)
        c.sequence.push_back(a.sequence[static_cast<std::size_t>(i)] * b.sequence[static_cast<std::size_t>(i)]);
    return c;
}

bool additive_congruence_check(const TiltElement& a) {
    const FieldParams& kp = a.sequence.at(0).params();
    FieldElement lhs = sharp(a) - FieldElement::one(kp);
    TiltElement am1 = from_flat(a.flat - FieldElement::one(a.flat.params()), a.depth);
    FieldElement rhs = sharp(am1);
    return (lhs - rhs).valuation() >= Valuation(1);
}

UnitTransfer unit_transfer(const FieldElement& a, int depth) {
    if (a.params().char_p) fail(ErrorKind::Value, "unit_transfer expects an element of K");
    if (a.valuation() != Valuation(0)) fail(ErrorKind::Precondition, "unit_transfer needs v(a) = 0, got " + a.valuation().str());
    const FieldParams fp = a.params().flat();
    UnitTransfer out;
    FieldElement bflat = residue_pattern(a, fp);
    out.b = from_flat(bflat, depth);
    FieldElement s = sharp(out.b);
    out.certificate = (s * a.invert() - FieldElement::one(a.params())).valuation();
    out.residue_roundtrip = residue_pattern(s, fp) == bflat;
    return out;
}

B1PerfData b1perf_maps(std::int64_t p, int h, const Rational& k) {
    if (k < 2)
        fail(ErrorKind::Precision, "precision " + to_string(k) + " cannot resolve valuation 1; required k >= 2");
    B1PerfData d;
    d.p = p;
    d.h = h;
    d.k = k;
    d.field = FieldParams(p, false, h, k + 2);
    const std::int64_t ph = ipow(p, h);
    d.A = make_params(d.field, {"u", "w"}, 2 * ph + 2);
    d.B = make_params(d.field, {"x"}, ph + 1);
    const Rational r(1, ph);
    const FieldElement one = FieldElement::one(d.field);
    TateSeries x = TateSeries::variable(d.B, "x");
    TateSeries cB = TateSeries::constant(d.B, FieldElement::monomial(d.field, -r));
    d.phi_u = (x + cB).pow(static_cast<std::uint64_t>(ph)) - TateSeries::constant(d.B, FieldElement::monomial(d.field, Rational(-1)));
    d.phi_w = x.scalar_mul(FieldElement::monomial(d.field, r)) + TateSeries::constant(d.B, one);
    TateSeries w = TateSeries::variable(d.A, "w");
    d.psi_x = (w - TateSeries::constant(d.A, one)).scalar_mul(FieldElement::monomial(d.field, -r));
    return d;
}

TateSeries b1perf_reduce(const B1PerfData& d, const TateSeries& f) {
    const std::int64_t ph = ipow(d.p, d.h);
    const std::int64_t step = ph * d.field.scale();
    const FieldElement one = FieldElement::one(d.field);
    const FieldElement pi = FieldElement::monomial(d.field, Rational(1));
    TateSeries cur = f;
    for (int guard = 0; guard < 64; ++guard) {
        TateSeries next(d.A);
        bool changed = false;
        for (const auto& [e, c] : cur.terms()) {
            if (e[1] < step) {
                next.add_term(e, c);
                continue;
            }
            changed = true;
            Exps base = e;
            base[1] -= step;
            next.add_term(base, c);                      // the "+1"
            Exps up = base;
            up[0] += d.field.scale();
            next.add_term(up, c * pi);                   // pi upsilon
        }
        cur = next;
        if (!changed) return cur;
    }
    fail(ErrorKind::Integrity, "b1perf reduction did not terminate");
}

std::vector<Check> verify_b1perf(const B1PerfData& d) {
    const std::int64_t ph = ipow(d.p, d.h);
    const FieldElement one = FieldElement::one(d.field);
    auto cut = [&](const TateSeries& f) { return f.with_coeff_cap(d.k); };
    std::vector<Check> checks;

    TateSeries u = TateSeries::variable(d.A, "u"), w = TateSeries::variable(d.A, "w");
    TateSeries x = TateSeries::variable(d.B, "x");
    TateSeries pu = b1perf_reduce(d, substitute(d.phi_u, {{"x", d.psi_x}}, d.A, false));
    TateSeries pw = b1perf_reduce(d, substitute(d.phi_w, {{"x", d.psi_x}}, d.A, false));
    TateSeries px = substitute(d.psi_x, {{"u", d.phi_u}, {"w", d.phi_w}}, d.B, false);
    TateSeries rel = d.phi_w.pow(static_cast<std::uint64_t>(ph)) -
                     d.phi_u.scalar_mul(FieldElement::monomial(d.field, Rational(1))) - TateSeries::constant(d.B, one);
    {
        bool a = cut(pu) == cut(b1perf_reduce(d, u)), b = cut(pw) == cut(b1perf_reduce(d, w)), c = cut(px) == cut(x), r = cut(rel).is_zero();
        std::string wit;
        if (!a) wit += "psi(phi(u)) != u; ";
        if (!b) wit += "psi(phi(w)) != w; ";
        if (!c) wit += "phi(psi(x)) != x; ";
        if (!r) wit += "relation not respected; ";
        checks.push_back({"composites_identity", "identity on u, w, x; relation preserved",
                          (a && b && c && r) ? "identity" : "mismatch", wit, a && b && c && r});
    }
    {
        TateSeries wm1 = w - TateSeries::constant(d.A, one);
        TateSeries nf = cut(b1perf_reduce(d, wm1.pow(static_cast<std::uint64_t>(ph))));
        Valuation g = nf.gauss_norm();
        bool binom_ok = true;
        std::string wit;
        for (std::int64_t i = 1; i < ph; ++i) {
            FieldElement c = nf.coefficient(Exps{0, i * d.field.scale()});
            if (c.valuation() != Valuation(binomial_valuation(d.p, d.h, i))) {
                binom_ok = false;
                wit = "coefficient of w^" + std::to_string(i) + " has valuation " + c.valuation().str();
                break;
            }
        }
        bool ok = g == Valuation(1) && binom_ok;
        checks.push_back({"norm_identity_omega", "1", g.str(), wit, ok});
    }
    {
        TateSeries cB = TateSeries::constant(d.B, FieldElement::monomial(d.field, Rational(-1, ph)));
        TateSeries e = (x + cB).pow(static_cast<std::uint64_t>(ph)) -
                       TateSeries::constant(d.B, FieldElement::monomial(d.field, Rational(-1)));
        Valuation g = cut(e).gauss_norm();
        checks.push_back({"unit_ball_estimate", "0", g.str(), "", g == Valuation(0)});
    }
    return checks;
}

}  // namespace pfd
