#include "pfd/face_lifting.hpp"

#include "pfd/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace pfd {

namespace {
std::size_t uz(int n) { return static_cast<std::size_t>(n); }
}  // namespace

FaceMap::FaceMap(std::vector<int> T_, std::vector<int> vals_) : T(std::move(T_)), vals(std::move(vals_)) {
    if (T.size() != vals.size()) fail(ErrorKind::Value, "face map: T and vals differ in length");
    std::vector<std::pair<int, int>> kv;
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (vals[i] != 0 && vals[i] != 1) fail(ErrorKind::Value, "face values must be 0 or 1");
        if (T[i] < 1) fail(ErrorKind::Value, "face coordinates are 1-based");
        kv.emplace_back(T[i], vals[i]);
    }
    std::sort(kv.begin(), kv.end());
    for (std::size_t i = 1; i < kv.size(); ++i)
        if (kv[i].first == kv[i - 1].first) fail(ErrorKind::Value, "repeated face coordinate");
    for (std::size_t i = 0; i < kv.size(); ++i) {
        T[i] = kv[i].first;
        vals[i] = kv[i].second;
    }
}

std::optional<int> FaceMap::value(int i) const {
    auto it = std::lower_bound(T.begin(), T.end(), i);
    if (it == T.end() || *it != i) return std::nullopt;
    return vals[static_cast<std::size_t>(it - T.begin())];
}

std::string FaceMap::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < T.size(); ++i)
        s += (i ? "," : "") + std::string("t") + std::to_string(T[i]) + "=" + std::to_string(vals[i]);
    return s + "}";
}

bool compatible(const FaceMap& a, const FaceMap& b) {
    for (std::size_t i = 0; i < a.T.size(); ++i) {
        auto v = b.value(a.T[i]);
        if (v && *v != a.vals[i]) return false;
    }
    return true;
}

FaceMap join(const FaceMap& a, const FaceMap& b) {
    if (!compatible(a, b)) fail(ErrorKind::Constraint, "join of incompatible faces " + a.str() + " " + b.str());
    std::vector<int> T = a.T, v = a.vals;
    for (std::size_t i = 0; i < b.T.size(); ++i)
        if (!a.value(b.T[i])) {
            T.push_back(b.T[i]);
            v.push_back(b.vals[i]);
        }
    return FaceMap(T, v);
}

std::vector<FaceMap> all_faces(int n) {
    std::vector<FaceMap> out;
    std::vector<int> code(uz(n), 0);  // 0 free, 1 -> 0, 2 -> 1
    for (;;) {
        std::vector<int> T, v;
        for (int i = 0; i < n; ++i)
            if (code[uz(i)]) {
                T.push_back(i + 1);
                v.push_back(code[uz(i)] - 1);
            }
        out.emplace_back(T, v);
        int k = 0;
        while (k < n && code[uz(k)] == 2) code[uz(k++)] = 0;
        if (k == n) break;
        ++code[uz(k)];
    }
    return out;
}

void validate_faces(const std::vector<FaceMap>& sigma, int n) {
    for (const auto& s : sigma)
        for (int i : s.T)
            if (i > n) fail(ErrorKind::Value, "face coordinate " + std::to_string(i) + " exceeds n");
}

namespace {

std::optional<Mono> restrict_mono(const Mono& m, const FaceMap& s) {
    Mono r = m;
    for (std::size_t k = 0; k < s.T.size(); ++k) {
        std::size_t i = uz(s.T[k] - 1);
        if (s.vals[k] == 0 && m[i] > 0) return std::nullopt;
        r[i] = 0;
    }
    return r;
}

bool vanishes_on(const Mono& m, const FaceMap& s) {
    for (int i : s.T)
        if (m[uz(i - 1)] != 0) return false;
    return true;
}

// Monomials of b that do not involve the face's coordinates.
std::vector<std::size_t> face_coords(const MonomialBasis& b, const FaceMap& s) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (vanishes_on(b[j], s)) out.push_back(j);
    return out;
}

int mono_degree(const Mono& m) { return std::accumulate(m.begin(), m.end(), 0); }

IntPoly to_int_poly(const std::vector<mpq_class>& v, const MonomialBasis& b) {
    mpz_class den = 1, g = 0;
    for (const auto& x : v)
        if (x != 0) den = lcm(den, mpz_class(x.get_den()));
    std::vector<mpz_class> z;
    for (const auto& x : v) {
        mpq_class y = x * den;
        z.push_back(y.get_num());
        if (y != 0) g = gcd(g, mpz_class(y.get_num()));
    }
    IntPoly p;
    if (g == 0) return p;
    // leading coefficient positive
    mpz_class sign = 1;
    for (std::size_t j = v.size(); j-- > 0;)
        if (z[j] != 0) {
            sign = z[j] < 0 ? -1 : 1;
            break;
        }
    for (std::size_t j = 0; j < v.size(); ++j)
        if (z[j] != 0) p.terms[b[j]] = sign * z[j] / g;
    return p;
}

Matrix stacked_kernel(const std::vector<Matrix>& conds, std::size_t dim) {
    Matrix stack(0, dim);
    for (const auto& c : conds) stack = Matrix::vstack(stack, c);
    return nullspace(stack);
}

}  // namespace

std::string IntPoly::str() const {
    if (terms.empty()) return "0";
    std::string s;
    bool first = true;
    std::vector<Mono> ms;
    for (const auto& [m, c] : terms) ms.push_back(m);
    std::sort(ms.begin(), ms.end(), [](const Mono& a, const Mono& b) { return grevlex_less(b, a); });
    for (const auto& m : ms) {
        const mpz_class& c = terms.at(m);
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "t" + std::to_string(i + 1);
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        mpz_class a = abs(c);
        std::string body = mono.empty() ? a.get_str() : (a == 1 ? mono : a.get_str() + "*" + mono);
        if (first) s += (c < 0 ? "-" : "") + body;
        else s += (c < 0 ? " - " : " + ") + body;
        first = false;
    }
    return s;
}

Matrix restriction_matrix(const FaceMap& s, const MonomialBasis& b) {
    Matrix r(b.size(), b.size());
    for (std::size_t j = 0; j < b.size(); ++j)
        if (auto m = restrict_mono(b[j], s)) r(b.index(*m), j) = 1;
    return r;
}

Matrix expand_generators(const std::vector<IntPoly>& gens, const MonomialBasis& b) {
    std::vector<std::vector<mpq_class>> cols;
    for (const auto& g : gens) {
        int dg = 0;
        for (const auto& [m, c] : g.terms) dg = std::max(dg, mono_degree(m));
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (mono_degree(b[j]) + dg > b.bound()) continue;
            std::vector<mpq_class> v(b.size());
            bool inside = true;
            for (const auto& [m, c] : g.terms) {
                Mono prod = m;
                for (std::size_t i = 0; i < prod.size(); ++i) prod[i] += b[j][i];
                std::size_t k = b.index(prod);
                if (k == MonomialBasis::npos) {
                    inside = false;
                    break;
                }
                v[k] += mpq_class(c);
            }
            if (inside) cols.push_back(std::move(v));
        }
    }
    Matrix m(b.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < b.size(); ++i) m(i, j) = cols[j][i];
    return cols.empty() ? Matrix(b.size(), 0) : column_basis(m);
}

FaceIdealSlice intersect(const std::vector<FaceMap>& sigma, int n, int D) {
    validate_faces(sigma, n);
    if (D < 0) fail(ErrorKind::Value, "degree bound must be non-negative");
    FaceIdealSlice out;
    out.n = n;
    out.D = D;
    out.basis = MonomialBasis(n, D);
    const auto& b = out.basis;
    std::vector<Matrix> conds;
    for (const auto& s : sigma) conds.push_back(restriction_matrix(s, b));
    out.span = stacked_kernel(conds, b.size());

    // Echelon with leading terms at the largest monomial, then pick generators by leading degree.
    std::size_t N = b.size(), k = out.span.cols();
    if (k == 0) return out;
    Matrix rows(k, N);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < N; ++i) rows(j, N - 1 - i) = out.span(i, j);
    Echelon e = rref(rows);
    std::vector<std::vector<mpq_class>> cand;
    for (std::size_t r = e.rank(); r-- > 0;) {
        std::vector<mpq_class> v(N);
        for (std::size_t i = 0; i < N; ++i) v[i] = e.R(r, N - 1 - i);
        cand.push_back(std::move(v));
    }
    Matrix covered(N, 0);
    for (const auto& v : cand) {
        Matrix col(N, 1);
        for (std::size_t i = 0; i < N; ++i) col(i, 0) = v[i];
        if (covered.cols() > 0 && rank(Matrix::hstack(covered, col)) == rank(covered)) continue;
        out.generators.push_back(to_int_poly(v, b));
        covered = expand_generators(out.generators, b);
        if (covered.cols() == k) break;
    }
    return out;
}

ModularLawReport modular_law_check(const std::vector<FaceMap>& sigma, const FaceMap& eta, int n, int D) {
    validate_faces(sigma, n);
    validate_faces({eta}, n);
    ModularLawReport rep;
    rep.margin = D + n;
    MonomialBasis bE(n, rep.margin), bD(n, D);

    std::vector<Matrix> conds;
    for (const auto& s : sigma) conds.push_back(restriction_matrix(s, bE));
    Matrix A = stacked_kernel(conds, bE.size());
    Matrix Ieta = stacked_kernel({restriction_matrix(eta, bE)}, bE.size());
    Matrix S = Matrix::hstack(A, Ieta);
    std::vector<std::size_t> high, low;
    for (std::size_t j = 0; j < bE.size(); ++j) (mono_degree(bE[j]) > D ? high : low).push_back(j);
    Matrix x = nullspace(S.select_rows(high));
    Matrix lhs_low = S.select_rows(low) * x;
    Matrix lhs(bD.size(), lhs_low.cols());
    for (std::size_t r = 0; r < low.size(); ++r)
        for (std::size_t c = 0; c < lhs_low.cols(); ++c) lhs(bD.index(bE[low[r]]), c) = lhs_low(r, c);
    lhs = lhs.cols() ? column_basis(lhs) : lhs;

    std::vector<Matrix> rconds;
    for (const auto& s : sigma)
        if (compatible(s, eta)) rconds.push_back(restriction_matrix(join(s, eta), bD));
    Matrix rhs = stacked_kernel(rconds, bD.size());

    rep.dim_lhs = rank(lhs);
    rep.dim_rhs = rhs.cols();
    rep.ok = rep.dim_lhs == rep.dim_rhs && same_span(lhs, rhs);
    return rep;
}

namespace {

struct FaceProduct {
    std::vector<std::vector<std::size_t>> coords;  // per face: basis indices
    std::vector<std::size_t> offset;
    std::size_t total = 0;
};

FaceProduct face_product(const std::vector<FaceMap>& sigma, const MonomialBasis& b) {
    FaceProduct fp;
    for (const auto& s : sigma) {
        fp.offset.push_back(fp.total);
        fp.coords.push_back(face_coords(b, s));
        fp.total += fp.coords.back().size();
    }
    return fp;
}

Matrix product_restriction(const std::vector<FaceMap>& sigma, const MonomialBasis& b, const FaceProduct& fp) {
    Matrix r(fp.total, b.size());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        std::map<std::size_t, std::size_t> pos;
        for (std::size_t t = 0; t < fp.coords[k].size(); ++t) pos[fp.coords[k][t]] = t;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (auto m = restrict_mono(b[j], sigma[k])) r(fp.offset[k] + pos.at(b.index(*m)), j) = 1;
    }
    return r;
}

}  // namespace

ExactnessReport exactness_check(const std::vector<FaceMap>& sigma, int n, int D) {
    validate_faces(sigma, n);
    ExactnessReport rep;
    rep.margin = D + n;
    MonomialBasis bD(n, D), bE(n, rep.margin);
    rep.dim_slice = bD.size();

    // first spot: kernel of the restriction vs intersection of generator spans
    FaceProduct fD = face_product(sigma, bD);
    Matrix resD = product_restriction(sigma, bD, fD);
    rep.rank_restriction = rank(resD);
    Matrix inter = Matrix::identity(bD.size());
    for (const auto& s : sigma) {
        std::vector<IntPoly> gens;
        for (std::size_t k = 0; k < s.T.size(); ++k) {
            IntPoly g;
            Mono m(uz(n), 0);
            m[uz(s.T[k] - 1)] = 1;
            g.terms[m] = 1;
            if (s.vals[k]) g.terms[Mono(uz(n), 0)] = -1;
            gens.push_back(g);
        }
        Matrix span = gens.empty() ? Matrix(bD.size(), 0) : expand_generators(gens, bD);
        inter = intersect_spans(inter, span);
    }
    rep.dim_intersection = inter.cols();
    rep.injective = rep.dim_intersection + rep.rank_restriction == rep.dim_slice &&
                    (resD * inter).is_zero();

    // second spot: compatible families of degree <= D come from some element of degree <= D + n
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < sigma.size(); ++a)
        for (std::size_t c = a + 1; c < sigma.size(); ++c)
            if (compatible(sigma[a], sigma[c])) pairs.emplace_back(a, c);
    std::vector<FaceMap> joins;
    for (auto [a, c] : pairs) joins.push_back(join(sigma[a], sigma[c]));
    FaceProduct fj = face_product(joins, bD);
    Matrix delta(fj.total, fD.total);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        std::map<std::size_t, std::size_t> pos;
        for (std::size_t t = 0; t < fj.coords[q].size(); ++t) pos[fj.coords[q][t]] = t;
        for (int side = 0; side < 2; ++side) {
            std::size_t k = side == 0 ? pairs[q].first : pairs[q].second;
            for (std::size_t t = 0; t < fD.coords[k].size(); ++t) {
                if (auto m = restrict_mono(bD[fD.coords[k][t]], joins[q]))
                    delta(fj.offset[q] + pos.at(bD.index(*m)), fD.offset[k] + t) += side == 0 ? 1 : -1;
            }
        }
    }
    rep.is_complex = (delta * resD).is_zero();
    Matrix K = nullspace(delta);
    rep.dim_compatible = K.cols();

    FaceProduct fE = face_product(sigma, bE);
    Matrix resE = product_restriction(sigma, bE, fE);
    Matrix Ke(fE.total, K.cols());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        std::map<std::size_t, std::size_t> pos;
        for (std::size_t t = 0; t < fE.coords[k].size(); ++t) pos[fE.coords[k][t]] = t;
        for (std::size_t t = 0; t < fD.coords[k].size(); ++t) {
            std::size_t row = fE.offset[k] + pos.at(bE.index(bD[fD.coords[k][t]]));
            for (std::size_t c = 0; c < K.cols(); ++c) Ke(row, c) = K(fD.offset[k] + t, c);
        }
    }
    rep.rank_margin = rank(resE);
    rep.rank_augmented = rank(Matrix::hstack(resE, Ke));
    rep.middle_exact = rep.rank_margin == rep.rank_augmented;
    return rep;
}

// ---- lifting ----

LiftSection lift_section(const std::vector<FaceMap>& sigma, int n, int B, std::int64_t p) {
    validate_faces(sigma, n);
    LiftSection sec;
    sec.n = n;
    sec.B = B;
    sec.sigma = sigma;
    sec.dom = MonomialBasis(n, B, true);
    std::map<std::pair<std::size_t, Mono>, std::size_t> where;
    for (std::size_t k = 0; k < sigma.size(); ++k)
        for (std::size_t j = 0; j < sec.dom.size(); ++j)
            if (vanishes_on(sec.dom[j], sigma[k])) {
                where[{k, sec.dom[j]}] = sec.coords.size();
                sec.coords.emplace_back(k, sec.dom[j]);
            }
    sec.res = Matrix(sec.coords.size(), sec.dom.size());
    for (std::size_t k = 0; k < sigma.size(); ++k)
        for (std::size_t j = 0; j < sec.dom.size(); ++j)
            if (auto m = restrict_mono(sec.dom[j], sigma[k])) sec.res(where.at({k, *m}), j) = 1;
    if (sec.coords.empty()) return sec;
    sec.rows = rref(sec.res.transpose()).pivots;
    Matrix sub = sec.res.select_rows(sec.rows);
    sec.cols = rref(sub).pivots;
    sec.L = inverse(sub.select_columns(sec.cols));
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < sec.L.rows(); ++i)
        for (std::size_t j = 0; j < sec.L.cols(); ++j)
            if (sec.L(i, j) != 0) worst = std::min(worst, vp_mpq(sec.L(i, j), p));
    sec.c = -worst;
    return sec;
}

LiftConstant lift_constant(const std::vector<FaceMap>& sigma, int n, int D, std::int64_t p) {
    LiftConstant lc;
    lc.c = lift_section(sigma, n, std::max(D, 1), p).c;
    lc.C = Rational(ipow(p, static_cast<int>(lc.c)));
    return lc;
}

TateSeries restrict_face(const TateSeries& f, const FaceMap& s, const std::vector<int>& cube_vars) {
    TateSeries r = f;
    for (std::size_t k = 0; k < s.T.size(); ++k) {
        if (uz(s.T[k]) > cube_vars.size()) fail(ErrorKind::Value, "face coordinate exceeds the cube dimension");
        r = r.set_variable(uz(cube_vars[uz(s.T[k] - 1)]), s.vals[k]);
    }
    return r;
}

namespace {

int cube_degree(const TateSeries& f, const std::vector<int>& cube_vars) {
    std::int64_t scale = f.field().scale();
    int d = 0;
    for (const auto& [e, c] : f.terms())
        for (int v : cube_vars) {
            std::int64_t x = e[uz(v)];
            if (x % scale != 0) fail(ErrorKind::Value, "cube variables must have integer exponents");
            d = std::max(d, static_cast<int>(x / scale));
        }
    return d;
}

std::vector<int> other_vars(const SeriesParams& P, const std::vector<int>& cube_vars) {
    std::vector<int> out;
    for (std::size_t i = 0; i < P.nvars(); ++i)
        if (std::find(cube_vars.begin(), cube_vars.end(), static_cast<int>(i)) == cube_vars.end())
            out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

LiftResult lift(const std::vector<std::pair<FaceMap, TateSeries>>& face_values, const TateSeries& g,
                const std::vector<int>& cube_vars, int D, std::optional<int> level) {
    const auto& P = g.params();
    const int n = static_cast<int>(cube_vars.size());
    const std::int64_t scale = g.field().scale();
    std::vector<FaceMap> sigma;
    int B = std::max(D, 1);
    B = std::max(B, cube_degree(g, cube_vars));
    for (const auto& [s, v] : face_values) {
        require_same(v.params(), P, "lift");
        sigma.push_back(s);
        B = std::max(B, cube_degree(v, cube_vars));
        for (const auto& [e, c] : v.terms())
            for (int i : s.T)
                if (e[uz(cube_vars[uz(i - 1)])] != 0)
                    fail(ErrorKind::Value, "face value for " + s.str() + " involves a fixed coordinate");
    }
    validate_faces(sigma, n);
    for (std::size_t a = 0; a < sigma.size(); ++a)
        for (std::size_t b = a + 1; b < sigma.size(); ++b) {
            if (!compatible(sigma[a], sigma[b])) continue;
            FaceMap j = join(sigma[a], sigma[b]);
            if (restrict_face(face_values[a].second, j, cube_vars) != restrict_face(face_values[b].second, j, cube_vars))
                fail(ErrorKind::Constraint, "incompatible face values on " + sigma[a].str() + " and " + sigma[b].str());
        }

    LiftSection sec = lift_section(sigma, n, B, g.field().p);
    if (g.field().char_p && sec.c > 0) fail(ErrorKind::Precondition, "section is not p-integral in characteristic p");
    std::vector<int> tower = other_vars(P, cube_vars);
    TateSeries base = g;
    if (level) base = tower.empty() ? g : g.truncate_level(*level, tower);

    std::map<std::pair<std::size_t, Mono>, std::size_t> where;
    for (std::size_t t = 0; t < sec.coords.size(); ++t) where[sec.coords[t]] = t;
    std::map<Exps, std::vector<FieldElement>> y;
    const FieldElement zero = FieldElement::zero(g.field());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        TateSeries d = face_values[k].second - restrict_face(base, sigma[k], cube_vars);
        for (const auto& [e, c] : d.terms()) {
            Exps key = e;
            Mono m(uz(n), 0);
            for (int i = 0; i < n; ++i) {
                m[uz(i)] = static_cast<int>(e[uz(cube_vars[uz(i)])] / scale);
                key[uz(cube_vars[uz(i)])] = 0;
            }
            auto& vec = y[key];
            if (vec.empty()) vec.assign(sec.coords.size(), zero);
            vec[where.at({k, m})] = c;
        }
    }
    std::vector<std::vector<std::optional<FieldElement>>> Lf(sec.cols.size(),
                                                            std::vector<std::optional<FieldElement>>(sec.rows.size()));
    TateSeries corr(g.params_ptr());
    std::size_t dropped = 0;
    for (const auto& [key, vec] : y) {
        for (std::size_t j = 0; j < sec.cols.size(); ++j) {
            FieldElement acc = zero;
            for (std::size_t r = 0; r < sec.rows.size(); ++r) {
                if (sec.L(j, r) == 0 || vec[sec.rows[r]].is_zero()) continue;
                if (!Lf[j][r]) Lf[j][r] = FieldElement::from_mpq(g.field(), sec.L(j, r));
                acc += *Lf[j][r] * vec[sec.rows[r]];
            }
            if (acc.is_zero()) continue;
            Exps e = key;
            const Mono& m = sec.dom[sec.cols[j]];
            for (int i = 0; i < n; ++i) e[uz(cube_vars[uz(i)])] = m[uz(i)] * scale;
            if (corr.weighted_degree_index(e) > P.deg_cap_index()) ++dropped;
            corr.add_term(e, acc);
        }
    }
    LiftResult out{base + corr, {}, Valuation::infinity(), Valuation::infinity()};
    out.C.c = sec.c;
    out.C.C = Rational(ipow(g.field().p, static_cast<int>(sec.c)));
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (restrict_face(out.f, sigma[k], cube_vars) != face_values[k].second) {
            if (dropped) fail(ErrorKind::Cap, "lift exceeds the degree cap of the ring");
            fail(ErrorKind::Constraint, "face values are not liftable at " + sigma[k].str());
        }
        out.dist_in = min(out.dist_in, gauss_norm(face_values[k].second - restrict_face(g, sigma[k], cube_vars)));
    }
    out.dist_out = gauss_norm(out.f - g);
    return out;
}

// ---- approximation over a tower ----

TowerRing TowerRing::from(ParamsPtr ring, const std::vector<std::string>& cube_names) {
    TowerRing t;
    t.ring = ring;
    for (const auto& name : cube_names) {
        int i = ring->var_index(name);
        if (i < 0) fail(ErrorKind::Value, "unknown cube variable " + name);
        if (ring->var_levels[uz(i)] != 0) fail(ErrorKind::Level, "cube variable " + name + " must have level 0");
        t.cube_vars.push_back(i);
    }
    t.tower_vars = other_vars(*ring, t.cube_vars);
    for (int i : t.tower_vars) t.H = std::max(t.H, ring->var_levels[uz(i)]);
    return t;
}

TateSeries TowerRing::truncate(const TateSeries& f, int h) const {
    return tower_vars.empty() ? f : f.truncate_level(h, tower_vars);
}

int TowerRing::level(const TateSeries& f) const { return tower_vars.empty() ? 0 : f.support_level(tower_vars); }

std::vector<Coincidence> detect_coincidences(const std::vector<TateSeries>& s, const TowerRing& tower) {
    std::vector<Coincidence> out;
    auto faces = all_faces(static_cast<int>(tower.cube_vars.size()));
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            for (const auto& f : faces)
                if (restrict_face(s[a], f, tower.cube_vars) == restrict_face(s[b], f, tower.cube_vars))
                    out.push_back({a, b, f});
    return out;
}

ApproxResult approximate_tuple(const std::vector<TateSeries>& s, const Rational& epsilon, const TowerRing& tower,
                               const std::optional<std::vector<Coincidence>>& coincidences) {
    const std::size_t N = s.size();
    const int n = static_cast<int>(tower.cube_vars.size());
    for (const auto& x : s) require_same(x.params(), *tower.ring, "approximate_tuple");
    std::vector<Coincidence> coins;
    if (coincidences) {
        for (auto c : *coincidences) {
            if (c.alpha == c.beta || c.alpha >= N || c.beta >= N) fail(ErrorKind::Value, "bad coincidence indices");
            if (c.alpha > c.beta) std::swap(c.alpha, c.beta);
            validate_faces({c.sigma}, n);
            if (restrict_face(s[c.alpha], c.sigma, tower.cube_vars) != restrict_face(s[c.beta], c.sigma, tower.cube_vars))
                fail(ErrorKind::Constraint, "stated coincidence does not hold: " + std::to_string(c.alpha + 1) + "," +
                                                std::to_string(c.beta + 1) + " on " + c.sigma.str());
            coins.push_back(c);
        }
    } else {
        coins = detect_coincidences(s, tower);
    }

    ApproxResult out;
    if (N == 0) return out;
    int B = 1;
    for (const auto& x : s) B = std::max(B, cube_degree(x, tower.cube_vars));

    // faces containing coordinate 1 are kept exactly
    std::vector<FaceMap> pinned;
    for (const auto& f : all_faces(n))
        if (f.value(1)) pinned.push_back(f);
    int h = 0;
    for (const auto& x : s)
        for (const auto& f : pinned) h = std::max(h, tower.level(restrict_face(x, f, tower.cube_vars)));

    // constraint faces per element: pinned faces, then coincidences with earlier elements
    std::vector<std::vector<FaceMap>> faces(N);
    std::vector<std::vector<std::optional<std::size_t>>> source(N);  // earlier element supplying the value
    for (std::size_t a = 0; a < N; ++a) {
        std::map<FaceMap, std::optional<std::size_t>> m;
        for (const auto& f : pinned) m[f] = std::nullopt;
        for (const auto& c : coins)
            if (c.beta == a) m[c.sigma] = c.alpha;
        for (const auto& [f, src] : m) {
            faces[a].push_back(f);
            source[a].push_back(src);
        }
    }
    out.lift_c.resize(N);
    std::int64_t p = tower.ring->field.p;
    for (std::size_t a = 0; a < N; ++a)
        out.lift_c[a] = faces[a].empty() ? 0 : lift_section(faces[a], n, B, p).c;
    out.thresholds.assign(N, epsilon);
    for (std::size_t a = N; a-- > 0;)
        for (const auto& c : coins)
            if (c.alpha == a)
                out.thresholds[a] = std::max(out.thresholds[a], out.thresholds[c.beta] + Rational(out.lift_c[c.beta]));
    for (std::size_t a = 0; a < N; ++a) {
        Rational need = out.thresholds[a] + Rational(out.lift_c[a]);
        while (h < tower.H && !(gauss_norm(s[a] - tower.truncate(s[a], h)) > Valuation(need))) ++h;
    }
    out.h = h;

    for (std::size_t a = 0; a < N; ++a) {
        if (faces[a].empty()) {
            out.s_tilde.push_back(tower.truncate(s[a], h));
            continue;
        }
        std::vector<std::pair<FaceMap, TateSeries>> fv;
        for (std::size_t k = 0; k < faces[a].size(); ++k) {
            const TateSeries& from = source[a][k] ? out.s_tilde[*source[a][k]] : s[a];
            fv.emplace_back(faces[a][k], restrict_face(from, faces[a][k], tower.cube_vars));
        }
        out.s_tilde.push_back(lift(fv, s[a], tower.cube_vars, B, h).f);
    }
    out.checks = verify_approximation(s, out.s_tilde, epsilon, tower, h, coins);
    return out;
}

std::vector<Check> verify_approximation(const std::vector<TateSeries>& s, const std::vector<TateSeries>& st,
                                        const Rational& epsilon, const TowerRing& tower, int h,
                                        const std::vector<Coincidence>& coins) {
    const auto& cv = tower.cube_vars;
    const int n = static_cast<int>(cv.size());
    std::vector<Check> out;
    auto alpha = [](std::size_t a) { return "s" + std::to_string(a + 1); };
    {
        Check c{"distance", "> " + to_string(epsilon), "", "", true};
        Valuation worst = Valuation::infinity();
        for (std::size_t a = 0; a < s.size(); ++a) {
            Valuation v = gauss_norm(s[a] - st[a]);
            if (v < worst) {
                worst = v;
                c.witness = alpha(a);
            }
        }
        c.got = worst.str();
        c.ok = worst > Valuation(epsilon);
        if (c.ok) c.witness.clear();
        out.push_back(c);
    }
    {
        Check c{"level", "<= " + std::to_string(h), "", "", true};
        int worst = 0;
        for (std::size_t a = 0; a < st.size(); ++a) {
            int l = tower.level(st[a]);
            if (l > h && c.ok) {
                c.ok = false;
                c.witness = alpha(a);
            }
            worst = std::max(worst, l);
        }
        c.got = std::to_string(worst);
        out.push_back(c);
    }
    auto coincidence_check = [&](const std::string& name, auto pred) {
        Check c{name, "preserved", "", "", true};
        std::size_t count = 0;
        for (const auto& co : coins) {
            if (!pred(co.sigma)) continue;
            ++count;
            if (restrict_face(st[co.alpha], co.sigma, cv) != restrict_face(st[co.beta], co.sigma, cv) && c.ok) {
                c.ok = false;
                c.witness = alpha(co.alpha) + "," + alpha(co.beta) + " on " + co.sigma.str();
            }
        }
        c.got = c.ok ? std::to_string(count) + " preserved" : "broken";
        out.push_back(c);
    };
    coincidence_check("coincidence_theta_k_0", [](const FaceMap& f) { return f.T.size() == 1 && f.vals[0] == 0; });
    coincidence_check("coincidence_theta_k_1", [](const FaceMap& f) { return f.T.size() == 1 && f.vals[0] == 1; });
    auto pinned_check = [&](const std::string& name, auto pred) {
        Check c{name, "exact", "", "", true};
        std::size_t count = 0;
        for (const auto& f : all_faces(n)) {
            if (!f.value(1) || !pred(f)) continue;
            for (std::size_t a = 0; a < s.size(); ++a) {
                ++count;
                if (restrict_face(st[a], f, cv) != restrict_face(s[a], f, cv) && c.ok) {
                    c.ok = false;
                    c.witness = alpha(a) + " on " + f.str();
                }
            }
        }
        c.got = c.ok ? std::to_string(count) + " exact" : "differs";
        out.push_back(c);
    };
    pinned_check("theta1_one_face_kept", [](const FaceMap& f) { return f.T.size() == 1 && f.vals[0] == 1; });
    coincidence_check("coincidence_partial_faces", [](const FaceMap&) { return true; });
    pinned_check("faces_through_theta1_kept", [](const FaceMap&) { return true; });
    return out;
}

bool HomotopyTupleResult::ok() const {
    if (!all_ok(checks)) return false;
    for (const auto& r : H)
        if (!r.ok()) return false;
    return true;
}

HomotopyTupleResult homotopy_tuple(const std::vector<MapData>& f, const PolySystem& sys,
                                   const std::vector<std::string>& cube_names, const EpsilonPolicy& policy) {
    HomotopyTupleResult out;
    if (f.empty()) return out;
    const ParamsPtr ring = f[0].s.empty() ? f[0].t.at(0).params_ptr() : f[0].s[0].params_ptr();
    TowerRing tower = TowerRing::from(ring, cube_names);
    const std::size_t n = sys.n(), m = sys.m();

    Rational e = certified_radius(f[0], sys);
    for (const auto& x : f) e = std::max(e, certified_radius(x, sys));
    if (policy.epsilon) e = std::max(e, *policy.epsilon);
    out.threshold = e;

    auto comps = [&](const MapData& x, const FaceMap& s) {
        std::vector<TateSeries> r;
        for (const auto& y : x.s) r.push_back(restrict_face(y, s, tower.cube_vars));
        for (const auto& y : x.t) r.push_back(restrict_face(y, s, tower.cube_vars));
        return r;
    };
    std::vector<std::tuple<std::size_t, std::size_t, FaceMap>> agree;
    std::vector<Coincidence> coins;
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = a + 1; b < f.size(); ++b)
            for (const auto& s : all_faces(static_cast<int>(tower.cube_vars.size())))
                if (comps(f[a], s) == comps(f[b], s)) {
                    agree.emplace_back(a, b, s);
                    for (std::size_t i = 0; i < n; ++i) coins.push_back({a * n + i, b * n + i, s});
                }
    std::vector<TateSeries> flat;
    for (const auto& x : f)
        for (const auto& y : x.s) flat.push_back(y);
    ApproxResult ap = approximate_tuple(flat, e, tower, coins);
    out.checks.push_back({"approximation_conditions", "all hold", ap.ok() ? "all hold" : "violated",
                          ap.ok() ? "" : "see approximate_tuple", ap.ok()});

    EpsilonPolicy pol = policy;
    pol.epsilon = e;
    for (std::size_t k = 0; k < f.size(); ++k) {
        std::vector<TateSeries> st(ap.s_tilde.begin() + static_cast<std::ptrdiff_t>(k * n),
                                   ap.s_tilde.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
        out.H.push_back(homotopy_from_approximation(f[k], st, sys, pol));
        out.hbar = std::max(out.hbar, out.H.back().hbar);
    }
    // cube variables keep their indices in the homotopy ring; chi is appended last
    {
        Check c{"faces_agree", "H_k and H_k' agree where f_k and f_k' do", "", "", true};
        for (const auto& [a, b, s] : agree) {
            bool same = true;
            for (std::size_t i = 0; i < n + m && same; ++i) {
                const auto& x = i < n ? out.H[a].H_sigma[i] : out.H[a].H_tau[i - n];
                const auto& y = i < n ? out.H[b].H_sigma[i] : out.H[b].H_tau[i - n];
                // the homotopy rings may differ in degree cap only
                const auto& big = x.params().deg_cap >= y.params().deg_cap ? x.params_ptr() : y.params_ptr();
                same = restrict_face(x.embed(big), s, tower.cube_vars) == restrict_face(y.embed(big), s, tower.cube_vars);
            }
            if (!same && c.ok) {
                c.ok = false;
                c.witness = "maps " + std::to_string(a + 1) + "," + std::to_string(b + 1) + " on " + s.str();
            }
        }
        c.got = c.ok ? std::to_string(agree.size()) + " faces agree" : "differ";
        out.checks.push_back(c);
    }
    if (!tower.cube_vars.empty()) {
        Check c{"constant_on_theta1_one", "no chi dependence", "", "", true};
        FaceMap one({1}, {1});
        for (std::size_t k = 0; k < f.size(); ++k) {
            std::size_t chi = out.H[k].ring->nvars() - 1;
            for (std::size_t i = 0; i < n + m; ++i) {
                const auto& x = i < n ? out.H[k].H_sigma[i] : out.H[k].H_tau[i - n];
                for (const auto& [ex, co] : restrict_face(x, one, tower.cube_vars).terms())
                    if (ex[chi] != 0 && c.ok) {
                        c.ok = false;
                        c.witness = "map " + std::to_string(k + 1);
                    }
            }
        }
        c.got = c.ok ? "constant" : "varies";
        out.checks.push_back(c);
    }
    return out;
}

}  // namespace pfd
