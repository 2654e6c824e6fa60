#include "pfd/cubical_homology.hpp"

#include "pfd/errors.hpp"
#include "pfd/monomials.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace pfd {

namespace {

std::size_t uz(int n) { return static_cast<std::size_t>(n); }

std::string tag(const char* what, int n, int r, int eps = -1) {
    std::ostringstream os;
    os << what << " n=" << n << " r=" << r;
    if (eps >= 0) os << " eps=" << eps;
    return os.str();
}

}  // namespace

CubicalModule::CubicalModule(int nmax_) : nmax(nmax_) {
    if (nmax < 0) fail(ErrorKind::Value, "nmax must be non-negative");
    dims.assign(uz(nmax) + 1, 0);
    labels.assign(uz(nmax) + 1, {});
    faces.resize(uz(nmax) + 1);
    degens.resize(uz(nmax) + 1);
    for (int n = 1; n <= nmax; ++n) {
        faces[uz(n)].resize(uz(n));
        degens[uz(n)].resize(uz(n));
    }
}

const Matrix& CubicalModule::face(int n, int r, int eps) const {
    return faces.at(uz(n)).at(uz(r - 1)).at(uz(eps));
}
const Matrix& CubicalModule::degen(int n, int r) const { return degens.at(uz(n)).at(uz(r - 1)); }
Matrix& CubicalModule::face(int n, int r, int eps) { return faces.at(uz(n)).at(uz(r - 1)).at(uz(eps)); }
Matrix& CubicalModule::degen(int n, int r) { return degens.at(uz(n)).at(uz(r - 1)); }

void CubicalModule::validate_shapes() const {
    if (dims.size() != uz(nmax) + 1) fail(ErrorKind::Value, "dims must have nmax+1 entries");
    for (int n = 1; n <= nmax; ++n) {
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e) {
                const Matrix& d = face(n, r, e);
                if (d.rows() != dims[uz(n - 1)] || d.cols() != dims[uz(n)])
                    fail(ErrorKind::Value, "bad shape for " + tag("face", n, r, e));
            }
            const Matrix& p = degen(n, r);
            if (p.rows() != dims[uz(n)] || p.cols() != dims[uz(n - 1)])
                fail(ErrorKind::Value, "bad shape for " + tag("degeneracy", n, r));
        }
    }
}

std::optional<std::string> identity_violation(const CubicalModule& m) {
    m.validate_shapes();
    // d_i d_j = d_{j-1} d_i for i < j (faces applied on the right first).
    for (int n = 2; n <= m.nmax; ++n)
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        Matrix lhs = m.face(n - 1, i, a) * m.face(n, j, b);
                        Matrix rhs = m.face(n - 1, j - 1, b) * m.face(n, i, a);
                        if (lhs != rhs) {
                            std::ostringstream os;
                            os << "face-face n=" << n << " i=" << i << " j=" << j << " eps=" << a << "," << b;
                            return os.str();
                        }
                    }
    for (int n = 1; n <= m.nmax; ++n)
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int e = 0; e < 2; ++e) {
                    Matrix lhs = m.face(n, j, e) * m.degen(n, i);
                    Matrix rhs;
                    if (j == i) {
                        rhs = Matrix::identity(m.dims[uz(n - 1)]);
                    } else if (j < i) {
                        rhs = m.degen(n - 1, i - 1) * m.face(n - 1, j, e);
                    } else {
                        rhs = m.degen(n - 1, i) * m.face(n - 1, j - 1, e);
                    }
                    if (lhs != rhs) {
                        std::ostringstream os;
                        os << "face-degeneracy n=" << n << " face=" << j << " degen=" << i << " eps=" << e;
                        return os.str();
                    }
                }
    for (int n = 2; n <= m.nmax; ++n)
        for (int i = 1; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (m.degen(n, i) * m.degen(n - 1, j) != m.degen(n, j + 1) * m.degen(n - 1, i)) {
                    std::ostringstream os;
                    os << "degeneracy-degeneracy n=" << n << " i=" << i << " j=" << j;
                    return os.str();
                }
            }
    return std::nullopt;
}

Matrix sharp_differential(const CubicalModule& m, int n) {
    Matrix d(m.dims[uz(n - 1)], m.dims[uz(n)]);
    for (int r = 1; r <= n; ++r) {
        Matrix t = m.face(n, r, 1) - m.face(n, r, 0);
        d = (r % 2 == 0) ? d + t : d - t;
    }
    return d;
}

const char* complex_kind_name(ComplexKind k) {
    switch (k) {
        case ComplexKind::Full: return "full";
        case ComplexKind::Simple: return "simple";
        case ComplexKind::Normalized: return "normalized";
    }
    return "?";
}

ComplexKind parse_complex_kind(const std::string& s) {
    if (s == "full") return ComplexKind::Full;
    if (s == "simple") return ComplexKind::Simple;
    if (s == "normalized") return ComplexKind::Normalized;
    fail(ErrorKind::Parse, "unknown complex kind: " + s);
}

namespace {

Matrix subspace_basis(const CubicalModule& m, int n, ComplexKind kind) {
    std::size_t dim = m.dims[uz(n)];
    if (kind == ComplexKind::Full || n == 0) return Matrix::identity(dim);
    Matrix stack(0, dim);
    for (int r = 1; r <= n; ++r) stack = Matrix::vstack(stack, m.face(n, r, 0));
    if (kind == ComplexKind::Normalized)
        for (int r = 2; r <= n; ++r) stack = Matrix::vstack(stack, m.face(n, r, 1));
    return nullspace(stack);
}

Matrix ambient_differential(const CubicalModule& m, int n, ComplexKind kind) {
    switch (kind) {
        case ComplexKind::Full: return sharp_differential(m, n);
        case ComplexKind::Simple: {
            Matrix d(m.dims[uz(n - 1)], m.dims[uz(n)]);
            for (int r = 1; r <= n; ++r) d = (r % 2 == 0) ? d + m.face(n, r, 1) : d - m.face(n, r, 1);
            return d;
        }
        case ComplexKind::Normalized: return m.face(n, 1, 1).scaled(-1);
    }
    return {};
}

}  // namespace

ChainComplexView build_complex(const CubicalModule& m, ComplexKind kind) {
    if (auto w = identity_violation(m)) fail(ErrorKind::Integrity, "cubical identity violated: " + *w);
    ChainComplexView v;
    v.kind = kind;
    v.nmax = m.nmax;
    v.basis.resize(uz(m.nmax) + 1);
    v.diff.resize(uz(m.nmax) + 1);
    for (int n = 0; n <= m.nmax; ++n) v.basis[uz(n)] = subspace_basis(m, n, kind);
    for (int n = 1; n <= m.nmax; ++n) {
        Matrix image = ambient_differential(m, n, kind) * v.basis[uz(n)];
        Matrix coords;
        if (!solve(v.basis[uz(n - 1)], image, coords))
            fail(ErrorKind::Integrity, std::string("differential leaves the ") + complex_kind_name(kind) +
                                           " subcomplex in degree " + std::to_string(n));
        v.diff[uz(n)] = coords;
    }
    for (int n = 2; n <= m.nmax; ++n) {
        if (!(v.diff[uz(n - 1)] * v.diff[uz(n)]).is_zero())
            fail(ErrorKind::Integrity, "d∘d != 0 in degree " + std::to_string(n));
    }
    return v;
}

std::size_t homology(const ChainComplexView& v, int n) {
    if (n < 0 || n > v.nmax) return 0;
    std::size_t k = v.dim(n);
    std::size_t cycles = n == 0 ? k : k - rank(v.diff[uz(n)]);
    std::size_t bounds = n == v.nmax ? 0 : rank(v.diff[uz(n + 1)]);
    return cycles - bounds;
}

CompareReport compare_N_C(const CubicalModule& m) {
    CompareReport r;
    auto nv = build_complex(m, ComplexKind::Normalized);
    auto cv = build_complex(m, ComplexKind::Simple);
    for (int n = 0; n <= m.nmax; ++n) {
        r.h_normalized.push_back(homology(nv, n));
        r.h_simple.push_back(homology(cv, n));
        r.dim_normalized.push_back(nv.dim(n));
        r.dim_simple.push_back(cv.dim(n));
        if (n < m.nmax && r.h_normalized.back() != r.h_simple.back()) r.ok = false;
    }
    return r;
}

CubicalModule constant_module(int nmax, std::size_t dim) {
    CubicalModule m(nmax);
    for (auto& d : m.dims) d = dim;
    for (int n = 1; n <= nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            m.face(n, r, 0) = m.face(n, r, 1) = Matrix::identity(dim);
            m.degen(n, r) = Matrix::identity(dim);
        }
    return m;
}

namespace {

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

}  // namespace

CubicalModule direct_sum(const CubicalModule& a, const CubicalModule& b) {
    if (a.nmax != b.nmax) fail(ErrorKind::Value, "direct sum needs equal nmax");
    CubicalModule m(a.nmax);
    for (int n = 0; n <= a.nmax; ++n) m.dims[uz(n)] = a.dims[uz(n)] + b.dims[uz(n)];
    for (int n = 1; n <= a.nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e) m.face(n, r, e) = block_diag(a.face(n, r, e), b.face(n, r, e));
            m.degen(n, r) = block_diag(a.degen(n, r), b.degen(n, r));
        }
    return m;
}

CubicalModule graph_module(std::size_t nvertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           int nmax) {
    CubicalModule m(nmax);
    std::size_t ne = edges.size();
    for (const auto& [s, t] : edges)
        if (s >= nvertices || t >= nvertices) fail(ErrorKind::Value, "edge endpoint out of range");
    auto idx = [&](int n, std::size_t e, int j) { return nvertices + e * uz(n) + uz(j - 1); };
    for (int n = 0; n <= nmax; ++n) {
        m.dims[uz(n)] = nvertices + ne * uz(n);
        auto& lab = m.labels[uz(n)];
        for (std::size_t v = 0; v < nvertices; ++v) lab.push_back("v" + std::to_string(v));
        for (std::size_t e = 0; e < ne; ++e)
            for (int j = 1; j <= n; ++j) lab.push_back("e" + std::to_string(e) + "." + std::to_string(j));
    }
    for (int n = 1; n <= nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int eps = 0; eps < 2; ++eps) {
                Matrix d(m.dims[uz(n - 1)], m.dims[uz(n)]);
                for (std::size_t v = 0; v < nvertices; ++v) d(v, v) = 1;
                for (std::size_t e = 0; e < ne; ++e)
                    for (int j = 1; j <= n; ++j) {
                        std::size_t col = idx(n, e, j);
                        if (r == j) d(eps == 0 ? edges[e].first : edges[e].second, col) = 1;
                        else if (r < j) d(idx(n - 1, e, j - 1), col) = 1;
                        else d(idx(n - 1, e, j), col) = 1;
                    }
                m.face(n, r, eps) = d;
            }
            Matrix p(m.dims[uz(n)], m.dims[uz(n - 1)]);
            for (std::size_t v = 0; v < nvertices; ++v) p(v, v) = 1;
            for (std::size_t e = 0; e < ne; ++e)
                for (int j = 1; j <= n - 1; ++j) p(idx(n, e, j < r ? j : j + 1), idx(n - 1, e, j)) = 1;
            m.degen(n, r) = p;
        }
    return m;
}

CubicalModule change_basis(const CubicalModule& m, const std::vector<Matrix>& g) {
    if (g.size() != uz(m.nmax) + 1) fail(ErrorKind::Value, "one basis change per level required");
    std::vector<Matrix> gi;
    for (const auto& x : g) gi.push_back(inverse(x));
    CubicalModule out = m;
    for (int n = 1; n <= m.nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e) out.face(n, r, e) = g[uz(n - 1)] * m.face(n, r, e) * gi[uz(n)];
            out.degen(n, r) = g[uz(n)] * m.degen(n, r) * gi[uz(n - 1)];
        }
    for (auto& l : out.labels) l.clear();
    return out;
}

CubicalModule random_module(std::uint64_t seed, int nmax, std::size_t max_dim) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    if (max_dim == 0) fail(ErrorKind::Value, "max_dim must be positive");
    std::optional<CubicalModule> acc;
    std::size_t used = 0;
    int pieces = uni(1, 2);
    for (int k = 0; k < pieces; ++k) {
        std::size_t left = max_dim - used;
        if (left == 0) break;
        std::size_t nv = static_cast<std::size_t>(uni(1, static_cast<int>(std::min<std::size_t>(3, left))));
        std::size_t room = nmax == 0 ? 0 : (left - nv) / uz(nmax);
        std::size_t ne = static_cast<std::size_t>(uni(0, static_cast<int>(std::min<std::size_t>(2, room))));
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t e = 0; e < ne; ++e)
            edges.emplace_back(static_cast<std::size_t>(uni(0, static_cast<int>(nv) - 1)),
                               static_cast<std::size_t>(uni(0, static_cast<int>(nv) - 1)));
        auto g = graph_module(nv, edges, nmax);
        acc = acc ? direct_sum(*acc, g) : g;
        used += nv + ne * uz(nmax);
    }
    std::vector<Matrix> basis;
    for (int n = 0; n <= nmax; ++n) {
        std::size_t d = acc->dims[uz(n)];
        for (;;) {
            Matrix g(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) g(i, j) = uni(-2, 2);
            if (rank(g) == d) {
                basis.push_back(g);
                break;
            }
        }
    }
    return change_basis(*acc, basis);
}

namespace {

// Substitution t_r = eps on the basis `from` (n+1 variables) into `to` (n variables).
Matrix substitution_matrix(const MonomialBasis& from, const MonomialBasis& to, int r, int eps) {
    Matrix d(to.size(), from.size());
    for (std::size_t c = 0; c < from.size(); ++c) {
        Mono mono = from[c];
        if (eps == 0 && mono[uz(r - 1)] > 0) continue;
        mono.erase(mono.begin() + (r - 1));
        d(to.index(mono), c) = 1;
    }
    return d;
}

Matrix insertion_matrix(const MonomialBasis& from, const MonomialBasis& to, int r) {
    Matrix p(to.size(), from.size());
    for (std::size_t c = 0; c < from.size(); ++c) {
        Mono mono = from[c];
        mono.insert(mono.begin() + (r - 1), 0);
        p(to.index(mono), c) = 1;
    }
    return p;
}

std::vector<std::string> mono_labels(const MonomialBasis& b) {
    std::vector<std::string> out;
    for (const auto& m : b.monomials()) {
        std::string s;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += "t" + std::to_string(i + 1);
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        out.push_back(s.empty() ? "1" : s);
    }
    return out;
}

}  // namespace

CubicalModule polynomial_module(int nmax, int degree) {
    if (degree < 0) fail(ErrorKind::Value, "degree must be non-negative");
    CubicalModule m(nmax);
    std::vector<MonomialBasis> b;
    for (int n = 0; n <= nmax; ++n) {
        b.emplace_back(n, degree);
        m.dims[uz(n)] = b.back().size();
        m.labels[uz(n)] = mono_labels(b.back());
    }
    for (int n = 1; n <= nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e) m.face(n, r, e) = substitution_matrix(b[uz(n)], b[uz(n - 1)], r, e);
            m.degen(n, r) = insertion_matrix(b[uz(n - 1)], b[uz(n)], r);
        }
    return m;
}

CylinderData polynomial_cylinder(int nmax, int degree) {
    if (nmax < 1) fail(ErrorKind::Value, "cylinder needs nmax >= 1");
    CylinderData d;
    d.F = polynomial_module(nmax, degree);
    std::vector<MonomialBasis> b, c;  // b: V_n, c: V'_n (last variable is the cylinder coordinate)
    for (int n = 0; n <= nmax; ++n) b.emplace_back(n, degree);
    for (int n = 0; n < nmax; ++n) c.emplace_back(n + 1, degree);
    d.cyl_faces.resize(uz(nmax));
    for (int n = 0; n < nmax; ++n) {
        d.cyl_dims.push_back(c[uz(n)].size());
        for (int r = 1; r <= n; ++r) {
            std::array<Matrix, 2> f;
            for (int e = 0; e < 2; ++e) f[uz(e)] = substitution_matrix(c[uz(n)], c[uz(n - 1)], r, e);
            d.cyl_faces[uz(n)].push_back(f);
        }
        std::array<Matrix, 2> inc;
        for (int e = 0; e < 2; ++e) inc[uz(e)] = substitution_matrix(c[uz(n)], b[uz(n)], n + 1, e);
        d.inc.push_back(inc);
        Matrix s(b[uz(n + 1)].size(), c[uz(n)].size());
        for (std::size_t k = 0; k < c[uz(n)].size(); ++k) s(b[uz(n + 1)].index(c[uz(n)][k]), k) = 1;
        d.s.push_back(s);
    }
    return d;
}

CylinderData constant_cylinder(int nmax) {
    if (nmax < 1) fail(ErrorKind::Value, "cylinder needs nmax >= 1");
    CylinderData d;
    d.F = constant_module(nmax, 1);
    d.cyl_faces.resize(uz(nmax));
    for (int n = 0; n < nmax; ++n) {
        d.cyl_dims.push_back(1);
        for (int r = 1; r <= n; ++r) d.cyl_faces[uz(n)].push_back({Matrix::identity(1), Matrix::identity(1)});
        d.inc.push_back({Matrix::identity(1), Matrix::identity(1)});
        d.s.push_back(Matrix::identity(1));
    }
    return d;
}

CylinderReport cylinder_homotopy_check(const CylinderData& d, std::uint64_t seed, int nvectors) {
    const auto& F = d.F;
    int L = d.levels();
    if (L > F.nmax) fail(ErrorKind::Value, "cylinder levels exceed the module");
    if (auto w = identity_violation(F)) fail(ErrorKind::Integrity, "cubical identity violated: " + *w);
    for (int n = 1; n < L; ++n)
        for (int r = 1; r <= n; ++r)
            for (int e = 0; e < 2; ++e)
                if (d.s[uz(n - 1)] * d.cyl_faces[uz(n)][uz(r - 1)][uz(e)] != F.face(n + 1, r, e) * d.s[uz(n)])
                    fail(ErrorKind::Integrity, "cylinder commutation fails: " + tag("s d", n, r, e));

    CylinderReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int n = 0; n < L; ++n) {
        Matrix dprime(n == 0 ? 0 : d.cyl_dims[uz(n - 1)], d.cyl_dims[uz(n)]);
        for (int r = 1; r <= n; ++r) {
            Matrix t = d.cyl_faces[uz(n)][uz(r - 1)][1] - d.cyl_faces[uz(n)][uz(r - 1)][0];
            dprime = (r % 2 == 0) ? dprime + t : dprime - t;
        }
        Matrix dsharp = sharp_differential(F, n + 1);
        Matrix lhs = dsharp * d.s[uz(n)];
        lhs = lhs.scaled(-1);
        if (n > 0) lhs = lhs + d.s[uz(n - 1)] * dprime;
        Matrix rhs = (d.inc[uz(n)][1] - d.inc[uz(n)][0]).scaled(n % 2 == 0 ? 1 : -1);

        Check c;
        c.name = "cylinder_identity_n" + std::to_string(n);
        c.expected = "s d' - d s = (-1)^n (i1 - i0)";
        c.ok = lhs == rhs;
        std::size_t bad = 0;
        for (int k = 0; k < nvectors; ++k) {
            std::vector<mpq_class> v(d.cyl_dims[uz(n)]);
            for (auto& x : v) x = coef(rng);
            auto a = dsharp.apply(d.s[uz(n)].apply(v));
            for (auto& x : a) x = -x;
            if (n > 0) {
                auto b = d.s[uz(n - 1)].apply(dprime.apply(v));
                for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            }
            auto i1 = d.inc[uz(n)][1].apply(v), i0 = d.inc[uz(n)][0].apply(v);
            for (std::size_t i = 0; i < i1.size(); ++i) {
                mpq_class want = (n % 2 == 0 ? 1 : -1) * (i1[i] - i0[i]);
                if (a[i] != want) {
                    ++bad;
                    break;
                }
            }
            ++rep.vectors_checked;
        }
        if (bad) c.ok = false;
        c.got = c.ok ? "holds" : "fails";
        c.witness = std::to_string(nvectors - static_cast<int>(bad)) + "/" + std::to_string(nvectors) +
                    " random vectors agree; matrices " + (lhs == rhs ? "equal" : "differ");
        if (!c.ok) rep.ok = false;
        rep.checks.push_back(c);
    }
    return rep;
}

// ---- unit groups ----

namespace {

TateSeries one_like(const TateSeries& f) {
    return TateSeries::constant(f.params_ptr(), FieldElement::one(f.field()));
}

bool is_one(const TateSeries& f) { return f == one_like(f); }

}  // namespace

TateSeries unit_contraction(const TateSeries& f) {
    const auto& P = f.params();
    if (P.nvars() == 0) fail(ErrorKind::Value, "contraction needs a spare variable");
    std::size_t last = P.nvars() - 1;
    for (const auto& [e, c] : f.terms())
        if (e[last] != 0) fail(ErrorKind::Value, "f must not involve the contraction variable");
    auto t = TateSeries::variable(f.params_ptr(), P.vars[last]);
    auto H = f + t * (one_like(f) - f);
    if (H.degree() > Rational(P.deg_cap) || (f.degree() + 1) > Rational(P.deg_cap))
        fail(ErrorKind::Precision, "truncation too small to represent the contraction");
    return H;
}

TateSeries unit_bounding_chain(const TateSeries& f) {
    auto H = unit_contraction(f);
    const auto& P = f.params();
    std::size_t n1 = P.nvars();
    std::map<std::string, TateSeries> asg;
    for (std::size_t r = 0; r + 1 < n1; ++r) asg.emplace(P.vars[r], TateSeries::variable(f.params_ptr(), P.vars[r + 1]));
    asg.emplace(P.vars[n1 - 1], one_like(f) - TateSeries::variable(f.params_ptr(), P.vars[0]));
    return substitute(H, asg, f.params_ptr());
}

UnitComplexReport unit_complex(const UnitComplexParams& up) {
    const FieldParams& K = up.field;
    if (up.nmax < 1) fail(ErrorKind::Value, "nmax must be at least 1");
    if (up.var_level < 0 || up.var_level > K.level) fail(ErrorKind::Level, "variable level exceeds the field level");
    if (up.trunc < 2 * up.nmax + 1) fail(ErrorKind::Precision, "truncation too small to represent the contraction");
    std::mt19937_64 rng(up.seed);
    auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };

    UnitComplexReport rep;
    std::int64_t step = ipow(K.p, K.level - up.var_level);  // index step of a variable exponent
    std::int64_t vscale = ipow(K.p, up.var_level);
    FieldElement pi = FieldElement::monomial(K, Rational(1, K.scale()));

    for (int n = 1; n <= up.nmax; ++n) {
        std::vector<std::string> vars;
        for (int r = 1; r <= n + 1; ++r) vars.push_back("t" + std::to_string(r));
        auto P = make_params(K, vars, up.trunc, std::vector<int>(uz(n + 1), up.var_level));
        auto one = TateSeries::constant(P, FieldElement::one(K));

        // t^a (1 - t^b) in variable r, exponents in index units
        auto bump = [&](int r, std::int64_t a, std::int64_t b) {
            Exps ea(uz(n + 1), 0), eb(uz(n + 1), 0);
            ea[uz(r)] = a;
            eb[uz(r)] = a + b;
            return TateSeries::monomial_index(P, ea, FieldElement::one(K)) -
                   TateSeries::monomial_index(P, eb, FieldElement::one(K));
        };
        std::vector<TateSeries> cycles;
        {
            TateSeries prod = one;
            for (int r = 0; r < n; ++r) prod = prod * bump(r, K.scale(), K.scale());
            cycles.push_back(one + prod.scalar_mul(pi));
        }
        for (int k = 0; k < up.samples; ++k) {
            TateSeries prod = one;
            std::int64_t budget = (up.trunc - 1) * K.scale();
            for (int r = 0; r < n; ++r) {
                std::int64_t a = uni(1, vscale) * step, b = uni(1, vscale) * step;
                prod = prod * bump(r, a, b);
            }
            Exps J(uz(n + 1), 0);
            for (int r = 0; r < n; ++r) J[uz(r)] = uni(0, 1) * uni(1, vscale) * step;
            auto extra = TateSeries::monomial_index(P, J, FieldElement::one(K));
            if (prod.degree() + extra.degree() <= Rational(up.trunc - 1)) prod = prod * extra;
            if (prod.degree() > Rational(budget, K.scale())) continue;
            FieldElement c = FieldElement::monomial(K, Rational(uni(1, 2 * K.scale()), K.scale()), uni(1, K.p - 1));
            cycles.push_back(one + prod.scalar_mul(c));
        }
        if (cycles.size() >= 2 && cycles[0].degree() + cycles[1].degree() <= Rational(up.trunc - 1))
            cycles.push_back(cycles[0] * cycles[1]);

        Check c;
        c.name = "contraction_bounds_cycles_n" + std::to_string(n);
        c.expected = "every normalized cycle is the boundary of g = H(t_2..t_{n+1}, 1 - t_1)";
        std::size_t checked = 0;
        for (const auto& f : cycles) {
            std::string bad;
            for (int r = 0; r < n && bad.empty(); ++r)
                for (int e = 0; e < 2; ++e)
                    if (!is_one(f.set_variable(uz(r), e))) bad = "not a cycle: " + tag("face", n, r + 1, e);
            if (bad.empty() && !(gauss_norm(f - one) > Valuation(0))) bad = "f - 1 not topologically nilpotent";
            if (bad.empty()) {
                auto H = unit_contraction(f);
                if (H.set_variable(uz(n), 0) != f) bad = "H at t_{n+1}=0 differs from f";
                else if (!is_one(H.set_variable(uz(n), 1))) bad = "H at t_{n+1}=1 differs from 1";
            }
            if (bad.empty()) {
                auto g = unit_bounding_chain(f);
                for (int r = 0; r <= n && bad.empty(); ++r)
                    for (int e = 0; e < 2; ++e) {
                        if (r == 0 && e == 1) continue;
                        if (!is_one(g.set_variable(uz(r), e))) bad = "g not normalized: " + tag("face", n + 1, r + 1, e);
                    }
                // d_{1,1} g must be f with variables shifted up by one
                TateSeries shifted(P);
                for (const auto& [e, co] : f.terms()) {
                    Exps s(uz(n + 1), 0);
                    for (int r = 0; r < n; ++r) s[uz(r + 1)] = e[uz(r)];
                    shifted.add_term(s, co);
                }
                if (bad.empty() && g.set_variable(0, 1) != shifted) bad = "d_{1,1} g differs from f";
                if (bad.empty() && !(gauss_norm(g - one) > Valuation(0))) bad = "g is not a unit";
            }
            if (!bad.empty()) {
                c.ok = false;
                c.witness = bad;
                break;
            }
            ++checked;
        }
        c.got = std::to_string(checked) + "/" + std::to_string(cycles.size()) + " cycles bounded";
        if (c.witness.empty()) {
            Rational top(0);
            for (const auto& f : cycles) top = std::max(top, f.degree());
            c.witness = "largest cycle degree " + to_string(top);
        }
        rep.cycles_checked.push_back(checked);
        rep.checks.push_back(c);
    }

    // Residue classes: a unit of K°<t> reduces to a constant of F_p^x, and faces fix it.
    std::size_t classes = static_cast<std::size_t>(K.p - 1);
    {
        Check c;
        c.name = "residue_classes";
        c.expected = std::to_string(classes) + " classes, multiplicative, preserved by faces";
        auto P = make_params(K, {"t1"}, up.trunc, {up.var_level});
        bool ok = true;
        for (std::int64_t a = 1; a < K.p && ok; ++a)
            for (std::int64_t b = 1; b < K.p && ok; ++b) {
                Exps e{uni(1, vscale) * step};
                auto noise = TateSeries::monomial_index(P, e, pi);
                auto u = TateSeries::constant(P, FieldElement::from_int(K, a)) + noise;
                auto w = TateSeries::constant(P, FieldElement::from_int(K, b)) - noise;
                auto cls = [&](const TateSeries& x) { return x.constant_term().digit_at(Rational(0)); };
                if (cls(u * w) != (a * b) % K.p) ok = false;
                for (int eps = 0; eps < 2; ++eps)
                    if (cls(u.set_variable(0, eps)) != a) ok = false;
                if (!(gauss_norm(u - TateSeries::constant(P, FieldElement::from_int(K, a))) > Valuation(0))) ok = false;
            }
        c.ok = ok;
        c.got = ok ? c.expected : "class map inconsistent";
        rep.checks.push_back(c);
    }
    rep.class_count = classes;
    rep.classes = constant_module(up.nmax + 1, classes);
    auto view = build_complex(rep.classes, ComplexKind::Normalized);
    for (int n = 0; n <= up.nmax; ++n) rep.homology.push_back(homology(view, n));
    {
        Check c;
        c.name = "H0_class_count";
        c.expected = std::to_string(classes);
        c.got = std::to_string(rep.homology[0]);
        c.ok = rep.homology[0] == classes;
        rep.checks.push_back(c);
        Check z;
        z.name = "Hn_vanish";
        z.expected = "0 for 1 <= n <= " + std::to_string(up.nmax);
        std::string got;
        for (int n = 1; n <= up.nmax; ++n) {
            got += (n > 1 ? "," : "") + std::to_string(rep.homology[uz(n)]);
            if (rep.homology[uz(n)] != 0) z.ok = false;
        }
        z.got = got;
        rep.checks.push_back(z);
    }
    return rep;
}

}  // namespace pfd
