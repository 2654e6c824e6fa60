#include "pfd/implicit_solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pfd {

namespace {

std::string exps_str(const Exps& e, const SeriesParams& p) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!first) os << ",";
        os << p.vars[i] << ":" << to_string(p.field.exponent_of(e[i]));
        first = false;
    }
    os << "}";
    return os.str();
}

TateSeries series_constant(const ParamsPtr& ring, const FieldElement& c) {
    FieldElement x = c;
    if (x.params().level < ring->field.level) x = x.embed_level(ring->field.level);
    x = x.with_cap(ring->field.cap);
    return TateSeries::constant(ring, x);
}

// Gaussian elimination over K on an m x m matrix; pivots of least valuation.
std::vector<std::vector<FieldElement>> invert_field_matrix(std::vector<std::vector<FieldElement>> a) {
    const std::size_t m = a.size();
    const FieldParams& f = a[0][0].params();
    std::vector<std::vector<FieldElement>> inv(m, std::vector<FieldElement>(m, FieldElement(f)));
    for (std::size_t i = 0; i < m; ++i) inv[i][i] = FieldElement::one(f);
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = m;
        for (std::size_t i = col; i < m; ++i)
            if (!a[i][col].is_zero() && (piv == m || a[i][col].valuation() < a[piv][col].valuation())) piv = i;
        if (piv == m) fail(ErrorKind::Singularity, "Jacobian at the center is not invertible below precision");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        FieldElement pinv = a[col][col].invert();
        for (std::size_t j = 0; j < m; ++j) {
            a[col][j] = a[col][j] * pinv;
            inv[col][j] = inv[col][j] * pinv;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == col || a[i][col].is_zero()) continue;
            FieldElement factor = a[i][col];
            for (std::size_t j = 0; j < m; ++j) {
                a[i][j] = a[i][j] - factor * a[col][j];
                inv[i][j] = inv[i][j] - factor * inv[col][j];
            }
        }
    }
    return inv;
}

using SeriesMatrix = std::vector<std::vector<TateSeries>>;

SeriesMatrix mat_mul(const SeriesMatrix& a, const SeriesMatrix& b, const ParamsPtr& ring) {
    const std::size_t m = a.size();
    SeriesMatrix c(m, std::vector<TateSeries>(m, TateSeries(ring)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

}  // namespace

void PolySystem::validate() const {
    if (!params) fail(ErrorKind::Value, "system without params");
    if (polys.size() != tau.size()) fail(ErrorKind::Value, "number of polynomials must equal number of tau variables");
    for (const auto& v : sigma)
        if (params->var_index(v) < 0) fail(ErrorKind::Value, "sigma variable " + v + " missing from params");
    for (const auto& v : tau)
        if (params->var_index(v) < 0) fail(ErrorKind::Value, "tau variable " + v + " missing from params");
    if (params->nvars() != sigma.size() + tau.size())
        fail(ErrorKind::Value, "system params must list exactly the sigma and tau variables");
    for (const auto& p : polys) require_same(p.params(), *params, "system");
    if (!sigma_center.empty() && sigma_center.size() != sigma.size()) fail(ErrorKind::Value, "sigma center size");
    if (!tau_center.empty() && tau_center.size() != tau.size()) fail(ErrorKind::Value, "tau center size");
}

Rational working_cap(const Rational& cap, int D, const Rational& v_piB) {
    return cap + Rational(3 * std::max(D, 1) * ceil(v_piB) + 2);
}

std::vector<TateSeries> ImplicitSeries::truncated() const {
    std::vector<TateSeries> out;
    for (const auto& f : F) out.push_back(f.with_coeff_cap(requested_cap));
    return out;
}

NormalizedSystem normalize_system(const PolySystem& sys, const Rational& W, const std::vector<std::string>& param_vars,
                                  const std::vector<TateSeries>* sigma_center,
                                  const std::vector<TateSeries>* tau_center, std::int64_t param_deg_cap,
                                  int param_level, std::int64_t sigma_deg_cap) {
    sys.validate();
    const std::size_t n = sys.n(), m = sys.m();
    const FieldParams& bf = sys.params->field;
    const int level = std::max(bf.level, param_level);
    FieldParams wf(bf.p, bf.char_p, level, W);
    if (sigma_deg_cap <= 0) sigma_deg_cap = sys.params->deg_cap;

    std::vector<std::string> full_vars = param_vars;
    for (const auto& v : sys.sigma) full_vars.push_back(v);
    for (const auto& v : sys.tau) full_vars.push_back(v);
    ParamsPtr full = make_params(wf, full_vars, param_deg_cap + sigma_deg_cap);
    std::vector<std::string> sol_vars = param_vars;
    for (const auto& v : sys.sigma) sol_vars.push_back(v);
    ParamsPtr sol = make_params(wf, sol_vars, param_deg_cap + sigma_deg_cap);

    // centers as series over the full ring
    std::vector<TateSeries> sc, tc;
    for (std::size_t k = 0; k < n; ++k) {
        if (sigma_center) sc.push_back((*sigma_center)[k].embed(full));
        else if (!sys.sigma_center.empty()) sc.push_back(series_constant(full, sys.sigma_center[k]));
        else sc.push_back(TateSeries(full));
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (tau_center) tc.push_back((*tau_center)[k].embed(full));
        else if (!sys.tau_center.empty()) tc.push_back(series_constant(full, sys.tau_center[k]));
        else tc.push_back(TateSeries(full));
    }

    std::map<std::string, TateSeries> shift;
    for (std::size_t k = 0; k < n; ++k) shift[sys.sigma[k]] = sc[k] + TateSeries::variable(full, sys.sigma[k]);
    for (std::size_t k = 0; k < m; ++k) shift[sys.tau[k]] = tc[k] + TateSeries::variable(full, sys.tau[k]);

    const std::size_t np = param_vars.size();
    auto is_param_only = [&](const Exps& e) {
        for (std::size_t i = np; i < e.size(); ++i)
            if (e[i] != 0) return false;
        return true;
    };
    const std::int64_t sc_ = wf.scale();

    std::vector<TateSeries> translated;
    for (std::size_t i = 0; i < m; ++i) {
        TateSeries t = substitute(sys.polys[i], shift, full, false);
        TateSeries constant(full), rest(full);
        for (const auto& [e, c] : t.terms()) {
            if (is_param_only(e)) constant.add_term(e, c);
            else rest.add_term(e, c);
        }
        if (!constant.vanishes_below(bf.cap))
            fail(ErrorKind::Precondition, "P does not vanish at the center (component " + std::to_string(i + 1) +
                                              ", valuation " + constant.gauss_norm().str() + ")");
        translated.push_back(rest);
    }

    // Jacobian in tau at the center: a matrix of parameter series.
    SeriesMatrix J(m, std::vector<TateSeries>(m, TateSeries(full)));
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& [e, c] : translated[i].terms()) {
            std::int64_t deg = 0;
            std::size_t which = 0;
            for (std::size_t k = np; k < e.size(); ++k) deg += e[k];
            if (deg != sc_) continue;
            bool tau_linear = false;
            for (std::size_t j = 0; j < m; ++j)
                if (e[np + n + j] == sc_) {
                    tau_linear = true;
                    which = j;
                }
            if (!tau_linear) continue;
            Exps pe = e;
            pe[np + n + which] = 0;
            J[i][which].add_term(pe, c);
        }
    std::vector<std::vector<FieldElement>> J0(m, std::vector<FieldElement>(m, FieldElement(wf)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) J0[i][j] = J[i][j].constant_term();
    auto J0inv = invert_field_matrix(J0);
    SeriesMatrix Jinv0(m, std::vector<TateSeries>(m, TateSeries(full)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) Jinv0[i][j] = TateSeries::constant(full, J0inv[i][j]);
    SeriesMatrix N(m, std::vector<TateSeries>(m, TateSeries(full)));
    bool has_N = false;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            N[i][j] = J[i][j] - TateSeries::constant(full, J0[i][j]);
            if (!N[i][j].is_zero()) has_N = true;
        }
    SeriesMatrix Jinv = Jinv0;
    if (has_N) {
        SeriesMatrix M = mat_mul(Jinv0, N, full);
        for (auto& row : M)
            for (auto& x : row) {
                if (!x.is_zero() && x.gauss_norm() <= Valuation(0))
                    fail(ErrorKind::Singularity, "Jacobian is not a unit of the parameter algebra");
                x = -x;
            }
        // (I + M)^{-1} = sum (-M)^k
        SeriesMatrix S(m, std::vector<TateSeries>(m, TateSeries(full)));
        SeriesMatrix Pk(m, std::vector<TateSeries>(m, TateSeries(full)));
        for (std::size_t i = 0; i < m; ++i) {
            S[i][i] = TateSeries::constant(full, FieldElement::one(wf));
            Pk[i][i] = S[i][i];
        }
        for (int k = 0; k < 10000; ++k) {
            Pk = mat_mul(Pk, M, full);
            bool zero = true;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    if (!Pk[i][j].is_zero()) zero = false;
                    S[i][j] += Pk[i][j];
                }
            if (zero) break;
        }
        Jinv = mat_mul(S, Jinv0, full);
    }

    NormalizedSystem ns;
    ns.ring = sol;
    ns.sigma = sys.sigma;
    for (std::size_t k = 0; k < n; ++k) ns.sigma_idx.push_back(static_cast<int>(np + k));
    for (std::size_t k = 0; k < np; ++k) ns.param_idx.push_back(static_cast<int>(k));
    ns.requested_cap = bf.cap;
    ns.terms.resize(m);
    Valuation minv = Valuation::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        TateSeries Pn(full);
        for (std::size_t j = 0; j < m; ++j)
            if (!Jinv[i][j].is_zero()) Pn += Jinv[i][j] * translated[j];
        // tau_i - Pn = sum c sigma^J tau^H
        std::map<std::pair<Exps, std::vector<int>>, TateSeries> groups;
        for (const auto& [e, c] : Pn.terms()) {
            Exps J_(n);
            std::vector<int> H_(m);
            Exps pe(np + n, 0);
            for (std::size_t k = 0; k < np; ++k) pe[k] = e[k];
            for (std::size_t k = 0; k < n; ++k) {
                if (e[np + k] % sc_ != 0) fail(ErrorKind::Value, "fractional sigma exponent in system");
                J_[k] = e[np + k] / sc_;
            }
            for (std::size_t k = 0; k < m; ++k) {
                if (e[np + n + k] % sc_ != 0) fail(ErrorKind::Value, "fractional tau exponent in system");
                H_[k] = static_cast<int>(e[np + n + k] / sc_);
            }
            auto key = std::make_pair(J_, H_);
            auto it = groups.find(key);
            if (it == groups.end()) it = groups.emplace(key, TateSeries(sol)).first;
            it->second.add_term(pe, -c);
        }
        for (auto& [key, c] : groups) {
            const auto& [J_, H_] = key;
            const bool sigma_free = std::all_of(J_.begin(), J_.end(), [](auto x) { return x == 0; });
            if (sigma_free && sum(H_) == 1) {
                TateSeries r = c;
                if (H_[i] == 1) r += TateSeries::constant(sol, FieldElement::one(wf));
                if (!r.vanishes_below(bf.cap))
                    fail(ErrorKind::Singularity, "normalization left a linear tau term");
                continue;
            }
            if (c.is_zero()) continue;
            minv = min(minv, c.gauss_norm());
            ns.terms[i].push_back({J_, H_, c});
        }
    }
    ns.v_piB = minv.is_infinite() ? Rational(0) : std::max(Rational(0), -minv.value());
    for (auto& s : sc) ns.sigma_center.push_back(s.embed(sol));
    for (auto& t : tc) ns.tau_center.push_back(t.embed(sol));
    return ns;
}

ImplicitSeries solve_formal(const NormalizedSystem& sys, int D) {
    const std::size_t m = sys.m();
    const ParamsPtr& ring = sys.ring;
    const FieldParams& f = ring->field;
    const std::int64_t sc = f.scale();
    const TateSeries zero(ring);
    const TateSeries one = TateSeries::constant(ring, FieldElement::one(f));

    std::set<std::vector<int>> closure;
    int kmax = 0;
    for (const auto& terms : sys.terms)
        for (const auto& t : terms) {
            if (std::all_of(t.J.begin(), t.J.end(), [](auto x) { return x == 0; }) && sum(t.H) == 1)
                throw std::logic_error("solve_formal: excluded linear tau term present");
            // every sub-multi-index of H
            std::vector<int> cur(m, 0);
            std::function<void(std::size_t)> rec = [&](std::size_t k) {
                if (k == m) {
                    if (sum(cur) > 0) closure.insert(cur);
                    return;
                }
                for (int a = 0; a <= t.H[k]; ++a) {
                    cur[k] = a;
                    rec(k + 1);
                }
                cur[k] = 0;
            };
            rec(0);
            kmax = std::max(kmax, sum(t.H));
        }
    std::vector<std::vector<std::vector<int>>> by_size(static_cast<std::size_t>(kmax + 1));
    for (const auto& h : closure) by_size[static_cast<std::size_t>(sum(h))].push_back(h);

    std::vector<std::vector<TateSeries>> Fpart(m, std::vector<TateSeries>(static_cast<std::size_t>(D + 1), zero));
    std::map<std::pair<std::vector<int>, int>, TateSeries> memo;

    auto get = [&](const std::vector<int>& H, int d) -> const TateSeries& {
        const int k = sum(H);
        if (k == 0) return d == 0 ? one : zero;
        if (d < k) return zero;
        auto it = memo.find({H, d});
        if (it == memo.end()) throw std::logic_error("solve_formal: composition reaches an unsolved degree");
        return it->second;
    };

    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t t = 0; t < sys.terms[i].size(); ++t) tasks.emplace_back(i, t);

    for (int q = 1; q <= D; ++q) {
        for (int k = 1; k <= kmax; ++k) {
            const int d = q + k - 2;
            if (d < k || d > D) continue;
            const auto& hs = by_size[static_cast<std::size_t>(k)];
            std::vector<TateSeries> vals(hs.size(), zero);
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(hs.size()); ++x) {
                const auto& H = hs[static_cast<std::size_t>(x)];
                std::size_t r = m;
                for (std::size_t j = 0; j < m; ++j)
                    if (H[j] > 0) r = j;
                if (k == 1) {
                    vals[static_cast<std::size_t>(x)] = Fpart[r][static_cast<std::size_t>(d)];
                    continue;
                }
                std::vector<int> Hm = H;
                --Hm[r];
                TateSeries acc = zero;
                for (int a = 1; a <= d - (k - 1); ++a) {
                    if (a >= q) throw std::logic_error("solve_formal: composition part reaches the current degree");
                    const TateSeries& fa = Fpart[r][static_cast<std::size_t>(a)];
                    if (fa.is_zero()) continue;
                    const TateSeries& rest = get(Hm, d - a);
                    if (rest.is_zero()) continue;
                    acc += fa * rest;
                }
                vals[static_cast<std::size_t>(x)] = std::move(acc);
            }
            for (std::size_t x = 0; x < hs.size(); ++x) memo[{hs[x], d}] = std::move(vals[x]);
        }
        std::vector<TateSeries> contrib(tasks.size(), zero);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(tasks.size()); ++x) {
            const auto [i, t] = tasks[static_cast<std::size_t>(x)];
            const NormalizedTerm& term = sys.terms[i][t];
            std::int64_t jdeg = 0;
            for (auto v : term.J) jdeg += v;
            const int d = q - static_cast<int>(jdeg);
            if (d < 0) continue;
            const TateSeries& prod = get(term.H, d);
            if (prod.is_zero()) continue;
            Exps e(ring->nvars(), 0);
            for (std::size_t k = 0; k < term.J.size(); ++k) e[static_cast<std::size_t>(sys.sigma_idx[k])] = term.J[k] * sc;
            TateSeries mono = TateSeries::monomial_index(ring, e, FieldElement::one(f));
            contrib[static_cast<std::size_t>(x)] = (term.c * mono) * prod;
        }
        for (std::size_t x = 0; x < tasks.size(); ++x) Fpart[tasks[x].first][static_cast<std::size_t>(q)] += contrib[x];
    }

    ImplicitSeries out;
    out.ring = ring;
    out.sigma_idx = sys.sigma_idx;
    out.param_idx = sys.param_idx;
    out.degree = D;
    out.requested_cap = sys.requested_cap;
    out.v_piB = sys.v_piB;
    out.radius = 2 * sys.v_piB;
    out.tau_center = sys.tau_center;
    for (std::size_t i = 0; i < m; ++i) {
        TateSeries Fi = sys.tau_center.empty() ? zero : sys.tau_center[i];
        for (int q = 1; q <= D; ++q) Fi += Fpart[i][static_cast<std::size_t>(q)];
        out.F.push_back(std::move(Fi));
    }
    return out;
}

ImplicitSeries solve_at_point(const PolySystem& sys, int D) {
    const Rational cap = sys.params->field.cap;
    NormalizedSystem probe = normalize_system(sys, cap + 4, {}, nullptr, nullptr, 0, -1, D);
    NormalizedSystem ns = normalize_system(sys, working_cap(cap, D, probe.v_piB), {}, nullptr, nullptr, 0, -1, D);
    return solve_formal(ns, D);
}

ResidualReport residual_check(const PolySystem& sys, const ImplicitSeries& F) {
    ResidualReport rep;
    const ParamsPtr& ring = F.ring;
    std::map<std::string, TateSeries> assign;
    for (std::size_t k = 0; k < sys.n(); ++k) {
        TateSeries s = TateSeries::variable(ring, sys.sigma[k]);
        if (!sys.sigma_center.empty()) s += series_constant(ring, sys.sigma_center[k]);
        assign[sys.sigma[k]] = s;
    }
    for (std::size_t j = 0; j < sys.m(); ++j) assign[sys.tau[j]] = F.F[j];
    std::vector<int> sig(F.sigma_idx.begin(), F.sigma_idx.end());
    const std::int64_t dmax = static_cast<std::int64_t>(F.degree) * ring->field.scale();
    rep.min_valuation = Valuation::infinity();
    for (std::size_t i = 0; i < sys.m(); ++i) {
        TateSeries r = substitute(sys.polys[i], assign, ring, false).truncate_degree(sig, dmax);
        for (const auto& [e, c] : r.terms()) {
            rep.min_valuation = min(rep.min_valuation, c.valuation());
            if (rep.ok && c.valuation() < Valuation(F.requested_cap)) {
                rep.ok = false;
                rep.witness = "P" + std::to_string(i + 1) + " coefficient of " + exps_str(e, *ring) +
                              " has valuation " + c.valuation().str();
            }
        }
    }
    return rep;
}

CertificationReport certify_bounds(const ImplicitSeries& F, const NormalizedSystem& sys) {
    CertificationReport rep;
    rep.v_piB = sys.v_piB;
    rep.radius_valuation = 2 * sys.v_piB;
    const SeriesParams& rp = *F.ring;
    const std::int64_t sc = rp.field.scale();
    auto trunc = F.truncated();
    for (std::size_t i = 0; i < trunc.size(); ++i) {
        for (const auto& [e, c] : trunc[i].terms()) {
            std::int64_t deg = 0;
            for (int k : F.sigma_idx) deg += e[static_cast<std::size_t>(k)];
            if (deg == 0) continue;
            Rational I(deg, sc);
            ++rep.coefficients_checked;
            Valuation v = c.valuation();
            if (v < Valuation(-I * sys.v_piB)) {
                ++rep.violations;
                if (rep.bound_ok) {
                    rep.bound_ok = false;
                    rep.witness = "i=" + std::to_string(i + 1) + " I=" + exps_str(e, rp) + " v=" + v.str() +
                                  " bound=" + to_string(-I * sys.v_piB);
                }
            }
            if (v < Valuation(-(2 * I - 1) * sys.v_piB) && rep.tree_bound_ok) {
                rep.tree_bound_ok = false;
                rep.tree_witness = "i=" + std::to_string(i + 1) + " I=" + exps_str(e, rp) + " v=" + v.str();
            }
        }
    }
    return rep;
}

PolySystem pullback_system(const PolySystem& sys, int h) {
    sys.validate();
    auto nonzero = [](const std::vector<FieldElement>& c) {
        return std::any_of(c.begin(), c.end(), [](const FieldElement& x) { return !x.is_zero(); });
    };
    if (nonzero(sys.sigma_center)) fail(ErrorKind::Precondition, "pullback needs a system centered at sigma = 0");
    const std::int64_t f = ipow(sys.params->field.p, h);
    PolySystem out = sys;
    out.params = make_params(sys.params->field, sys.params->vars, sys.params->deg_cap * f, sys.params->var_levels);
    std::vector<int> sig;
    for (const auto& s : sys.sigma) sig.push_back(sys.params->var_index(s));
    out.polys.clear();
    for (const auto& P : sys.polys) {
        TateSeries Q(out.params);
        for (const auto& [e, c] : P.terms()) {
            Exps g = e;
            for (int k : sig) g[static_cast<std::size_t>(k)] *= f;
            Q.add_term(g, c);
        }
        out.polys.push_back(Q);
    }
    return out;
}

PullbackReport pullback_check(const ImplicitSeries& Fh, const ImplicitSeries& Fh1) {
    PullbackReport rep;
    if (!Fh.param_idx.empty() || !Fh1.param_idx.empty())
        fail(ErrorKind::Precondition, "pullback_check expects systems without parameters");
    if (Fh.F.size() != Fh1.F.size() || Fh.sigma_idx.size() != Fh1.sigma_idx.size())
        fail(ErrorKind::Value, "pullback_check: shapes differ");
    const FieldParams& f0 = Fh.ring->field;
    const FieldParams& f1 = Fh1.ring->field;
    if (f1.level < f0.level) fail(ErrorKind::Level, "pullback_check: level decreases");
    const std::int64_t p = f0.p;
    const std::int64_t lift = ipow(p, f1.level - f0.level);
    const std::int64_t s1 = f1.scale();
    const std::int64_t Dc = std::min<std::int64_t>(Fh1.degree, p * Fh.degree);
    const Rational cap = std::min(Fh.requested_cap, Fh1.requested_cap);
    for (std::size_t i = 0; i < Fh.F.size(); ++i) {
        std::map<Exps, FieldElement> lhs, rhs;
        for (const auto& [e, c] : Fh.F[i].terms()) {
            Exps g(Fh.sigma_idx.size());
            std::int64_t deg = 0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                g[k] = e[static_cast<std::size_t>(Fh.sigma_idx[k])] * lift * p;
                deg += g[k];
            }
            if (deg > Dc * s1) continue;
            FieldElement x = c.embed_level(f1.level).with_cap(cap);
            if (!x.is_zero()) rhs.emplace(g, x);
        }
        for (const auto& [e, c] : Fh1.F[i].terms()) {
            Exps g(Fh1.sigma_idx.size());
            std::int64_t deg = 0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                g[k] = e[static_cast<std::size_t>(Fh1.sigma_idx[k])];
                deg += g[k];
            }
            if (deg > Dc * s1) continue;
            FieldElement x = c.with_cap(cap);
            if (!x.is_zero()) lhs.emplace(g, x);
        }
        if (lhs != rhs) {
            rep.ok = false;
            for (const auto& [g, x] : lhs) {
                auto it = rhs.find(g);
                if (it == rhs.end() || it->second != x) {
                    std::ostringstream os;
                    os << "component " << i + 1 << " differs at sigma-exponent index (";
                    for (std::size_t k = 0; k < g.size(); ++k) os << (k ? "," : "") << to_string(Rational(g[k], s1));
                    os << ")";
                    rep.witness = os.str();
                    break;
                }
            }
            if (rep.witness.empty()) rep.witness = "component " + std::to_string(i + 1) + " has extra pulled-back terms";
            return rep;
        }
    }
    return rep;
}

RadiusStep radius_growth_step(const Rational& rho, std::int64_t p) {
    if (rho < 0) fail(ErrorKind::Value, "radius valuation must be non-negative");
    RadiusStep r;
    r.next = std::max(rho - 1, Rational(0));
    Rational cur = rho;
    const Rational target(1, p);
    while (cur >= target) {
        cur = std::max(cur - 1, Rational(0));
        ++r.steps_to_target;
    }
    return r;
}

bool HomotopyResult::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

namespace {

void require_map(const MapData& f, const PolySystem& sys) {
    if (f.s.size() != sys.n() || f.t.size() != sys.m()) fail(ErrorKind::Value, "map data does not match the system");
    const ParamsPtr& rp = f.s.empty() ? f.t.at(0).params_ptr() : f.s[0].params_ptr();
    for (const auto& x : f.s) require_same(x.params(), *rp, "map data");
    for (const auto& x : f.t) require_same(x.params(), *rp, "map data");
    for (const auto& v : rp->vars)
        if (sys.params->var_index(v) >= 0) fail(ErrorKind::Value, "tower variable " + v + " clashes with the system");
}

const ParamsPtr& tower_of(const MapData& f) { return f.s.empty() ? f.t.at(0).params_ptr() : f.s[0].params_ptr(); }

NormalizedSystem normalize_at_map(const MapData& f, const PolySystem& sys, const Rational& W, int D) {
    const ParamsPtr& rp = tower_of(f);
    return normalize_system(sys, W, rp->vars, &f.s, &f.t, rp->deg_cap, rp->field.level, D);
}

void check_on_variety(const MapData& f, const PolySystem& sys) {
    const ParamsPtr& rp = tower_of(f);
    std::map<std::string, TateSeries> a;
    for (std::size_t k = 0; k < sys.n(); ++k) a[sys.sigma[k]] = f.s[k];
    for (std::size_t k = 0; k < sys.m(); ++k) a[sys.tau[k]] = f.t[k];
    for (std::size_t i = 0; i < sys.m(); ++i) {
        TateSeries r = substitute(sys.polys[i], a, rp, false);
        if (!r.vanishes_below(rp->field.cap))
            fail(ErrorKind::Precondition, "P(s,t) does not vanish (component " + std::to_string(i + 1) + ")");
    }
}

}  // namespace

Rational certified_radius(const MapData& f, const PolySystem& sys) {
    require_map(f, sys);
    return 2 * normalize_at_map(f, sys, tower_of(f)->field.cap + 4, 1).v_piB;
}

HomotopyResult homotopy_from_approximation(const MapData& f, const std::vector<TateSeries>& s_tilde,
                                           const PolySystem& sys, const EpsilonPolicy& policy) {
    require_map(f, sys);
    check_on_variety(f, sys);
    const ParamsPtr& rp = tower_of(f);
    const Rational cap = rp->field.cap;
    const std::size_t n = sys.n(), m = sys.m();
    if (s_tilde.size() != n) fail(ErrorKind::Value, "approximation has the wrong length");

    NormalizedSystem probe = normalize_at_map(f, sys, cap + 4, 1);
    const Rational b = probe.v_piB;
    const Rational rho = 2 * b;
    Rational threshold = rho;
    if (policy.epsilon) threshold = std::max(threshold, *policy.epsilon);

    std::vector<TateSeries> delta;
    Valuation vdelta = Valuation::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        delta.push_back(s_tilde[k] - f.s[k]);
        vdelta = min(vdelta, delta.back().gauss_norm());
    }
    if (!(vdelta > Valuation(threshold)))
        fail(ErrorKind::Approximation, "approximation gap " + vdelta.str() + " does not exceed the threshold " +
                                           to_string(threshold));
    int D = 0;
    if (!vdelta.is_infinite()) {
        Rational gap = vdelta.value() - rho;
        std::int64_t need = ceil((cap - b) / gap) - 1;
        D = static_cast<int>(std::max<std::int64_t>(1, need));
        if (D > policy.max_solve_degree)
            fail(ErrorKind::Approximation, "solve degree " + std::to_string(D) + " exceeds the budget");
    }
    const Rational W = working_cap(cap, std::max(D, 1), b);
    NormalizedSystem ns = normalize_at_map(f, sys, W, std::max(D, 1));
    ImplicitSeries F = solve_formal(ns, D);

    auto vars = rp->vars;
    vars.push_back("chi");
    // room for every term of F(delta chi): truncating there would break the faces of H
    Rational ddeg(0);
    for (const auto& d : delta) ddeg = std::max(ddeg, d.degree());
    ParamsPtr ring = make_params(ns.ring->field, vars, rp->deg_cap + std::max(D, 1) * (ceil(ddeg) + 1));
    TateSeries chi = TateSeries::variable(ring, "chi");
    std::map<std::string, TateSeries> assign;
    std::vector<TateSeries> Hs, Ht;
    for (std::size_t k = 0; k < n; ++k) {
        TateSeries dk = delta[k].embed(ring) * chi;
        assign[sys.sigma[k]] = dk;
        Hs.push_back(f.s[k].embed(ring) + dk);
    }
    for (std::size_t j = 0; j < m; ++j) Ht.push_back(substitute(F.F[j], assign, ring, false));

    HomotopyResult out;
    out.threshold = threshold;
    out.radius = rho;
    out.solve_degree = D;
    out.ring = make_params(FieldParams(rp->field.p, rp->field.char_p, ring->field.level, cap), vars, ring->deg_cap);
    for (auto& x : Hs) out.H_sigma.push_back(x.with_coeff_cap(cap).embed(out.ring));
    for (auto& x : Ht) out.H_tau.push_back(x.with_coeff_cap(cap).embed(out.ring));

    const std::size_t chi_idx = vars.size() - 1;
    // chi = 0 face
    {
        bool ok = true;
        std::string w;
        for (std::size_t k = 0; k < n + m && ok; ++k) {
            const TateSeries& h = k < n ? out.H_sigma[k] : out.H_tau[k - n];
            const TateSeries& ref = k < n ? f.s[k] : f.t[k - n];
            TateSeries face = h.face_restrict(chi_idx, 0);
            TateSeries want = ref.embed(face.params_ptr());
            if (face != want || want.size() != ref.size()) {
                ok = false;
                w = (k < n ? "sigma component " : "tau component ") + std::to_string((k < n ? k : k - n) + 1);
            }
        }
        out.checks.push_back({"chi0_face_equals_f", "exact", ok ? "exact" : "differs", w, ok});
    }
    // chi = 1 face: level and power-boundedness
    {
        int hbar = 0;
        Valuation tau_norm = Valuation::infinity();
        for (std::size_t k = 0; k < n + m; ++k) {
            const TateSeries& h = k < n ? out.H_sigma[k] : out.H_tau[k - n];
            TateSeries face = h.face_restrict(chi_idx, 1);
            hbar = std::max(hbar, face.support_level());
            if (k >= n) tau_norm = min(tau_norm, face.gauss_norm());
        }
        int slevel = 0;
        for (const auto& x : s_tilde) slevel = std::max(slevel, x.support_level());
        out.hbar = hbar;
        out.truncation_level = slevel;
        out.checks.push_back({"chi1_face_level", "<= " + std::to_string(slevel), std::to_string(hbar), "",
                              hbar <= slevel});
        out.checks.push_back({"chi1_tau_power_bounded", ">= 0", tau_norm.str(), "", tau_norm >= Valuation(0)});
    }
    // P(H) = 0 below the cap
    {
        std::map<std::string, TateSeries> a;
        for (std::size_t k = 0; k < n; ++k) a[sys.sigma[k]] = Hs[k];
        for (std::size_t j = 0; j < m; ++j) a[sys.tau[j]] = Ht[j];
        Valuation worst = Valuation::infinity();
        for (std::size_t i = 0; i < m; ++i) worst = min(worst, substitute(sys.polys[i], a, ring, false).gauss_norm());
        out.checks.push_back({"residual_P_of_H", ">= " + to_string(cap), worst.str(), "", worst >= Valuation(cap)});
    }
    out.checks.push_back({"approximation_gap", "> " + to_string(threshold), vdelta.str(), "",
                          vdelta > Valuation(threshold)});
    return out;
}

HomotopyResult homotopy_factor(const MapData& f, const PolySystem& sys, const EpsilonPolicy& policy) {
    require_map(f, sys);
    const ParamsPtr& rp = tower_of(f);
    std::string last;
    for (int h = 0; h <= rp->field.level; ++h) {
        std::vector<TateSeries> st;
        for (const auto& s : f.s) st.push_back(s.truncate_level(h));
        try {
            HomotopyResult r = homotopy_from_approximation(f, st, sys, policy);
            bool pb = true;
            for (const auto& c : r.checks)
                if (c.name == "chi1_tau_power_bounded" && !c.ok) pb = false;
            if (!pb) {
                last = "F(s~) not power-bounded at level " + std::to_string(h);
                continue;
            }
            return r;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Approximation) throw;
            last = e.what();
        }
    }
    fail(ErrorKind::Approximation, "no truncation level meets the radius threshold: " + last);
}

}  // namespace pfd
