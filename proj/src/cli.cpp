#include "pfd/cli.hpp"

#include "pfd/errors.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace pfd::cli {

using io::Json;

namespace {

struct Outcome {
    std::vector<Check> checks;
    Json result = Json::object();
};

struct Context {
    const JobSpec& job;
    std::vector<Json> inputs;
    Json params = Json::object();

    std::int64_t p(std::int64_t d) {
        std::int64_t v = job.p.value_or(d);
        params["p"] = v;
        return v;
    }
    int level(int d) {
        int v = job.level.value_or(d);
        params["level"] = v;
        return v;
    }
    Rational prec(Rational d) {
        Rational v = job.prec.value_or(d);
        params["prec"] = to_string(v);
        return v;
    }
    std::int64_t deg_cap(std::int64_t d) {
        std::int64_t v = job.deg_cap.value_or(d);
        params["deg_cap"] = v;
        return v;
    }
    int h(int d) {
        int v = job.h.value_or(d);
        params["h"] = v;
        return v;
    }
    int nmax(int d) {
        int v = job.nmax.value_or(d);
        params["nmax"] = v;
        return v;
    }
    std::optional<Rational> epsilon() {
        if (job.epsilon) params["epsilon"] = to_string(*job.epsilon);
        return job.epsilon;
    }
    const Json& input(std::size_t i = 0) {
        if (inputs.size() <= i) fail(ErrorKind::Parse, "command needs an input file (--in)");
        return inputs[i];
    }
};

Json checks_json(const std::vector<Check>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) a.push_back(io::to_json(c));
    return a;
}

std::optional<mpz_class> integer_value(const FieldElement& x) {
    const auto& f = x.params();
    if (f.char_p) return std::nullopt;
    mpz_class v = 0, mod;
    std::int64_t top = floor(f.cap);
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(f.p), static_cast<unsigned long>(top));
    for (const auto& [e, d] : x.terms()) {
        if (e.denominator() != 1 || e < 0) return std::nullopt;
        if (e.numerator() >= top) continue;
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(f.p), static_cast<unsigned long>(e.numerator()));
        v += t * d;
    }
    if (2 * v > mod) v -= mod;
    return v;
}

Json series_list(const std::vector<TateSeries>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(io::to_json(x));
    return a;
}

// ---- commands ----

Outcome cmd_solve_implicit(Context& c) {
    PolySystem sys = io::system_from(c.input());
    int D = static_cast<int>(c.deg_cap(8));
    ImplicitSeries F = solve_at_point(sys, D);
    auto res = residual_check(sys, F);
    Outcome o;
    o.checks.push_back({"residual", ">= " + to_string(sys.params->field.cap), res.min_valuation.str(), res.witness, res.ok});
    auto Ft = F.truncated();
    o.result["F"] = series_list(Ft);
    o.result["degree"] = F.degree;
    o.result["v_piB"] = to_string(F.v_piB);
    o.result["radius_valuation"] = to_string(F.radius);
    if (sys.n() == 1) {
        Json coeffs = Json::array();
        for (const auto& f : Ft) {
            Json row = Json::array();
            std::size_t si = static_cast<std::size_t>(F.sigma_idx[0]);
            std::int64_t scale = f.field().scale();
            for (int d = 1; d <= D; ++d) {
                Exps e(f.params().nvars(), 0);
                e[si] = d * scale;
                auto v = integer_value(f.coefficient(e));
                if (v) row.push_back(v->get_str());
                else row.push_back(io::to_json(f.coefficient(e)));
            }
            coeffs.push_back(row);
        }
        o.result["sigma_coefficients"] = coeffs;
    }
    return o;
}

Outcome cmd_certify(Context& c) {
    PolySystem sys = io::system_from(c.input());
    int D = static_cast<int>(c.deg_cap(8));
    const Rational cap = sys.params->field.cap;
    NormalizedSystem probe = normalize_system(sys, cap + 4);
    NormalizedSystem ns = normalize_system(sys, working_cap(cap, D, probe.v_piB));
    ImplicitSeries F = solve_formal(ns, D);
    CertificationReport r = certify_bounds(F, ns);
    Outcome o;
    o.checks.push_back({"stated_bound", "v(d_I) >= -|I| v(pi_B)", r.bound_ok ? "holds" : "violated",
                        r.witness.value_or(""), r.bound_ok});
    o.result["bound_ok"] = r.bound_ok;
    o.result["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
    o.result["radius_valuation"] = to_string(r.radius_valuation);
    o.result["v_piB"] = to_string(r.v_piB);
    o.result["tree_bound_ok"] = r.tree_bound_ok;
    o.result["tree_witness"] = r.tree_witness ? Json(*r.tree_witness) : Json(nullptr);
    o.result["coefficients_checked"] = r.coefficients_checked;
    o.result["violations"] = r.violations;
    return o;
}

Json homotopy_json(const HomotopyResult& r) {
    Json j;
    j["H_sigma"] = series_list(r.H_sigma);
    j["H_tau"] = series_list(r.H_tau);
    j["hbar"] = r.hbar;
    j["truncation_level"] = r.truncation_level;
    j["threshold"] = to_string(r.threshold);
    j["radius"] = to_string(r.radius);
    j["solve_degree"] = r.solve_degree;
    return j;
}

Outcome cmd_homotopy_factor(Context& c) {
    io::HomotopyJob job = io::homotopy_job_from(c.input());
    EpsilonPolicy pol;
    pol.epsilon = c.epsilon() ? c.epsilon() : job.epsilon;
    Outcome o;
    if (job.maps.size() == 1 && job.cube_vars.empty()) {
        HomotopyResult r = homotopy_factor(job.maps[0], job.system, pol);
        o.checks = r.checks;
        o.result = homotopy_json(r);
        return o;
    }
    HomotopyTupleResult r = homotopy_tuple(job.maps, job.system, job.cube_vars, pol);
    o.checks = r.checks;
    Json hs = Json::array();
    for (std::size_t k = 0; k < r.H.size(); ++k) {
        for (auto ch : r.H[k].checks) {
            ch.name += "_map" + std::to_string(k + 1);
            o.checks.push_back(ch);
        }
        hs.push_back(homotopy_json(r.H[k]));
    }
    o.result["homotopies"] = hs;
    o.result["hbar"] = r.hbar;
    o.result["threshold"] = to_string(r.threshold);
    return o;
}

Outcome cmd_pullback_check(Context& c) {
    PolySystem sys = io::system_from(c.input());
    int H = c.h(2);
    int D = static_cast<int>(c.deg_cap(8));
    Outcome o;
    std::vector<ImplicitSeries> F;
    for (int h = 0; h <= H; ++h) F.push_back(solve_at_point(pullback_system(sys, h), D));
    for (int h = 0; h < H; ++h) {
        auto r = pullback_check(F[static_cast<std::size_t>(h)], F[static_cast<std::size_t>(h + 1)]);
        o.checks.push_back({"pullback_h" + std::to_string(h) + "_to_h" + std::to_string(h + 1),
                            "F_{h+1}(s) = F_h(s^p) through degree " + std::to_string(D), r.ok ? "holds" : "differs",
                            r.witness, r.ok});
    }
    return o;
}

Outcome cmd_tilt_sharp(Context& c) {
    TiltElement t = io::tilt_element_from(c.input());
    check_integrity(t);
    Outcome o;
    FieldElement s = sharp(t);
    o.checks.push_back({"integrity", "compatible", "compatible", "", true});
    o.checks.push_back({"additive_congruence", "(a#-1) = (a-1)# mod pi", "", "", additive_congruence_check(t)});
    o.checks.back().got = o.checks.back().ok ? "holds" : "fails";
    o.result["sharp"] = io::to_json(s);
    return o;
}

Outcome cmd_unit_transfer(Context& c) {
    FieldElement a = io::field_element_from(c.input());
    int depth = c.h(2);
    UnitTransfer u = unit_transfer(a, depth);
    Outcome o;
    o.checks.push_back({"certificate", ">= 1", u.certificate.str(), "", u.certificate >= Valuation(1)});
    o.checks.push_back({"residue_roundtrip", "holds", u.residue_roundtrip ? "holds" : "fails", "", u.residue_roundtrip});
    o.result["b"] = io::to_json(u.b);
    o.result["certificate"] = u.certificate.str();
    return o;
}

Outcome cmd_b1perf(Context& c) {
    std::int64_t p = c.p(2);
    int h = c.h(1);
    Rational k = c.prec(Rational(12));
    Outcome o;
    o.checks = verify_b1perf(b1perf_maps(p, h, k));
    return o;
}

Outcome cmd_cubical(Context& c) {
    CubicalModule m = c.inputs.empty() ? random_module(c.job.seed, c.nmax(2), 6) : io::module_from(c.input());
    Outcome o;
    auto viol = identity_violation(m);
    o.checks.push_back({"cubical_identities", "hold", viol ? "violated" : "hold", viol.value_or(""), !viol});
    if (viol) return o;
    Json views = Json::object();
    for (auto kind : {ComplexKind::Full, ComplexKind::Simple, ComplexKind::Normalized}) {
        auto v = build_complex(m, kind);
        Json dims = Json::array(), hom = Json::array();
        for (int n = 0; n <= m.nmax; ++n) {
            dims.push_back(v.dim(n));
            hom.push_back(homology(v, n));
        }
        views[complex_kind_name(kind)] = {{"dims", dims}, {"homology", hom}};
    }
    o.checks.push_back({"d_squared_zero", "all views", "all views", "", true});
    auto cmp = compare_N_C(m);
    std::string got;
    for (int n = 0; n < m.nmax; ++n)
        got += (n ? "," : "") + std::to_string(cmp.h_normalized[static_cast<std::size_t>(n)]) + "/" +
               std::to_string(cmp.h_simple[static_cast<std::size_t>(n)]);
    o.checks.push_back({"homology_N_equals_C", "equal below nmax", got, cmp.ok ? "" : "H(N)/H(C) per degree", cmp.ok});
    o.result["views"] = views;
    o.result["top_degree_note"] = "degree nmax is the homology of the truncated complex";
    return o;
}

Outcome cmd_cylinder(Context& c) {
    int nmax = c.nmax(4);
    std::string kind = c.job.kind.value_or("polynomial");
    c.params["kind"] = kind;
    CylinderData d;
    if (kind == "polynomial") d = polynomial_cylinder(nmax, static_cast<int>(c.deg_cap(3)));
    else if (kind == "constant") d = constant_cylinder(nmax);
    else fail(ErrorKind::Parse, "cylinder kind must be polynomial or constant");
    auto r = cylinder_homotopy_check(d, c.job.seed, 100);
    Outcome o;
    o.checks = r.checks;
    o.result["vectors_checked"] = r.vectors_checked;
    o.result["conclusion"] = r.ok ? "i0* and i1* are chain homotopic" : "identity fails";
    return o;
}

Outcome cmd_face_intersect(Context& c) {
    auto con = io::constraints_from(c.input());
    int D = static_cast<int>(c.deg_cap(4));
    auto s = intersect(con.maps, con.n, D);
    Outcome o;
    Json gens = Json::array();
    for (const auto& g : s.generators) gens.push_back(g.str());
    Matrix re = expand_generators(s.generators, s.basis);
    bool ok = s.dim() == 0 ? re.cols() == 0 : same_span(re, s.span);
    o.checks.push_back({"generators_reproduce_slice", std::to_string(s.dim()), std::to_string(rank(re)), "", ok});
    o.result["generators"] = gens;
    o.result["dim"] = s.dim();
    o.result["slice_dim"] = s.basis.size();
    return o;
}

Outcome cmd_exactness(Context& c) {
    auto con = io::constraints_from(c.input());
    int D = static_cast<int>(c.deg_cap(4));
    auto r = exactness_check(con.maps, con.n, D);
    Outcome o;
    o.checks.push_back({"injective", std::to_string(r.dim_slice - r.rank_restriction),
                        std::to_string(r.dim_intersection), "", r.injective});
    o.checks.push_back({"exact_middle", std::to_string(r.rank_margin), std::to_string(r.rank_augmented), "",
                        r.middle_exact});
    o.checks.push_back({"complex", "delta o res = 0", r.is_complex ? "zero" : "nonzero", "", r.is_complex});
    o.result["dim_slice"] = r.dim_slice;
    o.result["dim_compatible"] = r.dim_compatible;
    o.result["margin"] = r.margin;
    return o;
}

Outcome cmd_lift(Context& c) {
    io::LiftJob job = io::lift_job_from(c.input());
    std::vector<int> cube;
    for (const auto& v : job.cube_vars) {
        int i = job.g.params().var_index(v);
        if (i < 0) fail(ErrorKind::Value, "unknown cube variable " + v);
        cube.push_back(i);
    }
    auto r = lift(job.faces, job.g, cube, job.D, job.level);
    Outcome o;
    o.checks.push_back({"faces_exact", "exact", "exact", "", true});
    Valuation want = r.dist_in.is_infinite() ? Valuation::infinity() : Valuation(r.dist_in.value() - Rational(r.C.c));
    o.checks.push_back({"distance_bound", ">= " + want.str(), r.dist_out.str(), "", r.dist_out >= want});
    o.result["f"] = io::to_json(r.f);
    o.result["C"] = to_string(r.C.C);
    o.result["dist_in"] = r.dist_in.str();
    o.result["dist_out"] = r.dist_out.str();
    return o;
}

Outcome cmd_approximate_tuple(Context& c) {
    io::TupleJob job = io::tuple_job_from(c.input());
    if (auto e = c.epsilon()) job.epsilon = *e;
    if (job.elements.empty()) return Outcome{};
    TowerRing tower = TowerRing::from(job.elements[0].params_ptr(), job.cube_vars);
    auto r = approximate_tuple(job.elements, job.epsilon, tower, job.coincidences);
    Outcome o;
    o.checks = r.checks;
    o.result["s_tilde"] = series_list(r.s_tilde);
    o.result["h"] = r.h;
    Json th = Json::array(), cs = Json::array();
    for (const auto& t : r.thresholds) th.push_back(to_string(t));
    for (auto x : r.lift_c) cs.push_back(to_string(Rational(ipow(tower.ring->field.p, static_cast<int>(x)))));
    o.result["thresholds"] = th;
    o.result["lift_constants"] = cs;
    return o;
}

using Handler = std::function<Outcome(Context&)>;

const std::vector<std::pair<std::string, Handler>>& table() {
    static const std::vector<std::pair<std::string, Handler>> t = {
        {"solve-implicit", cmd_solve_implicit},   {"certify", cmd_certify},
        {"homotopy-factor", cmd_homotopy_factor}, {"pullback-check", cmd_pullback_check},
        {"tilt-sharp", cmd_tilt_sharp},           {"unit-transfer", cmd_unit_transfer},
        {"b1perf-verify", cmd_b1perf},            {"cubical-homology", cmd_cubical},
        {"cylinder-check", cmd_cylinder},         {"face-intersect", cmd_face_intersect},
        {"exactness-check", cmd_exactness},       {"lift", cmd_lift},
        {"approximate-tuple", cmd_approximate_tuple},
    };
    return t;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Parse, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [n, h] : table()) v.push_back(n);
        return v;
    }();
    return names;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

Report run(const JobSpec& job) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    Json& b = rep.body;
    b["tool"] = kTool;
    b["version"] = kVersion;
    b["command"] = job.command;
    b["status"] = "error";
    Context ctx{job, {}, Json::object()};
    std::string digest_input;
    try {
        const Handler* handler = nullptr;
        for (const auto& [n, h] : table())
            if (n == job.command) handler = &h;
        if (!handler) fail(ErrorKind::Parse, "unknown command " + job.command);
        for (const auto& path : job.inputs) {
            std::string bytes = read_bytes(path);
            digest_input += bytes;
            ctx.inputs.push_back(io::parse_text(bytes));
        }
        Outcome o = (*handler)(ctx);
        bool ok = all_ok(o.checks);
        b["status"] = ok ? "pass" : "fail";
        b["params"] = ctx.params;
        b["seed"] = job.seed;
        b["input_digest"] = "sha256:" + sha256_hex(digest_input);
        Json checks = checks_json(o.checks);
        // failures always carry a witness
        for (auto& c : checks)
            if (!c["ok"].get<bool>() && c["witness"].get<std::string>().empty())
                c["witness"] = "got " + c["got"].get<std::string>();
        b["checks"] = checks;
        b["result"] = o.result;
        rep.exit_code = ok ? Pass : Fail;
    } catch (const Error& e) {
        b["status"] = "error";
        b["params"] = ctx.params;
        b["seed"] = job.seed;
        b["input_digest"] = "sha256:" + sha256_hex(digest_input);
        b["checks"] = Json::array();
        b["error"] = {{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
        rep.exit_code = e.kind() == ErrorKind::Parse ? ParseError : DomainError;
    } catch (const std::exception& e) {
        b["status"] = "error";
        b["params"] = ctx.params;
        b["seed"] = job.seed;
        b["input_digest"] = "sha256:" + sha256_hex(digest_input);
        b["checks"] = Json::array();
        b["error"] = {{"kind", "internal"}, {"message", e.what()}};
        rep.exit_code = DomainError;
    }
    if (job.timing)
        b["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    return rep;
}

std::string render(const Report& r) { return r.body.dump(2) + "\n"; }

}  // namespace pfd::cli
