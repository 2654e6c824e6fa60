#include "pfd/json_io.hpp"

#include "pfd/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace pfd::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing key '") + key + "'");
    return *it;
}

std::int64_t as_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

std::string as_string(const Json& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

const Json& as_array(const Json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    return j;
}

std::vector<std::string> strings(const Json& j, const char* what) {
    std::vector<std::string> out;
    for (const auto& x : as_array(j, what)) out.push_back(as_string(x, what));
    return out;
}

std::vector<int> ints(const Json& j, const char* what) {
    std::vector<int> out;
    for (const auto& x : as_array(j, what)) out.push_back(static_cast<int>(as_int(x, what)));
    return out;
}

// Domain errors raised while building parsed values stay domain errors; everything else is a parse error.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        bad(e.what());
    }
}

}  // namespace

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    return parse_rational(as_string(j, "rational"));
}

Json field_params_json(const FieldParams& f) {
    Json j;
    j["p"] = f.p;
    if (f.char_p) j["char"] = "p";
    else j["char"] = 0;
    j["level"] = f.level;
    j["cap"] = to_json(f.cap);
    return j;
}

FieldParams field_params_from(const Json& j) {
    std::int64_t p = as_int(field(j, "p"), "p");
    const Json& c = field(j, "char");
    bool char_p;
    if (c.is_string() && c.get<std::string>() == "p") char_p = true;
    else if (c.is_number_integer() && c.get<std::int64_t>() == 0) char_p = false;
    else bad("char must be 0 or \"p\"");
    int level = static_cast<int>(as_int(field(j, "level"), "level"));
    Rational cap = rational_from(field(j, "cap"));
    return FieldParams(p, char_p, level, cap);
}

Json to_json(const FieldElement& x) {
    Json j = field_params_json(x.params());
    Json terms = Json::array();
    for (const auto& [e, d] : x.terms()) terms.push_back(Json::array({to_string(e), d}));
    j["terms"] = terms;
    return j;
}

FieldElement field_element_from(const Json& j) {
    FieldParams f = field_params_from(j);
    std::vector<std::pair<Rational, std::int64_t>> terms;
    std::set<Rational> seen;
    for (const auto& t : as_array(field(j, "terms"), "terms")) {
        if (!t.is_array() || t.size() != 2) bad("a term is [exponent, digit]");
        Rational e = rational_from(t[0]);
        if (!seen.insert(e).second) bad("repeated exponent " + to_string(e));
        terms.emplace_back(e, as_int(t[1], "digit"));
    }
    return FieldElement::make(f, terms);
}

Json to_json(const TateSeries& f) {
    const auto& P = f.params();
    Json j;
    j["vars"] = P.vars;
    j["deg_cap"] = P.deg_cap;
    j["var_levels"] = P.var_levels;
    j["field"] = field_params_json(P.field);
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms()) {
        Json ex = Json::object();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) ex[P.vars[i]] = to_string(P.field.exponent_of(e[i]));
        Json t;
        t["exps"] = ex;
        t["coeff"] = to_json(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

TateSeries tate_series_from(const Json& j) {
    FieldParams f = field_params_from(field(j, "field"));
    auto vars = strings(field(j, "vars"), "vars");
    std::int64_t cap = as_int(field(j, "deg_cap"), "deg_cap");
    std::vector<int> levels;
    if (j.contains("var_levels")) levels = ints(j["var_levels"], "var_levels");
    return tate_series_from(j, make_params(f, vars, cap, levels));
}

TateSeries tate_series_from(const Json& j, const ParamsPtr& ring) {
    if (j.contains("vars") && strings(j["vars"], "vars") != ring->vars) bad("series variables differ from the ring");
    TateSeries out(ring);
    std::set<Exps> seen;
    for (const auto& t : as_array(field(j, "terms"), "terms")) {
        Exps e(ring->nvars(), 0);
        const Json& ex = field(t, "exps");
        if (!ex.is_object()) bad("exps must be an object");
        for (auto it = ex.begin(); it != ex.end(); ++it) {
            int i = ring->var_index(it.key());
            if (i < 0) bad("unknown variable " + it.key());
            Rational r = rational_from(it.value());
            if (r < 0) bad("negative exponent");
            e[static_cast<std::size_t>(i)] = ring->field.index_of(r);
            std::int64_t step = ring->var_step(static_cast<std::size_t>(i));
            if (e[static_cast<std::size_t>(i)] % step != 0)
                fail(ErrorKind::Level, "exponent of " + it.key() + " finer than its level");
        }
        if (!seen.insert(e).second) bad("repeated monomial");
        FieldElement c = field_element_from(field(t, "coeff"));
        if (c.params() != ring->field) bad("coefficient field differs from the ring");
        if (out.weighted_degree_index(e) > ring->deg_cap_index()) fail(ErrorKind::Cap, "term above the degree cap");
        out.add_term(e, c);
    }
    return out;
}

Json to_json(const PolySystem& s) {
    Json j;
    j["sigma"] = s.sigma;
    j["tau"] = s.tau;
    Json polys = Json::array();
    for (const auto& p : s.polys) polys.push_back(to_json(p));
    j["polys"] = polys;
    Json center = Json::object();
    if (!s.sigma_center.empty()) {
        Json a = Json::array();
        for (const auto& x : s.sigma_center) a.push_back(to_json(x));
        center["sigma"] = a;
    }
    if (!s.tau_center.empty()) {
        Json a = Json::array();
        for (const auto& x : s.tau_center) a.push_back(to_json(x));
        center["tau"] = a;
    }
    j["center"] = center;
    return j;
}

PolySystem system_from(const Json& j) {
    PolySystem s;
    s.sigma = strings(field(j, "sigma"), "sigma");
    s.tau = strings(field(j, "tau"), "tau");
    const Json& polys = as_array(field(j, "polys"), "polys");
    if (polys.empty()) bad("a system needs at least one polynomial");
    s.params = tate_series_from(polys[0]).params_ptr();
    for (const auto& p : polys) s.polys.push_back(tate_series_from(p, s.params));
    if (j.contains("center")) {
        const Json& c = j["center"];
        if (!c.is_object()) bad("center must be an object");
        if (c.contains("sigma"))
            for (const auto& x : as_array(c["sigma"], "center.sigma")) s.sigma_center.push_back(field_element_from(x));
        if (c.contains("tau"))
            for (const auto& x : as_array(c["tau"], "center.tau")) s.tau_center.push_back(field_element_from(x));
    }
    s.validate();
    return s;
}

Json to_json(const TiltElement& t) {
    Json j;
    j["depth"] = t.depth;
    Json seq = Json::array();
    for (const auto& x : t.sequence) seq.push_back(to_json(x));
    j["sequence"] = seq;
    j["flat"] = to_json(t.flat);
    return j;
}

TiltElement tilt_element_from(const Json& j) {
    TiltElement t;
    t.depth = static_cast<int>(as_int(field(j, "depth"), "depth"));
    for (const auto& x : as_array(field(j, "sequence"), "sequence")) t.sequence.push_back(field_element_from(x));
    t.flat = field_element_from(field(j, "flat"));
    if (t.sequence.size() != static_cast<std::size_t>(t.depth) + 1) bad("sequence length must be depth + 1");
    return t;
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) {
            mpq_class q = m(i, k);
            r.push_back(q.get_num().get_str() + "/" + q.get_den().get_str());
        }
        rows.push_back(r);
    }
    return rows;
}

Matrix matrix_from(const Json& j, std::size_t rows, std::size_t cols) {
    as_array(j, "matrix");
    if (j.size() != rows) bad("matrix has the wrong number of rows");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& r = as_array(j[i], "matrix row");
        if (r.size() != cols) bad("matrix row has the wrong length");
        for (std::size_t k = 0; k < cols; ++k) {
            std::string s = r[k].is_number_integer() ? std::to_string(r[k].get<std::int64_t>())
                                                      : as_string(r[k], "matrix entry");
            mpq_class q;
            if (q.set_str(s, 10) != 0) bad("bad matrix entry '" + s + "'");
            if (q.get_den() == 0) bad("zero denominator in matrix entry");
            q.canonicalize();
            m(i, k) = q;
        }
    }
    return m;
}

Json to_json(const CubicalModule& m) {
    Json j;
    j["nmax"] = m.nmax;
    j["dims"] = m.dims;
    Json faces = Json::object(), degens = Json::object();
    for (int n = 1; n <= m.nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e)
                faces[std::to_string(n) + "," + std::to_string(r) + "," + std::to_string(e)] = to_json(m.face(n, r, e));
            degens[std::to_string(n) + "," + std::to_string(r)] = to_json(m.degen(n, r));
        }
    j["faces"] = faces;
    j["degens"] = degens;
    return j;
}

CubicalModule module_from(const Json& j) {
    int nmax = static_cast<int>(as_int(field(j, "nmax"), "nmax"));
    if (nmax < 0 || nmax > 16) bad("nmax out of range");
    CubicalModule m(nmax);
    const Json& dims = as_array(field(j, "dims"), "dims");
    if (dims.size() != static_cast<std::size_t>(nmax) + 1) bad("dims must have nmax+1 entries");
    for (int n = 0; n <= nmax; ++n) {
        std::int64_t d = as_int(dims[static_cast<std::size_t>(n)], "dim");
        if (d < 0) bad("negative dimension");
        m.dims[static_cast<std::size_t>(n)] = static_cast<std::size_t>(d);
    }
    const Json& faces = field(j, "faces");
    const Json& degens = field(j, "degens");
    for (int n = 1; n <= nmax; ++n)
        for (int r = 1; r <= n; ++r) {
            for (int e = 0; e < 2; ++e)
                m.face(n, r, e) = matrix_from(field(faces, (std::to_string(n) + "," + std::to_string(r) + "," +
                                                            std::to_string(e)).c_str()),
                                              m.dims[static_cast<std::size_t>(n - 1)], m.dims[static_cast<std::size_t>(n)]);
            m.degen(n, r) = matrix_from(field(degens, (std::to_string(n) + "," + std::to_string(r)).c_str()),
                                        m.dims[static_cast<std::size_t>(n)], m.dims[static_cast<std::size_t>(n - 1)]);
        }
    return m;
}

Json to_json(const FaceMap& f) {
    Json j;
    j["T"] = f.T;
    j["vals"] = f.vals;
    return j;
}

FaceMap face_map_from(const Json& j) {
    return guarded([&] { return FaceMap(ints(field(j, "T"), "T"), ints(field(j, "vals"), "vals")); });
}

Json to_json(const Constraints& c) {
    Json j;
    j["n"] = c.n;
    Json maps = Json::array();
    for (const auto& f : c.maps) maps.push_back(to_json(f));
    j["maps"] = maps;
    return j;
}

Constraints constraints_from(const Json& j) {
    Constraints c;
    c.n = static_cast<int>(as_int(field(j, "n"), "n"));
    if (c.n < 0 || c.n > 6) bad("n out of range");
    for (const auto& x : as_array(field(j, "maps"), "maps")) c.maps.push_back(face_map_from(x));
    validate_faces(c.maps, c.n);
    return c;
}

namespace {

Json coincidence_json(const Coincidence& c) {
    Json j;
    j["alpha"] = c.alpha + 1;
    j["beta"] = c.beta + 1;
    j["T"] = c.sigma.T;
    j["vals"] = c.sigma.vals;
    return j;
}

Coincidence coincidence_from(const Json& j) {
    Coincidence c;
    std::int64_t a = as_int(field(j, "alpha"), "alpha"), b = as_int(field(j, "beta"), "beta");
    if (a < 1 || b < 1) bad("coincidence indices are 1-based");
    c.alpha = static_cast<std::size_t>(a - 1);
    c.beta = static_cast<std::size_t>(b - 1);
    c.sigma = face_map_from(j);
    return c;
}

std::vector<TateSeries> series_list(const Json& j, const char* what, ParamsPtr& ring) {
    std::vector<TateSeries> out;
    for (const auto& x : as_array(j, what)) {
        if (!ring) ring = tate_series_from(x).params_ptr();
        out.push_back(tate_series_from(x, ring));
    }
    return out;
}

}  // namespace

Json to_json(const TupleJob& t) {
    Json j;
    Json el = Json::array();
    for (const auto& x : t.elements) el.push_back(to_json(x));
    j["elements"] = el;
    j["epsilon"] = to_json(t.epsilon);
    j["cube_vars"] = t.cube_vars;
    if (!t.coincidences) {
        j["coincidences"] = "auto";
    } else {
        Json a = Json::array();
        for (const auto& c : *t.coincidences) a.push_back(coincidence_json(c));
        j["coincidences"] = a;
    }
    return j;
}

TupleJob tuple_job_from(const Json& j) {
    TupleJob t;
    ParamsPtr ring;
    t.elements = series_list(field(j, "elements"), "elements", ring);
    t.epsilon = rational_from(field(j, "epsilon"));
    t.cube_vars = strings(field(j, "cube_vars"), "cube_vars");
    const Json& c = field(j, "coincidences");
    if (c.is_string()) {
        if (c.get<std::string>() != "auto") bad("coincidences must be \"auto\" or a list");
    } else {
        std::vector<Coincidence> list;
        for (const auto& x : as_array(c, "coincidences")) list.push_back(coincidence_from(x));
        t.coincidences = list;
    }
    return t;
}

Json to_json(const LiftJob& l) {
    Json j;
    j["g"] = to_json(l.g);
    j["cube_vars"] = l.cube_vars;
    Json faces = Json::array();
    for (const auto& [f, v] : l.faces) {
        Json x = to_json(f);
        x["value"] = to_json(v);
        faces.push_back(x);
    }
    j["faces"] = faces;
    j["D"] = l.D;
    if (l.level) j["level"] = *l.level;
    return j;
}

LiftJob lift_job_from(const Json& j) {
    LiftJob l;
    l.g = tate_series_from(field(j, "g"));
    l.cube_vars = strings(field(j, "cube_vars"), "cube_vars");
    for (const auto& x : as_array(field(j, "faces"), "faces"))
        l.faces.emplace_back(face_map_from(x), tate_series_from(field(x, "value"), l.g.params_ptr()));
    l.D = static_cast<int>(as_int(field(j, "D"), "D"));
    if (j.contains("level")) l.level = static_cast<int>(as_int(j["level"], "level"));
    return l;
}

Json to_json(const HomotopyJob& h) {
    Json j;
    j["system"] = to_json(h.system);
    Json maps = Json::array();
    for (const auto& m : h.maps) {
        Json x, s = Json::array(), t = Json::array();
        for (const auto& y : m.s) s.push_back(to_json(y));
        for (const auto& y : m.t) t.push_back(to_json(y));
        x["s"] = s;
        x["t"] = t;
        maps.push_back(x);
    }
    j["maps"] = maps;
    j["cube_vars"] = h.cube_vars;
    if (h.epsilon) j["epsilon"] = to_json(*h.epsilon);
    return j;
}

HomotopyJob homotopy_job_from(const Json& j) {
    HomotopyJob h;
    h.system = system_from(field(j, "system"));
    ParamsPtr ring;
    for (const auto& x : as_array(field(j, "maps"), "maps")) {
        MapData m;
        m.s = series_list(field(x, "s"), "s", ring);
        m.t = series_list(field(x, "t"), "t", ring);
        h.maps.push_back(m);
    }
    if (j.contains("cube_vars")) h.cube_vars = strings(j["cube_vars"], "cube_vars");
    if (j.contains("epsilon")) h.epsilon = rational_from(j["epsilon"]);
    return h;
}

Json to_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["ok"] = c.ok;
    j["expected"] = c.expected;
    j["got"] = c.got;
    j["witness"] = c.witness;
    return j;
}

}  // namespace pfd::io
