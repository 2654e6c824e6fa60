// Writes the sample job files used by the README walkthrough and the CLI tests.
#include "pfd/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace pfd;
using io::Json;

namespace {

void write(const std::filesystem::path& dir, const std::string& name, const Json& j) {
    std::ofstream(dir / name) << j.dump(2) << "\n";
    std::cout << (dir / name).string() << "\n";
}

PolySystem one_var_system(const FieldParams& K, const std::vector<std::pair<Exps, FieldElement>>& rhs) {
    // t - sum c s^a t^b
    auto R = make_params(K, {"s", "t"}, 8);
    PolySystem sys;
    sys.params = R;
    sys.sigma = {"s"};
    sys.tau = {"t"};
    TateSeries f = TateSeries::variable(R, "t");
    for (const auto& [e, c] : rhs) f -= TateSeries::monomial_index(R, e, c);
    sys.polys = {f};
    sys.sigma_center = {FieldElement::zero(K)};
    sys.tau_center = {FieldElement::zero(K)};
    return sys;
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "samples";
    std::filesystem::create_directories(dir);
    FieldParams K(2, false, 0, Rational(16));
    auto one = FieldElement::one(K);

    // t = s + t^2
    write(dir, "catalan.json", io::to_json(one_var_system(K, {{{1, 0}, one}, {{0, 2}, one}})));
    // t = a s + b t^2 with v(a) = v(b) = -1
    auto inv = FieldElement::monomial(K, Rational(-1), 1);
    write(dir, "natural.json", io::to_json(one_var_system(K, {{{1, 0}, inv}, {{0, 2}, inv}})));

    FieldParams K3(2, false, 3, Rational(8));
    auto S = make_params(K3, {"s", "t"}, 8);
    auto s = TateSeries::variable(S, "s"), t = TateSeries::variable(S, "t");
    PolySystem sys;
    sys.params = S;
    sys.sigma = {"s"};
    sys.tau = {"t"};
    sys.polys = {s - t + t * t};
    sys.sigma_center = {FieldElement::zero(K3)};
    sys.tau_center = {FieldElement::zero(K3)};

    std::mt19937_64 rng(3);
    auto P = make_params(K3, {"x", "u1"}, 8, {3, 0});
    auto rnd = [&](int terms) {
        TateSeries r(P);
        for (int i = 0; i < terms; ++i) {
            int lev = static_cast<int>(rng() % 4);
            Exps e{static_cast<std::int64_t>(rng() % ((1u << lev) + 1)) * (8 >> lev), 0};
            r.add_term(e, FieldElement::monomial(K3, Rational(1 + 2 * lev + static_cast<int>(rng() % 4), 8) + 1, 1));
        }
        return r;
    };
    auto u = TateSeries::variable(P, "u1");
    auto c1 = TateSeries::constant(P, FieldElement::one(K3));
    TateSeries low(P);
    low.add_term(Exps{8, 0}, FieldElement::monomial(K3, Rational(2), 1));
    auto t1 = low + u * (u - c1) * rnd(3);
    auto t2 = t1 + u * (u - c1) * rnd(2);
    auto mk = [](const TateSeries& tt) {
        MapData m;
        m.t = {tt};
        m.s = {tt - tt * tt};
        return m;
    };
    write(dir, "homotopy.json", io::to_json(io::HomotopyJob{sys, {mk(t1), mk(t2)}, {"u1"}, std::nullopt}));

    // single map, no cube variables
    auto P0 = make_params(K3, {"x"}, 8, {3});
    TateSeries tt(P0);
    tt.add_term(Exps{8}, FieldElement::monomial(K3, Rational(2), 1));
    tt.add_term(Exps{4}, FieldElement::monomial(K3, Rational(5, 2), 1));
    write(dir, "homotopy_single.json", io::to_json(io::HomotopyJob{sys, {mk(tt)}, {}, std::nullopt}));

    FieldParams F(2, true, 3, Rational(8));
    write(dir, "tilt.json", io::to_json(flat_of_monomial(F, 1, Rational(1), 3)));
    FieldParams K2(2, false, 3, Rational(8));
    write(dir, "unit.json", io::to_json(FieldElement::make(K2, {{Rational(0), 1}, {Rational(1, 2), 1}, {Rational(3), 1}})));

    write(dir, "cubical_random.json", io::to_json(random_module(11, 2, 5)));
    write(dir, "faces_two.json", io::to_json(io::Constraints{2, {FaceMap({1}, {0}), FaceMap({1, 2}, {1, 1})}}));
    write(dir, "faces_four.json",
          io::to_json(io::Constraints{2, {FaceMap({1}, {0}), FaceMap({1}, {1}), FaceMap({2}, {0}), FaceMap({2}, {1})}}));

    auto L = make_params(K3, {"x", "t1", "t2"}, 10, {3, 0, 0});
    auto x = TateSeries::variable(L, "x");
    auto lt1 = TateSeries::variable(L, "t1"), lt2 = TateSeries::variable(L, "t2");
    auto l1 = TateSeries::constant(L, FieldElement::one(K3));
    auto pi2 = FieldElement::monomial(K3, Rational(2), 1);
    TateSeries g = x * x + lt1 * lt2 + lt2;
    TateSeries target = g + (x * lt2).scalar_mul(pi2);
    io::LiftJob lj;
    lj.g = g;
    lj.cube_vars = {"t1", "t2"};
    for (auto fm : {FaceMap({1}, {0}), FaceMap({2}, {1})}) {
        TateSeries v = target;
        for (std::size_t k = 0; k < fm.T.size(); ++k) v = v.set_variable(static_cast<std::size_t>(fm.T[k]), fm.vals[k]);
        lj.faces.emplace_back(fm, v);
    }
    lj.D = 2;
    write(dir, "lift.json", io::to_json(lj));

    std::mt19937_64 r2(5);
    auto rs = [&](int terms, int maxlev) {
        TateSeries a(L);
        for (int i = 0; i < terms; ++i) {
            Exps e{static_cast<std::int64_t>(r2() % 9) * (8 >> maxlev), static_cast<std::int64_t>(r2() % 3) * 8,
                   static_cast<std::int64_t>(r2() % 3) * 8};
            a.add_term(e, FieldElement::monomial(K3, Rational(static_cast<int>(r2() % 16), 8), 1));
        }
        return a;
    };
    auto bump = lt1 * (lt1 - l1);
    auto s1 = rs(4, 1) + bump * rs(4, 3).scalar_mul(pi2);
    auto s2 = s1 + lt2 * bump * rs(3, 3).scalar_mul(pi2);
    auto s3 = rs(5, 0) + bump * rs(3, 3).scalar_mul(pi2);
    write(dir, "tuple.json", io::to_json(io::TupleJob{{s1, s2, s3}, Rational(3, 2), {"t1", "t2"}, std::nullopt}));
    return 0;
}
