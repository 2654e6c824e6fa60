#include "pfd/linalg.hpp"
#include "pfd/tate_series.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

using namespace pfd;

namespace {

template <class F>
double seconds(F&& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

TateSeries dense(ParamsPtr ring, std::mt19937_64& rng, int deg) {
    std::uniform_int_distribution<int> dig(0, static_cast<int>(ring->field.p) - 1);
    TateSeries s(ring);
    for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b)
            for (int c = 0; a + b + c <= deg; ++c) {
                std::vector<std::pair<Rational, std::int64_t>> t;
                for (int e = 0; e < 6; ++e) t.push_back({Rational(e), dig(rng)});
                s.add_term({a, b, c}, FieldElement::make(ring->field, t));
            }
    return s;
}

}  // namespace

int main() {
    std::mt19937_64 rng(7);
    std::printf("threads %d\n", omp_get_max_threads());

    auto ring = make_params(FieldParams(2, false, 0, Rational(12)), {"x", "y", "z"}, 16);
    TateSeries a = dense(ring, rng, 8), b = dense(ring, rng, 8);
    double ts = seconds([&] { (void)kernels::mul_serial(a, b); }, 3);
    double tp = seconds([&] { (void)kernels::mul_parallel(a, b); }, 3);
    bool same = kernels::mul_serial(a, b) == kernels::mul_parallel(a, b);
    std::printf("series mul   %zu x %zu terms  serial %.4fs  parallel %.4fs  speedup %.2f  agree %s\n", a.size(),
                b.size(), ts, tp, ts / tp, same ? "yes" : "no");

    std::uniform_int_distribution<int> ent(-9, 9);
    Matrix m(60, 80);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = ent(rng);
    double rs = seconds([&] { (void)kernels::rref_serial(m); }, 2);
    double rp = seconds([&] { (void)kernels::rref_parallel(m); }, 2);
    bool rsame = kernels::rref_serial(m).R == kernels::rref_parallel(m).R;
    std::printf("rational rref 60x80  serial %.4fs  parallel %.4fs  speedup %.2f  agree %s\n", rs, rp, rs / rp,
                rsame ? "yes" : "no");
    return same && rsame ? 0 : 1;
}
