#pragma once

#include "pfd/implicit_solver.hpp"
#include "pfd/tate_series.hpp"

#include <vector>

namespace pfd {

// x_0..x_m over K with x_{i+1}^p = x_i, representing `flat` in the tilt.
struct TiltElement {
    int depth = 0;
    std::vector<FieldElement> sequence;
    FieldElement flat;
};

// The (p-1)-th root of unity congruent to `digit` mod p (Hensel on x^{p-1} = 1).
FieldElement teichmuller(const FieldParams& params, std::int64_t digit);

// Lifts y^{1/p^m} digit-wise through Teichmuller representatives and fills the
// sequence by p-th powers; depth must not exceed the room left by y's exponent level.
TiltElement from_flat(const FieldElement& y, int depth);
TiltElement flat_of_monomial(const FieldParams& flat_params, std::int64_t c, const Rational& e, int depth);

// Throws an integrity error when the sequence is not compatible.
void check_integrity(const TiltElement& x);
FieldElement sharp(const TiltElement& x);
TiltElement mul(const TiltElement& a, const TiltElement& b);

bool additive_congruence_check(const TiltElement& a);

struct UnitTransfer {
    TiltElement b;
    Valuation certificate;     // v(sharp(b) a^{-1} - 1)
    bool residue_roundtrip = true;
};
UnitTransfer unit_transfer(const FieldElement& a, int depth);

struct B1PerfData {
    std::int64_t p = 2;
    int h = 0;
    Rational k{12};
    FieldParams field;
    ParamsPtr A;   // upsilon (u), omega (w) with omega^{p^h} = pi upsilon + 1
    ParamsPtr B;   // chi (x)
    TateSeries phi_u, phi_w;   // in B
    TateSeries psi_x;          // in A
};

B1PerfData b1perf_maps(std::int64_t p, int h, const Rational& k);
// Rewrites omega^{p^h} as pi upsilon + 1.
TateSeries b1perf_reduce(const B1PerfData& d, const TateSeries& f);
std::vector<Check> verify_b1perf(const B1PerfData& d);

}  // namespace pfd
