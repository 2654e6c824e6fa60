#pragma once

#include "pfd/check.hpp"
#include "pfd/implicit_solver.hpp"
#include "pfd/linalg.hpp"
#include "pfd/monomials.hpp"
#include "pfd/tate_series.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pfd {

// sigma: T -> {0,1} on cube coordinates 1..n.
struct FaceMap {
    std::vector<int> T;     // sorted, 1-based
    std::vector<int> vals;  // same length, entries 0/1

    FaceMap() = default;
    FaceMap(std::vector<int> T_, std::vector<int> vals_);
    std::optional<int> value(int i) const;
    bool empty() const { return T.empty(); }
    std::string str() const;
    friend bool operator==(const FaceMap& a, const FaceMap& b) { return a.T == b.T && a.vals == b.vals; }
    friend bool operator<(const FaceMap& a, const FaceMap& b) {
        return a.T != b.T ? a.T < b.T : a.vals < b.vals;
    }
};

bool compatible(const FaceMap& a, const FaceMap& b);
FaceMap join(const FaceMap& a, const FaceMap& b);  // requires compatible
// All 3^n partial maps, including the empty one.
std::vector<FaceMap> all_faces(int n);
void validate_faces(const std::vector<FaceMap>& sigma, int n);

// ---- ideals over Q on degree slices ----

struct IntPoly {
    std::map<Mono, mpz_class> terms;
    std::string str() const;
};

// Substitution matrix of a face on a slice; the result stays in the same basis.
Matrix restriction_matrix(const FaceMap& s, const MonomialBasis& b);

struct FaceIdealSlice {
    int n = 0, D = 0;
    MonomialBasis basis;
    Matrix span;                    // columns: a basis of the ideal's slice
    std::vector<IntPoly> generators;  // integer polynomials whose monomial multiples span the slice
    std::size_t dim() const { return span.cols(); }
};

FaceIdealSlice intersect(const std::vector<FaceMap>& sigma, int n, int D);
// Span of all monomial multiples of the polynomials, cut to total degree <= D.
Matrix expand_generators(const std::vector<IntPoly>& gens, const MonomialBasis& b);

struct ModularLawReport {
    bool ok = true;
    std::size_t dim_lhs = 0, dim_rhs = 0;
    int margin = 0;
};
ModularLawReport modular_law_check(const std::vector<FaceMap>& sigma, const FaceMap& eta, int n, int D);

struct ExactnessReport {
    std::size_t dim_slice = 0;
    std::size_t rank_restriction = 0;
    std::size_t dim_intersection = 0;  // from generator spans
    std::size_t dim_compatible = 0;    // kernel of the difference map on degree <= D faces
    std::size_t rank_margin = 0, rank_augmented = 0;
    int margin = 0;
    bool injective = true, middle_exact = true, is_complex = true;
    bool ok() const { return injective && middle_exact && is_complex; }
};
ExactnessReport exactness_check(const std::vector<FaceMap>& sigma, int n, int D);

// ---- lifting over a coefficient ring ----

// Section of the face restriction on box slices (each exponent <= B).
struct LiftSection {
    int n = 0, B = 0;
    std::vector<FaceMap> sigma;
    MonomialBasis dom;
    std::vector<std::pair<std::size_t, Mono>> coords;  // (face index, monomial) per target coordinate
    Matrix res;                                        // coords x dom
    std::vector<std::size_t> rows;                     // independent target coordinates
    std::vector<std::size_t> cols;                     // domain coordinates written by the section
    Matrix L;                                          // cols x rows
    std::int64_t c = 0;                                // C = p^c
};

LiftSection lift_section(const std::vector<FaceMap>& sigma, int n, int B, std::int64_t p);

struct LiftConstant {
    std::int64_t c = 0;
    Rational C{1};
};
LiftConstant lift_constant(const std::vector<FaceMap>& sigma, int n, int D, std::int64_t p);

struct LiftResult {
    TateSeries f;
    LiftConstant C;
    Valuation dist_in;   // min v(fbar_sigma - g|sigma)
    Valuation dist_out;  // v(f - g)
};

// Face values live in the ambient ring with the constrained cube variables absent.
// With a level, the base is T_level(g) and f stays at that level when the face values do.
LiftResult lift(const std::vector<std::pair<FaceMap, TateSeries>>& face_values, const TateSeries& g,
                const std::vector<int>& cube_vars, int D, std::optional<int> level = std::nullopt);

TateSeries restrict_face(const TateSeries& f, const FaceMap& s, const std::vector<int>& cube_vars);

// ---- constrained approximation ----

struct TowerRing {
    ParamsPtr ring;
    std::vector<int> cube_vars;   // integer-exponent cube coordinates, in order 1..n
    std::vector<int> tower_vars;  // everything else
    int H = 0;
    static TowerRing from(ParamsPtr ring, const std::vector<std::string>& cube_names);
    TateSeries truncate(const TateSeries& f, int h) const;
    int level(const TateSeries& f) const;
};

struct Coincidence {
    std::size_t alpha = 0, beta = 0;  // 0-based
    FaceMap sigma;
};

// Every (alpha < beta, sigma) with s_alpha|sigma == s_beta|sigma.
std::vector<Coincidence> detect_coincidences(const std::vector<TateSeries>& s, const TowerRing& tower);

struct ApproxResult {
    std::vector<TateSeries> s_tilde;
    int h = 0;
    std::vector<Rational> thresholds;   // required v(s - s~) > threshold
    std::vector<std::int64_t> lift_c;   // C_alpha = p^c
    std::vector<Check> checks;
    bool ok() const { return all_ok(checks); }
};

// coincidences: nullopt means detect them all.
ApproxResult approximate_tuple(const std::vector<TateSeries>& s, const Rational& epsilon, const TowerRing& tower,
                               const std::optional<std::vector<Coincidence>>& coincidences = std::nullopt);

// The four numbered conditions plus the strengthened partial-face versions.
std::vector<Check> verify_approximation(const std::vector<TateSeries>& s, const std::vector<TateSeries>& s_tilde,
                                        const Rational& epsilon, const TowerRing& tower, int h,
                                        const std::vector<Coincidence>& coincidences);

struct HomotopyTupleResult {
    std::vector<HomotopyResult> H;
    int hbar = 0;
    Rational threshold{0};
    std::vector<Check> checks;
    bool ok() const;
};

HomotopyTupleResult homotopy_tuple(const std::vector<MapData>& f, const PolySystem& sys,
                                   const std::vector<std::string>& cube_names, const EpsilonPolicy& policy);

}  // namespace pfd
