#pragma once

#include "pfd/check.hpp"
#include "pfd/linalg.hpp"
#include "pfd/tate_series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pfd {

// Finite cubical Q-module. Maps act on column vectors:
// face(n, r, eps) is dims[n-1] x dims[n], degen(n, r) is dims[n] x dims[n-1].
struct CubicalModule {
    int nmax = 0;
    std::vector<std::size_t> dims;                    // n = 0..nmax
    std::vector<std::vector<std::string>> labels;     // optional, per level
    std::vector<std::vector<std::array<Matrix, 2>>> faces;  // [n][r-1][eps], n >= 1
    std::vector<std::vector<Matrix>> degens;                // [n][r-1], n >= 1

    explicit CubicalModule(int nmax_ = 0);
    const Matrix& face(int n, int r, int eps) const;
    const Matrix& degen(int n, int r) const;
    Matrix& face(int n, int r, int eps);
    Matrix& degen(int n, int r);
    void validate_shapes() const;
};

// First violated cubical identity, if any.
std::optional<std::string> identity_violation(const CubicalModule& m);

// C-sharp differential on V_n: sum_r (-1)^r (d_{r,1} - d_{r,0}).
Matrix sharp_differential(const CubicalModule& m, int n);

enum class ComplexKind { Full, Simple, Normalized };
const char* complex_kind_name(ComplexKind k);
ComplexKind parse_complex_kind(const std::string& s);

struct ChainComplexView {
    ComplexKind kind = ComplexKind::Full;
    int nmax = 0;
    std::vector<Matrix> basis;  // columns span the degree-n subspace of V_n
    std::vector<Matrix> diff;   // diff[n]: coordinates in degree n -> degree n-1; diff[0] unused
    std::size_t dim(int n) const { return basis[static_cast<std::size_t>(n)].cols(); }
};

ChainComplexView build_complex(const CubicalModule& m, ComplexKind kind);

// Defined for n < nmax; the top degree lacks its incoming boundaries.
std::size_t homology(const ChainComplexView& v, int n);

struct CompareReport {
    bool ok = true;
    std::vector<std::size_t> h_normalized, h_simple;
    std::vector<std::size_t> dim_normalized, dim_simple;
};
CompareReport compare_N_C(const CubicalModule& m);

// Builders.
CubicalModule constant_module(int nmax, std::size_t dim = 1);
CubicalModule direct_sum(const CubicalModule& a, const CubicalModule& b);
// Graph cubical set: level n has the vertices plus (edge, j) for j = 1..n.
CubicalModule graph_module(std::size_t nvertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           int nmax);
// Conjugates every level by g[n] (invertible, dims[n] square).
CubicalModule change_basis(const CubicalModule& m, const std::vector<Matrix>& g);
CubicalModule random_module(std::uint64_t seed, int nmax, std::size_t max_dim);
// V_n = Q[t_1..t_n] of total degree <= d, faces substitute t_r = eps, degeneracies skip t_r.
CubicalModule polynomial_module(int nmax, int degree);

struct CylinderData {
    CubicalModule F;
    std::vector<std::size_t> cyl_dims;                          // n = 0..nmax-1
    std::vector<std::vector<std::array<Matrix, 2>>> cyl_faces;  // [n][r-1][eps]: V'_n -> V'_{n-1}
    std::vector<std::array<Matrix, 2>> inc;                     // [n][eps]: V'_n -> V_n
    std::vector<Matrix> s;                                      // [n]: V'_n -> V_{n+1}
    int levels() const { return static_cast<int>(cyl_dims.size()); }
};

// V'_n = Q[t_1..t_n, x] of total degree <= d; s renames x to t_{n+1}, inc[eps] sets x = eps.
CylinderData polynomial_cylinder(int nmax, int degree);
CylinderData constant_cylinder(int nmax);

struct CylinderReport {
    bool ok = true;
    std::vector<Check> checks;  // one per degree n
    std::size_t vectors_checked = 0;
};
// Exact matrix identity per degree plus `nvectors` seeded random vectors per degree.
CylinderReport cylinder_homotopy_check(const CylinderData& d, std::uint64_t seed = 1, int nvectors = 100);

// Units of K°<t_1..t_n> with exponents in (1/p^var_level) Z, truncated at total degree trunc.
struct UnitComplexParams {
    FieldParams field;
    int var_level = 0;
    std::int64_t trunc = 4;
    int nmax = 1;
    std::uint64_t seed = 1;
    int samples = 6;  // random cycles per degree on top of the standard one
};

// H = f + t_{n+1} (1 - f).
TateSeries unit_contraction(const TateSeries& f);
// g(t_1..t_{n+1}) = H(t_2, .., t_{n+1}, 1 - t_1): a normalized (n+1)-chain with d_{1,1} g = f.
TateSeries unit_bounding_chain(const TateSeries& f);

struct UnitComplexReport {
    CubicalModule classes;  // residue classes of units, linearized
    std::vector<std::size_t> homology;  // H_0..H_nmax of the normalized complex of `classes`
    std::size_t class_count = 0;
    std::vector<std::size_t> cycles_checked;  // per n = 1..nmax
    std::vector<Check> checks;
    bool ok() const { return all_ok(checks); }
};
UnitComplexReport unit_complex(const UnitComplexParams& up);

}  // namespace pfd
