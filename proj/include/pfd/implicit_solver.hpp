#pragma once

#include "pfd/check.hpp"
#include "pfd/tate_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pfd {

// P_1..P_m in variables sigma_1..sigma_n, tau_1..tau_m (plus optional parameter
// variables) with a center (sigma_bar, tau_bar). Empty centers mean the origin.
struct PolySystem {
    ParamsPtr params;
    std::vector<std::string> sigma;
    std::vector<std::string> tau;
    std::vector<TateSeries> polys;
    std::vector<FieldElement> sigma_center;
    std::vector<FieldElement> tau_center;

    std::size_t n() const { return sigma.size(); }
    std::size_t m() const { return tau.size(); }
    void validate() const;
};

struct NormalizedTerm {
    Exps J;                 // sigma exponents (integers)
    std::vector<int> H;     // tau exponents
    TateSeries c;           // coefficient, a series in the parameter variables
};

// tau_i = sum c_{iJH} sigma^J tau^H, centered at the origin, Jacobian the identity.
struct NormalizedSystem {
    ParamsPtr ring;                         // parameters + sigma, at the working cap
    std::vector<std::string> sigma;
    std::vector<int> sigma_idx;             // positions of sigma in ring
    std::vector<int> param_idx;             // positions of parameters in ring
    std::vector<std::vector<NormalizedTerm>> terms;
    Rational v_piB{0};                      // -min v(c), clamped at 0
    Rational requested_cap{0};
    std::vector<TateSeries> sigma_center;   // in ring (parameters only)
    std::vector<TateSeries> tau_center;

    std::size_t n() const { return sigma.size(); }
    std::size_t m() const { return terms.size(); }
};

struct ImplicitSeries {
    ParamsPtr ring;                  // parameters + sigma (sigma here means sigma - sigma_bar)
    std::vector<int> sigma_idx;
    std::vector<int> param_idx;
    std::vector<TateSeries> F;       // working precision
    int degree = 0;
    Rational requested_cap{0};
    Rational v_piB{0};
    Rational radius{0};              // 2 v(pi_B)
    std::vector<TateSeries> tau_center;

    // F at the requested cap.
    std::vector<TateSeries> truncated() const;
};

// Centers given as series in the parameter variables (or constants).
NormalizedSystem normalize_system(const PolySystem& sys, const Rational& working_cap,
                                  const std::vector<std::string>& param_vars = {},
                                  const std::vector<TateSeries>* sigma_center = nullptr,
                                  const std::vector<TateSeries>* tau_center = nullptr,
                                  std::int64_t param_deg_cap = 0, int param_level = -1,
                                  std::int64_t sigma_deg_cap = 0);

// Guard digits so that results below the requested cap are exact through degree D.
Rational working_cap(const Rational& cap, int D, const Rational& v_piB);

ImplicitSeries solve_formal(const NormalizedSystem& sys, int D);
ImplicitSeries solve_at_point(const PolySystem& sys, int D);

// Coefficients of P(sigma, F(sigma)) through degree D: all vanish below the requested cap.
struct ResidualReport {
    bool ok = true;
    Valuation min_valuation;
    std::string witness;
};
ResidualReport residual_check(const PolySystem& sys, const ImplicitSeries& F);

struct CertificationReport {
    bool bound_ok = true;             // v(d_I) >= -|I| v(pi_B)
    bool tree_bound_ok = true;        // v(d_I) >= -(2|I|-1) v(pi_B)
    std::optional<std::string> witness;
    std::optional<std::string> tree_witness;
    Rational radius_valuation{0};
    Rational v_piB{0};
    std::size_t coefficients_checked = 0;
    std::size_t violations = 0;
};
CertificationReport certify_bounds(const ImplicitSeries& F, const NormalizedSystem& sys);

// P(sigma^{p^h}, tau).
PolySystem pullback_system(const PolySystem& sys, int h);

struct PullbackReport {
    bool ok = true;
    std::string witness;
};
// F_h1(sigma) == F_h(sigma^p) through the common degree, below the requested cap.
PullbackReport pullback_check(const ImplicitSeries& F_h, const ImplicitSeries& F_h1);

struct RadiusStep {
    Rational next;
    int steps_to_target = 0;   // iterations until the threshold drops below 1/p
};
RadiusStep radius_growth_step(const Rational& rho, std::int64_t p);

struct MapData {
    std::vector<TateSeries> s;   // sigma-coordinates
    std::vector<TateSeries> t;   // tau-coordinates
};

struct EpsilonPolicy {
    std::optional<Rational> epsilon;   // explicit valuation threshold
    int max_solve_degree = 40;
};

struct HomotopyResult {
    ParamsPtr ring;                    // tower ring + chi
    std::vector<TateSeries> H_sigma;
    std::vector<TateSeries> H_tau;
    int hbar = 0;
    int truncation_level = 0;
    Rational threshold{0};
    Rational radius{0};
    int solve_degree = 0;
    std::vector<Check> checks;
    bool ok() const;
};

// Map data lives over a tower ring; s_tilde is a chosen approximation of s.
HomotopyResult homotopy_from_approximation(const MapData& f, const std::vector<TateSeries>& s_tilde,
                                           const PolySystem& sys, const EpsilonPolicy& policy);
HomotopyResult homotopy_factor(const MapData& f, const PolySystem& sys, const EpsilonPolicy& policy);

// Radius data for the implicit series centered at (s, t).
Rational certified_radius(const MapData& f, const PolySystem& sys);

}  // namespace pfd
