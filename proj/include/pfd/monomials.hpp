#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace pfd {

using Mono = std::vector<int>;

// Ascending grevlex: by total degree, then the last nonzero entry of a - b negative means a > b.
bool grevlex_less(const Mono& a, const Mono& b);

// Monomial basis of Q[x_1..x_n] with a degree bound; `box` bounds each exponent
// instead of the total degree.
class MonomialBasis {
public:
    MonomialBasis() = default;
    MonomialBasis(int nvars, int bound, bool box = false);

    int nvars() const { return n_; }
    int bound() const { return d_; }
    bool box() const { return box_; }
    std::size_t size() const { return monos_.size(); }
    const Mono& operator[](std::size_t i) const { return monos_[i]; }
    const std::vector<Mono>& monomials() const { return monos_; }
    // npos when the monomial is outside the basis.
    std::size_t index(const Mono& m) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    int n_ = 0, d_ = 0;
    bool box_ = false;
    std::vector<Mono> monos_;
    std::map<Mono, std::size_t> index_;
};

}  // namespace pfd
