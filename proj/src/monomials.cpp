#include "pfd/monomials.hpp"

#include <algorithm>
#include <numeric>

namespace pfd {

bool grevlex_less(const Mono& a, const Mono& b) {
    int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

MonomialBasis::MonomialBasis(int nvars, int bound, bool box) : n_(nvars), d_(bound), box_(box) {
    Mono cur(static_cast<std::size_t>(n_), 0);
    auto rec = [&](auto&& self, int k, int left) -> void {
        if (k == n_) {
            monos_.push_back(cur);
            return;
        }
        int top = box_ ? d_ : left;
        for (int a = 0; a <= top; ++a) {
            cur[static_cast<std::size_t>(k)] = a;
            self(self, k + 1, box_ ? left : left - a);
        }
        cur[static_cast<std::size_t>(k)] = 0;
    };
    rec(rec, 0, d_);
    std::sort(monos_.begin(), monos_.end(), grevlex_less);
    for (std::size_t i = 0; i < monos_.size(); ++i) index_[monos_[i]] = i;
}

std::size_t MonomialBasis::index(const Mono& m) const {
    auto it = index_.find(m);
    return it == index_.end() ? npos : it->second;
}

}  // namespace pfd
