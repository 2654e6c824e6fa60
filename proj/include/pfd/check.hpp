#pragma once

#include <string>
#include <vector>

namespace pfd {

struct Check {
    std::string name;
    std::string expected;
    std::string got;
    std::string witness;
    bool ok = true;
};

inline bool all_ok(const std::vector<Check>& cs) {
    for (const auto& c : cs)
        if (!c.ok) return false;
    return true;
}

}  // namespace pfd
