#pragma once

#include "pfd/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pfd::cli {

inline constexpr const char* kTool = "pfd";
inline constexpr const char* kVersion = "0.1.0";

struct JobSpec {
    std::string command;
    std::vector<std::string> inputs;
    std::optional<std::string> out;
    std::optional<std::int64_t> p;
    std::optional<int> level;
    std::optional<Rational> prec;
    std::optional<std::int64_t> deg_cap;
    std::optional<Rational> epsilon;
    std::optional<int> h;
    std::optional<int> nmax;
    std::optional<std::string> kind;  // cubical view, cylinder kind
    std::uint64_t seed = 1;
    bool timing = false;
};

enum ExitCode { Pass = 0, Fail = 1, ParseError = 2, DomainError = 3 };

struct Report {
    io::Json body;
    int exit_code = Pass;
};

const std::vector<std::string>& commands();
Report run(const JobSpec& job);
// Two-space indented JSON with a trailing newline.
std::string render(const Report& r);
std::string sha256_hex(const std::string& bytes);

}  // namespace pfd::cli
