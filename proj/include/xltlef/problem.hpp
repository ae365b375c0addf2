#ifndef XLTLEF_PROBLEM_HPP
#define XLTLEF_PROBLEM_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "xltlef/arena.hpp"

namespace xltlef {

enum class TimeModelKind : std::uint8_t { Discrete, Dense, SuperDense };

const char* time_model_str(TimeModelKind m);

enum class CheckKind : std::uint8_t { Sat, Valid };

struct SrcPos {
    std::uint32_t line = 0;
    std::uint32_t col = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning } severity = Severity::Error;
    SrcPos pos;
    std::string message;

    std::string render(const std::string& filename) const;
};

// A parsed problem: declarations (absorbed into the workspace signature),
// the single formula, the declared time model and check mode.
struct ProblemFile {
    std::shared_ptr<Workspace> ws;
    FormulaId formula;
    TimeModelKind time_model = TimeModelKind::SuperDense;
    CheckKind check = CheckKind::Valid;
    // First source position per node, for diagnostics on shared nodes.
    std::unordered_map<std::uint32_t, SrcPos> formula_pos;
    std::unordered_map<std::uint32_t, SrcPos> term_pos;
};

}  // namespace xltlef

#endif  // XLTLEF_PROBLEM_HPP
