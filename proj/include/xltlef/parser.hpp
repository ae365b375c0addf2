// Problem-file parser.  Grammar reference lives in doc/format.md; the
// short version:
//
//   xltlef 1;
//   time_model super_dense;        # discrete | dense | super_dense
//   var x : real;                  # state variable (bool | real | int | <sort>)
//   param p : real;                # rigid parameter
//   sort S;                        # uninterpreted sort
//   fun f(real, real) : real;     # rigid uninterpreted function
//   pred ok(real);                # rigid uninterpreted predicate
//   check valid;                   # sat | valid
//   formula: G (read -> |>[=p] read);
//
// Operators, loosest to tightest: <-> , -> , | , & , U/S family (right
// assoc), unary temporal/! , comparisons, + - , * / , @-suffixes.
// Strict operators carry '~' (U~, S~, X~, Y~, Z~, F~, G~, P~, H~).
// Event freezing: u@F(phi), u@F~(phi), u@F~^k(phi) and @P duals.
// Metric subscripts: F[<=c], F[(a,b)], U[>=a]; event clocks |>[I], <|[I];
// counting Cf[k][<c](phi), Cp[k][<c](phi).

#ifndef XLTLEF_PARSER_HPP
#define XLTLEF_PARSER_HPP

#include <optional>
#include <string>
#include <vector>

#include "xltlef/problem.hpp"

namespace xltlef {

struct ParseResult {
    std::optional<ProblemFile> problem;
    std::vector<Diagnostic> diagnostics;  // errors and warnings

    bool ok() const { return problem.has_value(); }
};

struct ParseOptions {
    bool pedantic = false;  // warn on grammar extensions (difference time atoms)
};

ParseResult parse_problem(const std::string& text, const ParseOptions& opts = {});

// Parses a bare formula against an existing workspace (used by tests and
// the round-trip law).  Positions are not retained.
struct FormulaParseResult {
    std::optional<FormulaId> formula;
    std::vector<Diagnostic> diagnostics;
};
FormulaParseResult parse_formula(Workspace& ws, const std::string& text,
                                 const ParseOptions& opts = {});

}  // namespace xltlef

#endif  // XLTLEF_PARSER_HPP
