#ifndef XLTLEF_SORT_CHECK_HPP
#define XLTLEF_SORT_CHECK_HPP

#include <string>
#include <vector>

#include "xltlef/arena.hpp"

namespace xltlef {

// Structural re-validation of an AST against a signature.  Construction
// through Arena already enforces sorting; this walk re-checks invariants
// that later stages rely on (rigid interval endpoints and time bounds,
// grammar restrictions on explicit time) and reports every violation.
std::vector<std::string> sort_check(const Arena& a, FormulaId phi);

}  // namespace xltlef

#endif  // XLTLEF_SORT_CHECK_HPP
