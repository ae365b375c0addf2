#ifndef XLTLEF_PRETTY_HPP
#define XLTLEF_PRETTY_HPP

#include <string>

#include "xltlef/arena.hpp"

namespace xltlef {

// Concrete-syntax rendering with minimal parentheses; parse(pretty(phi))
// is structurally equal to phi for every formula in the user-facing
// fragment.  Internal stages (next, prev, ite over internal vars) print in
// the same syntax so stage artifacts stay diffable.
std::string pretty(const Arena& a, FormulaId f);
std::string pretty_term(const Arena& a, TermId t);

}  // namespace xltlef

#endif  // XLTLEF_PRETTY_HPP
