// Ground-truth semantic evaluators.
//
// eval_discrete implements the pointwise semantics on eventually-periodic
// discrete traces exactly: future quantifiers are decided by scanning to a
// stabilization horizon beyond which every atom's truth is loop-periodic
// (absolute time comparisons settle once time outruns every constant).
//
// eval_dense evaluates on interval traces at exact rational points.  Open
// intervals are first refined so every time comparison and metric operator
// is constant across each entry; the temporal operators then reduce to
// entry-level case analysis on singular/open shapes.

#ifndef XLTLEF_EVAL_HPP
#define XLTLEF_EVAL_HPP

#include "xltlef/arena.hpp"
#include "xltlef/trace.hpp"

namespace xltlef {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool eval_discrete(Arena& a, const DiscreteLassoTrace& tr, std::size_t i, FormulaId phi);
Value eval_term(Arena& a, const DiscreteLassoTrace& tr, std::size_t i, TermId u);

// Dense / super-dense evaluation at a point.  The point is an entry index
// plus, for open entries, a rational instant strictly inside it.
struct DensePoint {
    std::size_t entry = 0;
    std::optional<Rat> at;  // required iff the entry is open
};

bool eval_dense(Arena& a, const IntervalTrace& tr, const DensePoint& p, FormulaId phi);
Value eval_term_dense(Arena& a, const IntervalTrace& tr, const DensePoint& p, TermId u);

}  // namespace xltlef

#endif  // XLTLEF_EVAL_HPP
