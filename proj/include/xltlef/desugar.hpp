// Abbreviation elimination.
//
// encode_metric removes MTL_0^inf, event-clock, and counting sugar by
// compiling each operator onto event-freezing terms over explicit time
// (difference atoms) plus core temporal operators.  expand then unfolds all
// remaining abbreviations (boolean sugar, U/F/G/S/P/H, X/Y/Z families,
// U_C, non-strict and iterated event freezing) into the core fragment
// {pred, cmp, timeAtom, !, &, U~, S~, @F~, @P~, ite, time}.

#ifndef XLTLEF_DESUGAR_HPP
#define XLTLEF_DESUGAR_HPP

#include "xltlef/arena.hpp"
#include "xltlef/traversal.hpp"

namespace xltlef {

// Test hook: plant a known bug in the metric encoding so the property
// suite can demonstrate it would catch one.
enum class DesugarMutation : std::uint8_t {
    None,
    FlipAttainedBound,  // use < instead of <= in the attained-point branch
};

// Rejects metric until/since (and bounded F/G/P/H) whose interval is
// singular or doubly bounded without a zero anchor: those lie outside
// MTL_0^inf and are out of scope (event-clock |>[I] accepts general
// intervals).
class UnsupportedMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

FormulaId encode_metric(Arena& a, FormulaId phi,
                        DesugarMutation mutation = DesugarMutation::None);

FormulaId expand(Arena& a, FormulaId phi);

// encode_metric then expand; checks the core-stage invariant.
FormulaId desugar_to_core(Arena& a, FormulaId phi,
                          DesugarMutation mutation = DesugarMutation::None);

}  // namespace xltlef

#endif  // XLTLEF_DESUGAR_HPP
