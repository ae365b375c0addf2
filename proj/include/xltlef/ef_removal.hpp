// Event-freezing removal: every non-strict @F/@P term is replaced by a
// fresh prophecy/history variable constrained so the formula stays
// equisatisfiable.  The output is an LTL-next problem: atoms, boolean
// structure, non-strict U/S, X/Y/Z and next() on terms.

#ifndef XLTLEF_EF_REMOVAL_HPP
#define XLTLEF_EF_REMOVAL_HPP

#include <vector>

#include "xltlef/arena.hpp"
#include "xltlef/discretize.hpp"

namespace xltlef {

enum class RemovalStage : std::uint8_t { PostDiscretization, DiscreteInput };

// Test hook: plant known bugs for the property-suite mutation checks.
enum class RemovalMutation : std::uint8_t {
    None,
    SwapDefault,  // the never-occurs constraint pins p to u instead of def
    DropGNot,     // omit the never-occurs constraint entirely
};

struct ProphecyBinding {
    TermId ef_term;    // the bound (substituted) non-strict @F/@P term
    SymbolId var;      // fresh prophecy / history variable
    SymbolId def;      // its default parameter
    EfDir dir = EfDir::Future;
    std::vector<FormulaId> constraints;  // the two removal constraints
};

struct LtlNextProblem {
    FormulaId formula;  // psi with freezing terms replaced
    std::vector<ProphecyBinding> bindings;
    std::vector<FormulaId> extra_constraints;  // prev-monitor constraints (discrete inputs)
    std::vector<SymbolId> monitors;

    FormulaId combined(Arena& a) const;
};

// Innermost-first deterministic ordering of the event-freezing terms
// currently present in psi.
std::vector<TermId> order_ef_terms(const Arena& a, FormulaId psi);

LtlNextProblem remove_ef(Workspace& ws, FormulaId psi, RemovalStage stage,
                         RemovalMutation mutation = RemovalMutation::None);

// Strict U~/S~ to non-strict operators under discrete time:
// a U~ b == X(a U b), a S~ b == Y(a S b).
FormulaId normalize_strict(Arena& a, FormulaId f);

}  // namespace xltlef

#endif  // XLTLEF_EF_REMOVAL_HPP
