// Discretization of dense / super-dense time (and the time monitor for
// discrete inputs).
//
// For dense and super-dense models the core formula is translated into an
// equisatisfiable discrete-time formula over the original variables plus
// three sampling variables: iota (current sample is a singular interval),
// delta (time to the next sample), zeta (progress accumulator whose resets
// enforce time divergence).  The result is D(phi) & psi_iota & psi_time.
//
// Discrete inputs skip D and only receive the time monitor (timestamps are
// non-decreasing, divergent).

#ifndef XLTLEF_DISCRETIZE_HPP
#define XLTLEF_DISCRETIZE_HPP

#include <vector>

#include "xltlef/arena.hpp"
#include "xltlef/problem.hpp"
#include "xltlef/traversal.hpp"

namespace xltlef {

struct SamplingVars {
    SymbolId iota = kNoSymbol;  // absent for discrete inputs
    SymbolId delta = kNoSymbol;
    SymbolId zeta = kNoSymbol;
};

struct DiscretizedProblem {
    FormulaId d_phi;      // D(phi) (or phi itself for discrete inputs)
    FormulaId psi_iota;   // sampling-structure constraint (true for discrete)
    FormulaId psi_time;   // time accumulation + per-atom uniformity (monitor for discrete)
    FormulaId full;       // conjunction of the three
    SamplingVars vars;
    TimeModelKind model = TimeModelKind::SuperDense;
};

DiscretizedProblem discretize(Workspace& ws, FormulaId core, TimeModelKind model);

// Replaces every prev(w) wrapper by a fresh monitor state variable m with
// m = def_w initially and G(next(m) = w).
struct PrevElimination {
    FormulaId formula;
    std::vector<FormulaId> constraints;
    std::vector<SymbolId> monitors;
};

PrevElimination eliminate_prev(Workspace& ws, FormulaId phi);

}  // namespace xltlef

#endif  // XLTLEF_DISCRETIZE_HPP
