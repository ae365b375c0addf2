// Structural utilities over the hash-consed DAG: subformula/subterm
// collection, free-symbol partitioning, generic memoized rebuilding,
// cross-arena structural comparison, and pipeline stage validation.

#ifndef XLTLEF_TRAVERSAL_HPP
#define XLTLEF_TRAVERSAL_HPP

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "xltlef/arena.hpp"

namespace xltlef {

// All subformulas of phi including phi itself, deduplicated by node id,
// in deterministic DFS post-order.  Descends into formulas nested inside
// terms (ite conditions, event-freezing triggers).
std::vector<FormulaId> subformulas(const Arena& a, FormulaId phi);

// All subterms reachable from phi (including terms inside nested formulas).
std::vector<TermId> subterms(const Arena& a, FormulaId phi);

// All subterms of a term, itself included, crossing into nested formulas.
std::vector<TermId> subterms_of(const Arena& a, TermId t);

struct FreeSymbols {
    std::vector<SymbolId> state_vars;   // sorted by id
    std::vector<SymbolId> parameters;   // sorted by id
    bool uses_time = false;
};

FreeSymbols free_symbols(const Arena& a, FormulaId phi);

// Memoized bottom-up rebuild.  `term_hook` / `formula_hook` observe the
// node *after* children were rebuilt and may return a replacement; return
// an empty optional to keep the mechanical rebuild.  Used by every
// transformation stage.
class Rebuilder {
public:
    using TermHook =
        std::function<std::optional<TermId>(Arena&, TermId original, TermId rebuilt)>;
    using FormulaHook =
        std::function<std::optional<FormulaId>(Arena&, FormulaId original, FormulaId rebuilt)>;

    explicit Rebuilder(Arena& a) : a_(a) {}
    TermHook term_hook;
    FormulaHook formula_hook;

    TermId term(TermId t);
    FormulaId formula(FormulaId f);

private:
    TermId rebuild_term(TermId t);
    FormulaId rebuild_formula(FormulaId f);

    Arena& a_;
    std::unordered_map<std::uint32_t, TermId> tmemo_;
    std::unordered_map<std::uint32_t, FormulaId> fmemo_;
};

// Replace every occurrence of `from` (a term) by `to` inside phi.
FormulaId substitute_term(Arena& a, FormulaId phi, TermId from, TermId to);

// Structural equality across arenas; symbols compare by name, constants by
// value.  Used by the parse/pretty round-trip law.
bool structurally_equal(const Arena& a1, FormulaId f1, const Arena& a2, FormulaId f2);

// ---- pipeline stages ----

enum class Stage : std::uint8_t {
    Sorted,        // parser output: full sugar, no next/prev
    Core,          // desugared: core nodes + EF + ite + time only
    Discretized,   // core plus next/prev wrappers and sampling vars
    LtlNext,       // no EF; non-strict U/S/X/Y/Z + next only
};

// Returns a human-readable violation description, or empty if phi is valid
// at the given stage.
std::string stage_violation(const Arena& a, FormulaId phi, Stage stage);

}  // namespace xltlef

#endif  // XLTLEF_TRAVERSAL_HPP
