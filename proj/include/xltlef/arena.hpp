// Hash-consed term/formula DAG for XLTL-EF plus metric sugar.
//
// Structurally equal subtrees share one node id, so node ids double as the
// stable occurrence ids used by the defaults table and the prophecy-binding
// machinery.  Sugar operators are kept as tagged nodes rather than expanded
// at construction; the desugar stage removes them.
//
// Nodes are immutable once interned.  The arena is not synchronized: build
// ASTs single-threaded (or one arena per thread) and share them read-only.

#ifndef XLTLEF_ARENA_HPP
#define XLTLEF_ARENA_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "xltlef/rational.hpp"
#include "xltlef/signature.hpp"

namespace xltlef {

struct TermId {
    std::uint32_t v = UINT32_MAX;
    bool ok() const { return v != UINT32_MAX; }
    bool operator==(const TermId& o) const { return v == o.v; }
    bool operator!=(const TermId& o) const { return v != o.v; }
    bool operator<(const TermId& o) const { return v < o.v; }
};

struct FormulaId {
    std::uint32_t v = UINT32_MAX;
    bool ok() const { return v != UINT32_MAX; }
    bool operator==(const FormulaId& o) const { return v == o.v; }
    bool operator!=(const FormulaId& o) const { return v != o.v; }
    bool operator<(const FormulaId& o) const { return v < o.v; }
};

enum class TermKind : std::uint8_t {
    RatConst,   // rational literal, sort Real
    IntConst,   // integer literal, sort Int
    Param,      // rigid constant symbol
    StateVar,   // time-varying variable
    Builtin,    // arithmetic: Add, Sub, Neg, Mul, Div
    UfApply,    // uninterpreted function application
    IteTerm,    // ite(formula, t, e)
    Ef,         // event freezing: u @F~(phi), u @P~(phi), non-strict and iterated forms
    NextTerm,   // next(u), discrete stages only
    PrevTerm,   // prev(u), internal to discretization
    TimeSym,    // explicit time
};

enum class BuiltinFn : std::uint8_t { Add, Sub, Neg, Mul, Div };

enum class EfDir : std::uint8_t { Future, Past };

struct TermNode {
    TermKind kind;
    Sort sort;
    // payloads (meaning depends on kind)
    Rat value;                      // RatConst / IntConst
    SymbolId sym = kNoSymbol;       // Param / StateVar / UfApply
    BuiltinFn fn = BuiltinFn::Add;  // Builtin
    std::vector<TermId> args;       // Builtin / UfApply / IteTerm(then,else) / Ef(u) / Next / Prev
    FormulaId cond;                 // IteTerm condition / Ef trigger formula
    EfDir dir = EfDir::Future;      // Ef
    bool strict = true;             // Ef: @F~ vs @F
    std::uint32_t iter = 1;         // Ef: k in @F~^k (strict only, >= 1)
};

enum class CmpOp : std::uint8_t { Eq, Le, Lt, Ge, Gt };

const char* cmp_str(CmpOp op);
CmpOp cmp_flip(CmpOp op);  // argument order swap: a op b  <->  b flip(op) a

enum class FormulaKind : std::uint8_t {
    // core
    Pred,         // uninterpreted predicate application
    Cmp,          // builtin comparison between two terms
    TimeAtom,     // tu [- tu'] cmp rigid
    BoolTerm,     // boolean-sorted term used as an atom
    True,
    False,
    Not,
    And,
    UntilStrict,
    SinceStrict,
    // boolean sugar
    Or,
    Implies,
    Iff,
    // temporal sugar (X family is strict next/yesterday by construction)
    Until,
    Since,
    Finally,
    Globally,
    Once,
    Historically,
    Next,          // X
    NextTilde,     // X~
    Yesterday,     // Y
    YesterdayTilde,// Y~
    WeakYesterday, // Z
    WeakYesterdayTilde, // Z~
    UntilC,        // U_C
    // metric sugar (MTL_0^inf intervals)
    MetricFinally,
    MetricGlobally,
    MetricOnce,
    MetricHistorically,
    MetricUntil,
    MetricSince,
    // event-clock sugar
    EvClockF,      // |>[I]
    EvClockP,      // <|[I]
    // counting sugar
    CountFuture,   // Cf[k][<cu]
    CountPast,     // Cp[k][<cu]
};

// Interval with rigid endpoints; hi absent means +inf (always open above).
struct Interval {
    TermId lo;
    std::optional<TermId> hi;
    bool lo_open = false;
    bool hi_open = false;

    bool operator==(const Interval& o) const {
        return lo == o.lo && hi.has_value() == o.hi.has_value() &&
               (!hi || *hi == *o.hi) && lo_open == o.lo_open && hi_open == o.hi_open;
    }
};

struct FormulaNode {
    FormulaKind kind;
    SymbolId sym = kNoSymbol;        // Pred
    CmpOp cmp = CmpOp::Eq;           // Cmp / TimeAtom
    std::vector<TermId> targs;       // Pred args / Cmp(lhs,rhs) / TimeAtom(tu[,tu'],rigid) / Count(cu)
    std::vector<FormulaId> fargs;    // formula children
    std::optional<Interval> interval;// metric / event-clock sugar
    std::uint32_t count = 0;         // Count sugar k; TimeAtom: number of tu terms (1 or 2)
    bool strict = true;              // metric sugar: strict (~) vs non-strict operator
};

class SortError : public std::runtime_error {
public:
    SortError(std::string msg, std::uint32_t node = UINT32_MAX)
        : std::runtime_error(std::move(msg)), node_id(node) {}
    std::uint32_t node_id;
};

class Arena {
public:
    explicit Arena(Signature* sig) : sig_(sig) {}

    Arena(const Arena&) = delete;
    Arena& operator=(const Arena&) = delete;

    Signature& sig() { return *sig_; }
    const Signature& sig() const { return *sig_; }

    // ---- term builders (sort-checked; throw SortError on violation) ----
    TermId rat_const(const Rat& q);
    TermId int_const(const Rat& q);
    TermId symbol_term(SymbolId s);  // Param or StateVar by symbol kind
    TermId builtin(BuiltinFn fn, std::vector<TermId> args);
    TermId uf_apply(SymbolId f, std::vector<TermId> args);
    TermId ite_term(FormulaId c, TermId t, TermId e);
    TermId ef(EfDir dir, bool strict, std::uint32_t iter, TermId u, FormulaId trigger);
    TermId next_term(TermId u);
    TermId prev_term(TermId u);
    TermId time_sym();

    // ---- formula builders ----
    FormulaId pred(SymbolId p, std::vector<TermId> args);
    FormulaId cmp(CmpOp op, TermId lhs, TermId rhs);
    FormulaId bool_term(TermId t);
    FormulaId time_atom(TermId tu, std::optional<TermId> tu2, CmpOp op, TermId rigid);
    FormulaId f_true();
    FormulaId f_false();
    FormulaId f_not(FormulaId a);
    FormulaId f_and(FormulaId a, FormulaId b);
    FormulaId f_and(const std::vector<FormulaId>& xs);  // left fold; empty -> true
    FormulaId f_or(FormulaId a, FormulaId b);
    FormulaId f_or(const std::vector<FormulaId>& xs);   // left fold; empty -> false
    FormulaId implies(FormulaId a, FormulaId b);
    FormulaId iff(FormulaId a, FormulaId b);
    FormulaId until_strict(FormulaId a, FormulaId b);
    FormulaId since_strict(FormulaId a, FormulaId b);
    FormulaId unary(FormulaKind k, FormulaId a);   // Finally..WeakYesterdayTilde
    FormulaId binary(FormulaKind k, FormulaId a, FormulaId b);  // Until/Since/UntilC
    FormulaId metric(FormulaKind k, bool strict, Interval iv, FormulaId a, FormulaId b = {});
    FormulaId ev_clock(FormulaKind k, Interval iv, FormulaId a);
    FormulaId counting(FormulaKind k, std::uint32_t count, TermId bound, FormulaId a);

    // Interval construction normalizes the shorthand forms (<=a, <a, >=a,
    // >a, =a) into the six canonical shapes; endpoints must be rigid.
    Interval interval(TermId lo, std::optional<TermId> hi, bool lo_open, bool hi_open);
    Interval interval_upto(CmpOp op, TermId bound);    // <=a, <a, >=a, >a
    Interval interval_singular(TermId a);              // [a,a]

    // ---- accessors ----
    const TermNode& term(TermId id) const { return terms_.at(id.v); }
    const FormulaNode& formula(FormulaId id) const { return formulas_.at(id.v); }
    std::size_t term_count() const { return terms_.size(); }
    std::size_t formula_count() const { return formulas_.size(); }

    Sort sort_of(TermId id) const { return term(id).sort; }

    // A term is rigid when it contains no state variables, no event-freezing
    // applications, no time, and no next/prev.
    bool is_rigid(TermId id) const;

    // Registers (or returns) the default parameter for an event-freezing
    // term.  Non-strict @F/@P share the default of their strict version.
    SymbolId ensure_default(TermId ef_term);

private:
    TermId intern_term(TermNode n);
    FormulaId intern_formula(FormulaNode n);
    friend struct TermKey;
    friend struct FormulaKey;

    Signature* sig_;
    std::vector<TermNode> terms_;
    std::vector<FormulaNode> formulas_;
    std::unordered_map<std::size_t, std::vector<std::uint32_t>> term_buckets_;
    std::unordered_map<std::size_t, std::vector<std::uint32_t>> formula_buckets_;
    mutable std::vector<char> rigid_cache_;  // 0 unknown, 1 rigid, 2 not
};

// Workspace bundles the mutable signature with its arena; every pipeline
// stage threads one through.
struct Workspace {
    Signature sig;
    Arena arena{&sig};
};

}  // namespace xltlef

#endif  // XLTLEF_ARENA_HPP
