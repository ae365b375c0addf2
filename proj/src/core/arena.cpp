#include "xltlef/arena.hpp"

namespace xltlef {

const char* cmp_str(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Le: return "<=";
        case CmpOp::Lt: return "<";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

CmpOp cmp_flip(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return CmpOp::Eq;
        case CmpOp::Le: return CmpOp::Ge;
        case CmpOp::Lt: return CmpOp::Gt;
        case CmpOp::Ge: return CmpOp::Le;
        case CmpOp::Gt: return CmpOp::Lt;
    }
    return op;
}

namespace {

inline void hash_mix(std::size_t& h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

std::size_t term_hash(const TermNode& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
    if (n.kind == TermKind::RatConst || n.kind == TermKind::IntConst) hash_mix(h, rat_hash(n.value));
    hash_mix(h, n.sym);
    hash_mix(h, static_cast<std::size_t>(n.fn));
    hash_mix(h, static_cast<std::size_t>(n.dir));
    hash_mix(h, n.strict ? 7u : 13u);
    hash_mix(h, n.iter);
    hash_mix(h, n.cond.v);
    for (auto a : n.args) hash_mix(h, a.v);
    return h;
}

bool term_eq(const TermNode& a, const TermNode& b) {
    if (a.kind != b.kind || !(a.sort == b.sort)) return false;
    switch (a.kind) {
        case TermKind::RatConst:
        case TermKind::IntConst:
            return a.value == b.value;
        case TermKind::Param:
        case TermKind::StateVar:
            return a.sym == b.sym;
        case TermKind::Builtin:
            return a.fn == b.fn && a.args == b.args;
        case TermKind::UfApply:
            return a.sym == b.sym && a.args == b.args;
        case TermKind::IteTerm:
            return a.cond == b.cond && a.args == b.args;
        case TermKind::Ef:
            return a.dir == b.dir && a.strict == b.strict && a.iter == b.iter &&
                   a.args == b.args && a.cond == b.cond;
        case TermKind::NextTerm:
        case TermKind::PrevTerm:
            return a.args == b.args;
        case TermKind::TimeSym:
            return true;
    }
    return false;
}

std::size_t formula_hash(const FormulaNode& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 2000003u;
    hash_mix(h, n.sym);
    hash_mix(h, static_cast<std::size_t>(n.cmp));
    hash_mix(h, n.count);
    hash_mix(h, n.strict ? 7u : 13u);
    for (auto a : n.targs) hash_mix(h, a.v);
    for (auto a : n.fargs) hash_mix(h, a.v);
    if (n.interval) {
        hash_mix(h, n.interval->lo.v);
        hash_mix(h, n.interval->hi ? n.interval->hi->v : 0xfffffffeu);
        hash_mix(h, (n.interval->lo_open ? 2u : 0u) | (n.interval->hi_open ? 1u : 0u));
    }
    return h;
}

bool formula_eq(const FormulaNode& a, const FormulaNode& b) {
    if (a.kind != b.kind || a.sym != b.sym || a.cmp != b.cmp || a.count != b.count ||
        a.strict != b.strict || a.targs != b.targs || a.fargs != b.fargs)
        return false;
    if (a.interval.has_value() != b.interval.has_value()) return false;
    if (a.interval && !(*a.interval == *b.interval)) return false;
    return true;
}

}  // namespace

TermId Arena::intern_term(TermNode n) {
    std::size_t h = term_hash(n);
    auto& bucket = term_buckets_[h];
    for (auto idx : bucket)
        if (term_eq(terms_[idx], n)) return TermId{idx};
    auto idx = static_cast<std::uint32_t>(terms_.size());
    terms_.push_back(std::move(n));
    bucket.push_back(idx);
    return TermId{idx};
}

FormulaId Arena::intern_formula(FormulaNode n) {
    std::size_t h = formula_hash(n);
    auto& bucket = formula_buckets_[h];
    for (auto idx : bucket)
        if (formula_eq(formulas_[idx], n)) return FormulaId{idx};
    auto idx = static_cast<std::uint32_t>(formulas_.size());
    formulas_.push_back(std::move(n));
    bucket.push_back(idx);
    return FormulaId{idx};
}

TermId Arena::rat_const(const Rat& q) {
    TermNode n;
    n.kind = TermKind::RatConst;
    n.sort = Sort::real();
    n.value = q;
    n.value.canonicalize();
    return intern_term(std::move(n));
}

TermId Arena::int_const(const Rat& q) {
    if (!rat_is_int(q)) throw SortError("integer literal expected");
    TermNode n;
    n.kind = TermKind::IntConst;
    n.sort = Sort::integer();
    n.value = q;
    return intern_term(std::move(n));
}

TermId Arena::symbol_term(SymbolId s) {
    const Symbol& sym = sig_->symbol(s);
    if (sym.kind != SymbolKind::Parameter && sym.kind != SymbolKind::StateVar)
        throw SortError("symbol '" + sym.name + "' is not a constant or variable");
    TermNode n;
    n.kind = sym.kind == SymbolKind::Parameter ? TermKind::Param : TermKind::StateVar;
    n.sort = sym.sort;
    n.sym = s;
    return intern_term(std::move(n));
}

TermId Arena::builtin(BuiltinFn fn, std::vector<TermId> args) {
    std::size_t want = fn == BuiltinFn::Neg ? 1 : 2;
    if (args.size() != want) throw SortError("arity mismatch for arithmetic operator");
    Sort s = sort_of(args[0]);
    if (!s.is_numeric()) throw SortError("arithmetic on non-numeric term");
    for (auto a : args)
        if (sort_of(a) != s) throw SortError("mixed-sort arithmetic (no implicit int/real coercion)");
    if (fn == BuiltinFn::Div && s.kind != SortKind::Real)
        throw SortError("'/' requires real operands");
    // Constant folding keeps numeral rendering round-trip stable
    // ("3/2" and "-5" reparse to the literal they printed from).
    auto lit = [&](TermId t) -> const Rat* {
        const TermNode& tn = term(t);
        return (tn.kind == TermKind::RatConst || tn.kind == TermKind::IntConst) ? &tn.value
                                                                                : nullptr;
    };
    if (fn == BuiltinFn::Neg) {
        if (const Rat* v = lit(args[0]))
            return s.kind == SortKind::Int ? int_const(-*v) : rat_const(-*v);
    } else if (const Rat* va = lit(args[0])) {
        if (const Rat* vb = lit(args[1])) {
            Rat r;
            switch (fn) {
                case BuiltinFn::Add: r = *va + *vb; break;
                case BuiltinFn::Sub: r = *va - *vb; break;
                case BuiltinFn::Mul: r = *va * *vb; break;
                case BuiltinFn::Div:
                    if (*vb == 0) throw SortError("division by zero constant");
                    r = *va / *vb;
                    break;
                case BuiltinFn::Neg: break;
            }
            return s.kind == SortKind::Int ? int_const(r) : rat_const(r);
        }
    }
    TermNode n;
    n.kind = TermKind::Builtin;
    n.sort = s;
    n.fn = fn;
    n.args = std::move(args);
    return intern_term(std::move(n));
}

TermId Arena::uf_apply(SymbolId f, std::vector<TermId> args) {
    const Symbol& sym = sig_->symbol(f);
    if (sym.kind != SymbolKind::Function)
        throw SortError("'" + sym.name + "' is not a function");
    if (sym.arg_sorts.size() != args.size())
        throw SortError("arity mismatch applying '" + sym.name + "'");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (sort_of(args[i]) != sym.arg_sorts[i])
            throw SortError("argument " + std::to_string(i + 1) + " of '" + sym.name +
                            "' has wrong sort");
    TermNode n;
    n.kind = TermKind::UfApply;
    n.sort = sym.sort;
    n.sym = f;
    n.args = std::move(args);
    return intern_term(std::move(n));
}

TermId Arena::ite_term(FormulaId c, TermId t, TermId e) {
    if (sort_of(t) != sort_of(e)) throw SortError("ite branches have different sorts");
    TermNode n;
    n.kind = TermKind::IteTerm;
    n.sort = sort_of(t);
    n.cond = c;
    n.args = {t, e};
    return intern_term(std::move(n));
}

TermId Arena::ef(EfDir dir, bool strict, std::uint32_t iter, TermId u, FormulaId trigger) {
    if (iter < 1) throw SortError("event-freezing iteration must be >= 1");
    if (iter > 1 && !strict) throw SortError("iterated event freezing is strict-only");
    TermNode n;
    n.kind = TermKind::Ef;
    n.sort = sort_of(u);
    n.dir = dir;
    n.strict = strict;
    n.iter = iter;
    n.args = {u};
    n.cond = trigger;
    return intern_term(std::move(n));
}

TermId Arena::next_term(TermId u) {
    TermNode n;
    n.kind = TermKind::NextTerm;
    n.sort = sort_of(u);
    n.args = {u};
    return intern_term(std::move(n));
}

TermId Arena::prev_term(TermId u) {
    TermNode n;
    n.kind = TermKind::PrevTerm;
    n.sort = sort_of(u);
    n.args = {u};
    return intern_term(std::move(n));
}

TermId Arena::time_sym() {
    TermNode n;
    n.kind = TermKind::TimeSym;
    n.sort = Sort::real();
    return intern_term(std::move(n));
}

FormulaId Arena::pred(SymbolId p, std::vector<TermId> args) {
    const Symbol& sym = sig_->symbol(p);
    if (sym.kind != SymbolKind::Predicate)
        throw SortError("'" + sym.name + "' is not a predicate");
    if (sym.arg_sorts.size() != args.size())
        throw SortError("arity mismatch applying '" + sym.name + "'");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (sort_of(args[i]) != sym.arg_sorts[i])
            throw SortError("argument " + std::to_string(i + 1) + " of '" + sym.name +
                            "' has wrong sort");
    FormulaNode n;
    n.kind = FormulaKind::Pred;
    n.sym = p;
    n.targs = std::move(args);
    return intern_formula(std::move(n));
}

FormulaId Arena::bool_term(TermId t) {
    if (sort_of(t).kind != SortKind::Bool)
        throw SortError("formula position requires a boolean term");
    // Collapse trivial wrappers so `b` the term and `b` the atom intern once.
    FormulaNode n;
    n.kind = FormulaKind::BoolTerm;
    n.targs = {t};
    return intern_formula(std::move(n));
}

FormulaId Arena::cmp(CmpOp op, TermId lhs, TermId rhs) {
    Sort a = sort_of(lhs), b = sort_of(rhs);
    if (a != b) throw SortError("comparison between different sorts");
    if (a.kind == SortKind::Bool)
        throw SortError("comparison on booleans (use <-> instead of =)");
    if (a.kind == SortKind::Uninterpreted && op != CmpOp::Eq)
        throw SortError("only equality is available on uninterpreted sorts");
    FormulaNode n;
    n.kind = FormulaKind::Cmp;
    n.cmp = op;
    n.targs = {lhs, rhs};
    return intern_formula(std::move(n));
}

FormulaId Arena::time_atom(TermId tu, std::optional<TermId> tu2, CmpOp op, TermId rigid) {
    if (!is_rigid(rigid)) throw SortError("rigid endpoint required in time comparison");
    if (sort_of(rigid).kind != SortKind::Real) throw SortError("time bounds must be real");
    FormulaNode n;
    n.kind = FormulaKind::TimeAtom;
    n.cmp = op;
    n.count = tu2 ? 2 : 1;
    n.targs = tu2 ? std::vector<TermId>{tu, *tu2, rigid} : std::vector<TermId>{tu, rigid};
    return intern_formula(std::move(n));
}

FormulaId Arena::f_true() {
    FormulaNode n;
    n.kind = FormulaKind::True;
    return intern_formula(std::move(n));
}

FormulaId Arena::f_false() {
    FormulaNode n;
    n.kind = FormulaKind::False;
    return intern_formula(std::move(n));
}

FormulaId Arena::f_not(FormulaId a) {
    FormulaNode n;
    n.kind = FormulaKind::Not;
    n.fargs = {a};
    return intern_formula(std::move(n));
}

FormulaId Arena::f_and(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::And;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::f_and(const std::vector<FormulaId>& xs) {
    if (xs.empty()) return f_true();
    FormulaId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = f_and(acc, xs[i]);
    return acc;
}

FormulaId Arena::f_or(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::Or;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::f_or(const std::vector<FormulaId>& xs) {
    if (xs.empty()) return f_false();
    FormulaId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = f_or(acc, xs[i]);
    return acc;
}

FormulaId Arena::implies(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::Implies;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::iff(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::Iff;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::until_strict(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::UntilStrict;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::since_strict(FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = FormulaKind::SinceStrict;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::unary(FormulaKind k, FormulaId a) {
    switch (k) {
        case FormulaKind::Finally:
        case FormulaKind::Globally:
        case FormulaKind::Once:
        case FormulaKind::Historically:
        case FormulaKind::Next:
        case FormulaKind::NextTilde:
        case FormulaKind::Yesterday:
        case FormulaKind::YesterdayTilde:
        case FormulaKind::WeakYesterday:
        case FormulaKind::WeakYesterdayTilde:
            break;
        default:
            throw SortError("not a unary temporal operator");
    }
    FormulaNode n;
    n.kind = k;
    n.fargs = {a};
    return intern_formula(std::move(n));
}

FormulaId Arena::binary(FormulaKind k, FormulaId a, FormulaId b) {
    if (k != FormulaKind::Until && k != FormulaKind::Since && k != FormulaKind::UntilC)
        throw SortError("not a binary temporal operator");
    FormulaNode n;
    n.kind = k;
    n.fargs = {a, b};
    return intern_formula(std::move(n));
}

FormulaId Arena::metric(FormulaKind k, bool strict, Interval iv, FormulaId a, FormulaId b) {
    FormulaNode n;
    n.kind = k;
    n.strict = strict;
    n.interval = iv;
    switch (k) {
        case FormulaKind::MetricFinally:
        case FormulaKind::MetricGlobally:
        case FormulaKind::MetricOnce:
        case FormulaKind::MetricHistorically:
            n.fargs = {a};
            break;
        case FormulaKind::MetricUntil:
        case FormulaKind::MetricSince:
            n.fargs = {a, b};
            break;
        default:
            throw SortError("not a metric operator");
    }
    return intern_formula(std::move(n));
}

FormulaId Arena::ev_clock(FormulaKind k, Interval iv, FormulaId a) {
    if (k != FormulaKind::EvClockF && k != FormulaKind::EvClockP)
        throw SortError("not an event-clock operator");
    FormulaNode n;
    n.kind = k;
    n.interval = iv;
    n.fargs = {a};
    return intern_formula(std::move(n));
}

FormulaId Arena::counting(FormulaKind k, std::uint32_t count, TermId bound, FormulaId a) {
    if (k != FormulaKind::CountFuture && k != FormulaKind::CountPast)
        throw SortError("not a counting operator");
    if (count < 1) throw SortError("counting operator requires k >= 1");
    if (!is_rigid(bound)) throw SortError("rigid endpoint required in time comparison");
    if (sort_of(bound).kind != SortKind::Real) throw SortError("time bounds must be real");
    FormulaNode n;
    n.kind = k;
    n.count = count;
    n.targs = {bound};
    n.fargs = {a};
    return intern_formula(std::move(n));
}

Interval Arena::interval(TermId lo, std::optional<TermId> hi, bool lo_open, bool hi_open) {
    if (!is_rigid(lo) || (hi && !is_rigid(*hi)))
        throw SortError("rigid endpoint required in time comparison");
    if (sort_of(lo).kind != SortKind::Real || (hi && sort_of(*hi).kind != SortKind::Real))
        throw SortError("interval endpoints must be real");
    Interval iv;
    iv.lo = lo;
    iv.hi = hi;
    iv.lo_open = lo_open;
    iv.hi_open = hi ? hi_open : true;  // +inf is always open
    return iv;
}

Interval Arena::interval_upto(CmpOp op, TermId bound) {
    TermId zero = rat_const(Rat(0));
    switch (op) {
        case CmpOp::Le: return interval(zero, bound, false, false);
        case CmpOp::Lt: return interval(zero, bound, false, true);
        case CmpOp::Ge: return interval(bound, std::nullopt, false, true);
        case CmpOp::Gt: return interval(bound, std::nullopt, true, true);
        case CmpOp::Eq: return interval_singular(bound);
    }
    throw SortError("bad interval shorthand");
}

Interval Arena::interval_singular(TermId a) { return interval(a, a, false, false); }

bool Arena::is_rigid(TermId id) const {
    if (rigid_cache_.size() < terms_.size()) rigid_cache_.resize(terms_.size(), 0);
    if (rigid_cache_[id.v]) return rigid_cache_[id.v] == 1;
    const TermNode& n = term(id);
    bool r = true;
    switch (n.kind) {
        case TermKind::RatConst:
        case TermKind::IntConst:
        case TermKind::Param:
            r = true;
            break;
        case TermKind::StateVar:
        case TermKind::Ef:
        case TermKind::NextTerm:
        case TermKind::PrevTerm:
        case TermKind::TimeSym:
        case TermKind::IteTerm:  // condition may be temporal; treat as non-rigid
            r = false;
            break;
        case TermKind::Builtin:
        case TermKind::UfApply:
            for (auto a : n.args) r = r && is_rigid(a);
            break;
    }
    rigid_cache_[id.v] = r ? 1 : 2;
    return r;
}

SymbolId Arena::ensure_default(TermId ef_term) {
    const TermNode& n = term(ef_term);
    if (n.kind != TermKind::Ef) throw SortError("default requested for a non-freezing term");
    // Non-strict @F/@P have the same "no occurrence" value as their strict
    // form, so they alias its default.
    TermId key = ef_term;
    if (!n.strict) {
        Arena* self = const_cast<Arena*>(this);
        key = self->ef(n.dir, true, 1, n.args[0], n.cond);
    }
    if (auto existing = sig_->default_for(key.v)) return *existing;
    SymbolId def = sig_->fresh_parameter("def__" + std::to_string(key.v), term(key).sort);
    sig_->set_default(key.v, def);
    return def;
}

}  // namespace xltlef
