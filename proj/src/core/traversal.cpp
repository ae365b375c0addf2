#include "xltlef/traversal.hpp"

#include <algorithm>

namespace xltlef {

namespace {

struct Collector {
    const Arena& a;
    std::vector<FormulaId> formulas;
    std::vector<TermId> terms;
    std::vector<char> fseen, tseen;

    explicit Collector(const Arena& arena) : a(arena) {
        fseen.resize(a.formula_count(), 0);
        tseen.resize(a.term_count(), 0);
    }

    void term(TermId t) {
        if (tseen[t.v]) return;
        tseen[t.v] = 1;
        const TermNode& n = a.term(t);
        for (auto x : n.args) term(x);
        if (n.kind == TermKind::IteTerm || n.kind == TermKind::Ef) formula(n.cond);
        terms.push_back(t);
    }

    void formula(FormulaId f) {
        if (fseen[f.v]) return;
        fseen[f.v] = 1;
        const FormulaNode& n = a.formula(f);
        for (auto x : n.targs) term(x);
        for (auto x : n.fargs) formula(x);
        if (n.interval) {
            term(n.interval->lo);
            if (n.interval->hi) term(*n.interval->hi);
        }
        formulas.push_back(f);
    }
};

}  // namespace

std::vector<FormulaId> subformulas(const Arena& a, FormulaId phi) {
    Collector c(a);
    c.formula(phi);
    return std::move(c.formulas);
}

std::vector<TermId> subterms(const Arena& a, FormulaId phi) {
    Collector c(a);
    c.formula(phi);
    return std::move(c.terms);
}

std::vector<TermId> subterms_of(const Arena& a, TermId t) {
    Collector c(a);
    c.term(t);
    return std::move(c.terms);
}

FreeSymbols free_symbols(const Arena& a, FormulaId phi) {
    Collector c(a);
    c.formula(phi);
    std::set<SymbolId> vars, params;
    FreeSymbols out;
    for (auto t : c.terms) {
        const TermNode& n = a.term(t);
        if (n.kind == TermKind::StateVar) vars.insert(n.sym);
        if (n.kind == TermKind::Param) params.insert(n.sym);
        if (n.kind == TermKind::TimeSym) out.uses_time = true;
    }
    for (auto f : c.formulas) {
        const FormulaNode& n = a.formula(f);
        if (n.kind == FormulaKind::TimeAtom) out.uses_time = true;
    }
    out.state_vars.assign(vars.begin(), vars.end());
    out.parameters.assign(params.begin(), params.end());
    return out;
}

TermId Rebuilder::term(TermId t) { return rebuild_term(t); }
FormulaId Rebuilder::formula(FormulaId f) { return rebuild_formula(f); }

TermId Rebuilder::rebuild_term(TermId t) {
    auto it = tmemo_.find(t.v);
    if (it != tmemo_.end()) return it->second;
    const TermNode n = a_.term(t);  // copy: arena may grow during recursion
    TermId rebuilt;
    switch (n.kind) {
        case TermKind::RatConst:
        case TermKind::IntConst:
        case TermKind::Param:
        case TermKind::StateVar:
        case TermKind::TimeSym:
            rebuilt = t;
            break;
        case TermKind::Builtin: {
            std::vector<TermId> args;
            for (auto x : n.args) args.push_back(rebuild_term(x));
            rebuilt = a_.builtin(n.fn, std::move(args));
            break;
        }
        case TermKind::UfApply: {
            std::vector<TermId> args;
            for (auto x : n.args) args.push_back(rebuild_term(x));
            rebuilt = a_.uf_apply(n.sym, std::move(args));
            break;
        }
        case TermKind::IteTerm:
            rebuilt = a_.ite_term(rebuild_formula(n.cond), rebuild_term(n.args[0]),
                                  rebuild_term(n.args[1]));
            break;
        case TermKind::Ef:
            rebuilt = a_.ef(n.dir, n.strict, n.iter, rebuild_term(n.args[0]),
                            rebuild_formula(n.cond));
            break;
        case TermKind::NextTerm:
            rebuilt = a_.next_term(rebuild_term(n.args[0]));
            break;
        case TermKind::PrevTerm:
            rebuilt = a_.prev_term(rebuild_term(n.args[0]));
            break;
    }
    if (term_hook)
        if (auto r = term_hook(a_, t, rebuilt)) rebuilt = *r;
    tmemo_.emplace(t.v, rebuilt);
    return rebuilt;
}

FormulaId Rebuilder::rebuild_formula(FormulaId f) {
    auto it = fmemo_.find(f.v);
    if (it != fmemo_.end()) return it->second;
    const FormulaNode n = a_.formula(f);
    FormulaNode out = n;
    out.targs.clear();
    out.fargs.clear();
    for (auto x : n.targs) out.targs.push_back(rebuild_term(x));
    for (auto x : n.fargs) out.fargs.push_back(rebuild_formula(x));
    if (n.interval) {
        Interval iv = *n.interval;
        iv.lo = rebuild_term(iv.lo);
        if (iv.hi) iv.hi = rebuild_term(*iv.hi);
        out.interval = iv;
    }

    FormulaId rebuilt;
    switch (n.kind) {
        case FormulaKind::Pred: rebuilt = a_.pred(n.sym, out.targs); break;
        case FormulaKind::Cmp: rebuilt = a_.cmp(n.cmp, out.targs[0], out.targs[1]); break;
        case FormulaKind::BoolTerm: rebuilt = a_.bool_term(out.targs[0]); break;
        case FormulaKind::TimeAtom:
            rebuilt = n.count == 2
                          ? a_.time_atom(out.targs[0], out.targs[1], n.cmp, out.targs[2])
                          : a_.time_atom(out.targs[0], std::nullopt, n.cmp, out.targs[1]);
            break;
        case FormulaKind::True: rebuilt = a_.f_true(); break;
        case FormulaKind::False: rebuilt = a_.f_false(); break;
        case FormulaKind::Not: rebuilt = a_.f_not(out.fargs[0]); break;
        case FormulaKind::And: rebuilt = a_.f_and(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::Or: rebuilt = a_.f_or(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::Implies: rebuilt = a_.implies(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::Iff: rebuilt = a_.iff(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::UntilStrict: rebuilt = a_.until_strict(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::SinceStrict: rebuilt = a_.since_strict(out.fargs[0], out.fargs[1]); break;
        case FormulaKind::Until:
        case FormulaKind::Since:
        case FormulaKind::UntilC:
            rebuilt = a_.binary(n.kind, out.fargs[0], out.fargs[1]);
            break;
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
            rebuilt = a_.unary(n.kind, out.fargs[0]);
            break;
        case FormulaKind::MetricFinally:
        case FormulaKind::MetricGlobally:
        case FormulaKind::MetricOnce:
        case FormulaKind::MetricHistorically:
            rebuilt = a_.metric(n.kind, n.strict, *out.interval, out.fargs[0]);
            break;
        case FormulaKind::MetricUntil:
        case FormulaKind::MetricSince:
            rebuilt = a_.metric(n.kind, n.strict, *out.interval, out.fargs[0], out.fargs[1]);
            break;
        case FormulaKind::EvClockF:
        case FormulaKind::EvClockP:
            rebuilt = a_.ev_clock(n.kind, *out.interval, out.fargs[0]);
            break;
        case FormulaKind::CountFuture:
        case FormulaKind::CountPast:
            rebuilt = a_.counting(n.kind, n.count, out.targs[0], out.fargs[0]);
            break;
    }
    if (formula_hook)
        if (auto r = formula_hook(a_, f, rebuilt)) rebuilt = *r;
    fmemo_.emplace(f.v, rebuilt);
    return rebuilt;
}

FormulaId substitute_term(Arena& a, FormulaId phi, TermId from, TermId to) {
    Rebuilder rb(a);
    rb.term_hook = [from, to](Arena&, TermId, TermId t) -> std::optional<TermId> {
        if (t == from) return to;
        return std::nullopt;
    };
    return rb.formula(phi);
}

namespace {

bool term_struct_eq(const Arena& a1, TermId t1, const Arena& a2, TermId t2);

bool formula_struct_eq(const Arena& a1, FormulaId f1, const Arena& a2, FormulaId f2) {
    const FormulaNode& n1 = a1.formula(f1);
    const FormulaNode& n2 = a2.formula(f2);
    if (n1.kind != n2.kind || n1.cmp != n2.cmp || n1.count != n2.count ||
        n1.strict != n2.strict)
        return false;
    if (n1.kind == FormulaKind::Pred &&
        a1.sig().symbol(n1.sym).name != a2.sig().symbol(n2.sym).name)
        return false;
    if (n1.targs.size() != n2.targs.size() || n1.fargs.size() != n2.fargs.size()) return false;
    if (n1.interval.has_value() != n2.interval.has_value()) return false;
    if (n1.interval) {
        const Interval& i1 = *n1.interval;
        const Interval& i2 = *n2.interval;
        if (i1.lo_open != i2.lo_open || i1.hi_open != i2.hi_open ||
            i1.hi.has_value() != i2.hi.has_value())
            return false;
        if (!term_struct_eq(a1, i1.lo, a2, i2.lo)) return false;
        if (i1.hi && !term_struct_eq(a1, *i1.hi, a2, *i2.hi)) return false;
    }
    for (std::size_t i = 0; i < n1.targs.size(); ++i)
        if (!term_struct_eq(a1, n1.targs[i], a2, n2.targs[i])) return false;
    for (std::size_t i = 0; i < n1.fargs.size(); ++i)
        if (!formula_struct_eq(a1, n1.fargs[i], a2, n2.fargs[i])) return false;
    return true;
}

bool term_struct_eq(const Arena& a1, TermId t1, const Arena& a2, TermId t2) {
    const TermNode& n1 = a1.term(t1);
    const TermNode& n2 = a2.term(t2);
    if (n1.kind != n2.kind || !(n1.sort.kind == n2.sort.kind)) return false;
    switch (n1.kind) {
        case TermKind::RatConst:
        case TermKind::IntConst:
            if (n1.value != n2.value) return false;
            break;
        case TermKind::Param:
        case TermKind::StateVar:
            if (a1.sig().symbol(n1.sym).name != a2.sig().symbol(n2.sym).name) return false;
            break;
        case TermKind::UfApply:
            if (a1.sig().symbol(n1.sym).name != a2.sig().symbol(n2.sym).name) return false;
            break;
        case TermKind::Builtin:
            if (n1.fn != n2.fn) return false;
            break;
        case TermKind::Ef:
            if (n1.dir != n2.dir || n1.strict != n2.strict || n1.iter != n2.iter) return false;
            break;
        default:
            break;
    }
    if (n1.args.size() != n2.args.size()) return false;
    for (std::size_t i = 0; i < n1.args.size(); ++i)
        if (!term_struct_eq(a1, n1.args[i], a2, n2.args[i])) return false;
    if (n1.kind == TermKind::IteTerm || n1.kind == TermKind::Ef)
        return formula_struct_eq(a1, n1.cond, a2, n2.cond);
    return true;
}

}  // namespace

bool structurally_equal(const Arena& a1, FormulaId f1, const Arena& a2, FormulaId f2) {
    return formula_struct_eq(a1, f1, a2, f2);
}

std::string stage_violation(const Arena& a, FormulaId phi, Stage stage) {
    for (auto t : subterms(a, phi)) {
        const TermNode& n = a.term(t);
        switch (n.kind) {
            case TermKind::Ef:
                if (stage == Stage::LtlNext) return "event-freezing term after removal stage";
                if (stage == Stage::Core && !n.strict)
                    return "non-strict event freezing not expanded";
                if (stage != Stage::Sorted && n.iter != 1)
                    return "iterated event freezing not expanded";
                break;
            case TermKind::NextTerm:
                if (stage == Stage::Sorted || stage == Stage::Core)
                    return "next() before discretization stage";
                break;
            case TermKind::PrevTerm:
                if (stage != Stage::Discretized) return "prev() outside discretization stage";
                break;
            case TermKind::IteTerm:
                if (stage == Stage::LtlNext) return "term ite after removal stage";
                break;
            default:
                break;
        }
    }
    for (auto f : subformulas(a, phi)) {
        const FormulaNode& n = a.formula(f);
        bool core_ok = false, discretized_ok = false, ltlnext_ok = false;
        switch (n.kind) {
            case FormulaKind::Pred:
            case FormulaKind::Cmp:
            case FormulaKind::BoolTerm:
            case FormulaKind::True:
            case FormulaKind::False:
            case FormulaKind::Not:
            case FormulaKind::And:
                core_ok = discretized_ok = ltlnext_ok = true;
                break;
            case FormulaKind::TimeAtom:
                core_ok = discretized_ok = true;
                break;
            case FormulaKind::UntilStrict:
            case FormulaKind::SinceStrict:
                core_ok = discretized_ok = true;  // normalized inside ef-removal
                break;
            case FormulaKind::Until:
            case FormulaKind::Since:
            case FormulaKind::Next:
            case FormulaKind::Yesterday:
            case FormulaKind::WeakYesterday:
                discretized_ok = ltlnext_ok = true;
                break;
            case FormulaKind::Or:
            case FormulaKind::Implies:
            case FormulaKind::Iff:
            case FormulaKind::Finally:
            case FormulaKind::Globally:
            case FormulaKind::Once:
            case FormulaKind::Historically:
                discretized_ok = true;  // D and the monitors emit derived notation
                break;
            default:
                break;  // full sugar: Sorted only
        }
        if (stage == Stage::Core && !core_ok) return "non-core operator after desugaring";
        if (stage == Stage::Discretized && !discretized_ok)
            return "unexpected operator in discretized formula";
        if (stage == Stage::LtlNext && !ltlnext_ok)
            return "unexpected operator in LTL-next formula";
    }
    return {};
}

}  // namespace xltlef
