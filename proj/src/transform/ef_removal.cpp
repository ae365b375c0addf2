#include "xltlef/ef_removal.hpp"

#include <algorithm>
#include <functional>

namespace xltlef {

namespace {

FormulaId mk_eq(Arena& a, TermId x, TermId y) {
    if (a.sort_of(x).kind == SortKind::Bool) return a.iff(a.bool_term(x), a.bool_term(y));
    return a.cmp(CmpOp::Eq, x, y);
}

// ---- lowering to the literal LTL-next operator set -------------------------
//
// Expands Or/Implies/Iff/F/G/P/H, turns time atoms into plain comparisons,
// and lifts term-level ite into a formula-level case split so atoms are
// ite-free.

class Lowerer {
public:
    explicit Lowerer(Arena& a) : a_(a) {}

    FormulaId run(FormulaId f) {
        Rebuilder rb(a_);
        rb.formula_hook = [this](Arena&, FormulaId, FormulaId g) -> std::optional<FormulaId> {
            return lower(g);
        };
        return rb.formula(f);
    }

private:
    std::optional<FormulaId> lower(FormulaId f) {
        const FormulaNode n = a_.formula(f);
        switch (n.kind) {
            case FormulaKind::Or:
                return a_.f_not(a_.f_and(a_.f_not(n.fargs[0]), a_.f_not(n.fargs[1])));
            case FormulaKind::Implies:
                return a_.f_not(a_.f_and(n.fargs[0], a_.f_not(n.fargs[1])));
            case FormulaKind::Iff: {
                FormulaId ab = a_.f_not(a_.f_and(n.fargs[0], a_.f_not(n.fargs[1])));
                FormulaId ba = a_.f_not(a_.f_and(n.fargs[1], a_.f_not(n.fargs[0])));
                return a_.f_and(ab, ba);
            }
            case FormulaKind::Finally:
                return a_.binary(FormulaKind::Until, a_.f_true(), n.fargs[0]);
            case FormulaKind::Globally:
                return a_.f_not(
                    a_.binary(FormulaKind::Until, a_.f_true(), a_.f_not(n.fargs[0])));
            case FormulaKind::Once:
                return a_.binary(FormulaKind::Since, a_.f_true(), n.fargs[0]);
            case FormulaKind::Historically:
                return a_.f_not(
                    a_.binary(FormulaKind::Since, a_.f_true(), a_.f_not(n.fargs[0])));
            case FormulaKind::TimeAtom: {
                TermId lhs = n.count == 2 ? a_.builtin(BuiltinFn::Sub, {n.targs[0], n.targs[1]})
                                          : n.targs[0];
                return lift_ites(a_.cmp(n.cmp, lhs, n.targs.back()));
            }
            case FormulaKind::Cmp:
            case FormulaKind::Pred:
            case FormulaKind::BoolTerm:
                return lift_ites(f);
            default:
                return std::nullopt;
        }
    }

    // Replace one ite occurrence per pass with a case split until none is
    // left inside the atom.
    FormulaId lift_ites(FormulaId atom) {
        for (;;) {
            std::optional<TermId> ite;
            for (TermId t : atom_terms(atom)) {
                if (a_.term(t).kind == TermKind::IteTerm) {
                    ite = t;
                    break;
                }
            }
            if (!ite) return atom;
            const TermNode& n = a_.term(*ite);
            FormulaId c = n.cond;
            FormulaId pos = substitute_term(a_, atom, *ite, n.args[0]);
            FormulaId neg = substitute_term(a_, atom, *ite, n.args[1]);
            // recurse: branches may still carry ites
            pos = lift_ites(pos);
            neg = lift_ites(neg);
            atom = a_.f_not(a_.f_and(a_.f_not(a_.f_and(c, pos)),
                                     a_.f_not(a_.f_and(a_.f_not(c), neg))));
            return atom;
        }
    }

    // Terms of a single atom, outermost ites first.
    std::vector<TermId> atom_terms(FormulaId atom) {
        std::vector<TermId> out;
        const FormulaNode& n = a_.formula(atom);
        std::vector<TermId> stack(n.targs.begin(), n.targs.end());
        while (!stack.empty()) {
            TermId t = stack.back();
            stack.pop_back();
            out.push_back(t);
            const TermNode& tn = a_.term(t);
            if (tn.kind == TermKind::IteTerm) continue;  // do not cross ite boundaries
            for (TermId x : tn.args) stack.push_back(x);
        }
        return out;
    }

    Arena& a_;
};

}  // namespace

FormulaId normalize_strict(Arena& a, FormulaId f) {
    Rebuilder rb(a);
    rb.formula_hook = [&a](Arena&, FormulaId, FormulaId g) -> std::optional<FormulaId> {
        const FormulaNode& n = a.formula(g);
        if (n.kind == FormulaKind::UntilStrict)
            return a.unary(FormulaKind::Next,
                           a.binary(FormulaKind::Until, n.fargs[0], n.fargs[1]));
        if (n.kind == FormulaKind::SinceStrict)
            return a.unary(FormulaKind::Yesterday,
                           a.binary(FormulaKind::Since, n.fargs[0], n.fargs[1]));
        return std::nullopt;
    };
    return rb.formula(f);
}

std::vector<TermId> order_ef_terms(const Arena& a, FormulaId psi) {
    // depth = maximum nesting of freezing terms inside; innermost first,
    // then by node id for determinism
    std::vector<TermId> efs;
    std::unordered_map<std::uint32_t, int> depth;
    for (TermId t : subterms(a, psi)) {
        if (a.term(t).kind == TermKind::Ef) efs.push_back(t);
    }
    std::function<int(TermId)> dep = [&](TermId t) -> int {
        auto it = depth.find(t.v);
        if (it != depth.end()) return it->second;
        depth.emplace(t.v, 0);  // cycle guard; DAG so unused
        int d = 0;
        const TermNode& n = a.term(t);
        std::vector<TermId> kids = n.args;
        std::vector<TermId> inner;
        // freezing terms reachable through the frozen term or the trigger
        if (n.kind == TermKind::Ef) {
            for (TermId s : subterms_of(a, n.args[0])) inner.push_back(s);
            for (TermId s : subterms(a, n.cond)) inner.push_back(s);
            for (TermId s : inner)
                if (s != t && a.term(s).kind == TermKind::Ef) d = std::max(d, dep(s) + 1);
        }
        depth[t.v] = d;
        return d;
    };
    std::stable_sort(efs.begin(), efs.end(), [&](TermId x, TermId y) {
        int dx = dep(x), dy = dep(y);
        if (dx != dy) return dx < dy;
        return x.v < y.v;
    });
    return efs;
}

LtlNextProblem remove_ef(Workspace& ws, FormulaId psi, RemovalStage stage,
                         RemovalMutation mutation) {
    Arena& a = ws.arena;
    LtlNextProblem out;

    FormulaId cur = psi;

    if (stage == RemovalStage::DiscreteInput) {
        // strict freezing under discrete time: shift the non-strict value
        Rebuilder rb(a);
        rb.term_hook = [&a](Arena&, TermId, TermId t) -> std::optional<TermId> {
            const TermNode& n = a.term(t);
            if (n.kind != TermKind::Ef || !n.strict) return std::nullopt;
            if (n.iter != 1) throw std::logic_error("iterated freezing must be expanded");
            TermId ns = a.ef(n.dir, false, 1, n.args[0], n.cond);
            a.ensure_default(ns);
            return n.dir == EfDir::Future ? a.next_term(ns) : a.prev_term(ns);
        };
        cur = rb.formula(cur);
        PrevElimination pe = eliminate_prev(ws, cur);
        cur = pe.formula;
        out.extra_constraints = pe.constraints;
        out.monitors = pe.monitors;
    } else {
        for (TermId t : subterms(a, cur))
            if (a.term(t).kind == TermKind::Ef && a.term(t).strict)
                throw std::logic_error(
                    "stage violation: strict freezing after discretization (dense input "
                    "not discretized?)");
    }

    cur = normalize_strict(a, cur);
    for (auto& c : out.extra_constraints) c = normalize_strict(a, c);

    // Bind freezing terms bottom-up, re-collecting after every binding so
    // outer terms see the fresh prophecy variables of their inner ones.
    int counter = 0;
    for (;;) {
        std::vector<TermId> efs = order_ef_terms(a, cur);
        // constraints can mention freezing terms too (prev monitors)
        for (const auto& c : out.extra_constraints)
            for (TermId t : order_ef_terms(a, c)) efs.push_back(t);
        for (const auto& b : out.bindings)
            for (const auto& c : b.constraints)
                for (TermId t : order_ef_terms(a, c)) efs.push_back(t);
        if (efs.empty()) break;
        // take an innermost one
        TermId t = efs.front();
        for (TermId e : efs) {
            // re-rank across the combined collection
            auto inner_count = [&](TermId x) {
                int k = 0;
                for (TermId s : subterms_of(a, a.term(x).args[0]))
                    if (a.term(s).kind == TermKind::Ef) ++k;
                for (TermId s : subterms(a, a.term(x).cond))
                    if (a.term(s).kind == TermKind::Ef) ++k;
                return k;
            };
            if (inner_count(e) == 0) {
                t = e;
                break;
            }
        }
        const TermNode& n = a.term(t);
        if (n.strict) throw std::logic_error("strict freezing term reached binding stage");

        ProphecyBinding b;
        b.ef_term = t;
        b.dir = n.dir;
        b.def = a.ensure_default(t);
        b.var = ws.sig.fresh_state_var("p__" + std::to_string(counter++), a.sort_of(t));
        TermId pvar = a.symbol_term(b.var);

        FormulaId phi = n.cond;
        TermId u = n.args[0];

        if (n.dir == EfDir::Future) {
            FormulaId frozen = mk_eq(a, a.next_term(pvar), pvar);
            FormulaId pend = a.f_and(a.f_not(phi), frozen);
            FormulaId fulfil = a.f_and(phi, mk_eq(a, pvar, u));
            FormulaId c1 = a.unary(
                FormulaKind::Globally,
                a.implies(a.unary(FormulaKind::Finally, phi),
                          a.binary(FormulaKind::Until, pend, fulfil)));
            b.constraints.push_back(c1);
            if (mutation != RemovalMutation::DropGNot) {
                TermId tail = mutation == RemovalMutation::SwapDefault ? u : a.symbol_term(b.def);
                FormulaId c2 = a.unary(
                    FormulaKind::Globally,
                    a.implies(a.unary(FormulaKind::Globally, a.f_not(phi)), mk_eq(a, pvar, tail)));
                b.constraints.push_back(c2);
            }
        } else {
            FormulaId frozen = a.unary(FormulaKind::WeakYesterday, mk_eq(a, a.next_term(pvar), pvar));
            FormulaId pend = a.f_and(a.f_not(phi), frozen);
            FormulaId fulfil = a.f_and(phi, mk_eq(a, pvar, u));
            FormulaId c1 = a.unary(
                FormulaKind::Globally,
                a.implies(a.unary(FormulaKind::Once, phi),
                          a.binary(FormulaKind::Since, pend, fulfil)));
            b.constraints.push_back(c1);
            if (mutation != RemovalMutation::DropGNot) {
                TermId tail = mutation == RemovalMutation::SwapDefault ? u : a.symbol_term(b.def);
                FormulaId c2 = a.unary(
                    FormulaKind::Globally,
                    a.implies(a.unary(FormulaKind::Historically, a.f_not(phi)),
                              mk_eq(a, pvar, tail)));
                b.constraints.push_back(c2);
            }
        }

        cur = substitute_term(a, cur, t, pvar);
        for (auto& c : out.extra_constraints) c = substitute_term(a, c, t, pvar);
        for (auto& ob : out.bindings)
            for (auto& c : ob.constraints) c = substitute_term(a, c, t, pvar);
        out.bindings.push_back(std::move(b));
    }

    // lower everything to the literal LTL-next operator set
    Lowerer low(a);
    cur = low.run(cur);
    for (auto& c : out.extra_constraints) c = low.run(c);
    for (auto& b : out.bindings)
        for (auto& c : b.constraints) c = low.run(c);

    out.formula = cur;
    FormulaId all = out.combined(a);
    std::string bad = stage_violation(a, all, Stage::LtlNext);
    if (!bad.empty()) throw std::logic_error("removal postcondition: " + bad);
    return out;
}

FormulaId LtlNextProblem::combined(Arena& a) const {
    std::vector<FormulaId> parts = {formula};
    for (const auto& b : bindings)
        for (auto c : b.constraints) parts.push_back(c);
    for (auto c : extra_constraints) parts.push_back(c);
    return a.f_and(parts);
}

}  // namespace xltlef
