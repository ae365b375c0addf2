#include "xltlef/discretize.hpp"

#include <memory>

namespace xltlef {

namespace {

// sort-aware equality (booleans use iff)
FormulaId mk_eq(Arena& a, TermId x, TermId y) {
    if (a.sort_of(x).kind == SortKind::Bool) return a.iff(a.bool_term(x), a.bool_term(y));
    return a.cmp(CmpOp::Eq, x, y);
}

class Discretizer {
public:
    Discretizer(Workspace& ws, TimeModelKind model) : ws_(ws), a_(ws.arena), model_(model) {
        iota_ = ws_.sig.fresh_state_var("iota", Sort::boolean());
        delta_ = ws_.sig.fresh_state_var("delta", Sort::real());
        zeta_ = ws_.sig.fresh_state_var("zeta", Sort::real());
    }

    SymbolId iota_sym() const { return iota_; }
    SymbolId delta_sym() const { return delta_; }
    SymbolId zeta_sym() const { return zeta_; }

    FormulaId iota() { return a_.bool_term(a_.symbol_term(iota_)); }
    TermId delta() { return a_.symbol_term(delta_); }
    TermId zeta() { return a_.symbol_term(zeta_); }
    TermId time() { return a_.time_sym(); }
    TermId q(long n) { return a_.rat_const(Rat(n)); }

    FormulaId translate(FormulaId core) { return rb().formula(core); }

    Rebuilder& rb() {
        if (!rb_) {
            rb_ = std::make_unique<Rebuilder>(a_);
            rb_->formula_hook = [this](Arena&, FormulaId,
                                       FormulaId f) -> std::optional<FormulaId> {
                const FormulaNode& n = a_.formula(f);
                if (n.kind == FormulaKind::UntilStrict)
                    return strict_case(n.fargs[0], n.fargs[1], EfDir::Future);
                if (n.kind == FormulaKind::SinceStrict)
                    return strict_case(n.fargs[0], n.fargs[1], EfDir::Past);
                return std::nullopt;
            };
            rb_->term_hook = [this](Arena&, TermId orig, TermId t) -> std::optional<TermId> {
                const TermNode& n = a_.term(t);
                if (n.kind != TermKind::Ef) return std::nullopt;
                if (!n.strict || n.iter != 1)
                    throw std::logic_error("discretize expects core event-freezing terms");
                return ef_case(orig, n.dir, n.args[0], n.cond);
            };
        }
        return *rb_;
    }

    // D(phi1 U~ phi2) splits on the current interval being open or
    // singular; witnesses must land on a singular sample or carry phi1
    // through an open one.  Dual for since.
    FormulaId strict_case(FormulaId l, FormulaId r, EfDir dir) {
        FormulaId target = a_.f_or(a_.f_and(iota(), r), a_.f_and(l, r));
        FormulaId uu = a_.binary(dir == EfDir::Future ? FormulaKind::Until : FormulaKind::Since,
                                 l, target);
        FormulaId step = a_.unary(
            dir == EfDir::Future ? FormulaKind::Next : FormulaKind::Yesterday, uu);
        return a_.f_or(a_.f_and(a_.f_not(iota()), a_.f_and(l, uu)),
                       a_.f_and(iota(), step));
    }

    // D(u@F~(phi)) via the non-strict form frozen at "phi holds here or an
    // open phi-interval starts right after"; the strict value shifts one
    // sample when the current singular sample does not open into phi.
    TermId ef_case(TermId orig, EfDir dir, TermId du, FormulaId dphi) {
        bool fut = dir == EfDir::Future;
        FormulaId adj = a_.unary(fut ? FormulaKind::Next : FormulaKind::Yesterday,
                                 a_.f_and(a_.f_not(iota()), dphi));
        FormulaId trigger = a_.f_or(dphi, adj);
        TermId at_ns = a_.ef(dir, false, 1, du, trigger);
        alias_default(orig, at_ns);
        FormulaId guard = a_.unary(fut ? FormulaKind::Next : FormulaKind::WeakYesterday,
                                   a_.f_or(iota(), a_.f_not(dphi)));
        FormulaId cond = a_.f_and(iota(), guard);
        TermId shifted = fut ? a_.next_term(at_ns) : a_.prev_term(at_ns);
        return a_.ite_term(cond, shifted, at_ns);
    }

    // The discretized freezing term denotes the same "no occurrence" value
    // as the source term, so both share one default parameter.
    void alias_default(TermId orig, TermId translated) {
        SymbolId def = a_.ensure_default(orig);
        const TermNode& n = a_.term(translated);
        TermId key = n.strict ? translated : a_.ef(n.dir, true, 1, n.args[0], n.cond);
        if (auto existing = ws_.sig.default_for(key.v)) {
            if (*existing != def)
                throw std::logic_error("discretization produced colliding default constants");
            return;
        }
        ws_.sig.set_default(key.v, def);
    }

    FormulaId psi_iota() {
        FormulaId i = iota();
        FormulaId d0 = a_.cmp(CmpOp::Eq, delta(), q(0));
        FormulaId dpos = a_.cmp(CmpOp::Gt, delta(), q(0));
        FormulaId xi = a_.unary(FormulaKind::Next, i);
        FormulaId xni = a_.unary(FormulaKind::Next, a_.f_not(i));
        FormulaId step3 = a_.f_or(a_.f_and(i, a_.f_and(d0, xi)),
                                  a_.f_or(a_.f_and(i, a_.f_and(dpos, xni)),
                                          a_.f_and(a_.f_not(i), a_.f_and(dpos, xi))));
        FormulaId zacc = a_.cmp(CmpOp::Eq, a_.builtin(BuiltinFn::Sub, {a_.next_term(zeta()), zeta()}),
                                delta());
        FormulaId zreset = a_.f_and(a_.cmp(CmpOp::Ge, zeta(), q(1)),
                                    a_.cmp(CmpOp::Eq, a_.next_term(zeta()), q(0)));
        std::vector<FormulaId> parts = {
            i,
            a_.unary(FormulaKind::Globally, step3),
            a_.unary(FormulaKind::Globally, a_.f_or(zacc, zreset)),
            a_.unary(FormulaKind::Globally, a_.unary(FormulaKind::Finally, zreset)),
        };
        // Strictly-monotonic time has no zero-duration steps.
        if (model_ == TimeModelKind::Dense)
            parts.push_back(a_.unary(FormulaKind::Globally, dpos));
        return a_.f_and(parts);
    }

    // Net slope of a time term across an open interval: bare `time` moves
    // with t, frozen chains are piecewise constant.
    static int slope(const Arena& a, TermId tu) {
        return a.term(tu).kind == TermKind::TimeSym ? 1 : 0;
    }

    FormulaId psi_time(FormulaId core, FormulaId d_phi) {
        (void)d_phi;
        std::vector<FormulaId> parts;
        parts.push_back(a_.time_atom(time(), std::nullopt, CmpOp::Eq, q(0)));
        parts.push_back(a_.unary(
            FormulaKind::Globally,
            a_.cmp(CmpOp::Eq, a_.builtin(BuiltinFn::Sub, {a_.next_term(time()), time()}),
                   delta())));
        for (FormulaId sub : subformulas(a_, core)) {
            const FormulaNode& n = a_.formula(sub);
            if (n.kind != FormulaKind::TimeAtom) continue;
            parts.push_back(uniformity(n));
        }
        return a_.f_and(parts);
    }

    // Uniformity of time comparisons across open intervals.  For a bare
    // `time` comparison this is the sampled-crossing constraint in both
    // temporal directions; for difference atoms the constraint bounds the
    // in-interval range of the (affine, slope +-1) quantity; frozen-only
    // atoms are constant across open intervals and need nothing.
    FormulaId uniformity(const FormulaNode& atom) {
        TermId cu = atom.targs.back();
        TermId tu = atom.targs[0];
        std::optional<TermId> tu2;
        if (atom.count == 2) tu2 = atom.targs[1];
        int m = slope(a_, tu) - (tu2 ? slope(a_, *tu2) : 0);

        TermId dtu = translate_term(tu);
        std::optional<TermId> dtu2;
        if (tu2) dtu2 = translate_term(*tu2);

        if (!tu2 && m == 1) {
            // the paper's schema for plain `time` comparisons
            FormulaId le = a_.time_atom(dtu, std::nullopt, CmpOp::Le, cu);
            FormulaId ge = a_.time_atom(dtu, std::nullopt, CmpOp::Ge, cu);
            FormulaId body = a_.f_and(a_.implies(le, a_.unary(FormulaKind::Next, le)),
                                      a_.implies(ge, a_.unary(FormulaKind::Yesterday, ge)));
            return a_.unary(FormulaKind::Globally, a_.implies(a_.f_not(iota()), body));
        }
        if (m == 0) return a_.f_true();

        TermId qt = tu2 ? a_.builtin(BuiltinFn::Sub, {dtu, *dtu2}) : dtu;
        FormulaId far_side, prev_side;
        if (m == 1) {
            far_side = a_.cmp(CmpOp::Le, a_.builtin(BuiltinFn::Add, {qt, delta()}), cu);
            prev_side = a_.unary(FormulaKind::Yesterday, a_.cmp(CmpOp::Ge, qt, cu));
        } else {
            far_side = a_.cmp(CmpOp::Ge, a_.builtin(BuiltinFn::Sub, {qt, delta()}), cu);
            prev_side = a_.unary(FormulaKind::Yesterday, a_.cmp(CmpOp::Le, qt, cu));
        }
        return a_.unary(FormulaKind::Globally,
                        a_.implies(a_.f_not(iota()), a_.f_or(far_side, prev_side)));
    }

    // D on a bare term (used for the uniformity conjuncts, whose time terms
    // come from the source atoms).
    TermId translate_term(TermId t) { return rb().term(t); }

private:
    Workspace& ws_;
    Arena& a_;
    TimeModelKind model_;
    SymbolId iota_, delta_, zeta_;
    std::unique_ptr<Rebuilder> rb_;
};

// Monitor for discrete inputs: timestamps are non-decreasing and divergent.
DiscretizedProblem discrete_monitor(Workspace& ws, FormulaId core) {
    Arena& a = ws.arena;
    DiscretizedProblem out;
    out.model = TimeModelKind::Discrete;
    out.d_phi = core;
    out.psi_iota = a.f_true();
    out.vars.delta = ws.sig.fresh_state_var("delta", Sort::real());
    out.vars.zeta = ws.sig.fresh_state_var("zeta", Sort::real());
    TermId delta = a.symbol_term(out.vars.delta);
    TermId zeta = a.symbol_term(out.vars.zeta);
    TermId zero = a.rat_const(Rat(0));
    TermId one = a.rat_const(Rat(1));
    FormulaId dnonneg = a.cmp(CmpOp::Ge, delta, zero);
    FormulaId dt = a.cmp(CmpOp::Eq,
                         a.builtin(BuiltinFn::Sub, {a.next_term(a.time_sym()), a.time_sym()}),
                         delta);
    FormulaId zacc = a.cmp(CmpOp::Eq, a.builtin(BuiltinFn::Sub, {a.next_term(zeta), zeta}), delta);
    FormulaId zreset = a.f_and(a.cmp(CmpOp::Ge, zeta, one), a.cmp(CmpOp::Eq, a.next_term(zeta), zero));
    std::vector<FormulaId> parts = {
        a.time_atom(a.time_sym(), std::nullopt, CmpOp::Eq, zero),
        a.unary(FormulaKind::Globally, a.f_and(dnonneg, dt)),
        a.unary(FormulaKind::Globally, a.f_or(zacc, zreset)),
        a.unary(FormulaKind::Globally, a.unary(FormulaKind::Finally, zreset)),
    };
    out.psi_time = a.f_and(parts);
    out.full = a.f_and(out.d_phi, a.f_and(out.psi_iota, out.psi_time));
    return out;
}

}  // namespace

DiscretizedProblem discretize(Workspace& ws, FormulaId core, TimeModelKind model) {
    std::string bad = stage_violation(ws.arena, core, Stage::Core);
    if (!bad.empty()) throw std::logic_error("discretize precondition: " + bad);
    if (model == TimeModelKind::Discrete) return discrete_monitor(ws, core);

    Discretizer d(ws, model);
    DiscretizedProblem out;
    out.model = model;
    out.d_phi = d.translate(core);
    out.psi_iota = d.psi_iota();
    out.psi_time = d.psi_time(core, out.d_phi);
    out.full = ws.arena.f_and(out.d_phi, ws.arena.f_and(out.psi_iota, out.psi_time));
    out.vars.iota = d.iota_sym();
    out.vars.delta = d.delta_sym();
    out.vars.zeta = d.zeta_sym();

    bad = stage_violation(ws.arena, out.full, Stage::Discretized);
    if (!bad.empty()) throw std::logic_error("discretize postcondition: " + bad);
    return out;
}

PrevElimination eliminate_prev(Workspace& ws, FormulaId phi) {
    Arena& a = ws.arena;
    PrevElimination out;
    std::unordered_map<std::uint32_t, TermId> replacement;
    // Iterate until no prev() remains (monitor constraints cannot introduce
    // new prev wrappers, but substitution rounds keep this simple).
    FormulaId cur = phi;
    for (;;) {
        std::optional<TermId> found;
        for (TermId t : subterms(a, cur)) {
            if (a.term(t).kind == TermKind::PrevTerm) {
                found = t;
                break;
            }
        }
        if (!found) break;
        TermId wrapped = a.term(*found).args[0];
        if (a.term(wrapped).kind != TermKind::Ef)
            throw std::logic_error("prev() is only used around event-freezing terms");
        SymbolId def = a.ensure_default(wrapped);
        SymbolId m = ws.sig.fresh_state_var("prevm", a.sort_of(wrapped));
        TermId mt = a.symbol_term(m);
        out.monitors.push_back(m);
        out.constraints.push_back(mk_eq(a, mt, a.symbol_term(def)));
        out.constraints.push_back(
            a.unary(FormulaKind::Globally, mk_eq(a, a.next_term(mt), wrapped)));
        cur = substitute_term(a, cur, *found, mt);
    }
    out.formula = cur;
    return out;
}

}  // namespace xltlef
