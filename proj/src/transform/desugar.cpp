#include "xltlef/desugar.hpp"

namespace xltlef {

namespace {

// Interval shape for the MTL_0^inf encodings.
struct IvShape {
    bool zero_anchored = false;  // lo is the literal 0
    bool unbounded = false;      // hi is +inf
};

IvShape classify(const Arena& a, const Interval& iv) {
    IvShape s;
    const TermNode& lo = a.term(iv.lo);
    s.zero_anchored = lo.kind == TermKind::RatConst && lo.value == 0;
    s.unbounded = !iv.hi.has_value();
    return s;
}

class MetricEncoder {
public:
    MetricEncoder(Arena& a, DesugarMutation mut) : a_(a), mut_(mut) {}

    FormulaId run(FormulaId phi) {
        Rebuilder rb(a_);
        rb.formula_hook = [this](Arena&, FormulaId, FormulaId f) -> std::optional<FormulaId> {
            const FormulaNode& n = a_.formula(f);
            switch (n.kind) {
                case FormulaKind::MetricFinally:
                    return finally_like(EfDir::Future, n.strict, *n.interval, n.fargs[0]);
                case FormulaKind::MetricOnce:
                    return finally_like(EfDir::Past, n.strict, *n.interval, n.fargs[0]);
                case FormulaKind::MetricGlobally:
                    return a_.f_not(
                        finally_like(EfDir::Future, n.strict, *n.interval, a_.f_not(n.fargs[0])));
                case FormulaKind::MetricHistorically:
                    return a_.f_not(
                        finally_like(EfDir::Past, n.strict, *n.interval, a_.f_not(n.fargs[0])));
                case FormulaKind::MetricUntil:
                    return until_like(EfDir::Future, n.strict, *n.interval, n.fargs[0],
                                      n.fargs[1]);
                case FormulaKind::MetricSince:
                    return until_like(EfDir::Past, n.strict, *n.interval, n.fargs[0], n.fargs[1]);
                case FormulaKind::EvClockF:
                    return ev_clock(EfDir::Future, *n.interval, n.fargs[0]);
                case FormulaKind::EvClockP:
                    return ev_clock(EfDir::Past, *n.interval, n.fargs[0]);
                case FormulaKind::CountFuture:
                    return counting(EfDir::Future, n.count, n.targs[0], n.fargs[0]);
                case FormulaKind::CountPast:
                    return counting(EfDir::Past, n.count, n.targs[0], n.fargs[0]);
                default:
                    return std::nullopt;
            }
        };
        return rb.formula(phi);
    }

private:
    // ---- small builders -------------------------------------------------

    TermId time() { return a_.time_sym(); }
    TermId zero() { return a_.rat_const(Rat(0)); }
    static EfDir rev(EfDir d) { return d == EfDir::Future ? EfDir::Past : EfDir::Future; }

    TermId freeze(EfDir dir, FormulaId trigger, std::uint32_t iter = 1) {
        TermId t = a_.ef(dir, true, iter, time(), trigger);
        a_.ensure_default(t);
        return t;
    }

    // delay-to-trigger comparison:
    //   future: time@F~(trigger) - time  cmp  bound
    //   past:   time - time@P~(trigger)  cmp  bound
    FormulaId diff_atom(EfDir dir, FormulaId trigger, CmpOp op, TermId bound,
                        std::uint32_t iter = 1) {
        return diff_atom_term(dir, freeze(dir, trigger, iter), op, bound);
    }

    FormulaId diff_atom_term(EfDir dir, TermId frozen, CmpOp op, TermId bound) {
        if (dir == EfDir::Future) return a_.time_atom(frozen, time(), op, bound);
        return a_.time_atom(time(), frozen, op, bound);
    }

    FormulaId strict_f(EfDir dir, FormulaId x) {
        return dir == EfDir::Future ? a_.until_strict(a_.f_true(), x)
                                    : a_.since_strict(a_.f_true(), x);
    }

    FormulaId strict_u(EfDir dir, FormulaId l, FormulaId r) {
        return dir == EfDir::Future ? a_.until_strict(l, r) : a_.since_strict(l, r);
    }

    // the first point where x holds is reached at a point, not as an
    // open-interval onset
    FormulaId attained(EfDir dir, FormulaId x) { return strict_u(dir, a_.f_not(x), x); }

    // X~ x (future) / Y~ x (past)
    FormulaId onset_of(EfDir dir, FormulaId x) {
        return a_.unary(dir == EfDir::Future ? FormulaKind::NextTilde
                                             : FormulaKind::YesterdayTilde,
                        x);
    }

    // zero-duration step adjacent in the given direction
    FormulaId zero_step(EfDir dir) {
        FormulaId step = a_.unary(
            dir == EfDir::Future ? FormulaKind::Next : FormulaKind::Yesterday, a_.f_true());
        FormulaId same_time = diff_atom(dir, a_.f_true(), CmpOp::Le, zero());
        return a_.f_and(step, same_time);
    }

    CmpOp closed_cmp(bool open) { return open ? CmpOp::Lt : CmpOp::Le; }

    CmpOp attained_upper_cmp(bool hi_open) {
        if (mut_ == DesugarMutation::FlipAttainedBound) return CmpOp::Lt;
        return closed_cmp(hi_open);
    }

    [[noreturn]] void reject() {
        throw UnsupportedMetric(
            "metric operator interval outside MTL_0^inf (singular or doubly-bounded "
            "non-zero-anchored); the event-clock operators |>[I] and <|[I] support "
            "general intervals for first-occurrence constraints");
    }

    // ---- F_I / P_I --------------------------------------------------------

    // Strict search bounded above, zero-anchored closed below: the first
    // occurrence minimizes the delay, so compare its delay against the
    // bound, weakening <= to < when the occurrence is an open-interval
    // onset (the infimum delay is not attained there).
    FormulaId f_bounded_core(EfDir dir, FormulaId body, TermId hi, bool hi_open) {
        FormulaId exists = strict_f(dir, body);
        FormulaId att = attained(dir, body);
        FormulaId on_att = diff_atom(dir, body, attained_upper_cmp(hi_open), hi);
        FormulaId on_onset = diff_atom(dir, body, CmpOp::Lt, hi);
        return a_.f_and(exists, a_.f_or(a_.f_and(att, on_att),
                                        a_.f_and(a_.f_not(att), on_onset)));
    }

    // Walk the maximal chain of zero-duration steps (where `along` must
    // keep holding) and evaluate `at_exit` at its end; excludes zero-delay
    // witnesses for lower-open intervals.
    FormulaId skip_zero_steps(EfDir dir, FormulaId along, FormulaId at_exit) {
        FormulaId z = zero_step(dir);
        FormulaId exit_now = a_.f_and(a_.f_not(z), at_exit);
        FormulaId walk = a_.binary(dir == EfDir::Future ? FormulaKind::Until : FormulaKind::Since,
                                   a_.f_and(z, along),
                                   a_.f_and(a_.f_not(z), a_.f_and(along, at_exit)));
        return a_.f_or(exit_now, a_.f_and(z, walk));
    }

    FormulaId f_zero_anchored(EfDir dir, const Interval& iv, FormulaId body) {
        FormulaId closed = f_bounded_core(dir, body, *iv.hi, iv.hi_open);
        if (!iv.lo_open) return closed;
        return skip_zero_steps(dir, a_.f_true(), closed);
    }

    // F~[a,inf) phi == every point with delay below a still sees a future
    // occurrence (exact under finite variability); mirrored for the past.
    FormulaId f_lower_bounded(EfDir dir, const Interval& iv, FormulaId body) {
        TermId aT = iv.lo;
        FormulaId exists = strict_f(dir, body);
        FormulaId triv_guard = a_.cmp(iv.lo_open ? CmpOp::Lt : CmpOp::Le, aT, zero());
        FormulaId triv = a_.f_and(triv_guard, exists);
        FormulaId guard = a_.cmp(iv.lo_open ? CmpOp::Ge : CmpOp::Gt, aT, zero());
        Interval inner = iv.lo_open ? a_.interval(zero(), aT, false, false)
                                    : a_.interval(zero(), aT, false, true);
        FormulaId viol = f_zero_anchored(dir, inner, a_.f_not(exists));
        FormulaId proper = a_.f_and(guard, a_.f_and(exists, a_.f_not(viol)));
        return a_.f_or(triv, proper);
    }

    FormulaId f_strict(EfDir dir, const Interval& iv, FormulaId body) {
        IvShape s = classify(a_, iv);
        if (s.unbounded) return f_lower_bounded(dir, iv, body);
        if (s.zero_anchored) return f_zero_anchored(dir, iv, body);
        reject();
    }

    // membership of delay 0 in I, as a rigid condition
    FormulaId zero_in(const Interval& iv) {
        IvShape s = classify(a_, iv);
        if (s.unbounded)
            return a_.cmp(iv.lo_open ? CmpOp::Gt : CmpOp::Ge, zero(), iv.lo);
        return iv.lo_open ? a_.f_false() : a_.f_true();  // zero-anchored bounded
    }

    FormulaId finally_like(EfDir dir, bool strict, const Interval& iv, FormulaId body) {
        FormulaId str = f_strict(dir, iv, body);
        if (strict) return str;
        return a_.f_or(a_.f_and(zero_in(iv), body), str);
    }

    // ---- U_I / S_I --------------------------------------------------------

    // Bounded zero-anchored strict until: the earliest admissible witness
    // sits at the first point where (phi2 | !phi1) holds; it counts only in
    // the phi2 flavors, attained at a point or as an onset interval where
    // phi1 holds too.
    FormulaId u_bounded_core(EfDir dir, FormulaId p1, FormulaId p2, TermId hi, bool hi_open) {
        FormulaId rho = a_.f_or(p2, a_.f_not(p1));
        FormulaId not_rho = a_.f_and(p1, a_.f_not(p2));
        FormulaId w_att = strict_u(dir, not_rho, p2);
        FormulaId both = a_.f_and(p1, p2);
        FormulaId w_onset_later = strict_u(dir, not_rho, a_.f_and(not_rho, onset_of(dir, both)));
        FormulaId w_onset_now = onset_of(dir, both);
        FormulaId d_att = diff_atom(dir, rho, attained_upper_cmp(hi_open), hi);
        FormulaId d_onset = diff_atom(dir, rho, CmpOp::Lt, hi);
        return a_.f_or(a_.f_and(w_att, d_att),
                       a_.f_and(a_.f_or(w_onset_now, w_onset_later), d_onset));
    }

    FormulaId u_zero_anchored(EfDir dir, const Interval& iv, FormulaId p1, FormulaId p2) {
        FormulaId closed = u_bounded_core(dir, p1, p2, *iv.hi, iv.hi_open);
        if (!iv.lo_open) return closed;
        return skip_zero_steps(dir, p1, closed);
    }

    // The last phi2 time inside the phi1 run, via composed freezing:
    //   future: (time@P~(phi2)) @F~(!phi1)
    //   past:   (time@F~(phi2)) @P~(!phi1)
    TermId run_interior_time(EfDir dir, FormulaId p2, FormulaId not1) {
        TermId inner = freeze(rev(dir), p2);
        TermId outer = a_.ef(dir, true, 1, inner, not1);
        a_.ensure_default(outer);
        return outer;
    }

    // Interior-witness disjunct for the lower-bounded until: a phi2 point
    // strictly inside the run, far enough from now.  `pin` holds exactly at
    // the run break (the first !phi1 point, or the point where the !phi1
    // interval opens).
    FormulaId interior_witness(EfDir dir, FormulaId p1, FormulaId p2, FormulaId not1,
                               FormulaId pin, CmpOp point_cmp, TermId aT) {
        TermId tpf = run_interior_time(dir, p2, not1);
        FormulaId q_att = attained(rev(dir), p2);   // last/first phi2 attained at a point
        FormulaId q_onset = onset_of(rev(dir), p2); // phi2 interval abuts the break
        FormulaId walk_att = strict_u(dir, p1, a_.f_and(pin, q_att));
        FormulaId walk_onset = strict_u(dir, p1, a_.f_and(pin, q_onset));
        FormulaId atom_att = diff_atom_term(dir, tpf, point_cmp, aT);
        FormulaId atom_onset = diff_atom_term(dir, tpf, CmpOp::Gt, aT);
        return a_.f_or(a_.f_and(walk_att, atom_att), a_.f_and(walk_onset, atom_onset));
    }

    FormulaId u_lower_bounded(EfDir dir, const Interval& iv, FormulaId p1, FormulaId p2) {
        TermId aT = iv.lo;
        FormulaId not1 = a_.f_not(p1);
        CmpOp point_cmp = iv.lo_open ? CmpOp::Gt : CmpOp::Ge;
        FormulaId exists2 = strict_f(dir, p2);

        // phi1 never breaks: any far-enough phi2 occurrence qualifies
        FormulaId g_case = a_.f_and(a_.f_not(strict_f(dir, not1)),
                                    f_lower_bounded(dir, iv, p2));

        FormulaId d_break_ok = diff_atom(dir, not1, point_cmp, aT);
        // break attained at a point
        FormulaId a_flag = strict_u(dir, p1, not1);
        FormulaId a1 = a_.f_and(strict_u(dir, p1, a_.f_and(not1, p2)), d_break_ok);
        FormulaId a2 = interior_witness(dir, p1, p2, not1, not1, point_cmp, aT);
        FormulaId a_case = a_.f_and(a_flag, a_.f_or(a1, a2));

        // break opens as an interval right after a point
        FormulaId o_pin = onset_of(dir, not1);
        FormulaId o_flag = a_.f_and(strict_f(dir, not1), a_.f_not(a_flag));
        FormulaId o1 = a_.f_and(strict_u(dir, p1, a_.f_and(p2, o_pin)), d_break_ok);
        FormulaId o2 = interior_witness(dir, p1, p2, not1, o_pin, point_cmp, aT);
        FormulaId o_case = a_.f_and(o_flag, a_.f_or(o1, o2));

        FormulaId machinery =
            a_.f_and(exists2, a_.f_or(g_case, a_.f_or(a_case, o_case)));

        FormulaId triv_guard = a_.cmp(iv.lo_open ? CmpOp::Lt : CmpOp::Le, aT, zero());
        FormulaId proper_guard = a_.cmp(iv.lo_open ? CmpOp::Ge : CmpOp::Gt, aT, zero());
        return a_.f_or(a_.f_and(triv_guard, strict_u(dir, p1, p2)),
                       a_.f_and(proper_guard, machinery));
    }

    FormulaId u_strict(EfDir dir, const Interval& iv, FormulaId p1, FormulaId p2) {
        IvShape s = classify(a_, iv);
        if (s.unbounded) return u_lower_bounded(dir, iv, p1, p2);
        if (s.zero_anchored) return u_zero_anchored(dir, iv, p1, p2);
        reject();
    }

    FormulaId until_like(EfDir dir, bool strict, const Interval& iv, FormulaId p1,
                         FormulaId p2) {
        FormulaId str = u_strict(dir, iv, p1, p2);
        if (strict) return str;
        return a_.f_or(a_.f_and(zero_in(iv), p2), a_.f_and(p1, str));
    }

    // ---- |>_I / <|_I -------------------------------------------------------

    FormulaId ev_clock(EfDir dir, const Interval& iv, FormulaId body) {
        std::vector<FormulaId> parts;
        parts.push_back(diff_atom(dir, body, iv.lo_open ? CmpOp::Gt : CmpOp::Ge, iv.lo));
        if (iv.hi)
            parts.push_back(diff_atom(dir, body, iv.hi_open ? CmpOp::Lt : CmpOp::Le, *iv.hi));
        parts.push_back(strict_u(dir, a_.f_not(body), body));
        return a_.f_and(parts);
    }

    // ---- counting -----------------------------------------------------------

    FormulaId nested_strict_f(EfDir dir, FormulaId body, std::uint32_t k) {
        FormulaId acc = strict_f(dir, body);
        for (std::uint32_t i = 1; i < k; ++i) acc = strict_f(dir, a_.f_and(body, acc));
        return acc;
    }

    FormulaId counting(EfDir dir, std::uint32_t k, TermId bound, FormulaId body) {
        FormulaId d = diff_atom(dir, body, CmpOp::Lt, bound, k);
        return a_.f_and(d, nested_strict_f(dir, body, k));
    }

    Arena& a_;
    DesugarMutation mut_;
};

// ---- expand: abbreviation unfolding to the core fragment ------------------

class Expander {
public:
    explicit Expander(Arena& a) : a_(a) {}

    FormulaId run(FormulaId phi) { return formula(phi); }

private:
    FormulaId core_or(FormulaId x, FormulaId y) {
        return a_.f_not(a_.f_and(a_.f_not(x), a_.f_not(y)));
    }
    FormulaId core_implies(FormulaId x, FormulaId y) { return a_.f_not(a_.f_and(x, a_.f_not(y))); }

    FormulaId x_top() { return a_.until_strict(a_.f_false(), a_.f_true()); }
    FormulaId y_top() { return a_.since_strict(a_.f_false(), a_.f_true()); }
    FormulaId xt_core(FormulaId x) {  // X~ phi := phi U~ T  &  !X T
        return a_.f_and(a_.until_strict(x, a_.f_true()), a_.f_not(x_top()));
    }
    FormulaId yt_core(FormulaId x) {
        return a_.f_and(a_.since_strict(x, a_.f_true()), a_.f_not(y_top()));
    }
    FormulaId yt_top() { return yt_core(a_.f_true()); }
    FormulaId until_core(FormulaId x, FormulaId y) {  // x U y := y | (x & x U~ y)
        return core_or(y, a_.f_and(x, a_.until_strict(x, y)));
    }
    FormulaId since_core(FormulaId x, FormulaId y) {
        return core_or(y, a_.f_and(x, a_.since_strict(x, y)));
    }

    FormulaId formula(FormulaId f) {
        auto it = fmemo_.find(f.v);
        if (it != fmemo_.end()) return it->second;
        const FormulaNode n = a_.formula(f);
        FormulaId r;
        switch (n.kind) {
            case FormulaKind::Pred: {
                std::vector<TermId> args;
                for (auto t : n.targs) args.push_back(term(t));
                r = a_.pred(n.sym, std::move(args));
                break;
            }
            case FormulaKind::Cmp:
                r = a_.cmp(n.cmp, term(n.targs[0]), term(n.targs[1]));
                break;
            case FormulaKind::BoolTerm:
                r = a_.bool_term(term(n.targs[0]));
                break;
            case FormulaKind::TimeAtom:
                r = n.count == 2 ? a_.time_atom(term(n.targs[0]), term(n.targs[1]), n.cmp,
                                                term(n.targs[2]))
                                 : a_.time_atom(term(n.targs[0]), std::nullopt, n.cmp,
                                                term(n.targs[1]));
                break;
            case FormulaKind::True:
            case FormulaKind::False:
                r = f;
                break;
            case FormulaKind::Not: r = a_.f_not(formula(n.fargs[0])); break;
            case FormulaKind::And:
                r = a_.f_and(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::UntilStrict:
                r = a_.until_strict(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::SinceStrict:
                r = a_.since_strict(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::Or:
                r = core_or(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::Implies:
                r = core_implies(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::Iff: {
                FormulaId x = formula(n.fargs[0]);
                FormulaId y = formula(n.fargs[1]);
                r = a_.f_and(core_implies(x, y), core_implies(y, x));
                break;
            }
            case FormulaKind::Until:
                r = until_core(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::Since:
                r = since_core(formula(n.fargs[0]), formula(n.fargs[1]));
                break;
            case FormulaKind::Finally:
                r = core_or(formula(n.fargs[0]), a_.until_strict(a_.f_true(), formula(n.fargs[0])));
                break;
            case FormulaKind::Globally: {
                FormulaId nx = a_.f_not(formula(n.fargs[0]));
                r = a_.f_not(core_or(nx, a_.until_strict(a_.f_true(), nx)));
                break;
            }
            case FormulaKind::Once:
                r = core_or(formula(n.fargs[0]), a_.since_strict(a_.f_true(), formula(n.fargs[0])));
                break;
            case FormulaKind::Historically: {
                FormulaId nx = a_.f_not(formula(n.fargs[0]));
                r = a_.f_not(core_or(nx, a_.since_strict(a_.f_true(), nx)));
                break;
            }
            case FormulaKind::Next:
                r = a_.until_strict(a_.f_false(), formula(n.fargs[0]));
                break;
            case FormulaKind::Yesterday:
                r = a_.since_strict(a_.f_false(), formula(n.fargs[0]));
                break;
            case FormulaKind::NextTilde: r = xt_core(formula(n.fargs[0])); break;
            case FormulaKind::YesterdayTilde: r = yt_core(formula(n.fargs[0])); break;
            case FormulaKind::WeakYesterday: {
                // Z phi := (Y T | Y~ T) -> Y phi
                FormulaId y = a_.since_strict(a_.f_false(), formula(n.fargs[0]));
                r = core_implies(core_or(y_top(), yt_top()), y);
                break;
            }
            case FormulaKind::WeakYesterdayTilde: {
                FormulaId yt = yt_core(formula(n.fargs[0]));
                r = core_implies(core_or(y_top(), yt_top()), yt);
                break;
            }
            case FormulaKind::UntilC: {
                // x U_C y := x U (y | (x & X~ y))
                FormulaId x = formula(n.fargs[0]);
                FormulaId y = formula(n.fargs[1]);
                FormulaId target = core_or(y, a_.f_and(x, xt_core(y)));
                r = until_core(x, target);
                break;
            }
            default:
                throw std::logic_error("metric sugar must be encoded before expansion");
        }
        fmemo_.emplace(f.v, r);
        return r;
    }

    TermId term(TermId t) {
        auto it = tmemo_.find(t.v);
        if (it != tmemo_.end()) return it->second;
        const TermNode n = a_.term(t);
        TermId r;
        switch (n.kind) {
            case TermKind::RatConst:
            case TermKind::IntConst:
            case TermKind::Param:
            case TermKind::StateVar:
            case TermKind::TimeSym:
                r = t;
                break;
            case TermKind::Builtin: {
                std::vector<TermId> args;
                for (auto x : n.args) args.push_back(term(x));
                r = a_.builtin(n.fn, std::move(args));
                break;
            }
            case TermKind::UfApply: {
                std::vector<TermId> args;
                for (auto x : n.args) args.push_back(term(x));
                r = a_.uf_apply(n.sym, std::move(args));
                break;
            }
            case TermKind::IteTerm:
                r = a_.ite_term(formula(n.cond), term(n.args[0]), term(n.args[1]));
                break;
            case TermKind::Ef: {
                TermId u = term(n.args[0]);
                FormulaId trig = formula(n.cond);
                if (!n.strict) {
                    // u@F(phi) := ite(phi, u, u@F~(phi)); dual for the past
                    TermId st = a_.ef(n.dir, true, 1, u, trig);
                    a_.ensure_default(st);
                    r = a_.ite_term(trig, u, st);
                } else {
                    // u@F~^{i+1}(phi) := (u@F~(phi))@F~^{i}(phi)
                    r = u;
                    for (std::uint32_t i = 0; i < n.iter; ++i) {
                        r = a_.ef(n.dir, true, 1, r, trig);
                        a_.ensure_default(r);
                    }
                }
                break;
            }
            case TermKind::NextTerm:
            case TermKind::PrevTerm:
                throw std::logic_error("next/prev cannot appear before discretization");
        }
        tmemo_.emplace(t.v, r);
        return r;
    }

    Arena& a_;
    std::unordered_map<std::uint32_t, FormulaId> fmemo_;
    std::unordered_map<std::uint32_t, TermId> tmemo_;
};

}  // namespace

FormulaId encode_metric(Arena& a, FormulaId phi, DesugarMutation mutation) {
    return MetricEncoder(a, mutation).run(phi);
}

FormulaId expand(Arena& a, FormulaId phi) { return Expander(a).run(phi); }

FormulaId desugar_to_core(Arena& a, FormulaId phi, DesugarMutation mutation) {
    FormulaId core = expand(a, encode_metric(a, phi, mutation));
    std::string bad = stage_violation(a, core, Stage::Core);
    if (!bad.empty()) throw std::logic_error("desugar postcondition: " + bad);
    return core;
}

}  // namespace xltlef
