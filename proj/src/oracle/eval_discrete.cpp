#include <algorithm>

#include "xltlef/eval.hpp"
#include "xltlef/traversal.hpp"

namespace xltlef {

namespace {

Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

class DiscreteEvaluator {
public:
    DiscreteEvaluator(Arena& a, const DiscreteLassoTrace& tr, FormulaId root)
        : a_(a), tr_(tr) {
        std::string bad = tr.validate();
        if (!bad.empty()) throw EvalError("invalid trace: " + bad);
        compute_horizon(root);
    }

    bool sat(FormulaId f, std::size_t i) {
        std::uint64_t key = (static_cast<std::uint64_t>(f.v) << 24) | i;
        auto it = fmemo_.find(key);
        if (it != fmemo_.end()) return it->second;
        bool r = sat_raw(f, i);
        fmemo_.emplace(key, r);
        return r;
    }

    Value val(TermId t, std::size_t i) {
        std::uint64_t key = (static_cast<std::uint64_t>(t.v) << 24) | i;
        auto it = tmemo_.find(key);
        if (it != tmemo_.end()) return it->second;
        Value r = val_raw(t, i);
        tmemo_.emplace(key, r);
        return r;
    }

private:
    // Beyond nstar_ every atom's truth is periodic with the loop length:
    // states repeat, time differences repeat, and absolute comparisons are
    // settled because time has outrun every relevant constant.
    void compute_horizon(FormulaId root) {
        Rat maxc(0);
        for (TermId t : subterms(a_, root)) {
            const TermNode& n = a_.term(t);
            if (n.kind == TermKind::RatConst || n.kind == TermKind::IntConst)
                maxc = std::max(maxc, rat_abs(n.value));
        }
        for (const auto& [sym, v] : tr_.params)
            if (!v.is_bool) maxc = std::max(maxc, rat_abs(v.q));
        Rat span = tr_.timestamps.back();
        std::size_t P = tr_.loop_start, L = tr_.loop_len();
        if (tr_.loop_dt == 0) {
            nstar_ = P + L;
        } else {
            Rat target = maxc * 2 + span + tr_.loop_dt * 12 + 1;
            Rat loops = (target - tr_.timestamps[P]) / tr_.loop_dt;
            long k = rat_floor_long(loops) + 2;
            if (k < 1) k = 1;
            nstar_ = P + L * static_cast<std::size_t>(k);
        }
        hard_cap_ = (nstar_ + 16 * L + 64) * 64;
    }

    std::size_t horizon(std::size_t i) const { return std::max(i + 1, nstar_) + tr_.loop_len(); }

    void bump() {
        if (++work_ > hard_cap_ * 1024ull)
            throw EvalError("trace evaluation horizon overflow");
    }

    // first j > i with phi, or nullopt if none exists (exact by periodicity)
    std::optional<std::size_t> first_after(FormulaId phi, std::size_t i) {
        for (std::size_t j = i + 1; j <= horizon(i); ++j) {
            bump();
            if (sat(phi, j)) return j;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> last_before(FormulaId phi, std::size_t i) {
        for (std::size_t j = i; j-- > 0;) {
            if (sat(phi, j)) return j;
        }
        return std::nullopt;
    }

    Value param_value(SymbolId s) const {
        auto it = tr_.params.find(s);
        if (it == tr_.params.end())
            throw EvalError("trace lacks a value for parameter '" + a_.sig().symbol(s).name +
                            "'");
        return it->second;
    }

    Value def_value(TermId ef_term) {
        SymbolId def = a_.ensure_default(ef_term);
        return param_value(def);
    }

    Rat num(const Value& v) const {
        if (v.is_bool) throw EvalError("boolean value in numeric position");
        return v.q;
    }

    bool cmp_holds(CmpOp op, const Rat& x, const Rat& y) const {
        switch (op) {
            case CmpOp::Eq: return x == y;
            case CmpOp::Le: return x <= y;
            case CmpOp::Lt: return x < y;
            case CmpOp::Ge: return x >= y;
            case CmpOp::Gt: return x > y;
        }
        return false;
    }

    bool in_interval(const Rat& d, const Interval& iv, std::size_t i) {
        Rat lo = num(val(iv.lo, i));
        if (iv.lo_open ? !(d > lo) : !(d >= lo)) return false;
        if (!iv.hi) return true;
        Rat hi = num(val(*iv.hi, i));
        return iv.hi_open ? d < hi : d <= hi;
    }

    // scan limit for metric windows; generous but finite
    std::size_t metric_horizon(std::size_t i, const Interval& iv) {
        std::size_t extra = 0;
        if (tr_.loop_dt > 0) {
            Rat lo = num(val(iv.lo, i));
            if (lo > 0) {
                Rat loops = lo / tr_.loop_dt;
                extra = tr_.loop_len() * static_cast<std::size_t>(rat_floor_long(loops) + 2);
            }
        }
        return horizon(i) + extra + tr_.loop_len();
    }

    bool sat_raw(FormulaId f, std::size_t i) {
        const FormulaNode& n = a_.formula(f);
        switch (n.kind) {
            case FormulaKind::True: return true;
            case FormulaKind::False: return false;
            case FormulaKind::BoolTerm: {
                Value v = val(n.targs[0], i);
                if (!v.is_bool) throw EvalError("non-boolean value in formula position");
                return v.b;
            }
            case FormulaKind::Pred:
                throw EvalError("uninterpreted predicates are not supported in traces");
            case FormulaKind::Cmp:
                return cmp_holds(n.cmp, num(val(n.targs[0], i)), num(val(n.targs[1], i)));
            case FormulaKind::TimeAtom: {
                Rat lhs = num(val(n.targs[0], i));
                if (n.count == 2) lhs -= num(val(n.targs[1], i));
                return cmp_holds(n.cmp, lhs, num(val(n.targs.back(), i)));
            }
            case FormulaKind::Not: return !sat(n.fargs[0], i);
            case FormulaKind::And: return sat(n.fargs[0], i) && sat(n.fargs[1], i);
            case FormulaKind::Or: return sat(n.fargs[0], i) || sat(n.fargs[1], i);
            case FormulaKind::Implies: return !sat(n.fargs[0], i) || sat(n.fargs[1], i);
            case FormulaKind::Iff: return sat(n.fargs[0], i) == sat(n.fargs[1], i);

            case FormulaKind::UntilStrict: return until_from(n.fargs[0], n.fargs[1], i + 1);
            case FormulaKind::Until: return until_from(n.fargs[0], n.fargs[1], i);
            case FormulaKind::SinceStrict: return since_from(n.fargs[0], n.fargs[1], i, true);
            case FormulaKind::Since: return since_from(n.fargs[0], n.fargs[1], i, false);
            case FormulaKind::Finally: return sat(n.fargs[0], i) || first_after(n.fargs[0], i).has_value();
            case FormulaKind::Globally: {
                for (std::size_t j = i; j <= horizon(i); ++j) {
                    bump();
                    if (!sat(n.fargs[0], j)) return false;
                }
                return true;
            }
            case FormulaKind::Once: {
                for (std::size_t j = i + 1; j-- > 0;)
                    if (sat(n.fargs[0], j)) return true;
                return false;
            }
            case FormulaKind::Historically: {
                for (std::size_t j = i + 1; j-- > 0;)
                    if (!sat(n.fargs[0], j)) return false;
                return true;
            }
            case FormulaKind::Next: return sat(n.fargs[0], i + 1);
            case FormulaKind::NextTilde: return false;  // no dense successor points
            case FormulaKind::Yesterday: return i > 0 && sat(n.fargs[0], i - 1);
            case FormulaKind::YesterdayTilde: return false;
            case FormulaKind::WeakYesterday: return i == 0 || sat(n.fargs[0], i - 1);
            case FormulaKind::WeakYesterdayTilde: return i == 0;
            case FormulaKind::UntilC:
                // X~ phi2 is identically false in discrete time, so U_C
                // collapses to the plain non-strict until
                return until_from(n.fargs[0], n.fargs[1], i);

            case FormulaKind::MetricFinally:
            case FormulaKind::MetricGlobally: {
                bool want = n.kind == FormulaKind::MetricFinally;
                FormulaId body = want ? n.fargs[0] : a_.f_not(n.fargs[0]);
                std::size_t start = n.strict ? i + 1 : i;
                bool found = metric_exists(body, i, start, *n.interval);
                return want ? found : !found;
            }
            case FormulaKind::MetricOnce:
            case FormulaKind::MetricHistorically: {
                bool want = n.kind == FormulaKind::MetricOnce;
                FormulaId body = want ? n.fargs[0] : a_.f_not(n.fargs[0]);
                bool found = false;
                for (std::size_t j = (n.strict ? i : i + 1); j-- > 0;) {
                    Rat d = tr_.time_at(i) - tr_.time_at(j);
                    if (in_interval(d, *n.interval, i) && sat(body, j)) {
                        found = true;
                        break;
                    }
                }
                return want ? found : !found;
            }
            case FormulaKind::MetricUntil: {
                if (!n.strict) {
                    if (in_interval(Rat(0), *n.interval, i) && sat(n.fargs[1], i)) return true;
                    if (!sat(n.fargs[0], i)) return false;
                }
                for (std::size_t j = i + 1; j <= metric_horizon(i, *n.interval); ++j) {
                    bump();
                    Rat d = tr_.time_at(j) - tr_.time_at(i);
                    if (in_interval(d, *n.interval, i) && sat(n.fargs[1], j)) return true;
                    if (n.interval->hi && d > num(val(*n.interval->hi, i))) return false;
                    if (!sat(n.fargs[0], j)) return false;
                }
                return false;
            }
            case FormulaKind::MetricSince: {
                if (!n.strict) {
                    if (in_interval(Rat(0), *n.interval, i) && sat(n.fargs[1], i)) return true;
                    if (!sat(n.fargs[0], i)) return false;
                }
                for (std::size_t j = i; j-- > 0;) {
                    Rat d = tr_.time_at(i) - tr_.time_at(j);
                    if (in_interval(d, *n.interval, i) && sat(n.fargs[1], j)) return true;
                    if (!sat(n.fargs[0], j)) return false;
                }
                return false;
            }
            case FormulaKind::EvClockF: {
                auto j = first_after(n.fargs[0], i);
                if (!j) return false;
                return in_interval(tr_.time_at(*j) - tr_.time_at(i), *n.interval, i);
            }
            case FormulaKind::EvClockP: {
                auto j = last_before(n.fargs[0], i);
                if (!j) return false;
                return in_interval(tr_.time_at(i) - tr_.time_at(*j), *n.interval, i);
            }
            case FormulaKind::CountFuture: {
                std::size_t pos = i;
                for (std::uint32_t s = 0; s < n.count; ++s) {
                    auto j = first_after(n.fargs[0], pos);
                    if (!j) return false;
                    pos = *j;
                }
                return tr_.time_at(pos) - tr_.time_at(i) < num(val(n.targs[0], i));
            }
            case FormulaKind::CountPast: {
                std::size_t pos = i;
                for (std::uint32_t s = 0; s < n.count; ++s) {
                    auto j = last_before(n.fargs[0], pos);
                    if (!j) return false;
                    pos = *j;
                }
                return tr_.time_at(i) - tr_.time_at(pos) < num(val(n.targs[0], i));
            }
        }
        throw EvalError("unhandled formula kind");
    }

    // exists j >= from: phi2(j) and phi1 on (i_origin, j) -- origin implied
    // by from (strict: from = i+1, non-strict: from = i)
    bool until_from(FormulaId p1, FormulaId p2, std::size_t from) {
        std::size_t base = from == 0 ? 0 : from - 1;
        for (std::size_t j = from; j <= horizon(base) + 1; ++j) {
            bump();
            if (sat(p2, j)) return true;
            if (!sat(p1, j)) return false;
        }
        return false;
    }

    bool since_from(FormulaId p1, FormulaId p2, std::size_t i, bool strict) {
        for (std::size_t j = (strict ? i : i + 1); j-- > 0;) {
            if (sat(p2, j)) return true;
            if (!sat(p1, j)) return false;
        }
        return false;
    }

    // metric exists: some j >= start with time(j)-time(i) in I and body(j)
    bool metric_exists(FormulaId body, std::size_t i, std::size_t start, const Interval& iv) {
        for (std::size_t j = start; j <= metric_horizon(i, iv); ++j) {
            bump();
            Rat d = tr_.time_at(j) - tr_.time_at(i);
            if (iv.hi && d > num(val(*iv.hi, i))) return false;
            if (in_interval(d, iv, i) && sat(body, j)) return true;
        }
        return false;
    }

    Value val_raw(TermId t, std::size_t i) {
        const TermNode& n = a_.term(t);
        switch (n.kind) {
            case TermKind::RatConst:
            case TermKind::IntConst:
                return Value::of_rat(n.value);
            case TermKind::Param:
                return param_value(n.sym);
            case TermKind::StateVar: {
                const Assignment& st = tr_.states[tr_.fold(i)];
                auto it = st.find(n.sym);
                if (it == st.end())
                    throw EvalError("trace lacks a value for variable '" +
                                    a_.sig().symbol(n.sym).name + "'");
                return it->second;
            }
            case TermKind::TimeSym:
                return Value::of_rat(tr_.time_at(i));
            case TermKind::Builtin: {
                if (n.fn == BuiltinFn::Neg) return Value::of_rat(-num(val(n.args[0], i)));
                Rat x = num(val(n.args[0], i));
                Rat y = num(val(n.args[1], i));
                switch (n.fn) {
                    case BuiltinFn::Add: return Value::of_rat(x + y);
                    case BuiltinFn::Sub: return Value::of_rat(x - y);
                    case BuiltinFn::Mul: return Value::of_rat(x * y);
                    case BuiltinFn::Div:
                        if (y == 0) throw EvalError("division by zero");
                        return Value::of_rat(x / y);
                    default: break;
                }
                throw EvalError("unhandled arithmetic");
            }
            case TermKind::UfApply:
                throw EvalError("uninterpreted functions are not supported in traces");
            case TermKind::IteTerm:
                return sat(n.cond, i) ? val(n.args[0], i) : val(n.args[1], i);
            case TermKind::NextTerm:
                return val(n.args[0], i + 1);
            case TermKind::PrevTerm: {
                if (i > 0) return val(n.args[0], i - 1);
                TermId w = n.args[0];
                if (a_.term(w).kind != TermKind::Ef)
                    throw EvalError("prev() of a non-freezing term at position 0");
                return def_value(w);
            }
            case TermKind::Ef:
                return ef_value(t, i);
        }
        throw EvalError("unhandled term kind");
    }

    Value ef_value(TermId t, std::size_t i) {
        const TermNode& n = a_.term(t);
        if (!n.strict) {
            // u@F(phi) := ite(phi, u, u@F~(phi))
            if (sat(n.cond, i)) return val(n.args[0], i);
            TermId st = a_.ef(n.dir, true, 1, n.args[0], n.cond);
            a_.ensure_default(st);
            return val(st, i);
        }
        if (n.iter > 1) {
            // (u@F~(phi)) @F~^{k-1}(phi): peel one level from the outside
            TermId inner = a_.ef(n.dir, true, n.iter - 1, n.args[0], n.cond);
            a_.ensure_default(inner);
            TermId outer = a_.ef(n.dir, true, 1, inner, n.cond);
            a_.ensure_default(outer);
            return val(outer, i);
        }
        std::optional<std::size_t> j = n.dir == EfDir::Future ? first_after(n.cond, i)
                                                              : last_before(n.cond, i);
        if (!j) return def_value(t);
        return val(n.args[0], *j);
    }

    Arena& a_;
    const DiscreteLassoTrace& tr_;
    std::size_t nstar_ = 0;
    std::size_t hard_cap_ = 1 << 20;
    std::uint64_t work_ = 0;
    std::unordered_map<std::uint64_t, bool> fmemo_;
    std::unordered_map<std::uint64_t, Value> tmemo_;
};

}  // namespace

bool eval_discrete(Arena& a, const DiscreteLassoTrace& tr, std::size_t i, FormulaId phi) {
    DiscreteEvaluator ev(a, tr, phi);
    return ev.sat(phi, i);
}

Value eval_term(Arena& a, const DiscreteLassoTrace& tr, std::size_t i, TermId u) {
    FormulaId probe = a.sort_of(u).kind == SortKind::Bool ? a.bool_term(u)
                                                          : a.cmp(CmpOp::Eq, u, u);
    DiscreteEvaluator ev(a, tr, probe);
    return ev.val(u, i);
}

}  // namespace xltlef
