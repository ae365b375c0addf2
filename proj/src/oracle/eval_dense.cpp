#include <algorithm>
#include <set>

#include "xltlef/eval.hpp"
#include "xltlef/traversal.hpp"

namespace xltlef {

namespace {

Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// ---------------------------------------------------------------------------
// Refinement: split open intervals so that every time comparison and every
// metric operator in the formula has constant truth across each entry.
// Splitting is semantically neutral (the underlying dense model is the
// same), so extra splits are always safe.
// ---------------------------------------------------------------------------

class DenseEvaluator {
public:
    DenseEvaluator(Arena& a, const IntervalTrace& input, FormulaId root)
        : a_(a), tr_(input) {
        std::string bad = tr_.validate();
        if (!bad.empty()) throw EvalError("invalid trace: " + bad);
        collect_constants(root);
        unroll();
        refine(root);
        compute_horizon();
    }

    // map a point in the original trace onto the refined entry sequence
    std::size_t locate(const DensePoint& p, const IntervalTrace& orig, std::optional<Rat>* at) {
        std::size_t j = p.entry;
        Rat shift = orig.shift(j);
        // position within the unrolled explicit sequence keeps the same
        // infinite index; find its refined block
        std::size_t unrolled = j;  // unrolling preserves infinite indices
        std::size_t expl = unrolled < block_of_.size()
                               ? unrolled
                               : loop_begin_ + (unrolled - loop_begin_) % loop_len_unrolled_;
        std::size_t wrap = unrolled < block_of_.size()
                               ? 0
                               : (unrolled - loop_begin_) / loop_len_unrolled_;
        const auto& blk = block_of_[expl];
        Rat extra_shift = Rat(static_cast<long>(wrap)) * loop_span_;
        if (orig.entries[orig.fold(j)].singular) {
            if (at) *at = std::nullopt;
            return blk.first + wrap * rloop_len();
        }
        if (!p.at) throw EvalError("open-interval point requires an instant");
        Rat t = *p.at + shift;
        Rat t_folded = t - extra_shift;
        for (std::size_t r = blk.first; r < blk.second; ++r) {
            const auto& e = rentries_[r];
            bool inside = e.singular ? (t_folded == e.lo) : (e.lo < t_folded && t_folded < e.hi);
            if (inside) {
                if (at) *at = e.singular ? std::optional<Rat>() : std::optional<Rat>(t_folded);
                return r + wrap * rloop_len();
            }
        }
        throw EvalError("point does not lie inside its entry");
    }

    bool sat(FormulaId f, std::size_t j) {
        std::uint64_t key = (static_cast<std::uint64_t>(f.v) << 24) | j;
        auto it = fmemo_.find(key);
        if (it != fmemo_.end()) return it->second;
        bool r = sat_raw(f, j);
        fmemo_.emplace(key, r);
        return r;
    }

    Value val(TermId t, std::size_t j) { return val_at(t, j, rep(j)); }

    // value of a term at an exact point (entry j, instant tp)
    Value val_at(TermId t, std::size_t j, const Rat& tp) {
        const TermNode& n = a_.term(t);
        switch (n.kind) {
            case TermKind::RatConst:
            case TermKind::IntConst:
                return Value::of_rat(n.value);
            case TermKind::Param: {
                auto it = tr_.params.find(n.sym);
                if (it == tr_.params.end())
                    throw EvalError("trace lacks a value for parameter '" +
                                    a_.sig().symbol(n.sym).name + "'");
                return it->second;
            }
            case TermKind::StateVar: {
                const Assignment& st = rstate(j);
                auto it = st.find(n.sym);
                if (it == st.end())
                    throw EvalError("trace lacks a value for variable '" +
                                    a_.sig().symbol(n.sym).name + "'");
                return it->second;
            }
            case TermKind::TimeSym:
                return Value::of_rat(tp);
            case TermKind::Builtin: {
                if (n.fn == BuiltinFn::Neg)
                    return Value::of_rat(-num(val_at(n.args[0], j, tp)));
                Rat x = num(val_at(n.args[0], j, tp));
                Rat y = num(val_at(n.args[1], j, tp));
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
                return sat(n.cond, j) ? val_at(n.args[0], j, tp) : val_at(n.args[1], j, tp);
            case TermKind::Ef:
                return ef_value(t, j, tp);
            case TermKind::NextTerm:
            case TermKind::PrevTerm:
                throw EvalError("next/prev have no dense semantics");
        }
        throw EvalError("unhandled term kind");
    }

private:
    struct REntry {
        bool singular = true;
        Rat lo, hi;
        std::size_t src;  // explicit unrolled-entry index (state source)
    };

    // ---- working-copy geometry ----

    std::size_t rsize() const { return rentries_.size(); }
    std::size_t rloop_start() const { return rloop_start_; }
    std::size_t rloop_len() const { return rentries_.size() - rloop_start_; }
    std::size_t rfold(std::size_t j) const {
        return j < rsize() ? j : rloop_start_ + (j - rloop_start_) % rloop_len();
    }
    Rat rshift(std::size_t j) const {
        if (j < rsize()) return Rat(0);
        return Rat(static_cast<long>((j - rloop_start_) / rloop_len())) * loop_span_;
    }
    bool rsingular(std::size_t j) const { return rentries_[rfold(j)].singular; }
    Rat rlo(std::size_t j) const { return rentries_[rfold(j)].lo + rshift(j); }
    Rat rhi(std::size_t j) const { return rentries_[rfold(j)].hi + rshift(j); }
    const Assignment& rstate(std::size_t j) const {
        return states_[rentries_[rfold(j)].src];
    }
    Rat rep(std::size_t j) const {
        const REntry& e = rentries_[rfold(j)];
        if (e.singular) return e.lo + rshift(j);
        return (e.lo + e.hi) / 2 + rshift(j);
    }

    Rat num(const Value& v) const {
        if (v.is_bool) throw EvalError("boolean value in numeric position");
        return v.q;
    }

    // ---- setup ----

    void collect_constants(FormulaId root) {
        Rat sum(1);
        for (TermId t : subterms(a_, root)) {
            const TermNode& n = a_.term(t);
            if (n.kind == TermKind::RatConst || n.kind == TermKind::IntConst)
                sum += rat_abs(n.value);
        }
        for (const auto& [sym, v] : tr_.params)
            if (!v.is_bool) sum += rat_abs(v.q);
        const_sum_ = sum;
    }

    void unroll() {
        // enough loop copies that every absolute comparison settles inside
        // the explicit prefix
        Rat target = const_sum_ * 2 + tr_.entries.back().hi + tr_.loop_dt * 4 + 1;
        std::size_t copies = 0;
        Rat end = tr_.entries.back().hi;
        while (end <= target) {
            end += tr_.loop_dt;
            ++copies;
        }
        copies += 2;
        std::size_t L = tr_.loop_len();
        loop_begin_ = tr_.loop_start + copies * L;
        loop_len_unrolled_ = L;
        loop_span_ = tr_.loop_dt;
        // explicit entries: prefix + copies of the loop + one loop block
        // that forms the refined loop region
        std::size_t total = tr_.loop_start + (copies + 1) * L;
        block_of_.resize(total);
        for (std::size_t e = 0; e < total; ++e) {
            std::size_t base = e < tr_.entries.size()
                                   ? e
                                   : tr_.loop_start + (e - tr_.loop_start) % L;
            Rat shift = e < tr_.entries.size()
                            ? Rat(0)
                            : Rat(static_cast<long>((e - tr_.loop_start) / L)) * tr_.loop_dt;
            const IntervalEntry& src = tr_.entries[base];
            REntry r;
            r.singular = src.singular;
            r.lo = src.lo + shift;
            r.hi = src.hi + shift;
            r.src = e;
            states_.push_back(src.state);
            block_of_[e] = {rentries_.size(), rentries_.size() + 1};
            rentries_.push_back(r);
        }
        rloop_start_ = loop_begin_;
    }

    // split the open refined entry at absolute instant s (no-op when s does
    // not fall strictly inside an open entry of the representative window)
    bool split_at(Rat s) {
        Rat loop_lo = rentries_[rloop_start_].lo;
        Rat loop_hi = loop_lo + loop_span_;
        Rat s_look = s;
        std::size_t begin = 0;
        if (s >= loop_hi) {
            // beyond the explicit window: the split is periodic, apply it
            // to the base loop block only
            while (s_look >= loop_hi) s_look -= loop_span_;
            begin = rloop_start_;
        }
        for (std::size_t r = begin; r < rentries_.size(); ++r) {
            REntry& e = rentries_[r];
            if (e.singular) continue;
            if (!(e.lo < s_look && s_look < e.hi)) continue;
            REntry left = e, mid = e, right = e;
            left.hi = s_look;
            mid.singular = true;
            mid.lo = mid.hi = s_look;
            right.lo = s_look;
            rentries_[r] = left;
            rentries_.insert(rentries_.begin() + static_cast<long>(r) + 1, {mid, right});
            // fix block table and loop start
            for (auto& blk : block_of_) {
                if (blk.first > r) blk.first += 2;
                if (blk.second > r) blk.second += 2;
            }
            if (rloop_start_ > r) rloop_start_ += 2;
            return true;
        }
        return false;
    }

    // temporal-refinement depth: how many split passes a node needs below it
    int tdepth(FormulaId f) {
        auto it = tdepth_memo_.find(f.v);
        if (it != tdepth_memo_.end()) return it->second;
        const FormulaNode& n = a_.formula(f);
        int d = 0;
        for (auto g : n.fargs) d = std::max(d, tdepth(g));
        for (auto t : n.targs) d = std::max(d, tdepth_term(t));
        if (n.interval) {
            d = std::max(d, tdepth_term(n.interval->lo));
            if (n.interval->hi) d = std::max(d, tdepth_term(*n.interval->hi));
        }
        switch (n.kind) {
            case FormulaKind::TimeAtom:
            case FormulaKind::MetricFinally:
            case FormulaKind::MetricGlobally:
            case FormulaKind::MetricOnce:
            case FormulaKind::MetricHistorically:
            case FormulaKind::MetricUntil:
            case FormulaKind::MetricSince:
            case FormulaKind::EvClockF:
            case FormulaKind::EvClockP:
            case FormulaKind::CountFuture:
            case FormulaKind::CountPast:
                ++d;
                break;
            default:
                break;
        }
        tdepth_memo_.emplace(f.v, d);
        return d;
    }

    int tdepth_term(TermId t) {
        const TermNode& n = a_.term(t);
        int d = 0;
        for (auto x : n.args) d = std::max(d, tdepth_term(x));
        if (n.kind == TermKind::IteTerm || n.kind == TermKind::Ef)
            d = std::max(d, tdepth(n.cond));
        return d;
    }

    static int slope_of(const Arena& a, TermId tu) {
        return a.term(tu).kind == TermKind::TimeSym ? 1 : 0;
    }

    void refine(FormulaId root) {
        int maxd = tdepth(root);
        std::vector<FormulaId> nodes = subformulas(a_, root);
        for (int level = 1; level <= maxd; ++level) {
            fmemo_.clear();
            compute_horizon();
            std::set<Rat> splits;
            std::size_t wend = window_end();
            for (FormulaId f : nodes) {
                if (tdepth(f) != level) continue;
                collect_splits(f, wend, splits);
            }
            for (const Rat& s : splits) split_at(s);
        }
        fmemo_.clear();
    }

    std::size_t window_end() const { return rsize() + rloop_len(); }

    void collect_splits(FormulaId f, std::size_t wend, std::set<Rat>& out) {
        const FormulaNode& n = a_.formula(f);
        if (n.kind == FormulaKind::TimeAtom) {
            int m = slope_of(a_, n.targs[0]) - (n.count == 2 ? slope_of(a_, n.targs[1]) : 0);
            if (m == 0) return;
            Rat cu = num(val(n.targs.back(), 0));
            for (std::size_t j = 0; j < wend; ++j) {
                if (rsingular(j)) continue;
                Rat tp = rep(j);
                Rat q = num(val_at(n.targs[0], j, tp));
                if (n.count == 2) q -= num(val_at(n.targs[1], j, tp));
                // q(t) = m*t + k on this entry
                Rat k = q - Rat(m) * tp;
                Rat t_star = (cu - k) / Rat(m);
                if (rlo(j) < t_star && t_star < rhi(j)) out.insert(t_star);
            }
            return;
        }
        if (!n.interval && n.kind != FormulaKind::CountFuture && n.kind != FormulaKind::CountPast)
            return;
        // metric-style node: split at operand truth boundaries shifted by
        // the interval constants (liberal superset)
        std::vector<Rat> consts;
        if (n.interval) {
            consts.push_back(num(val(n.interval->lo, 0)));
            if (n.interval->hi) consts.push_back(num(val(*n.interval->hi, 0)));
        }
        if (!n.targs.empty()) consts.push_back(num(val(n.targs.back(), 0)));
        std::vector<Rat> boundaries;
        for (FormulaId g : n.fargs) {
            bool prev = sat(g, 0);
            boundaries.push_back(rlo(0));
            for (std::size_t j = 1; j < wend; ++j) {
                bool cur = sat(g, j);
                if (cur != prev) {
                    boundaries.push_back(rlo(j));
                    prev = cur;
                }
                if (!rsingular(j)) boundaries.push_back(rhi(j));
            }
        }
        for (const Rat& b : boundaries)
            for (const Rat& c : consts) {
                if (b - c > 0) out.insert(b - c);
                out.insert(b + c);
            }
    }

    void compute_horizon() {
        std::size_t P = rloop_start_, L = rloop_len();
        Rat target = const_sum_ * 2 + rentries_.back().hi + loop_span_ * 8 + 1;
        Rat lo0 = rentries_[P].lo;
        Rat loops = (target - lo0) / loop_span_;
        long k = rat_floor_long(loops) + 2;
        if (k < 1) k = 1;
        nstar_ = P + L * static_cast<std::size_t>(k);
        hard_cap_ = (nstar_ + 16 * L + 64) * 64;
    }

    std::size_t horizon(std::size_t j) const { return std::max(j + 1, nstar_) + rloop_len(); }

    void bump() {
        if (++work_ > hard_cap_ * 1024ull)
            throw EvalError("trace evaluation horizon overflow");
    }

    std::size_t metric_horizon(std::size_t j, const Rat& lo_val) {
        std::size_t extra = 0;
        if (lo_val > 0) {
            Rat loops = lo_val / loop_span_;
            extra = rloop_len() * static_cast<std::size_t>(rat_floor_long(loops) + 2);
        }
        return horizon(j) + extra + rloop_len();
    }

    // ---- entry-level formula semantics ----

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

    // intersection test of (wlo, whi | openness) with I anchored at base
    bool window_meets(const Rat& base, const Rat& wlo, bool wlo_open, const Rat& whi,
                      bool whi_open, const Interval& iv) {
        Rat ilo = base + num(val(iv.lo, 0));
        std::optional<Rat> ihi;
        if (iv.hi) ihi = base + num(val(*iv.hi, 0));
        // lower end of feasible region
        Rat lo = std::max(wlo, ilo);
        bool lo_open = (wlo > ilo) ? wlo_open : (wlo < ilo ? iv.lo_open : (wlo_open || iv.lo_open));
        if (!ihi) {
            if (lo < whi) return true;
            if (lo == whi) return !lo_open && !whi_open;
            return false;
        }
        Rat hi = std::min(whi, *ihi);
        bool hi_open = (whi < *ihi) ? whi_open : (whi > *ihi ? iv.hi_open : (whi_open || iv.hi_open));
        if (lo < hi) return true;
        if (lo == hi) return !lo_open && !hi_open;
        return false;
    }

    bool delay_in(const Rat& d, const Interval& iv) {
        Rat lo = num(val(iv.lo, 0));
        if (iv.lo_open ? !(d > lo) : !(d >= lo)) return false;
        if (!iv.hi) return true;
        Rat hi = num(val(*iv.hi, 0));
        return iv.hi_open ? d < hi : d <= hi;
    }

    bool sat_raw(FormulaId f, std::size_t j) {
        const FormulaNode& n = a_.formula(f);
        Rat tp = rep(j);
        switch (n.kind) {
            case FormulaKind::True: return true;
            case FormulaKind::False: return false;
            case FormulaKind::BoolTerm: {
                Value v = val_at(n.targs[0], j, tp);
                if (!v.is_bool) throw EvalError("non-boolean value in formula position");
                return v.b;
            }
            case FormulaKind::Pred:
                throw EvalError("uninterpreted predicates are not supported in traces");
            case FormulaKind::Cmp:
                return cmp_holds(n.cmp, num(val_at(n.targs[0], j, tp)),
                                 num(val_at(n.targs[1], j, tp)));
            case FormulaKind::TimeAtom: {
                Rat lhs = num(val_at(n.targs[0], j, tp));
                if (n.count == 2) lhs -= num(val_at(n.targs[1], j, tp));
                return cmp_holds(n.cmp, lhs, num(val_at(n.targs.back(), j, tp)));
            }
            case FormulaKind::Not: return !sat(n.fargs[0], j);
            case FormulaKind::And: return sat(n.fargs[0], j) && sat(n.fargs[1], j);
            case FormulaKind::Or: return sat(n.fargs[0], j) || sat(n.fargs[1], j);
            case FormulaKind::Implies: return !sat(n.fargs[0], j) || sat(n.fargs[1], j);
            case FormulaKind::Iff: return sat(n.fargs[0], j) == sat(n.fargs[1], j);

            case FormulaKind::UntilStrict: return until_strict(n.fargs[0], n.fargs[1], j);
            case FormulaKind::Until:
                return sat(n.fargs[1], j) ||
                       (sat(n.fargs[0], j) && until_strict(n.fargs[0], n.fargs[1], j));
            case FormulaKind::SinceStrict: return since_strict(n.fargs[0], n.fargs[1], j);
            case FormulaKind::Since:
                return sat(n.fargs[1], j) ||
                       (sat(n.fargs[0], j) && since_strict(n.fargs[0], n.fargs[1], j));
            case FormulaKind::Finally:
                return sat(n.fargs[0], j) || until_strict(a_.f_true(), n.fargs[0], j);
            case FormulaKind::Globally:
                return sat(n.fargs[0], j) &&
                       !until_strict(a_.f_true(), a_.f_not(n.fargs[0]), j);
            case FormulaKind::Once:
                return sat(n.fargs[0], j) || since_strict(a_.f_true(), n.fargs[0], j);
            case FormulaKind::Historically:
                return sat(n.fargs[0], j) &&
                       !since_strict(a_.f_true(), a_.f_not(n.fargs[0]), j);

            case FormulaKind::Next:
                return rsingular(j) && rsingular(j + 1) && sat(n.fargs[0], j + 1);
            case FormulaKind::NextTilde:
                if (!rsingular(j)) return sat(n.fargs[0], j);
                return !rsingular(j + 1) && sat(n.fargs[0], j + 1);
            case FormulaKind::Yesterday:
                return j > 0 && rsingular(j) && rsingular(j - 1) && sat(n.fargs[0], j - 1);
            case FormulaKind::YesterdayTilde:
                if (!rsingular(j)) return sat(n.fargs[0], j);
                return j > 0 && !rsingular(j - 1) && sat(n.fargs[0], j - 1);
            case FormulaKind::WeakYesterday:
                // every non-initial entry has points in its past
                if (j == 0) return true;
                return rsingular(j) && rsingular(j - 1) && sat(n.fargs[0], j - 1);
            case FormulaKind::WeakYesterdayTilde:
                if (j == 0) return true;
                if (!rsingular(j)) return sat(n.fargs[0], j);
                return !rsingular(j - 1) && sat(n.fargs[0], j - 1);
            case FormulaKind::UntilC: {
                // phi1 U (phi2 | (phi1 & X~ phi2))
                auto target = [&](std::size_t m) {
                    if (sat(n.fargs[1], m)) return true;
                    if (!sat(n.fargs[0], m)) return false;
                    if (!rsingular(m)) return sat(n.fargs[1], m);
                    return !rsingular(m + 1) && sat(n.fargs[1], m + 1);
                };
                if (target(j)) return true;
                if (!sat(n.fargs[0], j)) return false;
                for (std::size_t m = j + 1; m <= horizon(j); ++m) {
                    bump();
                    bool tgt = target(m);
                    if (tgt && (rsingular(m) || sat(n.fargs[0], m))) return true;
                    if (!sat(n.fargs[0], m)) return false;
                }
                return false;
            }

            case FormulaKind::MetricFinally:
            case FormulaKind::MetricGlobally: {
                bool want = n.kind == FormulaKind::MetricFinally;
                FormulaId body = want ? n.fargs[0] : a_.f_not(n.fargs[0]);
                bool found = metric_f_exists(body, j, tp, *n.interval, n.strict);
                return want ? found : !found;
            }
            case FormulaKind::MetricOnce:
            case FormulaKind::MetricHistorically: {
                bool want = n.kind == FormulaKind::MetricOnce;
                FormulaId body = want ? n.fargs[0] : a_.f_not(n.fargs[0]);
                bool found = metric_p_exists(body, j, tp, *n.interval, n.strict);
                return want ? found : !found;
            }
            case FormulaKind::MetricUntil:
                return metric_until(n.fargs[0], n.fargs[1], j, tp, *n.interval, n.strict);
            case FormulaKind::MetricSince:
                return metric_since(n.fargs[0], n.fargs[1], j, tp, *n.interval, n.strict);

            case FormulaKind::EvClockF: {
                if (!rsingular(j) && sat(n.fargs[0], j)) return false;
                for (std::size_t m = j + 1; m <= horizon(j); ++m) {
                    bump();
                    if (sat(n.fargs[0], m)) {
                        if (!rsingular(m)) return false;  // onset, not attained
                        return delay_in(rlo(m) - tp, *n.interval);
                    }
                }
                return false;
            }
            case FormulaKind::EvClockP: {
                if (!rsingular(j) && sat(n.fargs[0], j)) return false;
                for (std::size_t m = j; m-- > 0;) {
                    if (sat(n.fargs[0], m)) {
                        if (!rsingular(m)) return false;
                        return delay_in(tp - rlo(m), *n.interval);
                    }
                }
                return false;
            }
            case FormulaKind::CountFuture: {
                Rat c = num(val(n.targs[0], 0));
                if (!rsingular(j) && sat(n.fargs[0], j)) return Rat(0) < c;
                std::uint32_t remaining = n.count;
                for (std::size_t m = j + 1; m <= metric_horizon(j, c) + 1; ++m) {
                    bump();
                    if (rlo(m) - tp >= c) return false;  // bound already exceeded
                    if (!sat(n.fargs[0], m)) continue;
                    if (!rsingular(m)) return true;  // all remaining fit just inside
                    if (--remaining == 0) return true;
                }
                return false;
            }
            case FormulaKind::CountPast: {
                Rat c = num(val(n.targs[0], 0));
                if (!rsingular(j) && sat(n.fargs[0], j)) return Rat(0) < c;
                std::uint32_t remaining = n.count;
                for (std::size_t m = j; m-- > 0;) {
                    if (tp - rhi(m) >= c) return false;
                    if (!sat(n.fargs[0], m)) continue;
                    if (!rsingular(m)) return true;  // finish just inside, near the top
                    if (--remaining == 0) return tp - rlo(m) < c;
                }
                return false;
            }
        }
        throw EvalError("unhandled formula kind");
    }

    bool until_strict(FormulaId p1, FormulaId p2, std::size_t j) {
        if (!rsingular(j)) {
            if (!sat(p1, j)) return false;
            if (sat(p2, j)) return true;
        }
        for (std::size_t m = j + 1; m <= horizon(j); ++m) {
            bump();
            if (sat(p2, m) && (rsingular(m) || sat(p1, m))) return true;
            if (!sat(p1, m)) return false;
        }
        return false;
    }

    bool since_strict(FormulaId p1, FormulaId p2, std::size_t j) {
        if (!rsingular(j)) {
            if (!sat(p1, j)) return false;
            if (sat(p2, j)) return true;
        }
        for (std::size_t m = j; m-- > 0;) {
            if (sat(p2, m) && (rsingular(m) || sat(p1, m))) return true;
            if (!sat(p1, m)) return false;
        }
        return false;
    }

    bool metric_f_exists(FormulaId body, std::size_t j, const Rat& tp, const Interval& iv,
                         bool strict) {
        if (!strict && sat(body, j) && delay_in(Rat(0), iv)) return true;
        Rat lo_val = num(val(iv.lo, 0));
        for (std::size_t m = j; m <= metric_horizon(j, lo_val); ++m) {
            bump();
            if (iv.hi && rlo(m) - tp > num(val(*iv.hi, 0)) && m > j) return false;
            if (!sat(body, m)) continue;
            Rat wlo, whi;
            bool wlo_open, whi_open;
            if (m == j) {
                if (rsingular(j)) continue;  // same point is the non-strict case
                wlo = tp;
                wlo_open = true;  // strictly after now
                whi = rhi(j);
                whi_open = true;
            } else if (rsingular(m)) {
                // zero-duration steps still count as strictly-later points
                wlo = whi = rlo(m);
                wlo_open = whi_open = false;
            } else {
                wlo = rlo(m);
                whi = rhi(m);
                wlo_open = whi_open = true;
            }
            if (window_meets(tp, wlo, wlo_open, whi, whi_open, iv)) return true;
        }
        return false;
    }

    bool metric_p_exists(FormulaId body, std::size_t j, const Rat& tp, const Interval& iv,
                         bool strict) {
        if (!strict && sat(body, j) && delay_in(Rat(0), iv)) return true;
        for (std::size_t m = j + 1; m-- > 0;) {
            if (!sat(body, m)) continue;
            Rat wlo, whi;
            bool wlo_open, whi_open;
            if (m == j) {
                if (rsingular(j)) continue;
                wlo = rlo(j);
                wlo_open = true;
                whi = tp;
                whi_open = true;
            } else if (rsingular(m)) {
                wlo = whi = rlo(m);
                wlo_open = whi_open = false;
            } else {
                wlo = rlo(m);
                whi = rhi(m);
                wlo_open = whi_open = true;
            }
            // past delays: base - window, i.e. reflect the window
            Rat rlo_ = tp - whi;
            Rat rhi_ = tp - wlo;
            if (window_meets(Rat(0), rlo_, whi_open, rhi_, wlo_open, iv)) return true;
        }
        return false;
    }

    bool metric_until(FormulaId p1, FormulaId p2, std::size_t j, const Rat& tp,
                      const Interval& iv, bool strict) {
        if (!strict) {
            if (delay_in(Rat(0), iv) && sat(p2, j)) return true;
            if (!sat(p1, j)) return false;
            return metric_until(p1, p2, j, tp, iv, true);
        }
        // in-entry witness
        if (!rsingular(j)) {
            if (!sat(p1, j)) return false;
            if (sat(p2, j) &&
                window_meets(tp, tp, true, rhi(j), true, iv))
                return true;
        }
        Rat lo_val = num(val(iv.lo, 0));
        for (std::size_t m = j + 1; m <= metric_horizon(j, lo_val); ++m) {
            bump();
            if (iv.hi && rlo(m) - tp > num(val(*iv.hi, 0))) return false;
            bool w = sat(p2, m) && (rsingular(m) || sat(p1, m));
            if (w) {
                Rat wlo = rsingular(m) ? rlo(m) : rlo(m);
                Rat whi = rsingular(m) ? rlo(m) : rhi(m);
                bool open = !rsingular(m);
                if (window_meets(tp, wlo, open, whi, open, iv)) return true;
            }
            if (!sat(p1, m)) return false;
        }
        return false;
    }

    bool metric_since(FormulaId p1, FormulaId p2, std::size_t j, const Rat& tp,
                      const Interval& iv, bool strict) {
        if (!strict) {
            if (delay_in(Rat(0), iv) && sat(p2, j)) return true;
            if (!sat(p1, j)) return false;
            return metric_since(p1, p2, j, tp, iv, true);
        }
        if (!rsingular(j)) {
            if (!sat(p1, j)) return false;
            if (sat(p2, j) &&
                window_meets(Rat(0), Rat(0), true, tp - rlo(j), true, iv))
                return true;
        }
        for (std::size_t m = j; m-- > 0;) {
            bool w = sat(p2, m) && (rsingular(m) || sat(p1, m));
            if (w) {
                Rat wlo = tp - (rsingular(m) ? rlo(m) : rhi(m));
                Rat whi = tp - rlo(m);
                bool open = !rsingular(m);
                if (window_meets(Rat(0), wlo, open, whi, open, iv)) return true;
            }
            if (!sat(p1, m)) return false;
        }
        return false;
    }

    // ---- event-freezing values -------------------------------------------

    Value ef_value(TermId t, std::size_t j, const Rat& tp) {
        const TermNode& n = a_.term(t);
        if (!n.strict) {
            if (sat(n.cond, j)) return val_at(n.args[0], j, tp);
            TermId st = a_.ef(n.dir, true, 1, n.args[0], n.cond);
            a_.ensure_default(st);
            return val_at(st, j, tp);
        }
        if (n.iter > 1) {
            TermId inner = a_.ef(n.dir, true, n.iter - 1, n.args[0], n.cond);
            a_.ensure_default(inner);
            TermId outer = a_.ef(n.dir, true, 1, inner, n.cond);
            a_.ensure_default(outer);
            return val_at(outer, j, tp);
        }
        FormulaId phi = n.cond;
        TermId u = n.args[0];
        if (n.dir == EfDir::Future) {
            if (!rsingular(j) && sat(phi, j)) return val_at(u, j, tp);  // onset now
            for (std::size_t m = j + 1; m <= horizon(j); ++m) {
                bump();
                if (!sat(phi, m)) continue;
                if (rsingular(m)) return val_at(u, m, rlo(m));
                // open onset: the value is taken at the onset point, the
                // singular entry just before
                return val_at(u, m - 1, rlo(m - 1));
            }
            return def_value(t);
        }
        if (!rsingular(j) && sat(phi, j)) return val_at(u, j, tp);
        for (std::size_t m = j; m-- > 0;) {
            if (!sat(phi, m)) continue;
            if (rsingular(m)) return val_at(u, m, rlo(m));
            return val_at(u, m + 1, rlo(m + 1));
        }
        return def_value(t);
    }

    Value def_value(TermId ef_term) {
        SymbolId def = a_.ensure_default(ef_term);
        auto it = tr_.params.find(def);
        if (it == tr_.params.end())
            throw EvalError("trace lacks a value for parameter '" +
                            a_.sig().symbol(def).name + "'");
        return it->second;
    }

    Arena& a_;
    IntervalTrace tr_;
    Rat const_sum_;
    // refined geometry
    std::vector<REntry> rentries_;
    std::vector<Assignment> states_;
    std::vector<std::pair<std::size_t, std::size_t>> block_of_;
    std::size_t rloop_start_ = 0;
    std::size_t loop_begin_ = 0;       // unrolled-entry index of the loop region
    std::size_t loop_len_unrolled_ = 0;
    Rat loop_span_;
    std::size_t nstar_ = 0;
    std::size_t hard_cap_ = 1 << 20;
    std::uint64_t work_ = 0;
    std::unordered_map<std::uint64_t, bool> fmemo_;
    std::unordered_map<std::uint32_t, int> tdepth_memo_;
};

}  // namespace

bool eval_dense(Arena& a, const IntervalTrace& tr, const DensePoint& p, FormulaId phi) {
    DenseEvaluator ev(a, tr, phi);
    std::optional<Rat> at;
    std::size_t j = ev.locate(p, tr, &at);
    return ev.sat(phi, j);
}

Value eval_term_dense(Arena& a, const IntervalTrace& tr, const DensePoint& p, TermId u) {
    FormulaId probe = a.sort_of(u).kind == SortKind::Bool ? a.bool_term(u)
                                                          : a.cmp(CmpOp::Eq, u, u);
    DenseEvaluator ev(a, tr, probe);
    std::optional<Rat> at;
    std::size_t j = ev.locate(p, tr, &at);
    if (at) return ev.val_at(u, j, *at);
    return ev.val(u, j);
}

}  // namespace xltlef
