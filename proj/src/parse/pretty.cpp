#include "xltlef/pretty.hpp"

#include <sstream>

namespace xltlef {

namespace {

// Formula precedence levels, loosest first.
enum : int { kIff = 0, kImpl = 1, kOr = 2, kAnd = 3, kUntil = 4, kUnary = 5, kAtomF = 6 };
// Term precedence levels.
enum : int { kAdd = 0, kMul = 1, kNeg = 2, kPostfix = 3, kAtomT = 4 };

struct Printer {
    const Arena& a;
    std::ostringstream out;

    void term(TermId t, int min_level) {
        const TermNode& n = a.term(t);
        int level = term_level(n);
        bool paren = level < min_level;
        if (paren) out << "(";
        switch (n.kind) {
            case TermKind::RatConst:
            case TermKind::IntConst:
                out << rat_str(n.value);
                break;
            case TermKind::Param:
            case TermKind::StateVar:
                out << a.sig().symbol(n.sym).name;
                break;
            case TermKind::TimeSym:
                out << "time";
                break;
            case TermKind::Builtin:
                switch (n.fn) {
                    case BuiltinFn::Add:
                        term(n.args[0], kAdd);
                        out << " + ";
                        term(n.args[1], kMul);
                        break;
                    case BuiltinFn::Sub:
                        term(n.args[0], kAdd);
                        out << " - ";
                        term(n.args[1], kMul);
                        break;
                    case BuiltinFn::Mul:
                        term(n.args[0], kMul);
                        out << "*";
                        term(n.args[1], kNeg);
                        break;
                    case BuiltinFn::Div:
                        term(n.args[0], kMul);
                        out << "/";
                        term(n.args[1], kNeg);
                        break;
                    case BuiltinFn::Neg:
                        out << "-";
                        term(n.args[0], kNeg);
                        break;
                }
                break;
            case TermKind::UfApply: {
                out << a.sig().symbol(n.sym).name << "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out << ", ";
                    term(n.args[i], kAdd);
                }
                out << ")";
                break;
            }
            case TermKind::IteTerm:
                out << "ite(";
                formula(n.cond, kIff);
                out << ", ";
                term(n.args[0], kAdd);
                out << ", ";
                term(n.args[1], kAdd);
                out << ")";
                break;
            case TermKind::Ef:
                term(n.args[0], kPostfix);
                out << "@" << (n.dir == EfDir::Future ? "F" : "P");
                if (n.strict) out << "~";
                if (n.iter > 1) out << "^" << n.iter;
                out << "(";
                formula(n.cond, kIff);
                out << ")";
                break;
            case TermKind::NextTerm:
                out << "next(";
                term(n.args[0], kAdd);
                out << ")";
                break;
            case TermKind::PrevTerm:
                out << "prev(";
                term(n.args[0], kAdd);
                out << ")";
                break;
        }
        if (paren) out << ")";
    }

    static int term_level(const TermNode& n) {
        switch (n.kind) {
            case TermKind::Builtin:
                switch (n.fn) {
                    case BuiltinFn::Add:
                    case BuiltinFn::Sub: return kAdd;
                    case BuiltinFn::Mul:
                    case BuiltinFn::Div: return kMul;
                    case BuiltinFn::Neg: return kNeg;
                }
                return kAdd;
            case TermKind::Ef: return kPostfix;
            default: return kAtomT;
        }
    }

    void interval(const Interval& iv) {
        const TermNode& lo = a.term(iv.lo);
        bool lo_zero = (lo.kind == TermKind::RatConst && lo.value == 0 && !iv.lo_open);
        out << "[";
        if (iv.hi && *iv.hi == iv.lo && !iv.lo_open && !iv.hi_open) {
            out << "=";
            term(iv.lo, kAdd);
        } else if (lo_zero && iv.hi) {
            out << (iv.hi_open ? "<" : "<=");
            term(*iv.hi, kAdd);
        } else if (!iv.hi && !iv.lo_open) {
            out << ">=";
            term(iv.lo, kAdd);
        } else if (!iv.hi && iv.lo_open) {
            out << ">";
            term(iv.lo, kAdd);
        } else {
            out << (iv.lo_open ? "(" : "[");
            term(iv.lo, kAdd);
            out << ",";
            if (iv.hi) term(*iv.hi, kAdd);
            else out << "inf";
            out << (iv.hi_open ? ")" : "]");
        }
        out << "]";
    }

    void unary_op(const char* op, bool strict, const FormulaNode& n) {
        out << op;
        if (strict) out << "~";
        if (n.interval) interval(*n.interval);
        out << " ";
        formula(n.fargs[0], kUnary);
    }

    void binary_temporal(const char* op, bool strict, const FormulaNode& n) {
        formula(n.fargs[0], kUnary);
        out << " " << op;
        if (strict) out << "~";
        if (n.interval) interval(*n.interval);
        out << " ";
        formula(n.fargs[1], kUntil);
    }

    void formula(FormulaId f, int min_level) {
        const FormulaNode& n = a.formula(f);
        int level = formula_level(n);
        bool paren = level < min_level;
        if (paren) out << "(";
        switch (n.kind) {
            case FormulaKind::True: out << "true"; break;
            case FormulaKind::False: out << "false"; break;
            case FormulaKind::BoolTerm: term(n.targs[0], kAtomT); break;
            case FormulaKind::Pred: {
                out << a.sig().symbol(n.sym).name << "(";
                for (std::size_t i = 0; i < n.targs.size(); ++i) {
                    if (i) out << ", ";
                    term(n.targs[i], kAdd);
                }
                out << ")";
                break;
            }
            case FormulaKind::Cmp:
                term(n.targs[0], kAdd);
                out << " " << cmp_str(n.cmp) << " ";
                term(n.targs[1], kAdd);
                break;
            case FormulaKind::TimeAtom:
                if (n.count == 2) {
                    term(n.targs[0], kMul);
                    out << " - ";
                    term(n.targs[1], kMul);
                    out << " " << cmp_str(n.cmp) << " ";
                    term(n.targs[2], kAdd);
                } else {
                    term(n.targs[0], kAdd);
                    out << " " << cmp_str(n.cmp) << " ";
                    term(n.targs[1], kAdd);
                }
                break;
            case FormulaKind::Not:
                out << "!";
                formula(n.fargs[0], kUnary);
                break;
            case FormulaKind::And:
                formula(n.fargs[0], kAnd);
                out << " & ";
                formula(n.fargs[1], kUntil);
                break;
            case FormulaKind::Or:
                formula(n.fargs[0], kOr);
                out << " | ";
                formula(n.fargs[1], kAnd);
                break;
            case FormulaKind::Implies:
                formula(n.fargs[0], kOr);
                out << " -> ";
                formula(n.fargs[1], kImpl);
                break;
            case FormulaKind::Iff:
                formula(n.fargs[0], kIff);
                out << " <-> ";
                formula(n.fargs[1], kImpl);
                break;
            case FormulaKind::UntilStrict: binary_temporal("U", true, n); break;
            case FormulaKind::SinceStrict: binary_temporal("S", true, n); break;
            case FormulaKind::Until: binary_temporal("U", false, n); break;
            case FormulaKind::Since: binary_temporal("S", false, n); break;
            case FormulaKind::UntilC: binary_temporal("U_C", false, n); break;
            case FormulaKind::MetricUntil: binary_temporal("U", n.strict, n); break;
            case FormulaKind::MetricSince: binary_temporal("S", n.strict, n); break;
            case FormulaKind::Finally: unary_op("F", false, n); break;
            case FormulaKind::Globally: unary_op("G", false, n); break;
            case FormulaKind::Once: unary_op("P", false, n); break;
            case FormulaKind::Historically: unary_op("H", false, n); break;
            case FormulaKind::Next: unary_op("X", false, n); break;
            case FormulaKind::NextTilde: unary_op("X", true, n); break;
            case FormulaKind::Yesterday: unary_op("Y", false, n); break;
            case FormulaKind::YesterdayTilde: unary_op("Y", true, n); break;
            case FormulaKind::WeakYesterday: unary_op("Z", false, n); break;
            case FormulaKind::WeakYesterdayTilde: unary_op("Z", true, n); break;
            case FormulaKind::MetricFinally: unary_op("F", n.strict, n); break;
            case FormulaKind::MetricGlobally: unary_op("G", n.strict, n); break;
            case FormulaKind::MetricOnce: unary_op("P", n.strict, n); break;
            case FormulaKind::MetricHistorically: unary_op("H", n.strict, n); break;
            case FormulaKind::EvClockF: unary_op("|>", false, n); break;
            case FormulaKind::EvClockP: unary_op("<|", false, n); break;
            case FormulaKind::CountFuture:
            case FormulaKind::CountPast:
                out << (n.kind == FormulaKind::CountFuture ? "Cf" : "Cp") << "[" << n.count
                    << "][<";
                term(n.targs[0], kAdd);
                out << "] ";
                formula(n.fargs[0], kUnary);
                break;
        }
        if (paren) out << ")";
    }

    static int formula_level(const FormulaNode& n) {
        switch (n.kind) {
            case FormulaKind::Iff: return kIff;
            case FormulaKind::Implies: return kImpl;
            case FormulaKind::Or: return kOr;
            case FormulaKind::And: return kAnd;
            case FormulaKind::UntilStrict:
            case FormulaKind::SinceStrict:
            case FormulaKind::Until:
            case FormulaKind::Since:
            case FormulaKind::UntilC:
            case FormulaKind::MetricUntil:
            case FormulaKind::MetricSince:
                return kUntil;
            case FormulaKind::Not:
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
            case FormulaKind::MetricFinally:
            case FormulaKind::MetricGlobally:
            case FormulaKind::MetricOnce:
            case FormulaKind::MetricHistorically:
            case FormulaKind::EvClockF:
            case FormulaKind::EvClockP:
            case FormulaKind::CountFuture:
            case FormulaKind::CountPast:
                return kUnary;
            default:
                return kAtomF;
        }
    }
};

}  // namespace

std::string pretty(const Arena& a, FormulaId f) {
    Printer p{a};
    p.formula(f, kIff);
    return std::move(p.out).str();
}

std::string pretty_term(const Arena& a, TermId t) {
    Printer p{a};
    p.term(t, kAdd);
    return std::move(p.out).str();
}

}  // namespace xltlef
