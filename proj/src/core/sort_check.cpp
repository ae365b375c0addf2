#include "xltlef/sort_check.hpp"

#include "xltlef/traversal.hpp"

namespace xltlef {

namespace {

bool is_time_term(const Arena& a, TermId t) {
    const TermNode& n = a.term(t);
    if (n.kind == TermKind::TimeSym) return true;
    if (n.kind == TermKind::Ef) return is_time_term(a, n.args[0]);
    return false;
}

bool mentions_time(const Arena& a, TermId t) {
    const TermNode& n = a.term(t);
    if (n.kind == TermKind::TimeSym) return true;
    for (auto x : n.args)
        if (mentions_time(a, x)) return true;
    return false;
}

}  // namespace

std::vector<std::string> sort_check(const Arena& a, FormulaId phi) {
    std::vector<std::string> errors;
    const Signature& sig = a.sig();

    for (TermId t : subterms(a, phi)) {
        const TermNode& n = a.term(t);
        switch (n.kind) {
            case TermKind::Builtin: {
                Sort s = a.sort_of(n.args[0]);
                for (auto x : n.args)
                    if (a.sort_of(x) != s) errors.push_back("mixed sorts in arithmetic");
                break;
            }
            case TermKind::UfApply: {
                const Symbol& sym = sig.symbol(n.sym);
                if (sym.arg_sorts.size() != n.args.size()) {
                    errors.push_back("arity mismatch applying '" + sym.name + "'");
                    break;
                }
                for (std::size_t i = 0; i < n.args.size(); ++i)
                    if (a.sort_of(n.args[i]) != sym.arg_sorts[i])
                        errors.push_back("argument sort mismatch applying '" + sym.name + "'");
                break;
            }
            case TermKind::IteTerm:
                if (a.sort_of(n.args[0]) != a.sort_of(n.args[1]))
                    errors.push_back("ite branches have different sorts");
                break;
            case TermKind::Ef:
                if (a.term(n.args[0]).kind == TermKind::TimeSym ||
                    is_time_term(a, n.args[0])) {
                    // time-valued freezing chains are fine
                } else if (mentions_time(a, n.args[0])) {
                    errors.push_back("explicit time may only be frozen directly");
                }
                if (!sig.default_for(t.v) && n.strict && n.iter == 1)
                    errors.push_back("freezing term lacks a default constant");
                break;
            default:
                break;
        }
    }

    for (FormulaId f : subformulas(a, phi)) {
        const FormulaNode& n = a.formula(f);
        switch (n.kind) {
            case FormulaKind::TimeAtom: {
                TermId rhs = n.targs.back();
                if (!a.is_rigid(rhs)) errors.push_back("rigid endpoint required");
                for (std::size_t i = 0; i + 1 < n.targs.size(); ++i)
                    if (!is_time_term(a, n.targs[i]))
                        errors.push_back("time comparison over a non-time term");
                break;
            }
            case FormulaKind::Cmp:
                for (auto x : n.targs)
                    if (mentions_time(a, x))
                        errors.push_back(
                            "explicit time may only be compared against rigid bounds");
                break;
            default:
                break;
        }
        if (n.interval) {
            if (!a.is_rigid(n.interval->lo)) errors.push_back("rigid endpoint required");
            if (n.interval->hi && !a.is_rigid(*n.interval->hi))
                errors.push_back("rigid endpoint required");
        }
    }
    return errors;
}

}  // namespace xltlef
