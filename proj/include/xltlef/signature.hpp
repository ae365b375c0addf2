// Sorts and signatures.
//
// The signature separates rigid symbols (parameters, uninterpreted
// functions/predicates) from time-varying state variables.  Event-freezing
// default constants def_u are rigid parameters registered lazily, one per
// canonical (hash-consed) event-freezing term, so syntactically equal
// occurrences share a single default.

#ifndef XLTLEF_SIGNATURE_HPP
#define XLTLEF_SIGNATURE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace xltlef {

enum class SortKind : std::uint8_t { Bool, Real, Int, Uninterpreted };

struct Sort {
    SortKind kind = SortKind::Bool;
    std::uint32_t usort = 0;  // index into Signature::usorts when Uninterpreted

    bool operator==(const Sort& o) const noexcept {
        return kind == o.kind && (kind != SortKind::Uninterpreted || usort == o.usort);
    }
    bool operator!=(const Sort& o) const noexcept { return !(*this == o); }

    static Sort boolean() { return {SortKind::Bool, 0}; }
    static Sort real() { return {SortKind::Real, 0}; }
    static Sort integer() { return {SortKind::Int, 0}; }
    static Sort uninterp(std::uint32_t id) { return {SortKind::Uninterpreted, id}; }

    bool is_numeric() const { return kind == SortKind::Real || kind == SortKind::Int; }
};

enum class SymbolKind : std::uint8_t {
    Parameter,   // rigid constant, value fixed per trace
    StateVar,    // time-varying variable
    Function,    // rigid uninterpreted function
    Predicate,   // rigid uninterpreted predicate
};

using SymbolId = std::uint32_t;
inline constexpr SymbolId kNoSymbol = static_cast<SymbolId>(-1);

struct Symbol {
    std::string name;
    SymbolKind kind;
    Sort sort;                     // result sort (Bool for predicates)
    std::vector<Sort> arg_sorts;   // empty for parameters / state vars
};

class Signature {
public:
    SymbolId add_parameter(const std::string& name, Sort sort);
    SymbolId add_state_var(const std::string& name, Sort sort);
    SymbolId add_function(const std::string& name, std::vector<Sort> args, Sort result);
    SymbolId add_predicate(const std::string& name, std::vector<Sort> args);
    std::uint32_t add_usort(const std::string& name);

    // Fresh-name helpers used by the pipeline stages; the returned name is
    // `base` or `base_k` for the first k avoiding a clash.
    SymbolId fresh_parameter(const std::string& base, Sort sort);
    SymbolId fresh_state_var(const std::string& base, Sort sort);

    std::optional<SymbolId> lookup(const std::string& name) const;
    std::optional<std::uint32_t> lookup_usort(const std::string& name) const;

    const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
    std::size_t size() const { return symbols_.size(); }
    const std::string& usort_name(std::uint32_t id) const { return usorts_.at(id); }
    std::size_t usort_count() const { return usorts_.size(); }

    bool has(const std::string& name) const { return by_name_.count(name) != 0; }

    // Event-freezing defaults: canonical EF term id -> default parameter.
    // Keys are raw arena term ids; the arena guarantees canonicality.
    void set_default(std::uint32_t ef_term, SymbolId def_param) { defaults_[ef_term] = def_param; }
    std::optional<SymbolId> default_for(std::uint32_t ef_term) const;
    const std::map<std::uint32_t, SymbolId>& defaults() const { return defaults_; }

    std::string sort_name(Sort s) const;

private:
    SymbolId add(Symbol sym);

    std::vector<Symbol> symbols_;
    std::unordered_map<std::string, SymbolId> by_name_;
    std::vector<std::string> usorts_;
    std::map<std::uint32_t, SymbolId> defaults_;
};

}  // namespace xltlef

#endif  // XLTLEF_SIGNATURE_HPP
