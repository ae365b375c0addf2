#include "xltlef/signature.hpp"

#include <stdexcept>

namespace xltlef {

SymbolId Signature::add(Symbol sym) {
    if (by_name_.count(sym.name))
        throw std::runtime_error("duplicate symbol name: " + sym.name);
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    by_name_.emplace(sym.name, id);
    symbols_.push_back(std::move(sym));
    return id;
}

SymbolId Signature::add_parameter(const std::string& name, Sort sort) {
    return add({name, SymbolKind::Parameter, sort, {}});
}

SymbolId Signature::add_state_var(const std::string& name, Sort sort) {
    return add({name, SymbolKind::StateVar, sort, {}});
}

SymbolId Signature::add_function(const std::string& name, std::vector<Sort> args, Sort result) {
    return add({name, SymbolKind::Function, result, std::move(args)});
}

SymbolId Signature::add_predicate(const std::string& name, std::vector<Sort> args) {
    return add({name, SymbolKind::Predicate, Sort::boolean(), std::move(args)});
}

std::uint32_t Signature::add_usort(const std::string& name) {
    for (std::size_t i = 0; i < usorts_.size(); ++i)
        if (usorts_[i] == name) throw std::runtime_error("duplicate sort name: " + name);
    usorts_.push_back(name);
    return static_cast<std::uint32_t>(usorts_.size() - 1);
}

SymbolId Signature::fresh_parameter(const std::string& base, Sort sort) {
    std::string name = base;
    for (int k = 1; by_name_.count(name); ++k) name = base + "_" + std::to_string(k);
    return add_parameter(name, sort);
}

SymbolId Signature::fresh_state_var(const std::string& base, Sort sort) {
    std::string name = base;
    for (int k = 1; by_name_.count(name); ++k) name = base + "_" + std::to_string(k);
    return add_state_var(name, sort);
}

std::optional<SymbolId> Signature::lookup(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Signature::lookup_usort(const std::string& name) const {
    for (std::size_t i = 0; i < usorts_.size(); ++i)
        if (usorts_[i] == name) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

std::optional<SymbolId> Signature::default_for(std::uint32_t ef_term) const {
    auto it = defaults_.find(ef_term);
    if (it == defaults_.end()) return std::nullopt;
    return it->second;
}

std::string Signature::sort_name(Sort s) const {
    switch (s.kind) {
        case SortKind::Bool: return "bool";
        case SortKind::Real: return "real";
        case SortKind::Int: return "int";
        case SortKind::Uninterpreted: return usorts_.at(s.usort);
    }
    return "?";
}

}  // namespace xltlef
