// Finite representations of infinite models: discrete lasso traces and
// dense / super-dense interval traces, with the JSON format shared by
// witnesses and the eval CLI.

#ifndef XLTLEF_TRACE_HPP
#define XLTLEF_TRACE_HPP

#include <map>
#include <string>
#include <vector>

#include "xltlef/arena.hpp"
#include "xltlef/problem.hpp"

namespace xltlef {

struct Value {
    bool is_bool = false;
    bool b = false;
    Rat q;

    static Value of_bool(bool v) { return Value{true, v, Rat(0)}; }
    static Value of_rat(Rat v) { return Value{false, false, std::move(v)}; }

    bool operator==(const Value& o) const {
        if (is_bool != o.is_bool) return false;
        return is_bool ? b == o.b : q == o.q;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }

    std::string str() const { return is_bool ? (b ? "true" : "false") : rat_str(q); }
};

using Assignment = std::map<SymbolId, Value>;

struct DiscreteLassoTrace {
    std::vector<Assignment> states;
    std::size_t loop_start = 0;
    std::vector<Rat> timestamps;  // one per state, non-decreasing
    Rat loop_dt;                  // time advance across one loop pass (>= 0)
    Assignment params;            // rigid symbols including defaults

    std::size_t size() const { return states.size(); }
    std::size_t loop_len() const { return states.size() - loop_start; }
    std::size_t fold(std::size_t i) const {
        return i < size() ? i : loop_start + (i - loop_start) % loop_len();
    }
    Rat time_at(std::size_t i) const {
        if (i < size()) return timestamps[i];
        std::size_t k = (i - loop_start) / loop_len();
        std::size_t j = loop_start + (i - loop_start) % loop_len();
        return timestamps[j] + Rat(static_cast<long>(k)) * loop_dt;
    }
    // a violated invariant's description, or empty
    std::string validate() const;
};

struct IntervalEntry {
    bool singular = true;
    Rat lo, hi;  // lo == hi for singular entries
    Assignment state;
};

struct IntervalTrace {
    TimeModelKind model = TimeModelKind::SuperDense;
    std::vector<IntervalEntry> entries;  // entry 0 is [0,0]
    std::size_t loop_start = 0;
    Rat loop_dt;  // time shift per loop pass (> 0)
    Assignment params;

    std::size_t size() const { return entries.size(); }
    std::size_t loop_len() const { return entries.size() - loop_start; }
    std::size_t fold(std::size_t j) const {
        return j < size() ? j : loop_start + (j - loop_start) % loop_len();
    }
    Rat shift(std::size_t j) const {
        if (j < size()) return Rat(0);
        return Rat(static_cast<long>((j - loop_start) / loop_len())) * loop_dt;
    }
    Rat lo_at(std::size_t j) const { return entries[fold(j)].lo + shift(j); }
    Rat hi_at(std::size_t j) const { return entries[fold(j)].hi + shift(j); }
    bool singular_at(std::size_t j) const { return entries[fold(j)].singular; }
    const Assignment& state_at(std::size_t j) const { return entries[fold(j)].state; }

    std::string validate() const;
};

// JSON round-trip (schema documented in doc/format.md).
std::string trace_to_json(const Workspace& ws, const DiscreteLassoTrace& t);
std::string trace_to_json(const Workspace& ws, const IntervalTrace& t);

struct LoadedTrace {
    std::optional<DiscreteLassoTrace> discrete;
    std::optional<IntervalTrace> interval;
    std::string error;
};
LoadedTrace trace_from_json(const Workspace& ws, const std::string& json_text);

}  // namespace xltlef

#endif  // XLTLEF_TRACE_HPP
