#include "xltlef/trace.hpp"

#include <json.hpp>

namespace xltlef {

using nlohmann::json;

std::string DiscreteLassoTrace::validate() const {
    if (states.empty()) return "empty trace";
    if (loop_start >= states.size()) return "loop start out of range";
    if (timestamps.size() != states.size()) return "timestamp count mismatch";
    if (timestamps[0] != 0) return "first timestamp must be 0";
    for (std::size_t i = 0; i + 1 < timestamps.size(); ++i)
        if (timestamps[i] > timestamps[i + 1]) return "timestamps must be non-decreasing";
    if (loop_dt < 0) return "negative loop time advance";
    if (timestamps.back() > timestamps[loop_start] + loop_dt)
        return "loop time advance below last in-loop delta";
    return {};
}

std::string IntervalTrace::validate() const {
    if (entries.empty()) return "empty trace";
    if (loop_start >= entries.size()) return "loop start out of range";
    if (!(entries[0].singular && entries[0].lo == 0)) return "first entry must be [0,0]";
    if (loop_dt <= 0) return "loop must advance time";
    auto check_adjacent = [&](const IntervalEntry& a, Rat a_hi, Rat b_lo,
                              const IntervalEntry& b) -> std::string {
        if (a_hi != b_lo) return "entries must be almost adjacent";
        if (!a.singular && !b.singular) return "an open interval must be followed by a singular";
        if (model == TimeModelKind::Dense && a.singular && b.singular)
            return "zero-duration step in a strictly-monotonic model";
        return {};
    };
    for (std::size_t j = 0; j < entries.size(); ++j) {
        const auto& e = entries[j];
        if (e.singular && e.lo != e.hi) return "singular entry with distinct endpoints";
        if (!e.singular && !(e.lo < e.hi)) return "open entry must have positive length";
        if (j + 1 < entries.size()) {
            auto err = check_adjacent(e, e.hi, entries[j + 1].lo, entries[j + 1]);
            if (!err.empty()) return err;
        }
    }
    // wrap-around adjacency under the loop shift
    const auto& last = entries.back();
    const auto& first = entries[loop_start];
    auto err = check_adjacent(last, last.hi, first.lo + loop_dt, first);
    if (!err.empty()) return err + " (at loop wrap)";
    return {};
}

namespace {

json value_json(const Value& v) {
    if (v.is_bool) return v.b;
    return rat_str(v.q);
}

std::optional<Value> value_from(const json& j) {
    if (j.is_boolean()) return Value::of_bool(j.get<bool>());
    if (j.is_string()) {
        auto q = rat_parse(j.get<std::string>());
        if (!q) return std::nullopt;
        return Value::of_rat(*q);
    }
    if (j.is_number_integer()) return Value::of_rat(Rat(j.get<long>()));
    return std::nullopt;
}

json assignment_json(const Workspace& ws, const Assignment& a) {
    json out = json::object();
    for (const auto& [sym, val] : a) out[ws.sig.symbol(sym).name] = value_json(val);
    return out;
}

bool assignment_from(const Workspace& ws, const json& j, Assignment& out, std::string& err) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto sym = ws.sig.lookup(it.key());
        if (!sym) {
            err = "unknown symbol in trace: " + it.key();
            return false;
        }
        auto v = value_from(it.value());
        if (!v) {
            err = "bad value for " + it.key();
            return false;
        }
        out[*sym] = *v;
    }
    return true;
}

}  // namespace

std::string trace_to_json(const Workspace& ws, const DiscreteLassoTrace& t) {
    json j;
    j["format"] = "xltlef-trace";
    j["version"] = 1;
    j["kind"] = "discrete";
    j["loop_start"] = t.loop_start;
    j["loop_dt"] = rat_str(t.loop_dt);
    j["params"] = assignment_json(ws, t.params);
    json ts = json::array();
    for (const auto& q : t.timestamps) ts.push_back(rat_str(q));
    j["timestamps"] = ts;
    json states = json::array();
    for (const auto& s : t.states) states.push_back(assignment_json(ws, s));
    j["states"] = states;
    return j.dump(2);
}

std::string trace_to_json(const Workspace& ws, const IntervalTrace& t) {
    json j;
    j["format"] = "xltlef-trace";
    j["version"] = 1;
    j["kind"] = "interval";
    j["time_model"] = time_model_str(t.model);
    j["loop_start"] = t.loop_start;
    j["loop_dt"] = rat_str(t.loop_dt);
    j["params"] = assignment_json(ws, t.params);
    json entries = json::array();
    for (const auto& e : t.entries) {
        json je;
        je["kind"] = e.singular ? "singular" : "open";
        je["lo"] = rat_str(e.lo);
        je["hi"] = rat_str(e.hi);
        je["state"] = assignment_json(ws, e.state);
        entries.push_back(je);
    }
    j["entries"] = entries;
    return j.dump(2);
}

LoadedTrace trace_from_json(const Workspace& ws, const std::string& json_text) {
    LoadedTrace out;
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        out.error = "malformed JSON";
        return out;
    }
    if (j.value("format", "") != "xltlef-trace" || j.value("version", 0) != 1) {
        out.error = "not an xltlef-trace v1 file";
        return out;
    }
    std::string kind = j.value("kind", "");
    std::string err;
    if (kind == "discrete") {
        DiscreteLassoTrace t;
        t.loop_start = j.value("loop_start", 0u);
        auto dt = rat_parse(j.value("loop_dt", "0"));
        if (!dt) {
            out.error = "bad loop_dt";
            return out;
        }
        t.loop_dt = *dt;
        if (!assignment_from(ws, j["params"], t.params, err)) {
            out.error = err;
            return out;
        }
        for (const auto& s : j["timestamps"]) {
            auto q = rat_parse(s.get<std::string>());
            if (!q) {
                out.error = "bad timestamp";
                return out;
            }
            t.timestamps.push_back(*q);
        }
        for (const auto& s : j["states"]) {
            Assignment a;
            if (!assignment_from(ws, s, a, err)) {
                out.error = err;
                return out;
            }
            t.states.push_back(std::move(a));
        }
        err = t.validate();
        if (!err.empty()) {
            out.error = err;
            return out;
        }
        out.discrete = std::move(t);
        return out;
    }
    if (kind == "interval") {
        IntervalTrace t;
        std::string model = j.value("time_model", "super_dense");
        t.model = model == "dense" ? TimeModelKind::Dense : TimeModelKind::SuperDense;
        t.loop_start = j.value("loop_start", 0u);
        auto dt = rat_parse(j.value("loop_dt", "0"));
        if (!dt) {
            out.error = "bad loop_dt";
            return out;
        }
        t.loop_dt = *dt;
        if (!assignment_from(ws, j["params"], t.params, err)) {
            out.error = err;
            return out;
        }
        for (const auto& je : j["entries"]) {
            IntervalEntry e;
            e.singular = je.value("kind", "singular") == "singular";
            auto lo = rat_parse(je.value("lo", ""));
            auto hi = rat_parse(je.value("hi", ""));
            if (!lo || !hi) {
                out.error = "bad entry endpoint";
                return out;
            }
            e.lo = *lo;
            e.hi = *hi;
            if (!assignment_from(ws, je["state"], e.state, err)) {
                out.error = err;
                return out;
            }
            t.entries.push_back(std::move(e));
        }
        err = t.validate();
        if (!err.empty()) {
            out.error = err;
            return out;
        }
        out.interval = std::move(t);
        return out;
    }
    out.error = "unknown trace kind";
    return out;
}

}  // namespace xltlef
