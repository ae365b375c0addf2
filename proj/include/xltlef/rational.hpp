// Exact rational arithmetic used throughout: timestamps, interval endpoints,
// trace values, and the decision procedure all use mpq to keep openness
// distinctions exact (no floats anywhere in the semantics).

#ifndef XLTLEF_RATIONAL_HPP
#define XLTLEF_RATIONAL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace xltlef {

using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "n", "-n", "n/d", and decimal "a.b" forms.
std::optional<Rat> rat_parse(const std::string& text);

// Canonical "n" or "n/d" rendering (never decimal, round-trip safe).
std::string rat_str(const Rat& q);

std::size_t rat_hash(const Rat& q);

// floor(q) clamped into long
long rat_floor_long(const Rat& q);

inline bool rat_is_int(const Rat& q) { return q.get_den() == 1; }

}  // namespace xltlef

#endif  // XLTLEF_RATIONAL_HPP
