#include "xltlef/rational.hpp"

#include <climits>

namespace xltlef {

std::optional<Rat> rat_parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto dot = text.find('.');
    try {
        if (dot != std::string::npos) {
            std::string ip = text.substr(0, dot);
            std::string fp = text.substr(dot + 1);
            if (fp.empty() || fp.find_first_not_of("0123456789") != std::string::npos)
                return std::nullopt;
            bool neg = !ip.empty() && ip[0] == '-';
            if (neg) ip = ip.substr(1);
            if (ip.empty()) ip = "0";
            if (ip.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
            mpz_class num(ip + fp);
            mpz_class den(1);
            for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
            Rat q(num, den);
            q.canonicalize();
            if (neg) q = -q;
            return q;
        }
        Rat q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::string rat_str(const Rat& q) {
    return q.get_str();
}

long rat_floor_long(const Rat& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!f.fits_slong_p()) return f < 0 ? LONG_MIN : LONG_MAX;
    return f.get_si();
}

std::size_t rat_hash(const Rat& q) {
    // Cheap but stable: hash the canonical string.
    return std::hash<std::string>{}(q.get_str());
}

}  // namespace xltlef
