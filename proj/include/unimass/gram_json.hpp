#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "unimass/errors.hpp"
#include "unimass/hermlocal.hpp"

namespace unimass {

// Gram matrices travel as {"m": ..., "n": ..., "entries": [[[x,y],...],...]}
// where entry (i,j) is x + y*omega.  Integers too big for JSON numbers may
// be given as decimal strings.

namespace detail {

inline Int int_from_json(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            return Int(s);
        } catch (const std::exception&) {
            throw input_error(where + ": '" + s + "' is not a decimal integer");
        }
    }
    throw input_error(where + ": expected an integer or a decimal string");
}

} // namespace detail

inline GramMatrix gram_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw input_error("gram: expected a JSON object");
    for (const char* key : {"m", "n", "entries"})
        if (!j.contains(key)) throw input_error(std::string("gram: missing field '") + key + "'");
    const Int m = detail::int_from_json(j.at("m"), "gram.m");
    const Int n_raw = detail::int_from_json(j.at("n"), "gram.n");
    if (n_raw < 1 || n_raw > 64) throw input_error("gram.n: expected a rank between 1 and 64");
    const unsigned n = static_cast<unsigned>(n_raw);
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n)
        throw input_error("gram.entries: expected " + std::to_string(n) + " rows");
    std::vector<std::vector<OEElem>> e(n, std::vector<OEElem>(n));
    for (unsigned i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw input_error("gram.entries[" + std::to_string(i) + "]: expected " +
                              std::to_string(n) + " entries");
        for (unsigned jj = 0; jj < n; ++jj) {
            const std::string where =
                "gram.entries[" + std::to_string(i) + "][" + std::to_string(jj) + "]";
            const auto& cell = row[jj];
            if (!cell.is_array() || cell.size() != 2)
                throw input_error(where + ": expected a pair [x, y]");
            e[i][jj].x = detail::int_from_json(cell[0], where + "[0]");
            e[i][jj].y = detail::int_from_json(cell[1], where + "[1]");
        }
    }
    return make_gram(m, std::move(e)); // rejects non-Hermitian input
}

inline nlohmann::json int_to_json(const Int& v) {
    // safe round trip regardless of size
    return v.str();
}

inline nlohmann::json gram_to_json(const GramMatrix& g) {
    nlohmann::ordered_json j;
    j["m"] = int_to_json(g.m);
    j["n"] = g.n;
    auto rows = nlohmann::ordered_json::array();
    for (unsigned i = 0; i < g.n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (unsigned jj = 0; jj < g.n; ++jj)
            row.push_back({int_to_json(g.e[i][jj].x), int_to_json(g.e[i][jj].y)});
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

// "identity:n" and "H^k" (k hyperbolic planes; bare "H" means one).
inline GramMatrix gram_from_shorthand(const std::string& s, const Int& m) {
    if (s.rfind("identity:", 0) == 0) {
        const std::string tail = s.substr(9);
        try {
            const int n = std::stoi(tail);
            if (n >= 1 && n <= 64) return identity_gram(m, static_cast<unsigned>(n));
        } catch (const std::exception&) {
        }
        throw input_error("gram shorthand: bad rank in '" + s + "'");
    }
    if (s == "H") return hyperbolic_gram(m, 1);
    if (s.rfind("H^", 0) == 0) {
        const std::string tail = s.substr(2);
        try {
            const int k = std::stoi(tail);
            if (k >= 1 && k <= 32) return hyperbolic_gram(m, static_cast<unsigned>(k));
        } catch (const std::exception&) {
        }
        throw input_error("gram shorthand: bad plane count in '" + s + "'");
    }
    throw input_error("gram shorthand: unrecognized '" + s +
                      "' (want identity:n, H, or H^k)");
}

} // namespace unimass
