#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "segre/expression.hpp"
#include "segre/manifold.hpp"
#include "segre/orbit.hpp"

namespace segre {

/*
 * Manifest
 * --------
 * Line-oriented `key = value` files; `#` starts a comment. Two kinds:
 *
 *   kind = manifold              kind = system
 *   m = 1                        n = 3
 *   d = 1                        m = 1
 *   order = EXACT                a = 2
 *   theta_bar_1 = w1^2*zeta1^2   vars = x, y, t        (optional)
 *                                field_2_1_t = x       (field 2, component 1, coefficient of d/dt)
 *
 * A manifold can instead be given in real form: `form = real` and
 * `h_j = ...` over w, wbar, x, meaning y_j = h_j.
 */
struct Manifest {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string path;
    std::map<std::string, Entry> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    const std::string& get(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw ManifestError(where(0) + "missing key '" + key + "'");
        return it->second.value;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? get(key) : fallback;
    }

    std::string kind() const { return get_or("kind", "manifold"); }
    std::string name() const { return get_or("name", ""); }

    std::string where(int line) const {
        std::string s = path.empty() ? "<manifest>" : path;
        if (line > 0) s += ":" + std::to_string(line);
        return s + ": ";
    }

    int line_of(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    }

    std::size_t get_size(const std::string& key) const {
        const auto& v = get(key);
        try {
            std::size_t pos = 0;
            const long n = std::stol(v, &pos);
            if (pos != v.size() || n < 0) throw std::invalid_argument(v);
            return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            throw ManifestError(where(line_of(key)) + "'" + key + "' must be a non-negative integer, got '" + v + "'");
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

inline Manifest parse_manifest(const std::string& text, const std::string& path = "") {
    Manifest mf;
    mf.path = path;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        const auto s = detail::trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ManifestError(mf.where(line) + "expected 'key = value'");
        const auto key = detail::trim(s.substr(0, eq));
        const auto value = detail::trim(s.substr(eq + 1));
        if (key.empty()) throw ManifestError(mf.where(line) + "empty key");
        if (mf.entries.count(key)) throw ManifestError(mf.where(line) + "duplicate key '" + key + "'");
        mf.entries[key] = {value, line};
    }
    return mf;
}

inline Manifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ManifestError(path + ": cannot open file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_manifest(ss.str(), path);
}

/// Canonical text: kind, name, then the remaining keys in a fixed order.
inline std::string serialize(const Manifest& mf) {
    static const std::vector<std::string> head{"kind", "name", "form", "m", "d", "n", "a", "order", "vars"};
    std::ostringstream out;
    for (const auto& k : head)
        if (mf.has(k)) out << k << " = " << mf.get(k) << "\n";
    for (const auto& [k, e] : mf.entries)
        if (std::find(head.begin(), head.end(), k) == head.end()) out << k << " = " << e.value << "\n";
    return out.str();
}

inline Order parse_order(const std::string& s) {
    if (s == "EXACT" || s == "exact") return kExact;
    try {
        std::size_t pos = 0;
        const int n = std::stoi(s, &pos);
        if (pos == s.size() && n > 0) return Order(n);
    } catch (const std::exception&) {
    }
    throw UsageError("order must be EXACT or a positive integer, got '" + s + "'");
}

inline std::string order_string(Order o) { return o ? std::to_string(*o) : "EXACT"; }

/*
 * Builds the manifold. `order_override` replaces the manifest's order when
 * set. Real-form inputs with x-dependence default to order 10.
 */
inline CRManifold to_manifold(const Manifest& mf, std::optional<Order> order_override = std::nullopt) {
    if (mf.kind() != "manifold") throw ManifestError(mf.where(0) + "not a manifold manifest");
    const std::size_t m = mf.get_size("m"), d = mf.get_size("d");
    Order order = kExact;
    try {
        order = order_override ? *order_override : parse_order(mf.get_or("order", "EXACT"));
    } catch (const UsageError& e) {
        throw ManifestError(mf.where(mf.line_of("order")) + e.what());
    }
    const bool real = mf.get_or("form", "graph") == "real";
    const std::string prefix = real ? "h_" : "theta_bar_";
    const auto sp = real ? real_space(m, d) : ambient_space(m, d);
    std::vector<Series> comps;
    for (std::size_t j = 1; j <= d; ++j) {
        const auto key = prefix + std::to_string(j);
        try {
            comps.push_back(parse_series(mf.get(key), sp, order));
        } catch (const ParseError& e) {
            throw ManifestError(mf.where(mf.line_of(key)) + e.what());
        }
    }
    for (const auto& [k, e] : mf.entries)
        if (k.rfind(prefix, 0) == 0) {
            const auto idx = k.substr(prefix.size());
            if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit) || std::stoul(idx) < 1 ||
                std::stoul(idx) > d)
                throw ManifestError(mf.where(e.line) + "unexpected key '" + k + "' for d = " + std::to_string(d));
        }
    if (!real) return new_manifold(m, d, comps, order, mf.name());
    if (!order_override && !mf.has("order")) {
        try {
            return graph_from_real(m, d, comps, kExact, mf.name());
        } catch (const TruncationRequired&) {
            return graph_from_real(m, d, comps, Order(10), mf.name());
        }
    }
    return graph_from_real(m, d, comps, order, mf.name());
}

inline VFSystem to_system(const Manifest& mf) {
    if (mf.kind() != "system") throw ManifestError(mf.where(0) + "not a system manifest");
    const std::size_t n = mf.get_size("n"), m = mf.get_size("m"), a = mf.get_size("a");
    std::vector<std::string> names;
    if (mf.has("vars")) {
        names = detail::split(mf.get("vars"), ',');
        if (names.size() != n)
            throw ManifestError(mf.where(mf.line_of("vars")) + "expected " + std::to_string(n) + " variable names");
    } else {
        for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    }
    VarSpacePtr sp;
    try {
        sp = coord_space(names);
    } catch (const Error& e) {
        throw ManifestError(mf.where(mf.line_of("vars")) + e.what());
    }
    std::vector<std::vector<VectorField>> fields(a, std::vector<VectorField>(m, VectorField(sp)));
    for (const auto& [k, e] : mf.entries) {
        if (k.rfind("field_", 0) != 0) continue;
        const auto parts = detail::split(k.substr(6), '_');
        std::size_t alpha = 0, i = 0;
        std::optional<std::size_t> v;
        if (parts.size() >= 3) {
            try {
                alpha = std::stoul(parts[0]);
                i = std::stoul(parts[1]);
            } catch (const std::exception&) {
                alpha = 0;
            }
            std::string var = k.substr(6 + parts[0].size() + 1 + parts[1].size() + 1);
            v = sp->find(var);
        }
        if (!v || alpha < 1 || alpha > a || i < 1 || i > m)
            throw ManifestError(mf.where(e.line) + "bad field key '" + k + "' (expected field_<alpha>_<i>_<var>)");
        try {
            fields[alpha - 1][i - 1][*v] = parse_series(e.value, sp);
        } catch (const ParseError& err) {
            throw ManifestError(mf.where(e.line) + err.what());
        }
    }
    return make_system(sp, std::move(fields), mf.name());
}

}  // namespace segre
