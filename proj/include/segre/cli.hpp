#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "segre/chains.hpp"
#include "segre/invariants.hpp"
#include "segre/lie.hpp"
#include "segre/manifest.hpp"
#include "segre/orbit.hpp"

namespace segre::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"validate", "chains",    "ranks", "minimality", "multitype", "witness",
                                            "hormander", "levi",     "e1det", "orbit",      "checkall"};
    return c;
}

struct Flags {
    std::optional<Order> order;  // unset: the manifest's own order
    std::uint64_t seed = 0;
    int trials = 5;
    std::size_t kmax = 0;        // 0: 2d + 3 (chains: 5)
    std::string base = "origin";
    std::string format = "human";
    bool certify = false;
    bool paranoid = false;
};

struct Report {
    std::string command;
    Json inputs = Json::object();
    Json results = Json::object();
    Json provenance = Json::object();
    int exit_code = 0;
    std::string diagnostic;  // for stderr

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["results"] = results;
        j["provenance"] = provenance;
        return j;
    }

    std::string machine() const { return to_json().dump(2) + "\n"; }
    std::string human() const;
    std::string render(const std::string& format) const { return format == "machine" ? machine() : human(); }
};

namespace detail {

inline std::string cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); })) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + cell(v[i]);
        return s + ")";
    }
    return v.dump();
}

inline void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else {
        rows.emplace_back(prefix, cell(v));
    }
}

inline std::string table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    std::ostringstream out;
    for (const auto& [k, v] : rows) out << "  " << std::left << std::setw(static_cast<int>(w)) << k << "  " << v << "\n";
    return out.str();
}

}  // namespace detail

inline std::string Report::human() const {
    std::ostringstream out;
    out << command;
    if (inputs.contains("manifest")) out << "  " << inputs["manifest"].get<std::string>();
    out << "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    if (command == "checkall" && results.contains("items")) {
        for (const auto& x : results["items"])
            rows.emplace_back(std::string(x["pass"].get<bool>() ? "PASS " : "FAIL ") + x["manifest"].get<std::string>() +
                                  " " + x["key"].get<std::string>(),
                              "expected " + detail::cell(x["expected"]) + "  actual " + detail::cell(x["actual"]));
        rows.emplace_back("total", detail::cell(results["total"]));
        rows.emplace_back("failed", detail::cell(results["failed"]));
    } else {
        detail::flatten(results, "", rows);
    }
    out << detail::table(rows);
    rows.clear();
    detail::flatten(provenance, "", rows);
    out << "provenance\n" << detail::table(rows);
    return out.str();
}

// ---------------------------------------------------------------------------
// payloads

namespace detail {

inline Json one_based(const std::vector<std::size_t>& v) {
    Json a = Json::array();
    for (auto x : v) a.push_back(x + 1);
    return a;
}

inline Json vec(const Vector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.to_string());
    return a;
}

inline Json blocks(const std::vector<Vector>& bs) {
    Json a = Json::array();
    for (const auto& b : bs) a.push_back(vec(b));
    return a;
}

inline Json series_list(const std::vector<Series>& s) {
    Json a = Json::array();
    for (const auto& x : s) a.push_back(to_string(x));
    return a;
}

inline Json optional_size(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json invariants_json(const SegreInvariants& s) {
    Json j;
    j["r"] = s.profile.r;
    j["e"] = s.profile.e;
    j["kappa"] = s.kappa;
    j["mu"] = s.mu;
    j["nu"] = s.nu;
    j["multitype"] = s.multitype;
    j["minimal"] = s.minimal;
    j["orbit_dims"] = {{"complexified", s.orbit_dim_complexified},
                       {"intrinsic", s.orbit_dim_intrinsic},
                       {"real", s.orbit_dim_real}};
    j["certified"] = s.profile.certified;
    j["sigma_consistent"] = s.profile.sigma_consistent;
    j["stable"] = s.profile.stable;
    return j;
}

inline Json orbit_json(const OrbitResult& r, const std::vector<std::size_t>& start) {
    Json j;
    j["start"] = one_based(start);
    j["word"] = one_based(r.word);
    j["e"] = r.e;
    j["kappa0"] = r.kappa0;
    j["mu0"] = r.mu0;
    j["multitype"] = r.multitype;
    j["orbit_dim"] = r.orbit_dim;
    j["order"] = order_string(r.order);
    j["stable"] = r.stable;
    Json w;
    w["found"] = r.witness.found;
    if (r.witness.found) {
        w["t_star"] = blocks(r.witness.t_star);
        w["rank_mu"] = r.witness.rank_mu;
        w["rank_return"] = r.witness.rank_return;
        w["returns"] = r.witness.returns ? Json(*r.witness.returns) : Json(nullptr);
    }
    j["witness"] = w;
    return j;
}

/// "w1=1, zeta1=-1, xi1=0": chart coordinates, unnamed ones are zero; z is read off the graph.
inline Basepoint parse_base(const CRManifold& M, const std::string& text) {
    if (text == "origin") return Basepoint::origin(M);
    if (text == "generic") return Basepoint::symbolic(M);
    Vector chart(M.chart->size());
    for (const auto& item : segre::detail::split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--base: expected name=value, got '" + item + "'");
        const auto name = segre::detail::trim(item.substr(0, eq));
        const auto idx = M.chart->find(name);
        if (!idx) throw UsageError("--base: unknown coordinate '" + name + "' (use w, zeta, xi)");
        try {
            chart[*idx] = parse_scalar(segre::detail::trim(item.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw UsageError(std::string("--base: ") + e.what());
        }
    }
    auto slice = [&](std::size_t from, std::size_t n) { return Vector(chart.begin() + from, chart.begin() + from + n); };
    auto b = Basepoint::on_graph(M, slice(0, M.m), slice(M.m, M.m), slice(2 * M.m, M.d));
    bool zero = true;
    for (const auto& c : b.ambient_point()) zero = zero && c.is_zero();
    if (zero) b.kind = Basepoint::Kind::Origin;
    return b;
}

inline std::string base_string(const Basepoint& b) {
    if (b.kind == Basepoint::Kind::Origin) return "origin";
    if (b.kind == Basepoint::Kind::Symbolic) return "generic";
    std::ostringstream s;
    const auto p = b.ambient_point();
    for (std::size_t i = 0; i < p.size(); ++i) s << (i ? "," : "") << p[i];
    return s.str();
}

inline RankOptions rank_options(const Flags& f) {
    RankOptions o;
    o.kmax = f.kmax;
    o.trials = f.trials;
    o.seed = f.seed;
    o.certify = f.certify;
    o.paranoid = f.paranoid;
    return o;
}

/// sigma(Gamma_k) == conjugate chain, for k = 1..kmax at a numeric basepoint.
inline Json sigma_checks(const CRManifold& M, const Basepoint& base, std::size_t kmax, bool& all) {
    Json a = Json::array();
    all = true;
    if (base.kind == Basepoint::Kind::Symbolic) return a;
    const auto L = gamma_sequence(M, kmax, base, Parity::L);
    const auto Lb = gamma_sequence(M, kmax, base.sigma(), Parity::Lbar);
    for (std::size_t k = 1; k <= kmax; ++k) {
        const bool ok = sigma_image(L[k - 1]).map == Lb[k - 1].map;
        all = all && ok;
        a.push_back({{"k", k}, {"holds", ok}});
    }
    return a;
}

inline Json reparam_checks(const CRManifold& M, std::size_t kmax, bool& all) {
    Json a = Json::array();
    all = true;
    for (std::size_t k = 1; k <= std::min<std::size_t>(kmax, 5); ++k) {
        const bool ok = check_reparam(M, k).holds;
        all = all && ok;
        a.push_back({{"k", k}, {"holds", ok}});
    }
    return a;
}

inline std::vector<std::vector<std::size_t>> start_orders(const VFSystem& S) {
    std::vector<std::size_t> natural(S.a);
    std::iota(natural.begin(), natural.end(), 0);
    if (S.a == 2) return {natural, {1, 0}};
    return {natural};
}

inline Json orbit_payload(const VFSystem& S, const Flags& f) {
    OrbitOptions o;
    o.order = f.order.value_or(kExact);
    o.trials = f.trials;
    o.seed = f.seed;
    Json runs = Json::array();
    const auto rs = multitypes(S, o);
    const auto starts = start_orders(S);
    for (std::size_t i = 0; i < rs.size(); ++i) runs.push_back(orbit_json(rs[i], starts[i]));
    const std::size_t lie = lie_algebra_dimension(S);
    bool agree = true;
    for (const auto& r : rs) agree = agree && r.orbit_dim == lie;
    Json j;
    j["system"] = {{"n", S.n}, {"m", S.m}, {"a", S.a}, {"codim", S.codim()}};
    j["multitype"] = rs.front().multitype;
    j["orbit_dim"] = rs.front().orbit_dim;
    j["word"] = one_based(rs.front().word);
    j["lie_algebra_dim"] = lie;
    j["certified"] = agree;
    j["runs"] = runs;
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// manifold commands

inline Json validate_payload(const CRManifold& M, bool& ok) {
    const auto vf = vector_fields(M);
    Json j;
    j["m"] = M.m;
    j["d"] = M.d;
    j["order"] = order_string(M.order);
    j["regular"] = M.regular();
    j["theta_bar"] = detail::series_list(M.theta_bar);
    j["theta"] = detail::series_list(M.theta);
    j["reality"] = "holds";
    j["vector_fields"] = {{"L", {{"tangent", vf.L_cert.tangent}, {"commuting", vf.L_cert.commuting}}},
                          {"Lbar", {{"tangent", vf.Lbar_cert.tangent}, {"commuting", vf.Lbar_cert.commuting}}}};
    ok = vf.L_cert.tangent && vf.L_cert.commuting && vf.Lbar_cert.tangent && vf.Lbar_cert.commuting;
    j["valid"] = ok;
    return j;
}

inline Json chains_payload(const CRManifold& M, const Basepoint& base, const Flags& f) {
    const std::size_t kmax = f.kmax ? f.kmax : 5;
    Json j;
    j["kmax"] = kmax;
    j["base"] = detail::base_string(base);
    Json list = Json::array();
    for (const auto& g : gamma_sequence(M, kmax, base, Parity::L)) {
        Json c;
        c["k"] = g.k;
        c["in_manifold"] = lands_in_manifold(M, g.map);
        c["components"] = detail::series_list(g.map.components());
        list.push_back(c);
    }
    j["gamma"] = list;
    bool all = true;
    if (base.kind == Basepoint::Kind::Origin) {
        j["reparam"] = detail::reparam_checks(M, kmax, all);
        j["reparam_all_hold"] = all;
    }
    if (base.kind != Basepoint::Kind::Symbolic) {
        j["sigma"] = detail::sigma_checks(M, base, kmax, all);
        j["sigma_all_hold"] = all;
    }
    return j;
}

inline Json witness_payload(const CRManifold& M, const Basepoint& base, const Flags& f) {
    const auto opt = detail::rank_options(f);
    const auto inv = segre_invariants(M, base, opt);
    const auto w = witness_point(M, inv, base, f.seed);
    const auto psi = psi_rank_checks(M, base, opt);
    Json j;
    j["mu"] = w.mu;
    j["trivial"] = w.trivial;
    j["w_star"] = detail::blocks(w.w_star);
    j["omega_star"] = detail::blocks(w.omega_star);
    j["rank_mu"] = w.rank_mu;
    j["rank_return"] = w.rank_return;
    j["returns"] = w.returns;
    j["attempts"] = w.attempts;
    Json checks = Json::array();
    for (const auto& c : psi.checks) checks.push_back({{"k", c.k}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
    j["psi"] = {{"checks", checks},
                {"all_hold", psi.all_hold},
                {"witness_returns", psi.witness_returns},
                {"witness_rank", psi.witness_rank},
                {"expected_witness_rank", psi.expected_witness_rank},
                {"witness_ok", psi.witness_ok}};
    return j;
}

inline Json hormander_payload(const CRManifold& M, const Basepoint& base, const Flags& f) {
    LieOptions lo;
    lo.trials = f.trials;
    lo.seed = f.seed;
    const auto H = hormander_numbers(M, base, lo);
    const auto S = segre_invariants(M, base, detail::rank_options(f));
    Json ladder = Json::array();
    for (const auto& s : H.ladder) ladder.push_back({{"length", s.length}, {"multiplicity", s.multiplicity}, {"dim", s.dim}});
    Json j;
    j["base_dim"] = H.base_dim;
    j["ladder"] = ladder;
    j["dims"] = H.dims;
    j["h"] = H.h();
    j["sum_l"] = H.total();
    j["sum_e"] = sum(S.profile.e);
    j["minimal"] = H.minimal;
    j["segre_minimal"] = S.minimal;
    j["crosscheck"] = H.total() == sum(S.profile.e) && H.minimal == S.minimal;
    return j;
}

inline Json levi_payload(const CRManifold& M, const Basepoint& base, const Flags& f) {
    const auto r = levi_type(M, base, f.kmax, f.trials, f.seed);
    const auto h = holomorphic_nondegeneracy(M, f.kmax, f.trials, f.seed);
    Json j;
    j["levi_type"] = detail::optional_size(r.type);
    j["dims"] = r.dims;
    j["holomorphically_nondegenerate"] = h.nondegenerate;
    j["generic_type"] = detail::optional_size(h.generic_type);
    j["checked_up_to"] = h.kmax;
    return j;
}

inline Json e1det_payload(const CRManifold& M) {
    const auto e = e1_determinant(M);
    return Json{{"det", to_string(e.det)}, {"vanishes", e.vanishes}, {"e1_origin_is_2", !e.vanishes}};
}

inline Json minimality_payload(const CRManifold& M, const Basepoint& base, const Flags& f) {
    const auto s = segre_invariants(M, base, detail::rank_options(f));
    Json j = detail::invariants_json(s);
    if (M.d == 1 && base.kind == Basepoint::Kind::Origin) {
        const auto h = hypersurface_minimality(M);
        j["hypersurface"] = {{"minimal", h.minimal},
                             {"test", h.regular ? "regular" : "polarized"},
                             {"witness", to_string(h.witness)},
                             {"agrees", h.minimal == s.minimal}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// checkall

struct Expectation {
    std::string manifest;
    std::string key;
    std::string expected;
    std::string actual;
    bool pass = false;
};

namespace detail {

inline std::string list_string(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::string bool_string(bool b) { return b ? "true" : "false"; }

inline std::string opt_string(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

inline std::string normalize_list(const std::string& s) {
    std::string out;
    for (const auto& p : segre::detail::split(s, ',')) out += (out.empty() ? "" : ",") + p;
    return out;
}

inline std::string normalize_ladder(const std::string& s) {
    std::string out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out += (out.empty() ? "" : " ") + tok;
    return out;
}

/// Lazily computed values for one manifold at the origin.
class ManifoldFacts {
public:
    ManifoldFacts(const CRManifold& M, const Flags& f) : M_(M), f_(f) {}

    std::string value(const std::string& key, const std::string& expected) {
        const auto o = Basepoint::origin(M_);
        if (key == "minimal") return bool_string(origin().minimal);
        if (key == "mu") return std::to_string(origin().mu);
        if (key == "kappa") return std::to_string(origin().kappa);
        if (key == "r") return list_string(origin().profile.r);
        if (key == "e") return list_string(origin().profile.e);
        if (key == "multitype") return list_string(origin().multitype);
        if (key == "e_generic") return list_string(generic().profile.e);
        if (key == "hypersurface_minimal") return bool_string(hypersurface_minimality(M_).minimal);
        if (key == "ladder") {
            std::string s;
            for (const auto& st : hormander().ladder)
                s += (s.empty() ? "" : " ") + std::to_string(st.length) + ":" + std::to_string(st.multiplicity);
            return s;
        }
        if (key == "crosscheck")
            return bool_string(hormander().total() == sum(origin().profile.e) && hormander().minimal == origin().minimal);
        if (key == "levi_type") return opt_string(levi_type(M_, o, f_.kmax, f_.trials, f_.seed).type);
        if (key == "holo_nondeg") return bool_string(holomorphic_nondegeneracy(M_, f_.kmax, f_.trials, f_.seed).nondegenerate);
        if (key == "e1det_zero") return bool_string(e1_determinant(M_).vanishes);
        if (key == "e1det") {
            const auto det = e1_determinant(M_).det;
            const auto want = parse_series(expected, M_.ambient, M_.order);
            return det == want ? expected : to_string(det);
        }
        if (key == "reparam") {
            bool all = true;
            reparam_checks(M_, 5, all);
            return bool_string(all);
        }
        if (key == "sigma") {
            bool all = true;
            sigma_checks(M_, o, default_kmax(M_), all);
            return bool_string(all);
        }
        if (key == "psi") return bool_string(psi_rank_checks(M_, o, rank_options(f_)).all_hold);
        if (key == "witness") {
            const auto w = witness_point(M_, origin(), o, f_.seed);
            return bool_string(w.returns && (w.trivial || w.rank_return == w.rank_mu));
        }
        if (key == "orbit_matches") {
            bool ok = true;
            for (const auto& r : multitypes(cr_system(M_), {kExact, f_.trials, f_.seed, false}))
                ok = ok && r.multitype == origin().multitype;
            return bool_string(ok);
        }
        throw ManifestError("unknown expectation key '" + key + "'");
    }

private:
    const SegreInvariants& origin() {
        if (!origin_) origin_ = segre_invariants(M_, Basepoint::origin(M_), rank_options(f_));
        return *origin_;
    }
    const SegreInvariants& generic() {
        if (!generic_) generic_ = segre_invariants(M_, Basepoint::symbolic(M_), rank_options(f_));
        return *generic_;
    }
    const HormanderData& hormander() {
        if (!hormander_) hormander_ = hormander_numbers(M_, Basepoint::origin(M_), LieOptions{0, f_.trials, f_.seed});
        return *hormander_;
    }

    const CRManifold& M_;
    Flags f_;
    std::optional<SegreInvariants> origin_, generic_;
    std::optional<HormanderData> hormander_;
};

inline std::string system_value(const VFSystem& S, const Flags& f, const std::string& key) {
    OrbitOptions o{f.order.value_or(kExact), f.trials, f.seed, false};
    if (key == "orbit_dim") return std::to_string(orbit_dimension(S, o));
    if (key == "multitype") return list_string(greedy_multitype(S, o).multitype);
    if (key == "word") {
        std::vector<std::size_t> w;
        for (auto x : greedy_multitype(S, o).word) w.push_back(x + 1);
        return list_string(w);
    }
    if (key == "lie_dim") return std::to_string(lie_algebra_dimension(S));
    throw ManifestError("unknown expectation key '" + key + "'");
}

inline std::string normalize(const std::string& key, const std::string& v) {
    if (key == "ladder") return normalize_ladder(v);
    if (key == "e1det") return v;
    return normalize_list(v);
}

}  // namespace detail

/// Runs every `<name>.expected` sidecar in `dir` against its `<name>.tomlish`.
inline std::vector<Expectation> check_corpus(const std::string& dir, const Flags& f) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".tomlish") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Expectation> out;
    for (const auto& p : files) {
        auto side = p;
        side.replace_extension(".expected");
        if (!fs::exists(side)) continue;
        const auto mf = load_manifest(p.string());
        const auto exp = load_manifest(side.string());
        const std::string name = p.stem().string();
        auto record = [&](const std::string& key, const std::string& want, const std::function<std::string()>& get) {
            Expectation x{name, key, detail::normalize(key, want), "", false};
            try {
                x.actual = detail::normalize(key, get());
                x.pass = x.actual == x.expected;
            } catch (const Error& e) {
                x.actual = std::string(e.name()) + ": " + e.what();
            }
            out.push_back(std::move(x));
        };
        if (mf.kind() == "system") {
            std::optional<VFSystem> S;
            for (const auto& [k, e] : exp.entries)
                record(k, e.value, [&] {
                    if (!S) S = to_system(mf);
                    return detail::system_value(*S, f, k);
                });
            continue;
        }
        std::optional<CRManifold> M;
        std::optional<detail::ManifoldFacts> facts;
        for (const auto& [k, e] : exp.entries)
            record(k, e.value, [&] {
                if (!M) {
                    M = to_manifold(mf, f.order);
                    facts.emplace(*M, f);
                }
                return facts->value(k, e.value);
            });
    }
    return out;
}

// ---------------------------------------------------------------------------
// dispatch

inline Report run(const std::string& command, const std::string& path, const Flags& f) {
    Report rep;
    rep.command = command;
    rep.inputs["manifest"] = path;
    rep.inputs["base"] = f.base;
    rep.provenance = {{"seed", f.seed},
                      {"trials", f.trials},
                      {"order", f.order ? order_string(*f.order) : "manifest"},
                      {"kmax", f.kmax},
                      {"certify", f.certify},
                      {"paranoid", f.paranoid},
                      {"version", kVersion}};
    try {
        if (std::find(commands().begin(), commands().end(), command) == commands().end())
            throw UsageError("unknown command '" + command + "'");
        if (f.trials < 1) throw UsageError("--trials must be positive");
        if (f.format != "human" && f.format != "machine") throw UsageError("--format must be human or machine");

        if (command == "checkall") {
            const auto items = check_corpus(path, f);
            Json list = Json::array();
            std::size_t failed = 0;
            for (const auto& x : items) {
                list.push_back({{"manifest", x.manifest},
                                {"key", x.key},
                                {"expected", x.expected},
                                {"actual", x.actual},
                                {"pass", x.pass}});
                if (!x.pass) ++failed;
            }
            rep.results["items"] = list;
            rep.results["total"] = items.size();
            rep.results["failed"] = failed;
            if (failed) {
                rep.exit_code = 1;
                rep.diagnostic = std::to_string(failed) + " of " + std::to_string(items.size()) + " expectations failed";
            }
            return rep;
        }

        const auto mf = load_manifest(path);
        if (mf.kind() == "system") {
            if (command != "orbit" && command != "validate")
                throw UsageError("'" + command + "' needs a manifold manifest");
            const auto S = to_system(mf);
            rep.inputs["name"] = S.name;
            if (command == "validate")
                rep.results = {{"valid", true}, {"n", S.n}, {"m", S.m}, {"a", S.a}, {"codim", S.codim()}};
            else
                rep.results = detail::orbit_payload(S, f);
            return rep;
        }
        if (mf.kind() != "manifold") throw ManifestError(mf.where(mf.line_of("kind")) + "unknown kind '" + mf.kind() + "'");

        const auto M = to_manifold(mf, f.order);
        rep.inputs["name"] = M.name;
        rep.provenance["order"] = order_string(M.order);
        const auto base = detail::parse_base(M, f.base);
        if (command == "validate") {
            bool ok = true;
            rep.results = validate_payload(M, ok);
            if (!ok) {
                rep.exit_code = 1;
                rep.diagnostic = "CR vector field certificates failed";
            }
        } else if (command == "chains") {
            rep.results = chains_payload(M, base, f);
        } else if (command == "ranks") {
            const auto p = rank_profile(M, base, detail::rank_options(f));
            Json w = Json::array();
            for (const auto& r : p.witnesses) w.push_back(detail::vec(r.witness));
            rep.results = {{"r", p.r},
                           {"e", p.e},
                           {"certified", p.certified},
                           {"sigma_consistent", p.sigma_consistent},
                           {"stable", p.stable},
                           {"witnesses", w}};
        } else if (command == "minimality" || command == "multitype") {
            rep.results = minimality_payload(M, base, f);
        } else if (command == "witness") {
            rep.results = witness_payload(M, base, f);
        } else if (command == "hormander") {
            rep.results = hormander_payload(M, base, f);
        } else if (command == "levi") {
            rep.results = levi_payload(M, base, f);
        } else if (command == "e1det") {
            rep.results = e1det_payload(M);
        } else if (command == "orbit") {
            if (base.kind != Basepoint::Kind::Origin) throw UsageError("orbit works at the origin only");
            rep.results = detail::orbit_payload(cr_system(M), f);
        }
    } catch (const UsageError& e) {
        rep.exit_code = 2;
        rep.diagnostic = std::string("usage: ") + e.what();
    } catch (const ManifestError& e) {
        rep.exit_code = 2;
        rep.diagnostic = std::string("ManifestError: ") + e.what();
    } catch (const Error& e) {
        rep.exit_code = 1;
        rep.diagnostic = std::string(e.name()) + ": " + e.what();
    }
    return rep;
}

}  // namespace segre::cli
