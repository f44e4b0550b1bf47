#pragma once

#include <string>
#include <vector>

#include "segre/manifold.hpp"

namespace segre {

enum class Parity { L, Lbar };

inline Parity flip(Parity p) { return p == Parity::L ? Parity::Lbar : Parity::L; }
inline const char* to_string(Parity p) { return p == Parity::L ? "L" : "Lbar"; }

/// Which field drives flow number i (1-based) of a chain of the given parity.
inline Parity field_of_step(Parity start, std::size_t i) { return (i % 2 == 1) ? start : flip(start); }

enum class Chart { Ambient, WZZeta, WZetaXi };

inline std::vector<std::string> chart_blocks(Chart c) {
    switch (c) {
        case Chart::WZZeta: return {"w", "z", "zeta"};
        case Chart::WZetaXi: return {"w", "zeta", "xi"};
        default: return {"w", "z", "zeta", "xi"};
    }
}

/// (w, zeta, xi) for odd k, (w, z, zeta) for even k.
inline Chart default_chart(std::size_t k) { return k % 2 ? Chart::WZetaXi : Chart::WZZeta; }

/*
 * ChainMap
 * --------
 * Gamma_k (parity L) or its conjugate (parity Lbar) as a SeriesMap from the
 * chain parameters u1..uk (plus wp, zetap, xip for a symbolic basepoint)
 * into the ambient space (w, z, zeta, xi).
 */
struct ChainMap {
    std::size_t k = 0;
    Parity parity = Parity::L;
    Basepoint base;
    SeriesMap map;

    std::vector<std::size_t> chain_params() const {
        std::vector<std::string> labels;
        for (std::size_t i = 1; i <= k; ++i) labels.push_back(chain_block(i));
        return map.domain()->indices_of(labels);
    }

    SeriesMap in_chart(Chart c) const { return project(map, chart_blocks(c)); }
};

/// Point of the manifold as four blocks of series over a parameter space.
struct ChainState {
    std::vector<Series> w, z, zeta, xi;
};

namespace detail {

inline SeriesMap state_map(const CRManifold& M, const VarSpacePtr& domain, const ChainState& s) {
    return ambient_map(M, domain, s.w, s.z, s.zeta, s.xi);
}

inline ChainState initial_state(const CRManifold& M, const VarSpacePtr& domain, const Basepoint& b) {
    ChainState s;
    if (b.kind == Basepoint::Kind::Symbolic) {
        s.w = block_vars(domain, "wp", M.order);
        s.zeta = block_vars(domain, "zetap", M.order);
        s.xi = block_vars(domain, "xip", M.order);
        auto pre = ambient_map(M, domain, s.w, std::vector<Series>(M.d, Series(domain, M.order)), s.zeta, s.xi);
        for (std::size_t j = 0; j < M.d; ++j) s.z.push_back(compose(M.qbar(j), pre));
        return s;
    }
    s.w = constants(domain, b.w, M.order);
    s.z = constants(domain, b.z, M.order);
    s.zeta = constants(domain, b.zeta, M.order);
    s.xi = constants(domain, b.xi, M.order);
    return s;
}

}  // namespace detail

/*
 * One vectorial flow applied to `state` with time `param` (m series):
 *   L:    (w, z, zeta, xi) -> (w + u, Qbar(w + u, zeta, xi), zeta, xi)
 *   Lbar: (w, z, zeta, xi) -> (w, z, zeta + u, Q(zeta + u, w, z))
 */
inline ChainState flow_unchecked(const CRManifold& M, Parity which, const ChainState& state,
                                 const std::vector<Series>& param) {
    const auto& domain = param.front().space();
    ChainState out = state;
    if (which == Parity::L) {
        for (std::size_t a = 0; a < M.m; ++a) out.w[a] = state.w[a] + param[a];
        auto pre = detail::state_map(M, domain, out);
        for (std::size_t j = 0; j < M.d; ++j) out.z[j] = compose(M.qbar(j), pre);
    } else {
        for (std::size_t a = 0; a < M.m; ++a) out.zeta[a] = state.zeta[a] + param[a];
        auto pre = detail::state_map(M, domain, out);
        for (std::size_t j = 0; j < M.d; ++j) out.xi[j] = compose(M.q(j), pre);
    }
    return out;
}

inline ChainState flow(const CRManifold& M, Parity which, const ChainState& state, const std::vector<Series>& param) {
    if (param.size() != M.m) throw DimensionMismatch("flow time must have m components");
    const auto& domain = param.front().space();
    if (!lands_in_manifold(M, detail::state_map(M, domain, state)))
        throw OffManifold("flow started from a point off the manifold");
    return flow_unchecked(M, which, state, param);
}

/*
 * Builds Gamma_1, Gamma_2, ... one flow at a time over a shared parameter
 * space with `kmax` blocks; next() returns Gamma_k re-expressed over the
 * space of its own k blocks.
 */
class ChainBuilder {
public:
    ChainBuilder(const CRManifold& M, std::size_t kmax, const Basepoint& base, Parity parity = Parity::L)
        : M_(M), base_(base), parity_(parity), kmax_(kmax),
          symbolic_(base.kind == Basepoint::Kind::Symbolic),
          big_(chain_space(M.m, M.d, kmax, symbolic_)),
          state_(detail::initial_state(M, big_, base)) {}

    std::size_t k() const { return k_; }
    bool done() const { return k_ >= kmax_; }

    ChainMap next() {
        if (done()) throw Error("chain builder exhausted");
        ++k_;
        state_ = flow_unchecked(M_, field_of_step(parity_, k_), state_,
                                detail::block_vars(big_, chain_block(k_), M_.order));
        const auto small = chain_space(M_.m, M_.d, k_, symbolic_);
        return {k_, parity_, base_, rename_into(detail::state_map(M_, big_, state_), small)};
    }

private:
    const CRManifold& M_;
    Basepoint base_;
    Parity parity_;
    std::size_t kmax_;
    bool symbolic_;
    VarSpacePtr big_;
    ChainState state_;
    std::size_t k_ = 0;
};

/// Gamma_1..Gamma_kmax; entry i-1 holds Gamma_i.
inline std::vector<ChainMap> gamma_sequence(const CRManifold& M, std::size_t kmax, const Basepoint& base,
                                            Parity parity = Parity::L) {
    ChainBuilder b(M, kmax, base, parity);
    std::vector<ChainMap> out;
    while (!b.done()) out.push_back(b.next());
    return out;
}

inline ChainMap gamma(const CRManifold& M, std::size_t k, const Basepoint& base, Parity parity = Parity::L) {
    if (k == 0) throw Error("chain length must be at least 1");
    return gamma_sequence(M, k, base, parity).back();
}

/// Projection onto the coordinates moved by the last flow: (w, z) after an L-flow, (zeta, xi) after Lbar.
inline SeriesMap psi(const ChainMap& c) {
    const bool last_L = field_of_step(c.parity, c.k) == Parity::L;
    return project(c.map, last_L ? std::vector<std::string>{"w", "z"} : std::vector<std::string>{"zeta", "xi"});
}

inline SeriesMap psi(const CRManifold& M, std::size_t k, const Basepoint& base, Parity parity = Parity::L) {
    return psi(gamma(M, k, base, parity));
}

/*
 * The nested map of iterated complexifications, built directly from Q and
 * Qbar: v^k(u1, .., uk) = (u1, Qbar(u1, u2, Q(u2, u3, Qbar(..)))), innermost
 * Qbar(uk, 0, 0) for odd k and Q(uk, 0, 0) for even k. Codomain (w, z).
 */
inline SeriesMap v_map(const CRManifold& M, std::size_t k) {
    const auto dom = chain_space(M.m, M.d, k, false);
    const auto target = subspace(*M.ambient, {"w", "z"});
    if (k == 0) return {dom, target, std::vector<Series>(M.n(), Series(dom, M.order))};
    const auto zero_m = std::vector<Series>(M.m, Series(dom, M.order));
    const auto zero_d = std::vector<Series>(M.d, Series(dom, M.order));
    std::vector<Series> inner = zero_d;
    for (std::size_t i = k; i >= 1; --i) {
        const auto ui = detail::block_vars(dom, chain_block(i), M.order);
        const auto next = i < k ? detail::block_vars(dom, chain_block(i + 1), M.order) : zero_m;
        std::vector<Series> cur;
        if (i % 2 == 1) {
            auto pre = detail::ambient_map(M, dom, ui, zero_d, next, inner);
            for (std::size_t j = 0; j < M.d; ++j) cur.push_back(compose(M.qbar(j), pre));
        } else {
            auto pre = detail::ambient_map(M, dom, next, inner, ui, zero_d);
            for (std::size_t j = 0; j < M.d; ++j) cur.push_back(compose(M.q(j), pre));
        }
        inner = std::move(cur);
    }
    std::vector<Series> comps = detail::block_vars(dom, chain_block(1), M.order);
    comps.insert(comps.end(), inner.begin(), inner.end());
    return {dom, target, std::move(comps)};
}

struct ReparamVerdict {
    std::size_t k = 0;
    bool holds = false;
    SeriesMap lhs;  // reparametrised v^k (conjugated coefficients for even k)
    SeriesMap rhs;  // projection of Gamma_k
};

/*
 * The reparametrisation identities relating v^k and Gamma_k at the origin,
 * for k = 1..5: argument i of v^k is the sum of the u_j with j <= k + 1 - i
 * and j = k + 1 - i (mod 2); even k uses the coefficient-conjugated map and
 * compares with the (zeta, xi) projection.
 */
inline ReparamVerdict check_reparam(const CRManifold& M, std::size_t k) {
    if (k < 1 || k > 5) throw Error("reparametrisation identities are only listed for k = 1..5");
    const auto g = gamma(M, k, Basepoint::origin(M), Parity::L);
    auto v = v_map(M, k);
    if (k % 2 == 0) {
        std::vector<Series> c;
        for (const auto& s : v.components()) c.push_back(conjugate_coefficients(s));
        v = SeriesMap(v.domain(), v.codomain(), std::move(c));
    }
    const auto dom = g.map.domain();
    std::vector<Series> args;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t top = k + 1 - i;
        for (std::size_t a = 0; a < M.m; ++a) {
            Series s(dom, M.order);
            for (std::size_t j = top % 2 == 0 ? 2 : 1; j <= top; j += 2)
                s += Series::variable(dom, chain_block(j) + "_" + std::to_string(a + 1), M.order);
            args.push_back(std::move(s));
        }
    }
    SeriesMap sub(dom, v.domain(), std::move(args));
    auto lhs = compose(v, sub);
    auto proj = project(g.map, k % 2 ? std::vector<std::string>{"w", "z"} : std::vector<std::string>{"zeta", "xi"});
    SeriesMap rhs(proj.domain(), lhs.codomain(), proj.components());
    return {k, lhs == rhs, lhs, rhs};
}

/// sigma of a chain: sigma-conjugate components, chain parameters conjugated (they are self-paired).
inline ChainMap sigma_image(const ChainMap& c) {
    if (c.base.kind == Basepoint::Kind::Symbolic)
        throw UnpairedVariable("sigma image of a chain from a symbolic basepoint is not supported");
    return {c.k, flip(c.parity), c.base.sigma(), sigma_image(c.map)};
}

}  // namespace segre
