#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "segre/generic_rank.hpp"
#include "segre/lie.hpp"
#include "segre/vector_field.hpp"

namespace segre {

/// Coordinates x1..xn, or the given names.
inline VarSpacePtr coord_space(const std::vector<std::string>& names) {
    return VarSpace::Builder().named_block("x", Role::Coord, names).build();
}

inline VarSpacePtr coord_space(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return coord_space(names);
}

/*
 * VFSystem
 * --------
 * a m-vector fields over C^n: fields[alpha][i] is the i-th component of the
 * alpha-th field. Components of one field commute and the am vectors are
 * independent at the origin.
 */
struct VFSystem {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t a = 0;
    VarSpacePtr space;
    std::vector<std::vector<VectorField>> fields;
    std::string name;

    std::size_t codim() const { return n - a * m; }
};

inline VFSystem make_system(const VarSpacePtr& space, std::vector<std::vector<VectorField>> fields,
                            std::string name = "") {
    VFSystem S;
    S.space = space;
    S.n = space->size();
    S.a = fields.size();
    if (S.a == 0) throw DimensionMismatch("a vector-field system needs at least one field");
    S.m = fields.front().size();
    if (S.m == 0) throw DimensionMismatch("m-vector fields need at least one component");
    for (const auto& f : fields) {
        if (f.size() != S.m) throw DimensionMismatch("all fields must have the same number of components");
        for (const auto& X : f)
            if (!same_space(X.space(), space)) throw ChartMismatch("field over a foreign coordinate space");
    }
    for (const auto& f : fields)
        for (std::size_t i = 0; i < S.m; ++i)
            for (std::size_t j = i + 1; j < S.m; ++j)
                if (!bracket(f[i], f[j]).is_zero())
                    throw RankAssumptionViolated("components " + std::to_string(i + 1) + " and " +
                                                 std::to_string(j + 1) + " of a field do not commute");
    Matrix A;
    for (const auto& f : fields)
        for (const auto& X : f) A.push_back(X.at(Vector(S.n)));
    const std::size_t r = rank(A);
    if (r < S.a * S.m)
        throw RankAssumptionViolated("the fields have rank " + std::to_string(r) + " at the origin, expected " +
                                     std::to_string(S.a * S.m));
    S.fields = std::move(fields);
    S.name = std::move(name);
    return S;
}

/// The pair {calL, calLbar} of a CR manifold on its intrinsic chart (w, zeta, xi).
inline VFSystem cr_system(const CRManifold& M) {
    auto f = chart_fields(M);
    return make_system(M.chart, {f.L, f.Lbar}, M.name);
}

// ---------------------------------------------------------------------------
// Formal flows

/// Variables (s, x): one flow time followed by the system coordinates.
inline VarSpacePtr flow_space(const VarSpacePtr& coords) {
    std::vector<std::string> names;
    for (const auto& v : coords->vars()) names.push_back(v.name);
    return VarSpace::Builder().block("s", Role::Time, 1, "s").named_block("x", Role::Coord, names).build();
}

/*
 * exp(sX)(x) = sum_j s^j X^j(x) / j!. In exact mode the sum must terminate
 * (X^j(x) = 0 for some j <= 64), otherwise TruncationRequired; with an
 * order N the sum stops at j = N and the result is a jet of order N in (s, x).
 */
inline SeriesMap formal_flow(const VectorField& X, Order order = kExact) {
    const auto& sp = X.space();
    const auto fs = flow_space(sp);
    const Series s = Series::variable(fs, 0, order);
    const int cap = order ? *order : 64;
    std::vector<Series> comps;
    for (std::size_t i = 0; i < sp->size(); ++i) {
        Series c = Series::variable(sp, i);
        Series sum = rename_into(c, fs).with_order(order);
        Series sj = Series::constant(fs, 1, order);
        int j = 1;
        for (; j <= cap; ++j) {
            c = X.apply(c);
            c *= GaussianRational(1) / GaussianRational(j);
            sj = sj * s;
            if (c.is_zero()) break;
            sum += sj * rename_into(c, fs);
        }
        if (!order && j > cap)
            throw TruncationRequired("the flow of this field is not polynomial; pass an order");
        comps.push_back(std::move(sum));
    }
    return {fs, sp, std::move(comps)};
}

/// Multiple flow of an m-vector field: exp(s_m X_m) o .. o exp(s_1 X_1), over (s1..sm, x).
inline SeriesMap multiple_flow(const std::vector<VectorField>& X, Order order = kExact) {
    const auto& sp = X.front().space();
    VarSpace::Builder b;
    b.block("s", Role::Time, X.size(), "s");
    std::vector<std::string> names;
    for (const auto& v : sp->vars()) names.push_back(v.name);
    const auto dom = b.named_block("x", Role::Coord, names).build();
    std::vector<Series> state;
    for (std::size_t i = 0; i < sp->size(); ++i) state.push_back(Series::variable(dom, X.size() + i, order));
    for (std::size_t k = 0; k < X.size(); ++k) {
        auto F = formal_flow(X[k], order);
        std::vector<Series> args{Series::variable(dom, k, order)};
        args.insert(args.end(), state.begin(), state.end());
        state = compose(F, SeriesMap(dom, F.domain(), std::move(args))).components();
    }
    return {dom, sp, std::move(state)};
}

// ---------------------------------------------------------------------------
// Concatenated flows from the origin

/// Time blocks t1..tk with t{i}_j, j = 1..m.
inline VarSpacePtr time_space(std::size_t m, std::size_t k) {
    VarSpace::Builder b;
    for (std::size_t i = 1; i <= k; ++i) b.block("t" + std::to_string(i), Role::Time, m, "t" + std::to_string(i), true);
    return b.build();
}

namespace detail {

inline std::vector<Series> flow_step(const SeriesMap& F, const VarSpacePtr& dom, std::size_t block,
                                     const std::vector<Series>& state, Order order) {
    std::vector<Series> args;
    const auto& vars = dom->blocks().at(block).vars;
    for (auto v : vars) args.push_back(Series::variable(dom, v, order));
    args.insert(args.end(), state.begin(), state.end());
    return compose(F, SeriesMap(dom, F.domain(), std::move(args))).components();
}

}  // namespace detail

/// Gamma_word(t1..tk) = L^{word_k}_{t_k} o .. o L^{word_1}_{t_1}(0).
inline SeriesMap word_chain(const VFSystem& S, const std::vector<SeriesMap>& flows, const std::vector<std::size_t>& word,
                            Order order) {
    const auto dom = time_space(S.m, word.size());
    std::vector<Series> state(S.n, Series(dom, order));
    for (std::size_t k = 0; k < word.size(); ++k) state = detail::flow_step(flows.at(word[k]), dom, k, state, order);
    return {dom, S.space, std::move(state)};
}

struct OrbitOptions {
    Order order = kExact;  // kExact: try exact flows, fall back to 2(n+1) jets
    int trials = 5;
    std::uint64_t seed = 0;
    bool witness = true;
};

struct OrbitWitness {
    bool found = false;
    std::vector<Vector> t_star;          // mu0 blocks, the last one zero
    std::size_t rank_mu = 0;             // rank of Gamma_{L*} at t*
    std::size_t rank_return = 0;         // rank of the returning composite in the first mu0 blocks
    std::optional<bool> returns;         // exact flows only
};

struct OrbitResult {
    std::vector<std::size_t> word;       // 0-based field indices, length mu0
    std::vector<std::size_t> e;
    std::size_t kappa0 = 0;
    std::size_t mu0 = 0;
    std::vector<std::size_t> multitype;
    std::size_t orbit_dim = 0;
    Order order = kExact;                // flow order actually used
    bool stable = true;                  // jets: same answer at order + 2
    OrbitWitness witness;
};

namespace detail {

inline std::vector<SeriesMap> system_flows(const VFSystem& S, Order order) {
    std::vector<SeriesMap> flows;
    for (const auto& f : S.fields) flows.push_back(multiple_flow(f, order));
    return flows;
}

inline OrbitWitness orbit_witness(const VFSystem& S, const std::vector<SeriesMap>& flows, const OrbitResult& r,
                                  const OrbitOptions& opt) {
    OrbitWitness w;
    const std::size_t mu = r.word.size(), target = r.orbit_dim;
    auto word = r.word;
    for (std::size_t i = mu - 1; i-- > 0;) word.push_back(r.word[i]);
    const auto G = word_chain(S, flows, r.word, r.order);
    const auto R = word_chain(S, flows, word, r.order);
    std::vector<std::size_t> first;
    for (std::size_t i = 0; i < mu * S.m; ++i) first.push_back(i);
    PointSampler sampler(opt.seed + 11);
    for (int round = 0; round < 2 && !w.found; ++round) {
        if (round == 1) sampler.set_box({990, 9});
        for (int t = 0; t < 20; ++t) {
            std::vector<Vector> ts;
            for (std::size_t i = 0; i + 1 < mu; ++i) ts.push_back(sampler.next(S.m));
            ts.push_back(Vector(S.m));
            auto pt = flatten(ts);
            auto rk = rank_at(G, pt, first).rank;
            if (rk != target) continue;
            for (std::size_t i = mu - 1; i-- > 0;) {
                auto neg = negated(ts[i]);
                pt.insert(pt.end(), neg.begin(), neg.end());
            }
            w.found = true;
            w.t_star = ts;
            w.rank_mu = rk;
            w.rank_return = rank_at(R, pt, first).rank;
            if (!r.order) w.returns = evaluate(R, pt) == Vector(S.n);
            break;
        }
    }
    return w;
}

inline OrbitResult greedy_at(const VFSystem& S, const std::vector<std::size_t>& start, Order order,
                             const OrbitOptions& opt) {
    const auto flows = system_flows(S, order);
    OrbitResult r;
    r.order = order;
    r.word = start;
    std::size_t current = S.a * S.m;
    const auto rank_of = [&](const std::vector<std::size_t>& word) {
        const auto G = word_chain(S, flows, word, order);
        std::vector<std::size_t> all(G.domain()->size());
        std::iota(all.begin(), all.end(), 0);
        return generic_rank(G, all, opt.trials, opt.seed + word.size()).rank;
    };
    while (current < S.n) {
        std::size_t best = 0, best_alpha = 0;
        for (std::size_t alpha = 0; alpha < S.a; ++alpha) {
            auto w = r.word;
            w.push_back(alpha);
            const std::size_t rk = rank_of(w);
            const std::size_t inc = rk > current ? rk - current : 0;
            if (inc > best) best = inc, best_alpha = alpha;
        }
        if (best == 0) break;
        r.word.push_back(best_alpha);
        r.e.push_back(best);
        current += best;
    }
    r.kappa0 = r.e.size();
    r.mu0 = S.a + r.kappa0;
    r.multitype.assign(S.a, S.m);
    r.multitype.insert(r.multitype.end(), r.e.begin(), r.e.end());
    r.orbit_dim = current;
    if (opt.witness && r.kappa0 > 0) r.witness = orbit_witness(S, flows, r, opt);
    return r;
}

inline bool flows_are_exact(const VFSystem& S) {
    try {
        for (const auto& f : S.fields)
            for (const auto& X : f) formal_flow(X, kExact);
        return true;
    } catch (const TruncationRequired&) {
        return false;
    }
}

}  // namespace detail

/*
 * The greedy construction of a minimality multitype: start with the word
 * (start[0], .., start[a-1]), then repeatedly append the lowest-index field
 * whose flow raises the generic rank of the concatenated flow map the most.
 */
inline OrbitResult greedy_multitype(const VFSystem& S, OrbitOptions opt = {}, std::vector<std::size_t> start = {}) {
    if (start.empty()) {
        start.resize(S.a);
        std::iota(start.begin(), start.end(), 0);
    }
    if (start.size() != S.a) throw DimensionMismatch("start order must list every field once");
    if (opt.order) {
        auto r = detail::greedy_at(S, start, opt.order, opt);
        auto check = detail::greedy_at(S, start, Order(*opt.order + 2), OrbitOptions{opt.order, opt.trials, opt.seed, false});
        r.stable = check.e == r.e;
        return r;
    }
    if (detail::flows_are_exact(S)) return detail::greedy_at(S, start, kExact, opt);
    opt.order = Order(static_cast<int>(2 * (S.n + 1)));
    return greedy_multitype(S, opt, start);
}

/// Both start orders for a = 2, otherwise the natural one.
inline std::vector<OrbitResult> multitypes(const VFSystem& S, OrbitOptions opt = {}) {
    std::vector<OrbitResult> out{greedy_multitype(S, opt)};
    if (S.a == 2) out.push_back(greedy_multitype(S, opt, {1, 0}));
    return out;
}

inline std::size_t orbit_dimension(const VFSystem& S, OrbitOptions opt = {}) {
    opt.witness = false;
    return greedy_multitype(S, opt).orbit_dim;
}

/// Dimension at the origin of the Lie algebra generated by all field components (brackets up to max_length).
inline std::size_t lie_algebra_dimension(const VFSystem& S, std::size_t max_length = 0) {
    if (max_length == 0) max_length = 2 * S.n + 2;
    std::vector<VectorField> gens;
    for (const auto& f : S.fields) gens.insert(gens.end(), f.begin(), f.end());
    FunctionSpan span;
    Matrix rows;
    std::vector<VectorField> fresh;
    const Vector origin(S.n);
    for (const auto& X : gens)
        if (span.insert(X.coeffs())) {
            rows.push_back(X.at(origin));
            fresh.push_back(X);
        }
    std::size_t dim = rank(rows);
    for (std::size_t len = 2; len <= max_length && dim < S.n && !fresh.empty(); ++len) {
        std::vector<VectorField> next;
        for (const auto& X : gens)
            for (const auto& Y : fresh) {
                auto B = bracket(X, Y);
                if (span.insert(B.coeffs())) {
                    rows.push_back(B.at(origin));
                    next.push_back(std::move(B));
                }
            }
        fresh = std::move(next);
        dim = rank(rows);
    }
    return dim;
}

}  // namespace segre
