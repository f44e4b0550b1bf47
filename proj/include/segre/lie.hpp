#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segre/generic_rank.hpp"
#include "segre/invariants.hpp"
#include "segre/vector_field.hpp"

namespace segre {

/*
 * Complexified CR fields in the intrinsic chart (w, zeta, xi):
 *   calL_a    = d/dw_a
 *   calLbar_a = d/dzeta_a - i*theta_{k,zeta_a}(zeta, w, Qbar(w, zeta, xi)) d/dxi_k
 */
struct ChartFields {
    std::vector<VectorField> L;
    std::vector<VectorField> Lbar;

    std::vector<VectorField> all() const {
        auto out = L;
        out.insert(out.end(), Lbar.begin(), Lbar.end());
        return out;
    }
};

inline ChartFields chart_fields(const CRManifold& M) {
    const auto& c = M.chart;
    const auto graph = M.onto_graph();
    const auto I = GaussianRational::i();
    ChartFields f;
    for (std::size_t a = 0; a < M.m; ++a) {
        f.L.push_back(VectorField::coordinate(c, a, M.order));
        VectorField Lb = VectorField::coordinate(c, M.m + a, M.order);
        for (std::size_t k = 0; k < M.d; ++k) {
            Series t = compose(diff(M.theta[k], M.n() + a), graph);
            Lb[2 * M.m + k] = -I * rename_into(t, c);
        }
        f.Lbar.push_back(std::move(Lb));
    }
    return f;
}

/// Components of a chart field in the ambient coordinates (w, z, zeta, xi), as series on the chart.
inline std::vector<Series> to_ambient(const CRManifold& M, const VectorField& X) {
    if (!same_space(X.space(), M.chart)) throw ChartMismatch("field does not live on the intrinsic chart");
    const auto qbar = M.theta_bar_chart();
    const auto I = GaussianRational::i();
    std::vector<Series> out;
    for (std::size_t a = 0; a < M.m; ++a) out.push_back(X[a]);
    for (std::size_t j = 0; j < M.d; ++j) {
        Series q = Series::variable(M.chart, 2 * M.m + j, M.order) + I * qbar[j];
        out.push_back(X.apply(q));
    }
    for (std::size_t a = 0; a < M.m; ++a) out.push_back(X[M.m + a]);
    for (std::size_t j = 0; j < M.d; ++j) out.push_back(X[2 * M.m + j]);
    return out;
}

namespace detail {

/// Evaluation points on the chart: the basepoint, or `trials` random points for a symbolic basepoint.
inline std::vector<Vector> chart_points(const CRManifold& M, const Basepoint& base, int trials, std::uint64_t seed) {
    if (base.kind != Basepoint::Kind::Symbolic) return {base.chart_point()};
    PointSampler s(seed);
    std::vector<Vector> pts;
    for (int t = 0; t < trials; ++t) pts.push_back(s.next(M.chart->size()));
    return pts;
}

inline std::size_t span_rank(const std::vector<std::vector<Series>>& fs, const std::vector<Vector>& pts) {
    std::size_t best = 0;
    for (const auto& p : pts) {
        Matrix A;
        for (const auto& f : fs) {
            Vector row;
            for (const auto& c : f) row.push_back(evaluate(c, p));
            A.push_back(std::move(row));
        }
        best = std::max(best, rank(A));
    }
    return best;
}

}  // namespace detail

struct LadderStep {
    std::size_t length = 0;        // bracket length mu_k
    std::size_t multiplicity = 0;  // l_k
    std::size_t dim = 0;           // dimension of D^{mu_k} at the point
};

struct HormanderData {
    std::size_t base_dim = 0;             // 2m, from the fields themselves
    std::vector<LadderStep> ladder;       // the jumps after length 1
    std::vector<std::size_t> dims;        // dims[l-1] = dimension at length l, for every computed length
    bool minimal = false;
    std::size_t h() const { return ladder.size(); }
    std::size_t total() const {
        std::size_t s = 0;
        for (const auto& st : ladder) s += st.multiplicity;
        return s;
    }
};

struct LieOptions {
    std::size_t max_length = 0;  // 0: 2d + 2
    int trials = 5;
    std::uint64_t seed = 0;
};

/*
 * Pointwise dimensions of the spans of left-normed brackets of length <= l.
 * Each level brackets the generators with the fields that were new at the
 * previous level; a field already in the Q(i)-span of earlier ones only
 * produces brackets in the span of earlier brackets, so it is dropped.
 */
inline HormanderData hormander_numbers(const CRManifold& M, const Basepoint& base, LieOptions opt = {}) {
    if (opt.max_length == 0) opt.max_length = 2 * M.d + 2;
    if (opt.max_length < 2) throw Error("max_length must be at least 2");
    const std::size_t full = 2 * M.m + M.d;
    const auto gens = chart_fields(M).all();
    const auto pts = detail::chart_points(M, base, opt.trials, opt.seed);

    FunctionSpan span;
    std::vector<std::vector<Series>> basis;
    std::vector<VectorField> fresh;
    for (const auto& X : gens)
        if (span.insert(X.coeffs())) {
            basis.push_back(X.coeffs());
            fresh.push_back(X);
        }
    HormanderData H;
    H.base_dim = detail::span_rank(basis, pts);
    H.dims.push_back(H.base_dim);
    std::size_t dim = H.base_dim;
    for (std::size_t len = 2; len <= opt.max_length && dim < full && !fresh.empty(); ++len) {
        std::vector<VectorField> next;
        for (const auto& X : gens)
            for (const auto& Y : fresh) {
                auto B = bracket(X, Y);
                if (span.insert(B.coeffs())) {
                    basis.push_back(B.coeffs());
                    next.push_back(std::move(B));
                }
            }
        fresh = std::move(next);
        const std::size_t nd = detail::span_rank(basis, pts);
        H.dims.push_back(nd);
        if (nd > dim) H.ladder.push_back({len, nd - dim, nd});
        dim = nd;
    }
    H.minimal = dim == full;
    return H;
}

/*
 * Holomorphic gradients (-i*theta_bar_{j,w}, e_j) of the defining functions,
 * differentiated repeatedly by the calLbar fields. Returns the smallest k for
 * which derivatives of order <= k span C^n at the point (generic point for a
 * symbolic basepoint), or nothing if kmax is exhausted.
 */
struct LeviTypeResult {
    std::optional<std::size_t> type;
    std::vector<std::size_t> dims;  // span dimension after each order 0..k
};

inline LeviTypeResult levi_type(const CRManifold& M, const Basepoint& base, std::size_t kmax = 0, int trials = 5,
                                std::uint64_t seed = 0) {
    if (kmax == 0) kmax = M.m + M.d;
    const auto& c = M.chart;
    const auto tb = M.theta_bar_chart();
    const auto I = GaussianRational::i();
    const auto Lbar = chart_fields(M).Lbar;
    const auto pts = detail::chart_points(M, base, trials, seed);

    FunctionSpan span;
    std::vector<std::vector<Series>> basis, fresh;
    for (std::size_t j = 0; j < M.d; ++j) {
        std::vector<Series> g;
        for (std::size_t a = 0; a < M.m; ++a) g.push_back(-I * diff(tb[j], a));
        for (std::size_t k = 0; k < M.d; ++k) g.push_back(Series::constant(c, j == k ? 1 : 0, M.order));
        if (span.insert(g)) {
            basis.push_back(g);
            fresh.push_back(std::move(g));
        }
    }
    LeviTypeResult out;
    out.dims.push_back(detail::span_rank(basis, pts));
    if (out.dims.back() == M.n()) {
        out.type = 0;
        return out;
    }
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<std::vector<Series>> next;
        for (const auto& X : Lbar)
            for (const auto& g : fresh) {
                auto h = apply(X, g);
                if (span.insert(h)) {
                    basis.push_back(h);
                    next.push_back(std::move(h));
                }
            }
        fresh = std::move(next);
        out.dims.push_back(detail::span_rank(basis, pts));
        if (out.dims.back() == M.n()) {
            out.type = k;
            return out;
        }
        if (fresh.empty()) break;
    }
    return out;
}

struct HolomorphicNondegeneracy {
    bool nondegenerate = false;
    std::optional<std::size_t> generic_type;
    std::size_t kmax = 0;  // a negative verdict holds up to this order
};

inline HolomorphicNondegeneracy holomorphic_nondegeneracy(const CRManifold& M, std::size_t kmax = 0, int trials = 5,
                                                          std::uint64_t seed = 0) {
    if (kmax == 0) kmax = M.m + M.d;
    auto r = levi_type(M, Basepoint::symbolic(M), kmax, trials, seed);
    return {r.type.has_value(), r.type, kmax};
}

struct E1Determinant {
    Series det;
    bool vanishes = false;  // identically zero: e_1(0) < 2
};

/// For m = d = 2: det [d theta_j / d w_i] at z = 0, a series in (zeta, w).
inline E1Determinant e1_determinant(const CRManifold& M) {
    if (M.m != 2 || M.d != 2) throw WrongDimensions("the first-jump determinant needs m = d = 2");
    const auto& sp = M.ambient;
    std::vector<std::pair<std::string, Series>> a;
    for (std::size_t j = 0; j < M.d; ++j) a.emplace_back(sp->var(M.m + j).name, Series(sp, M.order));
    const auto z0 = substitution(sp, sp, a, M.order);
    std::vector<std::vector<Series>> A(2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) A[j].push_back(compose(diff(M.theta[j], i), z0));
    E1Determinant out{determinant(A), false};
    out.vanishes = out.det.is_zero();
    return out;
}

struct CrossCheck {
    std::size_t sum_l = 0;
    std::size_t sum_e = 0;
    bool hormander_minimal = false;
    bool segre_minimal = false;
    bool holds() const { return sum_l == sum_e && hormander_minimal == segre_minimal; }
};

inline CrossCheck crosscheck_totals(const CRManifold& M, const Basepoint& base, RankOptions ropt = {},
                                    LieOptions lopt = {}) {
    const auto H = hormander_numbers(M, base, lopt);
    const auto S = segre_invariants(M, base, ropt);
    return {H.total(), sum(S.profile.e), H.minimal, S.minimal};
}

}  // namespace segre
