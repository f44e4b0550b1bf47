#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "segre/chains.hpp"
#include "segre/generic_rank.hpp"

namespace segre {

struct RankOptions {
    std::size_t kmax = 0;  // 0: 2d + 3
    int trials = 5;
    std::uint64_t seed = 0;
    bool certify = false;   // expand pivot minors symbolically
    bool paranoid = false;  // keep computing ranks up to kmax after stabilisation
};

inline std::size_t default_kmax(const CRManifold& M) { return 2 * M.d + 3; }

/*
 * RankProfile
 * -----------
 * r[k-1] = generic rank of Gamma_k in the chain parameters, and
 * e[k-1] = r_{k+2} - r_{k+1} for the strictly positive increments.
 */
struct RankProfile {
    std::vector<std::size_t> r;
    std::vector<std::size_t> e;
    std::vector<RankResult> witnesses;
    bool certified = false;
    bool sigma_consistent = true;  // one conjugate-chain rank agrees
    bool stable = true;            // paranoid mode: no jump after stabilisation
};

inline std::size_t sum(const std::vector<std::size_t>& v) { return std::accumulate(v.begin(), v.end(), std::size_t{0}); }

inline RankResult chain_rank(const ChainMap& g, const RankOptions& opt) {
    auto params = g.chain_params();
    auto r = generic_rank(g.map, params, opt.trials, opt.seed + g.k);
    if (opt.certify) certify(g.map, params, r);
    return r;
}

/*
 * Generic ranks of Gamma_1, Gamma_2, ... until the first zero increment or
 * until the rank reaches 2m + d (after which no increment is possible).
 */
inline RankProfile rank_profile(const CRManifold& M, const Basepoint& base, RankOptions opt = {}) {
    if (opt.kmax == 0) opt.kmax = default_kmax(M);
    if (opt.kmax < 3) throw Error("kmax must be at least 3");
    const std::size_t full = 2 * M.m + M.d;
    RankProfile p;
    p.certified = opt.certify;
    ChainBuilder builder(M, opt.kmax, base, Parity::L);
    bool stopped = false;
    std::size_t k_last = 0;
    while (!builder.done()) {
        auto g = builder.next();
        auto rk = chain_rank(g, opt);
        if (opt.certify) p.certified = p.certified && rk.certified;
        const std::size_t k = g.k;
        if (stopped) {
            if (rk.rank != p.r.back()) p.stable = false;
            continue;
        }
        p.r.push_back(rk.rank);
        p.witnesses.push_back(std::move(rk));
        k_last = k;
        if (k >= 3) {
            const std::size_t inc = p.r[k - 1] - std::min(p.r[k - 1], p.r[k - 2]);
            if (p.r[k - 1] < p.r[k - 2]) p.stable = false;
            if (inc > 0) p.e.push_back(inc);
            if (inc == 0 || p.r[k - 1] >= full) stopped = true;
        }
        if (stopped && !opt.paranoid) break;
    }
    // conjugate chains have the same ranks; check the last computed one
    auto gb = gamma(M, k_last, base, Parity::Lbar);
    p.sigma_consistent = chain_rank(gb, opt).rank == p.r.back();
    return p;
}

struct SegreInvariants {
    RankProfile profile;
    std::size_t kappa = 0;
    std::size_t mu = 2;
    std::size_t nu = 1;
    std::vector<std::size_t> multitype;
    bool minimal = false;
    std::size_t orbit_dim_complexified = 0;
    std::size_t orbit_dim_intrinsic = 0;
    std::size_t orbit_dim_real = 0;
};

inline SegreInvariants invariants_from(const CRManifold& M, RankProfile p) {
    SegreInvariants s;
    s.kappa = p.e.size();
    s.mu = 2 + s.kappa;
    s.nu = s.mu - 1;
    s.multitype = {M.m, M.m};
    s.multitype.insert(s.multitype.end(), p.e.begin(), p.e.end());
    const std::size_t se = sum(p.e);
    s.minimal = se == M.d;
    s.orbit_dim_complexified = 2 * M.m + se;
    s.orbit_dim_intrinsic = M.m + se;
    s.orbit_dim_real = 2 * M.m + se;
    s.profile = std::move(p);
    return s;
}

inline SegreInvariants segre_invariants(const CRManifold& M, const Basepoint& base, RankOptions opt = {}) {
    return invariants_from(M, rank_profile(M, base, opt));
}

// ---------------------------------------------------------------------------
// Hypersurfaces

struct MinimalityVerdict {
    bool minimal = false;
    bool regular = false;  // which test was used
    Series witness;        // theta(zeta, w, 0), or rho on the polarised Segre varieties
};

/*
 * For d = 1: minimal at 0 iff the Segre variety of 0 is not contained in
 * the manifold. In regular coordinates this is theta(zeta, w, 0) != 0;
 * otherwise rho is evaluated on (w, Qbar(w,0,0), zeta, Q(zeta,0,0)).
 */
inline MinimalityVerdict hypersurface_minimality(const CRManifold& M) {
    if (M.d != 1) throw NotAHypersurface("minimality test needs d = 1, got d = " + std::to_string(M.d));
    const auto& sp = M.ambient;
    MinimalityVerdict v{false, M.regular(), Series(sp)};
    if (v.regular) {
        auto sub = substitution(sp, sp, {{"z1", Series(sp, M.order)}}, M.order);
        v.witness = compose(M.theta[0], sub);
    } else {
        std::vector<std::pair<std::string, Series>> a;
        for (std::size_t k = 1; k <= M.m; ++k) a.emplace_back("zeta" + std::to_string(k), Series(sp, M.order));
        a.emplace_back("xi1", Series(sp, M.order));
        auto s0 = substitution(sp, sp, a, M.order);
        Series zw = compose(M.qbar(0), s0);  // Qbar(w, 0, 0)
        std::vector<std::pair<std::string, Series>> b;
        for (std::size_t k = 1; k <= M.m; ++k) b.emplace_back("w" + std::to_string(k), Series(sp, M.order));
        b.emplace_back("z1", Series(sp, M.order));
        auto t0 = substitution(sp, sp, b, M.order);
        Series xz = compose(M.q(0), t0);  // Q(zeta, 0, 0)
        auto polar = substitution(sp, sp, {{"z1", zw}, {"xi1", xz}}, M.order);
        v.witness = compose(M.rho()[0], polar);
    }
    v.minimal = !v.witness.is_zero();
    return v;
}

// ---------------------------------------------------------------------------
// Witnesses

struct WitnessRecord {
    bool trivial = false;             // mu = 2: nothing to find
    std::size_t mu = 2;
    std::vector<Vector> w_star;       // mu blocks, the last one zero
    std::vector<Vector> omega_star;   // mu - 1 blocks
    std::size_t rank_mu = 0;          // rank of Gamma_mu at w*
    std::size_t rank_return = 0;      // rank of Gamma_{2mu-1} at (w*, omega*)
    bool returns = false;             // Gamma_{2mu-1}(w*, omega*) equals the basepoint
    int attempts = 0;
};

namespace detail {

inline Vector flatten(const std::vector<Vector>& blocks) {
    Vector out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Vector negated(const Vector& v) {
    Vector out;
    for (const auto& x : v) out.push_back(-x);
    return out;
}

}  // namespace detail

/*
 * Finds w* = (w1*, .., w_{mu-1}*, 0) at which Gamma_mu has rank 2m + sum(e),
 * then checks that the chain of length 2mu - 1 with parameters
 * (w*, -w_{mu-1}*, .., -w1*) comes back to the basepoint with the same rank.
 */
inline WitnessRecord witness_point(const CRManifold& M, const SegreInvariants& inv, const Basepoint& base,
                                   std::uint64_t seed = 0, int retries = 20) {
    if (base.kind == Basepoint::Kind::Symbolic) throw Error("witness points need a numeric basepoint");
    WitnessRecord rec;
    rec.mu = inv.mu;
    if (inv.kappa == 0) {
        rec.trivial = true;
        rec.returns = true;
        return rec;
    }
    const std::size_t mu = inv.mu, target = 2 * M.m + sum(inv.profile.e);
    auto chains = gamma_sequence(M, 2 * mu - 1, base, Parity::L);
    const auto& g_mu = chains[mu - 1];
    const auto& g_ret = chains[2 * mu - 2];
    PointSampler sampler(seed);
    for (int round = 0; round < 2; ++round) {
        if (round == 1) sampler.set_box({990, 9});
        for (int t = 0; t < retries; ++t) {
            ++rec.attempts;
            std::vector<Vector> w;
            for (std::size_t i = 0; i + 1 < mu; ++i) w.push_back(sampler.next(M.m));
            w.push_back(Vector(M.m));
            auto r = rank_at(g_mu.map, detail::flatten(w), g_mu.chain_params());
            if (r.rank != target) continue;
            std::vector<Vector> omega;
            for (std::size_t i = mu - 1; i-- > 0;) omega.push_back(detail::negated(w[i]));
            auto full = w;
            full.insert(full.end(), omega.begin(), omega.end());
            const auto pt = detail::flatten(full);
            rec.w_star = w;
            rec.omega_star = omega;
            rec.rank_mu = r.rank;
            rec.returns = evaluate(g_ret.map, pt) == base.ambient_point();
            rec.rank_return = rank_at(g_ret.map, pt, g_ret.chain_params()).rank;
            return rec;
        }
    }
    throw WitnessNotFound("no point of full rank found for Gamma_" + std::to_string(mu) + " after " +
                          std::to_string(rec.attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// psi ranks

struct PsiCheck {
    std::size_t k = 0;     // identity m + rank psi^{k+1} = rank Gamma_{k+2}
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    bool holds = false;
};

struct PsiReport {
    std::vector<PsiCheck> checks;
    bool all_hold = true;
    // conjugate projection of length 2nu at a return point
    bool witness_returns = false;
    std::size_t witness_rank = 0;
    std::size_t expected_witness_rank = 0;
    bool witness_ok = false;
};

inline PsiReport psi_rank_checks(const CRManifold& M, const Basepoint& base, RankOptions opt = {}) {
    if (opt.kmax == 0) opt.kmax = default_kmax(M);
    const auto inv = segre_invariants(M, base, opt);
    const auto& r = inv.profile.r;
    PsiReport rep;
    const std::size_t kmax_chain = std::max<std::size_t>(r.size(), 2 * inv.nu);
    auto chains = gamma_sequence(M, kmax_chain, base, Parity::L);
    for (std::size_t k = 0; k + 2 <= r.size(); ++k) {
        const auto& g = chains[k];  // Gamma_{k+1}
        auto ps = psi(g);
        auto pr = generic_rank(ps, g.chain_params(), opt.trials, opt.seed + 100 + k);
        PsiCheck c{k, M.m + pr.rank, r[k + 1], false};
        c.holds = c.lhs == c.rhs;
        rep.all_hold = rep.all_hold && c.holds;
        rep.checks.push_back(c);
    }
    if (base.kind == Basepoint::Kind::Symbolic) return rep;

    // psi-bar^{2nu} at (y_1, .., y_{mu-1}, 0, -y_{mu-1}, .., -y_2): a return point of
    // the conjugate chain of length 2mu - 1 with its last block dropped
    const std::size_t two_nu = 2 * inv.nu, mu = inv.mu;
    auto gb = gamma(M, two_nu, base, Parity::Lbar);
    auto pb = psi(gb);
    rep.expected_witness_rank = M.m + sum(inv.profile.e);
    const auto target_t = [&] {
        Vector t = base.w;
        t.insert(t.end(), base.z.begin(), base.z.end());
        return t;
    }();
    PointSampler sampler(opt.seed + 7);
    for (int attempt = 0; attempt < 20 && !rep.witness_ok; ++attempt) {
        std::vector<Vector> y;
        for (std::size_t i = 0; i + 1 < mu; ++i) y.push_back(sampler.next(M.m));
        std::vector<Vector> blocks = y;
        blocks.push_back(Vector(M.m));
        for (std::size_t i = y.size(); i-- > 1;) blocks.push_back(detail::negated(y[i]));
        const auto pt = detail::flatten(blocks);
        rep.witness_returns = evaluate(pb, pt) == target_t;
        rep.witness_rank = rank_at(pb, pt, gb.chain_params()).rank;
        rep.witness_ok = rep.witness_returns && rep.witness_rank == rep.expected_witness_rank;
    }
    return rep;
}

}  // namespace segre
