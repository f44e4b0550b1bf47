#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "segre/linalg.hpp"
#include "segre/series.hpp"

namespace segre {

/// Box for random Gaussian-rational sample points: numerators in [-num_bound, num_bound], denominators in [1, den_bound].
struct SamplingBox {
    long num_bound = 99;
    long den_bound = 9;
};

class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed, SamplingBox box = {}) : rng_(seed), box_(box) {}

    GaussianRational next() {
        std::uniform_int_distribution<long> num(-box_.num_bound, box_.num_bound);
        std::uniform_int_distribution<long> den(1, box_.den_bound);
        const long a = num(rng_), b = den(rng_), c = num(rng_), e = den(rng_);
        return GaussianRational::from_fraction(a, b, c, e);
    }

    Vector next(std::size_t n) {
        Vector v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) v.push_back(next());
        return v;
    }

    void set_box(SamplingBox box) { box_ = box; }

private:
    std::mt19937_64 rng_;
    SamplingBox box_;
};

struct RankResult {
    std::size_t rank = 0;
    Vector witness;                       // point of the domain where `rank` is attained
    std::vector<std::size_t> pivot_rows;  // a nonsingular minor at the witness
    std::vector<std::size_t> pivot_cols;  // positions in `wrt`
    bool certified = false;
};

/// Jacobian of f with respect to `wrt`, evaluated at `point`.
inline Matrix jacobian_at(const SeriesMap& f, const Vector& point, const std::vector<std::size_t>& wrt) {
    Matrix J;
    J.reserve(f.size());
    for (const auto& c : f.components()) J.push_back(evaluate_gradient(c, point, wrt));
    return J;
}

inline RankResult rank_at(const SeriesMap& f, const Vector& point, const std::vector<std::size_t>& wrt) {
    auto ech = row_reduce(jacobian_at(f, point, wrt));
    return {ech.rank, point, std::move(ech.pivot_rows), std::move(ech.pivot_cols), false};
}

/*
 * Rank of the Jacobian of f (columns `wrt`) at `trials` pseudo-random points,
 * maximised. Variables of the domain outside `wrt` are sampled as well but
 * not differentiated. The answer is a lower bound for the generic rank and
 * is reproducible from (seed, trials); trials share one random stream, so
 * more trials never lower it.
 */
inline RankResult generic_rank(const SeriesMap& f, const std::vector<std::size_t>& wrt, int trials = 5,
                               std::uint64_t seed = 0, SamplingBox box = {}) {
    if (trials < 1) throw Error("generic_rank needs at least one trial");
    PointSampler sampler(seed, box);
    RankResult best;
    const std::size_t cap = std::min(f.size(), wrt.size());
    for (int t = 0; t < trials; ++t) {
        auto r = rank_at(f, sampler.next(f.domain()->size()), wrt);
        if (t == 0 || r.rank > best.rank) best = std::move(r);
        if (best.rank == cap) break;
    }
    return best;
}

inline RankResult generic_rank(const SeriesMap& f, const std::vector<std::string>& blocks, int trials = 5,
                               std::uint64_t seed = 0, SamplingBox box = {}) {
    return generic_rank(f, f.domain()->indices_of(blocks), trials, seed, box);
}

/*
 * Symbolic confirmation of a sampled rank: expands the pivot minor found at
 * the witness and checks it is not the zero series. Sizes above 6 are left
 * uncertified.
 */
inline bool certify(const SeriesMap& f, const std::vector<std::size_t>& wrt, RankResult& r) {
    if (r.rank == 0) return r.certified = true;
    if (r.rank > 6) return r.certified = false;
    std::vector<std::vector<Series>> minor;
    for (auto i : r.pivot_rows) {
        std::vector<Series> row;
        for (auto j : r.pivot_cols) row.push_back(diff(f[i], wrt[j]));
        minor.push_back(std::move(row));
    }
    return r.certified = !determinant(minor).is_zero();
}

}  // namespace segre
