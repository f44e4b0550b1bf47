#include <gtest/gtest.h>

#include "segre/lie.hpp"

using namespace segre;

namespace {

CRManifold heisenberg() { return parse_manifold(1, 1, {"w1*zeta1"}); }
CRManifold levi_flat() { return parse_manifold(1, 1, {"0"}); }
CRManifold c3() { return parse_manifold(1, 2, {"w1*zeta1", "w1*zeta1*(w1+zeta1)"}); }
CRManifold ex8_6() {
    return parse_manifold(1, 4, {"w1*zeta1", "w1*zeta1*(w1+zeta1)", "w1*zeta1*(w1^2+zeta1^2)", "w1^2*zeta1^2"});
}
CRManifold ex8_10() { return parse_manifold(2, 2, {"w1*zeta1", "xi1*(i*w1*zeta1*w2*zeta2 + xi1*w2*zeta2)"}); }
CRManifold ex8_11() {
    return parse_manifold(2, 2, {"w1*zeta1 + w1^2*zeta2 + zeta1^2*w2",
                                 "w1*zeta1*(w1+zeta1) - w2*zeta1^2*(2*w1+zeta1) - zeta2*w1^2*(2*zeta1+w1)"});
}
CRManifold elliptic() { return parse_manifold(2, 2, {"w1*zeta1", "w2*zeta2"}); }
CRManifold parabolic() { return parse_manifold(2, 2, {"w1*zeta1", "w1*zeta2 + zeta1*w2"}); }
CRManifold hyperbolic() { return parse_manifold(2, 2, {"w1*zeta1 - w2*zeta2", "w1*zeta2 + zeta1*w2"}); }
CRManifold mixed() { return parse_manifold(2, 2, {"w1*zeta1", "w2^2*zeta2^2"}); }

std::vector<CRManifold> regression() {
    return {heisenberg(), levi_flat(), c3(), ex8_6(), ex8_10(), ex8_11(), elliptic(), parabolic(), hyperbolic(),
            mixed(), parse_manifold(2, 1, {"w1*zeta1"}), parse_manifold(1, 1, {"w1^2*zeta1^2"})};
}

// Dimension at the origin of the span of all left-normed brackets of length <= len, without any reduction.
std::vector<std::size_t> brute_force_dims(const CRManifold& M, std::size_t max_len) {
    const auto gens = chart_fields(M).all();
    const Vector p(M.chart->size());
    std::vector<VectorField> level = gens;
    Matrix rows;
    std::vector<std::size_t> dims;
    for (std::size_t len = 1; len <= max_len; ++len) {
        if (len > 1) {
            std::vector<VectorField> next;
            for (const auto& X : gens)
                for (const auto& Y : level) next.push_back(bracket(X, Y));
            level = std::move(next);
        }
        for (const auto& X : level) rows.push_back(X.at(p));
        dims.push_back(rank(rows));
    }
    return dims;
}

VectorField random_field(const VarSpacePtr& sp, std::uint64_t seed) {
    PointSampler s(seed, {5, 3});
    std::vector<Series> c;
    for (std::size_t v = 0; v < sp->size(); ++v) {
        Series f(sp);
        for (std::size_t a = 0; a < sp->size(); ++a)
            for (std::size_t b = a; b < sp->size(); ++b) {
                Exponents e(sp->size(), 0);
                ++e[a];
                ++e[b];
                f.add_term(e, s.next());
            }
        f += Series::constant(sp, s.next());
        c.push_back(std::move(f));
    }
    return {sp, c};
}

std::vector<Series> restrict_to_chart(const CRManifold& M, const VectorField& X) {
    const auto graph = M.onto_graph();
    std::vector<Series> out;
    for (const auto& c : X.coeffs()) out.push_back(rename_into(compose(c, graph), M.chart));
    return out;
}

}  // namespace

TEST(Bracket, Basics) {
    auto M = heisenberg();
    const auto& c = M.chart;
    EXPECT_TRUE(bracket(VectorField::coordinate(c, 0), VectorField::coordinate(c, 1)).is_zero());
    auto f = chart_fields(M);
    auto B = bracket(f.L[0], f.Lbar[0]);
    EXPECT_EQ(B, (-GaussianRational::i()) * VectorField::coordinate(c, 2));
    EXPECT_EQ(f.Lbar[0][2], parse_series("-i*w1", c));
    EXPECT_THROW(bracket(f.L[0], VectorField::coordinate(M.ambient, 0)), ChartMismatch);
}

TEST(Bracket, AntisymmetryAndJacobi) {
    auto sp = chart_space(1, 1);
    for (std::uint64_t s = 0; s < 4; ++s) {
        auto X = random_field(sp, 3 * s), Y = random_field(sp, 3 * s + 1), Z = random_field(sp, 3 * s + 2);
        EXPECT_EQ(bracket(X, Y), -bracket(Y, X));
        auto J = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y));
        EXPECT_TRUE(J.is_zero());
    }
}

TEST(Bracket, MatchesAmbientBracketsOnTheManifold) {
    for (const auto& M : {heisenberg(), c3(), ex8_10(), ex8_11()}) {
        auto amb = vector_fields(M);
        auto ch = chart_fields(M);
        for (std::size_t a = 0; a < M.m; ++a)
            for (std::size_t b = 0; b < M.m; ++b) {
                auto Bamb = bracket(amb.L.components[a], amb.Lbar.components[b]);
                auto Bch = bracket(ch.L[a], ch.Lbar[b]);
                EXPECT_EQ(restrict_to_chart(M, Bamb), to_ambient(M, Bch)) << M.name;
            }
    }
}

TEST(Bracket, StaysTangent) {
    for (const auto& M : {c3(), ex8_11()}) {
        auto ch = chart_fields(M).all();
        const auto graph = M.onto_graph();
        for (const auto& X : ch)
            for (const auto& Y : ch) {
                auto B = bracket(X, bracket(X, Y));
                auto comps = to_ambient(M, B);
                for (const auto& r : M.rho()) {
                    // B(rho) on the manifold, with z tied to the chart
                    Series v(M.chart);
                    for (std::size_t k = 0; k < comps.size(); ++k)
                        v += comps[k] * rename_into(compose(diff(r, k), graph), M.chart);
                    EXPECT_TRUE(v.is_zero());
                }
            }
    }
}

TEST(Hormander, Heisenberg) {
    auto M = heisenberg();
    auto H = hormander_numbers(M, Basepoint::origin(M));
    EXPECT_EQ(H.base_dim, 2u);
    ASSERT_EQ(H.ladder.size(), 1u);
    EXPECT_EQ(H.ladder[0].length, 2u);
    EXPECT_EQ(H.ladder[0].multiplicity, 1u);
    EXPECT_TRUE(H.minimal);
}

TEST(Hormander, C3) {
    auto M = c3();
    auto H = hormander_numbers(M, Basepoint::origin(M));
    ASSERT_EQ(H.ladder.size(), 2u);
    EXPECT_EQ(H.ladder[0].length, 2u);
    EXPECT_EQ(H.ladder[1].length, 3u);
    EXPECT_EQ(H.ladder[1].multiplicity, 1u);
}

TEST(Hormander, FiveDimensionalExample) {
    auto M = ex8_6();
    auto H = hormander_numbers(M, Basepoint::origin(M));
    ASSERT_EQ(H.ladder.size(), 3u);
    EXPECT_EQ(H.ladder[0].length, 2u);
    EXPECT_EQ(H.ladder[0].multiplicity, 1u);
    EXPECT_EQ(H.ladder[1].length, 3u);
    EXPECT_EQ(H.ladder[1].multiplicity, 1u);
    EXPECT_EQ(H.ladder[2].length, 4u);
    EXPECT_EQ(H.ladder[2].multiplicity, 2u);
    EXPECT_TRUE(H.minimal);
    auto oracle = brute_force_dims(M, 4);
    EXPECT_EQ(std::vector<std::size_t>(H.dims.begin(), H.dims.end()), oracle);
}

TEST(Hormander, MatchesBruteForceOracle) {
    for (const auto& M : regression()) {
        auto H = hormander_numbers(M, Basepoint::origin(M));
        const std::size_t len = std::min<std::size_t>(H.dims.size(), M.m == 1 ? 5 : 4);
        auto oracle = brute_force_dims(M, len);
        for (std::size_t l = 0; l < len; ++l) EXPECT_EQ(H.dims[l], oracle[l]) << M.name << " length " << l + 1;
    }
}

TEST(Hormander, MixedQuartic) {
    auto M = mixed();
    auto H = hormander_numbers(M, Basepoint::origin(M));
    ASSERT_EQ(H.ladder.size(), 2u);
    EXPECT_EQ(H.ladder[0].length, 2u);
    EXPECT_EQ(H.ladder[1].length, 4u);
    EXPECT_TRUE(H.minimal);
}

TEST(Hormander, LeviFlatNeverGrows) {
    auto M = levi_flat();
    auto H = hormander_numbers(M, Basepoint::origin(M));
    EXPECT_TRUE(H.ladder.empty());
    EXPECT_FALSE(H.minimal);
}

TEST(LeviType, Examples) {
    EXPECT_EQ(levi_type(heisenberg(), Basepoint::origin(heisenberg())).type, std::optional<std::size_t>(1));
    for (const auto& M : {elliptic(), parabolic(), hyperbolic()})
        EXPECT_EQ(levi_type(M, Basepoint::origin(M)).type, std::optional<std::size_t>(1)) << M.name;
    auto M = ex8_11();
    EXPECT_EQ(levi_type(M, Basepoint::origin(M)).type, std::optional<std::size_t>(2));
    EXPECT_FALSE(levi_type(levi_flat(), Basepoint::origin(levi_flat())).type.has_value());
}

TEST(HolomorphicNondegeneracy, Examples) {
    auto h = holomorphic_nondegeneracy(heisenberg());
    EXPECT_TRUE(h.nondegenerate);
    EXPECT_EQ(h.generic_type, std::optional<std::size_t>(1));
    EXPECT_FALSE(holomorphic_nondegeneracy(parse_manifold(2, 1, {"w1*zeta1"})).nondegenerate);
    EXPECT_TRUE(holomorphic_nondegeneracy(ex8_11()).nondegenerate);
    EXPECT_TRUE(holomorphic_nondegeneracy(ex8_10()).nondegenerate);
}

TEST(E1Determinant, Examples) {
    auto e = e1_determinant(elliptic());
    EXPECT_EQ(e.det, parse_series("zeta1*zeta2", elliptic().ambient));
    EXPECT_FALSE(e.vanishes);
    EXPECT_EQ(e1_determinant(parabolic()).det, parse_series("zeta1^2", parabolic().ambient));
    EXPECT_EQ(e1_determinant(hyperbolic()).det, parse_series("zeta1^2 + zeta2^2", hyperbolic().ambient));
    EXPECT_TRUE(e1_determinant(parse_manifold(2, 2, {"0", "0"})).vanishes);
    EXPECT_TRUE(e1_determinant(ex8_10()).vanishes);
    EXPECT_THROW(e1_determinant(heisenberg()), WrongDimensions);
}

TEST(E1Determinant, AgreesWithFirstJump) {
    for (const auto& M : {elliptic(), parabolic(), hyperbolic(), ex8_10(), ex8_11(), mixed()}) {
        auto s = segre_invariants(M, Basepoint::origin(M));
        const std::size_t e1 = s.profile.e.empty() ? 0 : s.profile.e[0];
        EXPECT_EQ(!e1_determinant(M).vanishes, e1 == 2) << M.name;
    }
}

TEST(CrossCheck, Totals) {
    auto h = crosscheck_totals(heisenberg(), Basepoint::origin(heisenberg()));
    EXPECT_EQ(h.sum_l, 1u);
    EXPECT_TRUE(h.holds());
    auto f = crosscheck_totals(levi_flat(), Basepoint::origin(levi_flat()));
    EXPECT_EQ(f.sum_l, 0u);
    EXPECT_FALSE(f.hormander_minimal);
    EXPECT_TRUE(f.holds());
    auto x = crosscheck_totals(ex8_6(), Basepoint::origin(ex8_6()));
    EXPECT_EQ(x.sum_l, 4u);
    EXPECT_EQ(x.sum_e, 4u);
}

TEST(Properties, HormanderSegreAgreement) {
    for (const auto& M : regression()) EXPECT_TRUE(crosscheck_totals(M, Basepoint::origin(M)).holds()) << M.name;
}

TEST(Properties, GenericSpansDominateCentral) {
    for (const auto& M : regression()) {
        auto H0 = hormander_numbers(M, Basepoint::origin(M));
        auto Hg = hormander_numbers(M, Basepoint::symbolic(M));
        for (std::size_t l = 0; l < std::min(H0.dims.size(), Hg.dims.size()); ++l)
            EXPECT_GE(Hg.dims[l], H0.dims[l]) << M.name;
        auto L0 = levi_type(M, Basepoint::origin(M));
        auto Lg = levi_type(M, Basepoint::symbolic(M));
        for (std::size_t k = 0; k < std::min(L0.dims.size(), Lg.dims.size()); ++k) EXPECT_GE(Lg.dims[k], L0.dims[k]);
        if (Lg.type) {
            EXPECT_GE(*Lg.type, 1u);
            EXPECT_LE(*Lg.type, M.m);
        }
    }
}
