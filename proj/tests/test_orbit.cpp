#include <gtest/gtest.h>

#include "segre/orbit.hpp"

using namespace segre;

namespace {

VectorField field(const VarSpacePtr& sp, const std::vector<std::string>& coeffs) {
    std::vector<Series> c;
    for (const auto& s : coeffs) c.push_back(parse_series(s, sp));
    return {sp, c};
}

VFSystem heis3() {
    auto sp = coord_space(3);
    return make_system(sp, {{field(sp, {"1", "0", "0"})}, {field(sp, {"0", "1", "x1"})}}, "heis3");
}

VFSystem engel4() {
    auto sp = coord_space(4);
    return make_system(sp, {{field(sp, {"1", "0", "0", "0"})}, {field(sp, {"0", "1", "x1", "x1^2"})}}, "engel4");
}

VFSystem translations() {
    auto sp = coord_space(3);
    return make_system(sp, {{field(sp, {"1", "0", "0"})}, {field(sp, {"0", "1", "0"})}}, "translations");
}

std::vector<CRManifold> regression() {
    return {parse_manifold(1, 1, {"w1*zeta1"}),
            parse_manifold(1, 1, {"0"}),
            parse_manifold(1, 1, {"w1^2*zeta1^2"}),
            parse_manifold(1, 2, {"w1*zeta1", "w1*zeta1*(w1+zeta1)"}),
            parse_manifold(2, 2, {"w1*zeta1", "xi1*(i*w1*zeta1*w2*zeta2 + xi1*w2*zeta2)"}),
            parse_manifold(2, 2, {"w1*zeta1", "w2^2*zeta2^2"}),
            parse_manifold(2, 1, {"w1*zeta1"})};
}

}  // namespace

TEST(FormalFlow, Translation) {
    auto sp = coord_space(2);
    auto F = formal_flow(field(sp, {"1", "0"}));
    EXPECT_EQ(F[0], parse_series("x1 + s1", F.domain()));
    EXPECT_EQ(F[1], parse_series("x2", F.domain()));
}

TEST(FormalFlow, Nilpotent) {
    auto sp = coord_space(2);
    auto F = formal_flow(field(sp, {"0", "x1"}));
    EXPECT_EQ(F[0], parse_series("x1", F.domain()));
    EXPECT_EQ(F[1], parse_series("x2 + s1*x1", F.domain()));
}

TEST(FormalFlow, ExponentialNeedsOrder) {
    auto sp = coord_space(1);
    auto X = field(sp, {"x1"});
    EXPECT_THROW(formal_flow(X), TruncationRequired);
    auto F = formal_flow(X, Order(6));
    EXPECT_TRUE(equal_mod(F[0], parse_series("x1*(1 + s1 + 1/2*s1^2 + 1/6*s1^3 + 1/24*s1^4)", F.domain()), 5));
}

TEST(FormalFlow, ZeroTimeIsIdentity) {
    auto sp = coord_space(3);
    for (const auto& X : {field(sp, {"1", "x1", "x1*x2"}), field(sp, {"0", "x3^2", "1"})}) {
        auto F = formal_flow(X);
        std::vector<std::pair<std::string, Series>> a{{"s1", Series(F.domain())}};
        auto z = compose(F, substitution(F.domain(), F.domain(), a));
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(z[i], Series::variable(F.domain(), i + 1));
    }
}

TEST(FormalFlow, GroupLaw) {
    auto sp = coord_space(3);
    for (const auto& X : {field(sp, {"1", "x1", "x1*x2"}), field(sp, {"x2", "0", "x1^2"})}) {
        auto F = formal_flow(X);
        // exp((s+s')X) = exp(sX) o exp(s'X), over (s, s', x)
        auto dom = VarSpace::Builder()
                       .block("s", Role::Time, 2, "s")
                       .named_block("x", Role::Coord, {"x1", "x2", "x3"})
                       .build();
        auto var = [&](const std::string& n) { return Series::variable(dom, n); };
        std::vector<Series> sum{var("s1") + var("s2"), var("x1"), var("x2"), var("x3")};
        auto lhs = compose(F, SeriesMap(dom, F.domain(), sum));
        std::vector<Series> inner{var("s2"), var("x1"), var("x2"), var("x3")};
        auto first = compose(F, SeriesMap(dom, F.domain(), inner)).components();
        std::vector<Series> outer{var("s1")};
        outer.insert(outer.end(), first.begin(), first.end());
        auto rhs = compose(F, SeriesMap(dom, F.domain(), outer));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(FormalFlow, GroupLawTruncated) {
    auto sp = coord_space(1);
    auto F = formal_flow(field(sp, {"x1"}), Order(8));
    auto dom = VarSpace::Builder().block("s", Role::Time, 2, "s").named_block("x", Role::Coord, {"x1"}).build();
    auto var = [&](const std::string& n) { return Series::variable(dom, n, Order(8)); };
    auto lhs = compose(F, SeriesMap(dom, F.domain(), {var("s1") + var("s2"), var("x1")}));
    auto first = compose(F, SeriesMap(dom, F.domain(), {var("s2"), var("x1")}))[0];
    auto rhs = compose(F, SeriesMap(dom, F.domain(), {var("s1"), first}));
    EXPECT_TRUE(equal_mod(lhs[0], rhs[0], 7));
}

TEST(FormalFlow, MultipleFlowPermutationInvariant) {
    auto sp = coord_space(3);
    auto A = field(sp, {"1", "x3", "0"});
    auto B = field(sp, {"0", "x1", "1"});
    ASSERT_TRUE(bracket(A, B).is_zero());
    auto AB = multiple_flow({A, B});
    auto BA = multiple_flow({B, A});
    // swap the time variables of BA
    auto dom = AB.domain();
    SeriesMap swap(dom, BA.domain(),
                   {Series::variable(dom, 1), Series::variable(dom, 0), Series::variable(dom, 2),
                    Series::variable(dom, 3), Series::variable(dom, 4)});
    EXPECT_EQ(AB, compose(BA, swap));
}

TEST(System, Validation) {
    auto sp = coord_space(2);
    EXPECT_THROW(make_system(sp, {{field(sp, {"x1", "0"})}}), RankAssumptionViolated);
    EXPECT_THROW(make_system(sp, {{field(sp, {"1", "0"}), field(sp, {"1", "0"})}}), RankAssumptionViolated);
    EXPECT_THROW(make_system(sp, {{field(sp, {"1", "0"}), field(sp, {"x1", "1"})}}), RankAssumptionViolated);
    EXPECT_NO_THROW(make_system(sp, {{field(sp, {"1", "0"}), field(sp, {"0", "1"})}}));
}

TEST(Greedy, HeisenbergSystem) {
    auto r = greedy_multitype(heis3());
    EXPECT_EQ(r.orbit_dim, 3u);
    EXPECT_EQ(r.multitype, (std::vector<std::size_t>{1, 1, 1}));
    EXPECT_EQ(r.word, (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_TRUE(r.witness.found);
    EXPECT_EQ(r.witness.returns, std::optional<bool>(true));
    EXPECT_EQ(r.witness.rank_return, 3u);
}

TEST(Greedy, Translations) {
    auto r = greedy_multitype(translations());
    EXPECT_EQ(r.orbit_dim, 2u);
    EXPECT_EQ(r.multitype, (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(r.kappa0, 0u);
}

TEST(Greedy, EngelType) {
    auto r = greedy_multitype(engel4());
    EXPECT_EQ(r.orbit_dim, 4u);
    EXPECT_EQ(lie_algebra_dimension(engel4()), 4u);
    EXPECT_TRUE(r.witness.found);
    EXPECT_EQ(r.witness.returns, std::optional<bool>(true));
}

TEST(Greedy, SingleField) {
    auto sp = coord_space(2);
    auto S = make_system(sp, {{field(sp, {"1", "0"})}});
    EXPECT_EQ(orbit_dimension(S), 1u);
}

TEST(Greedy, TruncatedFlows) {
    // the second field has an exponential flow in x2
    auto sp = coord_space(3);
    auto S = make_system(sp, {{field(sp, {"1", "0", "0"})}, {field(sp, {"0", "1 + x2", "x1"})}});
    auto r = greedy_multitype(S);
    ASSERT_TRUE(r.order.has_value());
    EXPECT_EQ(*r.order, 8);
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(r.orbit_dim, 3u);
    EXPECT_EQ(r.orbit_dim, lie_algebra_dimension(S));
    EXPECT_FALSE(r.witness.returns.has_value());
}

TEST(Greedy, BothStartOrders) {
    auto rs = multitypes(heis3());
    ASSERT_EQ(rs.size(), 2u);
    EXPECT_EQ(rs[1].word.front(), 1u);
    EXPECT_EQ(rs[0].orbit_dim, rs[1].orbit_dim);
}

TEST(Properties, MatchesLieSpanOracle) {
    for (const auto& S : {heis3(), engel4(), translations()}) EXPECT_EQ(orbit_dimension(S), lie_algebra_dimension(S)) << S.name;
}

TEST(Properties, CRPairReproducesSegreMultitype) {
    for (const auto& M : regression()) {
        auto S = cr_system(M);
        auto s = segre_invariants(M, Basepoint::origin(M));
        for (const auto& r : multitypes(S)) {
            EXPECT_EQ(r.e, s.profile.e) << M.name;
            EXPECT_EQ(r.orbit_dim, s.orbit_dim_complexified);
            EXPECT_EQ(r.orbit_dim == S.n, s.minimal);
        }
        EXPECT_EQ(lie_algebra_dimension(S), s.orbit_dim_complexified);
    }
}
