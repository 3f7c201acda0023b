#include "hmfac/properties.hpp"
#include "hmfac/regions.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hmfac;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

int rank(Membership m) { return m == Membership::In ? 2 : m == Membership::Indeterminate ? 1 : 0; }

std::vector<std::vector<int>> compositions(int g)
{
    if (g == 0)
        return {{}};
    std::vector<std::vector<int>> out;
    for (int first = 1; first <= g; ++first)
        for (auto rest : compositions(g - first)) {
            rest.insert(rest.begin(), first);
            out.push_back(rest);
        }
    return out;
}

// A point of a codimension-one stratum: Open coordinate at beta0 set to x.
DegreeVector point_on(const PrimeProfile& profile, const AdmissiblePair& pair, int beta0, Rational x, bool generic)
{
    const Face face = face_of_pair(pair);
    std::vector<Rational> v;
    for (auto c : face.coords)
        v.push_back(c == FaceCoord::One ? R(1) : R(0));
    v[beta0] = x;
    return DegreeVector(profile, std::move(v), generic);
}

} // namespace

TEST(Interval, ContainmentAndPrinting)
{
    const auto I = Interval::open(R(1, 3), 1);
    EXPECT_FALSE(I.contains(R(1, 3)));
    EXPECT_TRUE(I.contains(R(1, 2)));
    EXPECT_FALSE(I.contains(1));
    EXPECT_EQ(I.to_string(), "(1/3, 1)");
    EXPECT_EQ(Interval::closed(0, 2).to_string(), "[0, 2]");
    EXPECT_TRUE(Interval::open(1, 1).empty());
    EXPECT_FALSE(Interval::point(1).empty());
}

TEST(IntervalRegion, SumsOverEachBlock)
{
    const PrimeProfile p(3, {2});
    const IntervalMultiset I(p, {Interval::open(R(1, 3), 1)});
    EXPECT_TRUE(in_interval_region(DegreeVector(p, {R(1, 2), R(1, 4)}), I));
    EXPECT_FALSE(in_interval_region(DegreeVector(p, {R(1, 2), R(1, 2)}), I));
    EXPECT_FALSE(in_interval_region(DegreeVector(p, {R(1, 6), R(1, 6)}), I));
    EXPECT_TRUE(in_interval_region(DegreeVector(p, {R(1), R(1)}), IntervalMultiset::full(p)));
    EXPECT_THROW(IntervalMultiset(p, {Interval::closed(0, 3)}), std::invalid_argument);
    EXPECT_THROW(IntervalMultiset(p, {}), std::invalid_argument);
    EXPECT_THROW(in_interval_region(DegreeVector(PrimeProfile(3, {1}), {R(0)}), I), std::invalid_argument);
}

TEST(IntervalRegion, IstarIntervals)
{
    EXPECT_EQ(istar_interval(PrimeProfile(3, {1}), 0), Interval::open(0, 1));
    EXPECT_EQ(istar_interval(PrimeProfile(3, {2}), 0), Interval::open(R(1, 3), 1));
    EXPECT_EQ(istar_interval(PrimeProfile(3, {3}), 0), Interval::open(R(4, 9), 1));
    const auto m = istar_multiset(PrimeProfile(5, {1, 2}));
    EXPECT_EQ(m[1], Interval::open(R(1, 5), 1));
}

TEST(Delta, Values)
{
    EXPECT_EQ(delta(3, 1), R(1, 3));
    EXPECT_EQ(delta(3, 2), R(4, 9));
    EXPECT_EQ(delta(5, 3), R(31, 125));
    EXPECT_THROW(delta(3, 0), std::invalid_argument);
}

TEST(Vcan, Examples)
{
    const PrimeProfile p(3, {2});
    EXPECT_TRUE(in_Vcan(DegreeVector(p, {R(1, 2), R(1, 2)})));
    EXPECT_FALSE(in_Vcan(DegreeVector(p, {R(0), R(1)})));
    EXPECT_TRUE(in_Vcan(DegreeVector(p, {R(1), R(1)})));
    EXPECT_FALSE(in_Vcan(DegreeVector(p, {R(1, 4), R(1, 4)})));
    const PrimeProfile q(3, {1});
    EXPECT_TRUE(in_Vcan(DegreeVector(q, {R(1, 9)})));
    EXPECT_FALSE(in_Vcan(DegreeVector(q, {R(0)})));
}

TEST(Vcan, MatchesDirectInequalityOnGrid)
{
    const PrimeProfile p(5, {2, 1});
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b)
            for (int c = 0; c <= 10; ++c) {
                const Rational x(a, 10), y(b, 10), z(c, 10);
                const bool expect = 5 * y + x > 1 && 5 * x + y > 1 && z > 0;
                EXPECT_EQ(in_Vcan(DegreeVector(p, {x, y, z})), expect);
            }
}

TEST(Sigma, AllOnesIsCaseOne)
{
    const PrimeProfile p(3, {2, 1});
    const auto v = sigma_verdict(DegreeVector::constant(p, 1));
    EXPECT_EQ(v.which, SigmaCase::Case1);
    EXPECT_EQ(v.membership, Membership::In);
    EXPECT_EQ(in_Sigma(DegreeVector::constant(p, 1, false)), Membership::Out);
}

TEST(Sigma, CaseTwoBNeedsNoGenericFlag)
{
    const PrimeProfile p(3, {2});
    for (bool generic : {true, false}) {
        const auto v = sigma_verdict(DegreeVector(p, {R(1, 2), R(0)}, generic));
        EXPECT_EQ(v.which, SigmaCase::Case2b);
        EXPECT_EQ(v.membership, Membership::In);
    }
    EXPECT_EQ(in_Sigma(DegreeVector(p, {R(1, 3), R(0)})), Membership::Out);
    EXPECT_EQ(in_Sigma(DegreeVector(p, {R(1, 4), R(0)})), Membership::Out);
}

TEST(Sigma, CaseTwoCIsIndeterminateExactlyAtDelta)
{
    const PrimeProfile p(3, {3});
    int seen = 0;
    for (const auto& pair : enumerate_admissible(p)) {
        const auto c = classify(pair);
        if (codim(pair) != 1 || !c.nowhere_etale || c.badness != Badness::Bad || !c.j)
            continue;
        ++seen;
        const Rational dj = delta(3, *c.j);
        for (int k = 1; k < 27; ++k) {
            const Rational x(k, 27);
            const auto v = sigma_verdict(point_on(p, pair, *c.beta0, x, true));
            EXPECT_EQ(v.which, SigmaCase::Case2c);
            EXPECT_EQ(v.membership, x == dj ? Membership::Indeterminate : Membership::In);
            EXPECT_EQ(in_Sigma(point_on(p, pair, *c.beta0, x, false)), Membership::Out);
        }
    }
    EXPECT_GT(seen, 0);
}

TEST(Sigma, CodimensionTwoAndEtaleStrataAreOutside)
{
    std::mt19937_64 rng(21);
    for (const auto& f : std::vector<std::vector<int>>{{2}, {3}, {2, 1}, {1, 1, 1}, {3, 2}}) {
        const PrimeProfile p(3, f);
        for (int t = 0; t < 3000; ++t) {
            const auto h = random_degree_vector(p, rng);
            const auto v = sigma_verdict(h);
            const auto pair = pair_of_degvec(h);
            if (codim(pair) >= 2 || !nowhere_etale(pair)) {
                EXPECT_EQ(v.membership, Membership::Out);
                EXPECT_EQ(v.which, SigmaCase::None);
            }
            if (v.membership == Membership::In && !h.generic()) {
                EXPECT_EQ(v.which, SigmaCase::Case2b);
            }
        }
    }
}

TEST(SigmaS, EmptySetIsSigma)
{
    std::mt19937_64 rng(4);
    const PrimeProfile p(3, {2, 1});
    for (int t = 0; t < 2000; ++t) {
        const auto h = random_degree_vector(p, rng);
        EXPECT_EQ(in_Sigma_S(h, PrimeSet{}), in_Sigma(h));
    }
}

TEST(SigmaS, AllZeroReachesCaseOneThroughFullFlip)
{
    const PrimeProfile p(3, {2, 1});
    const auto zero = DegreeVector::constant(p, 0);
    EXPECT_EQ(in_Sigma(zero), Membership::Out);
    EXPECT_EQ(in_Sigma_S(zero, PrimeSet::all(2), GenericityScenario::everywhere()), Membership::In);
    EXPECT_EQ(in_Sigma_S(zero, PrimeSet::of({0}), GenericityScenario::everywhere()), Membership::Out);
    GenericityScenario s = GenericityScenario::everywhere();
    s.overrides[PrimeSet::all(2).bits()] = false;
    EXPECT_EQ(in_Sigma_S(zero, PrimeSet::all(2), s), Membership::Out);
    EXPECT_THROW(in_Sigma_S(zero, PrimeSet::of({3})), std::invalid_argument);
}

TEST(SigmaS, MonotoneInS)
{
    std::mt19937_64 rng(8);
    const PrimeProfile p(3, {2, 1, 1});
    for (int t = 0; t < 2000; ++t) {
        const auto h = random_degree_vector(p, rng);
        const PrimeSet S(rng() & 7);
        const PrimeSet bigger(S.bits() | (rng() & 7));
        EXPECT_LE(rank(in_Sigma_S(h, S)), rank(in_Sigma_S(h, bigger)));
        EXPECT_LE(rank(in_Sigma(h)), rank(in_Sigma_S(h, S)));
    }
}

TEST(Coverage, OddPrimesPassUpToSixEmbeddings)
{
    for (int p : {3, 5, 7})
        for (int g = 1; g <= 6; ++g)
            for (const auto& f : compositions(g)) {
                const auto r = coverage_check(PrimeProfile(p, f));
                EXPECT_TRUE(r.pass) << r.to_json().dump();
                EXPECT_EQ(r.stats["vertices"], 1ULL << g);
            }
}

TEST(Coverage, TwoFailsAtTheEdgeStepForInertDegreeAtLeastTwo)
{
    for (int f = 2; f <= 4; ++f) {
        const auto r = coverage_check(PrimeProfile(2, {f}));
        EXPECT_FALSE(r.pass);
        EXPECT_EQ(r.stats["vertex_failures"], 0);
        EXPECT_GT(r.stats["edge_failures"].get<int>(), 0);
        EXPECT_EQ(r.counterexamples.front()["step"], "edge-interval");
    }
    EXPECT_TRUE(coverage_check(PrimeProfile(2, {1})).pass);
    const auto r = coverage_check(PrimeProfile(2, {2}), 1);
    EXPECT_EQ(r.counterexamples.size(), 1u);
    EXPECT_EQ(r.counterexamples.front()["interval"], "(1/2, 1)");
}
