#include "hmfac/embeddings.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hmfac;

namespace {

// Independent model of a shift: rotate the positions of each block.
std::uint64_t rotate_blocks(const std::vector<int>& f, std::uint64_t bits, int step)
{
    std::uint64_t out = 0;
    int off = 0;
    for (int fp : f) {
        for (int k = 0; k < fp; ++k)
            if ((bits >> (off + k)) & 1U)
                out |= 1ULL << (off + ((k + step) % fp + fp) % fp);
        off += fp;
    }
    return out;
}

} // namespace

TEST(Profile, ParsesTextAndJson)
{
    const auto p = PrimeProfile::parse("p=3;f=2,1,1");
    EXPECT_EQ(p.p(), 3);
    EXPECT_EQ(p.g(), 4);
    EXPECT_EQ(p.prime_count(), 3);
    EXPECT_EQ(p.to_json().dump(), R"({"p":3,"f":[2,1,1]})");
    EXPECT_EQ(PrimeProfile::from_json(p.to_json()), p);
    EXPECT_EQ(PrimeProfile::parse(" p = 5 ; f = 3 ").to_string(), "p=5;f=3");
}

TEST(Profile, RejectsMalformedInput)
{
    EXPECT_THROW(PrimeProfile::parse("p=3"), std::invalid_argument);
    EXPECT_THROW(PrimeProfile::parse("p=4;f=1"), std::invalid_argument);
    EXPECT_THROW(PrimeProfile::parse("p=3;f=0"), std::invalid_argument);
    EXPECT_THROW(PrimeProfile::parse("p=3;f=1,x"), std::invalid_argument);
    EXPECT_THROW(PrimeProfile(3, {}), std::invalid_argument);
    EXPECT_THROW(PrimeProfile(3, {40, 30}), std::invalid_argument);
}

TEST(Profile, TwoIsAcceptedButFlaggedEven)
{
    const PrimeProfile p(2, {2});
    EXPECT_FALSE(p.odd());
    EXPECT_TRUE(PrimeProfile(3, {1}).odd());
}

TEST(Profile, LabelsRoundTrip)
{
    const PrimeProfile p(3, {2, 1});
    for (int i = 0; i < p.g(); ++i)
        EXPECT_EQ(p.parse_index_label(p.index_label(i)), i);
    EXPECT_EQ(p.index_label(2), "1/0");
    EXPECT_THROW(p.parse_index_label("1/1"), std::invalid_argument);
    EXPECT_THROW(p.parse_index_label("x"), std::invalid_argument);
}

TEST(Shift, LeftOfSingletonMovesBack)
{
    const PrimeProfile p(3, {3});
    EXPECT_EQ(shift_left(EmbeddingSubset::of(p, {1})), EmbeddingSubset::of(p, {0}));
    EXPECT_EQ(shift_left(EmbeddingSubset::full(p)), EmbeddingSubset::full(p));
    EXPECT_EQ(shift_left(EmbeddingSubset::empty(p)), EmbeddingSubset::empty(p));
}

TEST(Shift, RightOfSingletonMovesForward)
{
    const PrimeProfile p(3, {2});
    EXPECT_EQ(shift_right(EmbeddingSubset::of(p, {0})), EmbeddingSubset::of(p, {1}));
    EXPECT_EQ(shift_right(EmbeddingSubset::full(p)), EmbeddingSubset::full(p));
}

TEST(Shift, InverseComplementAndCardinalityOnRandomSubsets)
{
    std::mt19937_64 rng(7);
    const std::vector<std::vector<int>> profiles = {{1}, {2}, {3}, {2, 1}, {3, 2, 1, 1}, {4, 4}, {1, 1, 1, 1, 1, 1, 1, 1}};
    for (const auto& f : profiles) {
        const PrimeProfile p(3, f);
        const std::uint64_t mask = (1ULL << p.g()) - 1;
        for (int t = 0; t < 1000; ++t) {
            const EmbeddingSubset S(p, rng() & mask);
            EXPECT_EQ(shift_right(shift_left(S)), S);
            EXPECT_EQ(shift_left(shift_right(S)), S);
            EXPECT_EQ(shift_left(S.complement()), shift_left(S).complement());
            EXPECT_EQ(shift_left(S).size(), S.size());
            EXPECT_EQ(shift_left(S).bits(), rotate_blocks(f, S.bits(), -1));
            EXPECT_EQ(shift_right(S).bits(), rotate_blocks(f, S.bits(), 1));
            for (int q = 0; q < p.prime_count(); ++q)
                EXPECT_EQ(shift_left(S).restrict_to(q).size(), S.restrict_to(q).size());
        }
    }
}

TEST(Sigma, PowerFIsIdentityOnEachBlock)
{
    const PrimeProfile p(5, {3, 1, 4});
    for (int i = 0; i < p.g(); ++i) {
        EXPECT_EQ(p.sigma(i, p.degree(p.prime_of(i))), i);
        EXPECT_EQ(p.sigma_inv(p.sigma(i)), i);
        EXPECT_EQ(p.prime_of(p.sigma(i)), p.prime_of(i));
    }
}

TEST(PrimeBlock, PartitionsTheEmbeddings)
{
    const PrimeProfile p(3, {2, 1});
    EXPECT_EQ(prime_block(p, 0).size(), 2);
    const auto b1 = prime_block(p, 1);
    EXPECT_EQ(b1.size(), 1);
    EXPECT_EQ(shift_left(b1), b1);
    EXPECT_TRUE((prime_block(p, 0) & b1).empty());
    EXPECT_EQ(prime_block(p, 0) | b1, EmbeddingSubset::full(p));
    EXPECT_THROW(prime_block(p, 2), std::invalid_argument);
}

TEST(PrimeSet, Basics)
{
    auto s = PrimeSet::of({0, 2});
    EXPECT_EQ(s.size(), 2);
    EXPECT_TRUE(s.contains(2));
    EXPECT_FALSE(s.contains(1));
    EXPECT_TRUE(s.subset_of(PrimeSet::all(3)));
    EXPECT_EQ(s.ids(), (std::vector<int>{0, 2}));
}

TEST(Subset, SerializesInCanonicalOrder)
{
    const PrimeProfile p(3, {2, 1});
    EXPECT_EQ(EmbeddingSubset::of(p, {2, 0}).to_json().dump(), R"(["0/0","1/0"])");
    EXPECT_THROW(EmbeddingSubset(p, 1ULL << 5), std::invalid_argument);
    EXPECT_THROW(EmbeddingSubset::of(p, {0}) | EmbeddingSubset::of(PrimeProfile(3, {3}), {0}), std::invalid_argument);
}
