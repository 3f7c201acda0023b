#include "hmfac/degrees.hpp"
#include "hmfac/strata.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace hmfac;

namespace {

const std::vector<std::vector<int>> small_profiles = {{1}, {2}, {3}, {1, 1}, {2, 1}, {4}, {2, 2}, {3, 1, 1}, {1, 1, 1, 1, 1}};

// Admissibility straight from the definition: sigma(beta) not in phi forces beta in eta.
bool admissible_oracle(const PrimeProfile& p, std::uint64_t phi, std::uint64_t eta)
{
    for (int i = 0; i < p.g(); ++i)
        if (!((phi >> p.sigma(i)) & 1U) && !((eta >> i) & 1U))
            return false;
    return true;
}

// A point of the stratum read off its face: 0, 1 or 1/2.
DegreeVector point_of_face(const PrimeProfile& p, const Face& face)
{
    std::vector<Rational> v;
    for (auto c : face.coords)
        v.push_back(c == FaceCoord::Zero ? Rational(0) : c == FaceCoord::One ? Rational(1) : Rational(1, 2));
    return DegreeVector(p, v);
}

} // namespace

TEST(Admissible, Examples)
{
    const PrimeProfile p(3, {2, 1});
    const auto B = EmbeddingSubset::full(p), E = EmbeddingSubset::empty(p);
    EXPECT_TRUE(is_admissible(B, B));
    EXPECT_TRUE(is_admissible(E, B));
    EXPECT_FALSE(is_admissible(E, E));
    EXPECT_THROW(is_admissible(B, EmbeddingSubset::full(PrimeProfile(3, {3}))), std::invalid_argument);
}

TEST(Codim, Examples)
{
    const PrimeProfile p(3, {2});
    const auto B = EmbeddingSubset::full(p), E = EmbeddingSubset::empty(p);
    EXPECT_EQ(codim({B, B}), 2);
    EXPECT_EQ(codim({B, E}), 0);
    EXPECT_EQ(codim({B, EmbeddingSubset::of(p, {0})}), 1);
    EXPECT_THROW(codim({E, E}), std::invalid_argument);
}

TEST(Enumerate, MatchesBruteForceFilterAndPowerOfThree)
{
    for (const auto& f : small_profiles) {
        const PrimeProfile p(3, f);
        std::set<std::pair<std::uint64_t, std::uint64_t>> oracle;
        const std::uint64_t n = 1ULL << p.g();
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                if (admissible_oracle(p, a, b))
                    oracle.insert({a, b});
        const auto listed = enumerate_admissible(p);
        std::set<std::pair<std::uint64_t, std::uint64_t>> got;
        for (const auto& x : listed)
            got.insert({x.phi.bits(), x.eta.bits()});
        EXPECT_EQ(got, oracle);
        EXPECT_EQ(listed.size(), got.size());
        std::size_t three_g = 1;
        for (int i = 0; i < p.g(); ++i)
            three_g *= 3;
        EXPECT_EQ(listed.size(), three_g);
    }
    EXPECT_EQ(enumerate_admissible(PrimeProfile(3, {1})).size(), 3u);
    EXPECT_EQ(enumerate_admissible(PrimeProfile(3, {4})).size(), 81u);
}

TEST(Enumerate, BoundIsEnforced)
{
    EXPECT_THROW(enumerate_admissible(PrimeProfile(3, {13})), std::invalid_argument);
    EXPECT_THROW(enumerate_admissible(PrimeProfile(3, {5}), 4), std::invalid_argument);
}

TEST(Enumerate, CanonicalOrder)
{
    const auto listed = enumerate_admissible(PrimeProfile(3, {2, 1}));
    for (std::size_t i = 1; i < listed.size(); ++i)
        EXPECT_LT(std::pair(listed[i - 1].phi.bits(), listed[i - 1].eta.bits()),
                  std::pair(listed[i].phi.bits(), listed[i].eta.bits()));
}

TEST(Closure, Examples)
{
    const PrimeProfile p(3, {2});
    const auto B = EmbeddingSubset::full(p), E = EmbeddingSubset::empty(p);
    EXPECT_EQ(closure_set({B, B}).size(), 1u);
    EXPECT_EQ(closure_set({B, E}).size(), 4u);
}

TEST(Closure, EqualsAdmissiblePairsAboveAndRaisesCodim)
{
    for (const auto& f : small_profiles) {
        const PrimeProfile p(3, f);
        const auto all = enumerate_admissible(p);
        for (const auto& x : all) {
            std::set<std::pair<std::uint64_t, std::uint64_t>> oracle;
            for (const auto& y : all)
                if ((x.phi.bits() & ~y.phi.bits()) == 0 && (x.eta.bits() & ~y.eta.bits()) == 0)
                    oracle.insert({y.phi.bits(), y.eta.bits()});
            std::set<std::pair<std::uint64_t, std::uint64_t>> got;
            for (const auto& y : closure_set(x)) {
                got.insert({y.phi.bits(), y.eta.bits()});
                EXPECT_GE(codim(y), codim(x));
            }
            EXPECT_EQ(got, oracle);
            EXPECT_TRUE(got.count({x.phi.bits(), x.eta.bits()}));
        }
    }
}

TEST(PiImage, Examples)
{
    const PrimeProfile p(3, {1, 1});
    const auto B = EmbeddingSubset::full(p), E = EmbeddingSubset::empty(p);
    auto img = pi_image({B, B});
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(img[0].tau, B);
    img = pi_image({B, E});
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(img[0].tau, E);
    const AdmissiblePair x{EmbeddingSubset::of(p, {0}), EmbeddingSubset::of(p, {1})};
    ASSERT_TRUE(is_admissible(x.phi, x.eta));
    img = pi_image(x);
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(img[0].tau, x.phi & x.eta);
}

TEST(PiImage, MatchesDirectSubsetEnumeration)
{
    for (const auto& f : small_profiles) {
        const PrimeProfile p(3, f);
        const std::uint64_t n = 1ULL << p.g();
        for (const auto& x : enumerate_admissible(p)) {
            const std::uint64_t lo = x.phi.bits() & x.eta.bits();
            const std::uint64_t hi = lo | (~x.phi.bits() & ~x.eta.bits() & (n - 1));
            std::set<std::uint64_t> oracle;
            for (std::uint64_t t = 0; t < n; ++t)
                if ((lo & ~t) == 0 && (t & ~hi) == 0)
                    oracle.insert(t);
            std::set<std::uint64_t> got;
            for (const auto& t : pi_image(x))
                got.insert(t.tau.bits());
            EXPECT_EQ(got, oracle);
            EXPECT_EQ(got.size(), std::size_t{1} << std::popcount(hi & ~lo));
        }
    }
}

TEST(AtkinLehner, EtaleBlockGoesToMultiplicative)
{
    const PrimeProfile p(3, {2, 1});
    const auto b0 = prime_block(p, 0), b1 = prime_block(p, 1);
    const AdmissiblePair x{b1, EmbeddingSubset::full(p)};
    const auto y = w_T_pair(x, PrimeSet::of({0}));
    EXPECT_EQ(y.phi & b0, b0);
    EXPECT_TRUE((y.eta & b0).empty());
    EXPECT_EQ(w_T_pair(x, PrimeSet{}), x);
}

TEST(AtkinLehner, InvolutionAdmissibleAndFlipsFaces)
{
    for (const auto& f : small_profiles) {
        const PrimeProfile p(3, f);
        for (const auto& x : enumerate_admissible(p))
            for (std::uint64_t t = 0; t < (1ULL << p.prime_count()); ++t) {
                const PrimeSet T(t);
                const auto y = w_T_pair(x, T);
                EXPECT_TRUE(is_admissible(y.phi, y.eta));
                EXPECT_EQ(w_T_pair(y, T), x);
                Face flipped = face_of_pair(x);
                for (int i = 0; i < p.g(); ++i)
                    if (T.contains(p.prime_of(i)) && flipped.coords[i] != FaceCoord::Open)
                        flipped.coords[i] = flipped.coords[i] == FaceCoord::Zero ? FaceCoord::One : FaceCoord::Zero;
                EXPECT_EQ(face_of_pair(y), flipped);
            }
    }
}

TEST(Face, ExamplesAndRoundTrip)
{
    const PrimeProfile p(3, {2, 1});
    const auto B = EmbeddingSubset::full(p), E = EmbeddingSubset::empty(p);
    EXPECT_EQ(face_of_pair({B, E}).to_string(), "111");
    EXPECT_EQ(face_of_pair({E, B}).to_string(), "000");
    for (const auto& f : std::vector<std::vector<int>>{{1}, {2}, {5}, {2, 1}, {3, 2}, {1, 1, 1, 1, 1}}) {
        const PrimeProfile q(3, f);
        std::set<std::string> faces;
        for (const auto& x : enumerate_admissible(q)) {
            const auto face = face_of_pair(x);
            EXPECT_EQ(pair_of_face(q, face), x);
            EXPECT_EQ(face.dimension(), codim(x));
            faces.insert(face.to_string());
        }
        EXPECT_EQ(faces.size(), enumerate_admissible(q).size());
    }
}

TEST(Classify, Examples)
{
    const PrimeProfile p(3, {2, 1});
    const auto B = EmbeddingSubset::full(p);
    EXPECT_TRUE(classify({B, B}).nowhere_etale);
    const AdmissiblePair etale_at_1{prime_block(p, 0), B};
    EXPECT_FALSE(classify(etale_at_1).nowhere_etale);

    // Codimension one with the open coordinate on the degree-1 prime.
    const PrimeProfile q(3, {1, 1});
    const auto x = pair_of_face(q, Face{{FaceCoord::One, FaceCoord::Open}});
    const auto c = classify(x);
    ASSERT_EQ(codim(x), 1);
    EXPECT_EQ(c.badness, Badness::Good);
    EXPECT_EQ(*c.beta0, 1);
}

// The face reading of badness agrees with the degree reading on points of the
// stratum: bad iff deg at sigma(beta0) vanishes; j counts the zero run.
TEST(Classify, FaceTranslationAgreesWithPointDegrees)
{
    for (const auto& f : small_profiles) {
        const PrimeProfile p(3, f);
        for (const auto& x : enumerate_admissible(p)) {
            const auto c = classify(x);
            if (codim(x) != 1) {
                EXPECT_EQ(c.badness, Badness::NotCodim1);
                continue;
            }
            const auto h = point_of_face(p, face_of_pair(x));
            ASSERT_EQ(pair_of_degvec(h), x);
            const int b0 = *c.beta0;
            EXPECT_TRUE(h[b0] > 0 && h[b0] < 1);
            const bool bad = p.sigma(b0) != b0 && h[p.sigma(b0)] == 0;
            EXPECT_EQ(c.badness == Badness::Bad, bad);
            const auto block = prime_block(p, p.prime_of(b0));
            if (!bad || (x.eta & block) == block) {
                EXPECT_FALSE(c.j.has_value());
                continue;
            }
            ASSERT_TRUE(c.j.has_value());
            for (int i = 1; i <= *c.j; ++i)
                EXPECT_EQ(h[p.sigma(b0, i)], 0);
            EXPECT_EQ(h[p.sigma(b0, *c.j + 1)], 1);
        }
    }
}

TEST(Vertex, Decomposition)
{
    const PrimeProfile p(3, {2, 1});
    using F = FaceCoord;
    auto d = vertex_decomposition(p, Face{{F::One, F::One, F::One}});
    EXPECT_EQ(d.t1, PrimeSet::all(2));
    EXPECT_TRUE(d.t0.empty() && d.t2.empty());
    d = vertex_decomposition(p, Face{{F::Zero, F::Zero, F::Zero}});
    EXPECT_EQ(d.t0, PrimeSet::all(2));
    d = vertex_decomposition(p, Face{{F::One, F::Zero, F::One}});
    EXPECT_EQ(d.t2, PrimeSet::of({0}));
    EXPECT_EQ(d.t1, PrimeSet::of({1}));
    EXPECT_TRUE(d.t0.empty());
    EXPECT_THROW(vertex_decomposition(p, Face{{F::Open, F::Zero, F::One}}), std::invalid_argument);
}

TEST(Vertex, AtkinLehnerImagesAreNowhereEtale)
{
    for (const auto& f : std::vector<std::vector<int>>{{1}, {2}, {3}, {6}, {2, 1}, {3, 3}, {2, 2, 2}, {1, 1, 1, 1, 1, 1}}) {
        const PrimeProfile p(3, f);
        for (std::uint64_t ones = 0; ones < (1ULL << p.g()); ++ones) {
            Face v;
            for (int i = 0; i < p.g(); ++i)
                v.coords.push_back((ones >> i) & 1U ? FaceCoord::One : FaceCoord::Zero);
            const auto d = vertex_decomposition(p, v);
            const auto x = pair_of_face(p, v);
            EXPECT_TRUE(nowhere_etale(w_T_pair(x, d.t0)));
            EXPECT_TRUE(nowhere_etale(w_T_pair(x, d.t0 | d.t2)));
        }
    }
}

TEST(Record, JsonShape)
{
    const PrimeProfile p(3, {2, 1});
    const auto B = EmbeddingSubset::full(p);
    const auto j = stratum_to_json({B, B});
    EXPECT_EQ(j["codim"], 3);
    EXPECT_EQ(j["nowhere_etale"], true);
    EXPECT_TRUE(j["badness"].is_null());
    EXPECT_TRUE(j["beta0"].is_null());
    EXPECT_TRUE(j["j"].is_null());
    EXPECT_EQ(j["phi"].size(), 3u);
}
