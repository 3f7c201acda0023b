#pragma once

// Strata of the Gamma_0(p) special fiber as a finite labelled
// poset. A stratum is named by an admissible pair (phi, eta) of subsets of B
// with l(phi^c) contained in eta; faces of [0,1]^B give the same labels.

#include "embeddings.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmfac {

inline constexpr int default_enumeration_bound = 12;

struct AdmissiblePair {
    EmbeddingSubset phi;
    EmbeddingSubset eta;

    const PrimeProfile& profile() const { return phi.profile(); }
    bool operator==(const AdmissiblePair&) const = default;
};

/// tau(Q) for a point of the Goren-Oort stratification of the level-one fiber.
struct TauSet {
    EmbeddingSubset tau;
    bool operator==(const TauSet&) const = default;
};

enum class FaceCoord { Zero, One, Open };

/// A face of the hypercube [0,1]^B: x_beta = 0, x_beta = 1 or x_beta in (0,1).
struct Face {
    std::vector<FaceCoord> coords;

    int dimension() const
    {
        int d = 0;
        for (auto c : coords)
            d += c == FaceCoord::Open;
        return d;
    }
    bool is_vertex() const { return dimension() == 0; }
    bool operator==(const Face&) const = default;

    std::string to_string() const
    {
        std::string s;
        for (auto c : coords)
            s += c == FaceCoord::Zero ? '0' : c == FaceCoord::One ? '1' : '*';
        return s;
    }
};

enum class Badness { Good, Bad, NotCodim1 };

inline const char* to_string(Badness b)
{
    switch (b) {
    case Badness::Good: return "good";
    case Badness::Bad: return "bad";
    default: return "n/a";
    }
}

struct Classification {
    bool nowhere_etale = false;
    Badness badness = Badness::NotCodim1;
    std::optional<int> beta0; ///< flat embedding index, codim-1 strata only
    std::optional<int> j;     ///< Bad strata with eta_{p0} != B_{p0} only
};

inline bool is_admissible(const EmbeddingSubset& phi, const EmbeddingSubset& eta)
{
    if (!(phi.profile() == eta.profile()))
        throw std::invalid_argument("is_admissible: phi and eta belong to different profiles");
    return shift_left(phi.complement()).subset_of(eta);
}

inline AdmissiblePair make_pair_checked(EmbeddingSubset phi, EmbeddingSubset eta)
{
    if (!is_admissible(phi, eta))
        throw std::invalid_argument("pair (phi, eta) is not admissible");
    return {std::move(phi), std::move(eta)};
}

inline int codim(const AdmissiblePair& pair)
{
    if (!is_admissible(pair.phi, pair.eta))
        throw std::invalid_argument("codim: inadmissible pair");
    return pair.phi.size() + pair.eta.size() - pair.profile().g();
}

namespace detail {

/// Calls fn(superset) for every superset of `base` inside `universe`, in
/// increasing numeric order of the bit pattern.
template <class Fn>
void for_each_superset(std::uint64_t base, std::uint64_t universe, Fn&& fn)
{
    const std::uint64_t free = universe & ~base;
    std::uint64_t sub = 0;
    // Increasing order over submasks of `free`: sub = (sub - free) & free.
    while (true) {
        fn(base | sub);
        if (sub == free)
            break;
        sub = (sub - free) & free;
    }
}

inline std::uint64_t universe_mask(int g) { return g >= 64 ? ~0ULL : ((1ULL << g) - 1); }

} // namespace detail

/// All admissible pairs, ordered by (phi bits, eta bits).
inline std::vector<AdmissiblePair> enumerate_admissible(const PrimeProfile& profile,
                                                        int bound = default_enumeration_bound)
{
    if (profile.g() > bound)
        throw std::invalid_argument("enumerate_admissible: g=" + std::to_string(profile.g()) +
                                    " exceeds the enumeration bound " + std::to_string(bound));
    const std::uint64_t universe = detail::universe_mask(profile.g());
    std::vector<AdmissiblePair> out;
    for (std::uint64_t phi = 0; phi <= universe; ++phi) {
        const EmbeddingSubset phi_set(profile, phi);
        const std::uint64_t required = shift_left(phi_set.complement()).bits();
        detail::for_each_superset(required, universe, [&](std::uint64_t eta) {
            out.push_back({phi_set, EmbeddingSubset(profile, eta)});
        });
    }
    return out;
}

/// Strata in the closure Z_{phi,eta}: all (phi', eta') >= (phi, eta).
inline std::vector<AdmissiblePair> closure_set(const AdmissiblePair& pair)
{
    const auto& profile = pair.profile();
    const std::uint64_t universe = detail::universe_mask(profile.g());
    std::vector<AdmissiblePair> out;
    detail::for_each_superset(pair.phi.bits(), universe, [&](std::uint64_t phi) {
        detail::for_each_superset(pair.eta.bits(), universe, [&](std::uint64_t eta) {
            EmbeddingSubset p(profile, phi), e(profile, eta);
            if (is_admissible(p, e))
                out.push_back({std::move(p), std::move(e)});
        });
    });
    return out;
}

/// pi(W_{phi,eta}) as the list of Goren-Oort strata W_tau it meets:
/// phi&eta <= tau <= (phi&eta) | (phi^c & eta^c).
inline std::vector<TauSet> pi_image(const AdmissiblePair& pair)
{
    const auto lower = pair.phi & pair.eta;
    const auto free = pair.phi.complement() & pair.eta.complement();
    std::vector<TauSet> out;
    detail::for_each_superset(lower.bits(), lower.bits() | free.bits(), [&](std::uint64_t tau) {
        out.push_back({EmbeddingSubset(pair.profile(), tau)});
    });
    return out;
}

/// Atkin-Lehner action on labels: (phi_p, eta_p) -> (r(eta_p), l(phi_p)) for p in T.
inline AdmissiblePair w_T_pair(const AdmissiblePair& pair, PrimeSet T)
{
    const auto& profile = pair.profile();
    const auto moved = blocks_of(profile, T);
    const auto kept = moved.complement();
    auto phi = (pair.phi & kept) | shift_right(pair.eta & moved);
    auto eta = (pair.eta & kept) | shift_left(pair.phi & moved);
    return {std::move(phi), std::move(eta)};
}

/// Face of [0,1]^B attached to a stratum: One on eta^c, Zero on l(phi^c),
/// Open on eta & l(phi).
inline Face face_of_pair(const AdmissiblePair& pair)
{
    if (!is_admissible(pair.phi, pair.eta))
        throw std::invalid_argument("face_of_pair: inadmissible pair");
    const auto zeros = shift_left(pair.phi.complement());
    Face face;
    face.coords.resize(pair.profile().g());
    for (int i = 0; i < pair.profile().g(); ++i) {
        if (!pair.eta.contains(i))
            face.coords[i] = FaceCoord::One;
        else if (zeros.contains(i))
            face.coords[i] = FaceCoord::Zero;
        else
            face.coords[i] = FaceCoord::Open;
    }
    return face;
}

inline AdmissiblePair pair_of_face(const PrimeProfile& profile, const Face& face)
{
    if (static_cast<int>(face.coords.size()) != profile.g())
        throw std::invalid_argument("pair_of_face: face dimension does not match profile");
    EmbeddingSubset ones(profile), zeros(profile);
    for (int i = 0; i < profile.g(); ++i) {
        if (face.coords[i] == FaceCoord::One)
            ones.insert(i);
        else if (face.coords[i] == FaceCoord::Zero)
            zeros.insert(i);
    }
    // l(phi^c) = zeros, so phi = complement of r(zeros).
    return {shift_right(zeros).complement(), ones.complement()};
}

/// Not etale at p: (phi_p, eta_p) != (empty, B_p).
inline bool not_etale_at(const AdmissiblePair& pair, int prime)
{
    const auto block = prime_block(pair.profile(), prime);
    return !((pair.phi & block).empty() && (pair.eta & block) == block);
}

inline bool nowhere_etale(const AdmissiblePair& pair)
{
    for (int q = 0; q < pair.profile().prime_count(); ++q)
        if (!not_etale_at(pair, q))
            return false;
    return true;
}

/// Nowhere-etale flag, and for codimension-one strata the distinguished
/// embedding beta0, good/bad type and (bad, eta_{p0} != B_{p0}) the run
/// length j. Read off the face: bad iff x at sigma(beta0) is Zero.
inline Classification classify(const AdmissiblePair& pair)
{
    const auto& profile = pair.profile();
    Classification c;
    c.nowhere_etale = nowhere_etale(pair);
    if (codim(pair) != 1)
        return c;
    const Face face = face_of_pair(pair);
    int beta0 = -1;
    for (int i = 0; i < profile.g(); ++i)
        if (face.coords[i] == FaceCoord::Open)
            beta0 = i;
    c.beta0 = beta0;
    const int next = profile.sigma(beta0);
    if (next == beta0 || face.coords[next] != FaceCoord::Zero) {
        c.badness = Badness::Good;
        return c;
    }
    c.badness = Badness::Bad;
    const int p0 = profile.prime_of(beta0);
    const auto block = prime_block(profile, p0);
    if ((pair.eta & block) == block)
        return c;
    const int f = profile.degree(p0);
    for (int jj = 1; jj < f; ++jj) {
        if (face.coords[profile.sigma(beta0, jj)] != FaceCoord::Zero)
            throw std::logic_error("classify: malformed bad stratum");
        if (face.coords[profile.sigma(beta0, jj + 1)] == FaceCoord::One) {
            c.j = jj;
            return c;
        }
    }
    throw std::logic_error("classify: no run length found for bad stratum");
}

/// Partition of the primes for a vertex: T0 all-Zero, T1 all-One, T2 mixed.
struct VertexDecomposition {
    PrimeSet t0, t1, t2;
    bool operator==(const VertexDecomposition&) const = default;
};

inline VertexDecomposition vertex_decomposition(const PrimeProfile& profile, const Face& vertex)
{
    if (!vertex.is_vertex())
        throw std::invalid_argument("vertex_decomposition: face has open coordinates");
    if (static_cast<int>(vertex.coords.size()) != profile.g())
        throw std::invalid_argument("vertex_decomposition: face dimension does not match profile");
    VertexDecomposition d;
    for (int q = 0; q < profile.prime_count(); ++q) {
        bool all_zero = true, all_one = true;
        const int off = profile.block_offset(q);
        for (int k = 0; k < profile.degree(q); ++k) {
            all_zero &= vertex.coords[off + k] == FaceCoord::Zero;
            all_one &= vertex.coords[off + k] == FaceCoord::One;
        }
        (all_zero ? d.t0 : all_one ? d.t1 : d.t2).insert(q);
    }
    return d;
}

/// Record used by `strata enumerate` and reports.
inline json stratum_to_json(const AdmissiblePair& pair)
{
    const auto c = classify(pair);
    json j;
    j["phi"] = pair.phi.to_json();
    j["eta"] = pair.eta.to_json();
    j["codim"] = codim(pair);
    j["nowhere_etale"] = c.nowhere_etale;
    j["badness"] = c.badness == Badness::NotCodim1 ? json(nullptr) : json(to_string(c.badness));
    j["beta0"] = c.beta0 ? json(pair.profile().index_label(*c.beta0)) : json(nullptr);
    j["j"] = c.j ? json(*c.j) : json(nullptr);
    return j;
}

} // namespace hmfac
