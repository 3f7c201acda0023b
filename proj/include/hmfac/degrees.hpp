#pragma once

// Degree vectors (deg_beta(H))_beta in [0,1]^B and the degree-level
// constraints tying a level subgroup H to a complementary subgroup D.

#include "rational.hpp"
#include "strata.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmfac {

class DegreeVector {
public:
    DegreeVector(PrimeProfile profile, std::vector<Rational> deg, bool generic = true, bool cusp = false)
        : profile_(std::move(profile)), deg_(std::move(deg)), generic_(generic), cusp_(cusp)
    {
        if (static_cast<int>(deg_.size()) != profile_.g())
            throw std::invalid_argument("degree vector has " + std::to_string(deg_.size()) + " entries, profile has g=" +
                                        std::to_string(profile_.g()));
        for (const auto& x : deg_)
            if (!in_unit_interval(x))
                throw std::invalid_argument("degree " + hmfac::to_string(x) + " outside [0,1]");
        if (cusp_) {
            for (int q = 0; q < profile_.prime_count(); ++q) {
                const int off = profile_.block_offset(q);
                const Rational first = deg_[off];
                for (int k = 0; k < profile_.degree(q); ++k) {
                    const Rational& x = deg_[off + k];
                    if (x != 0 && x != 1)
                        throw std::invalid_argument("cusp degree vectors have 0/1 entries");
                    if (x != first)
                        throw std::invalid_argument("cusp degree vectors are constant on every block B_p");
                }
            }
        }
    }

    static DegreeVector constant(const PrimeProfile& profile, const Rational& value, bool generic = true)
    {
        return DegreeVector(profile, std::vector<Rational>(profile.g(), value), generic);
    }

    /// The cusp vertex x_t: 1 on the blocks of the primes in `ones`, 0 elsewhere.
    static DegreeVector cusp_vertex(const PrimeProfile& profile, PrimeSet ones)
    {
        std::vector<Rational> deg(profile.g(), Rational(0));
        for (int i = 0; i < profile.g(); ++i)
            if (ones.contains(profile.prime_of(i)))
                deg[i] = 1;
        return DegreeVector(profile, std::move(deg), true, true);
    }

    const PrimeProfile& profile() const { return profile_; }
    const std::vector<Rational>& values() const { return deg_; }
    const Rational& operator[](int idx) const { return deg_.at(idx); }
    bool generic() const { return generic_; }
    bool cusp() const { return cusp_; }
    DegreeVector with_generic(bool generic) const
    {
        DegreeVector v = *this;
        v.generic_ = generic;
        return v;
    }

    /// nu_beta = 1 - deg_beta.
    Rational valuation(int idx) const { return 1 - deg_.at(idx); }

    Rational prime_degree(int prime) const
    {
        Rational s(0);
        const int off = profile_.block_offset(prime);
        for (int k = 0; k < profile_.degree(prime); ++k)
            s += deg_[off + k];
        return s;
    }

    bool operator==(const DegreeVector& o) const
    {
        return profile_ == o.profile_ && deg_ == o.deg_ && generic_ == o.generic_ && cusp_ == o.cusp_;
    }
    /// Lexicographic order on the entries, then flags.
    bool operator<(const DegreeVector& o) const
    {
        if (deg_ != o.deg_)
            return std::lexicographical_compare(deg_.begin(), deg_.end(), o.deg_.begin(), o.deg_.end());
        return std::pair(generic_, cusp_) < std::pair(o.generic_, o.cusp_);
    }

    json to_json() const
    {
        json deg = json::object();
        for (int i = 0; i < profile_.g(); ++i)
            deg[profile_.index_label(i)] = hmfac::to_string(deg_[i]);
        return json{{"deg", deg}, {"generic", generic_}, {"cusp", cusp_}};
    }

    static DegreeVector from_json(const PrimeProfile& profile, const json& j)
    {
        if (!j.is_object() || !j.contains("deg") || !j.at("deg").is_object())
            throw std::invalid_argument("degree vector JSON needs a \"deg\" object");
        std::vector<std::optional<Rational>> slots(profile.g());
        for (const auto& [key, value] : j.at("deg").items()) {
            const int idx = profile.parse_index_label(key);
            if (slots[idx])
                throw std::invalid_argument("duplicate degree entry " + key);
            slots[idx] = value.is_string() ? parse_rational(value.get<std::string>()) : Rational(value.get<std::int64_t>());
        }
        std::vector<Rational> deg;
        for (int i = 0; i < profile.g(); ++i) {
            if (!slots[i])
                throw std::invalid_argument("missing degree entry " + profile.index_label(i));
            deg.push_back(*slots[i]);
        }
        return DegreeVector(profile, std::move(deg), j.value("generic", true), j.value("cusp", false));
    }

private:
    PrimeProfile profile_;
    std::vector<Rational> deg_;
    bool generic_ = true;
    bool cusp_ = false;
};

/// w_beta bound from the partial Hodge height: [lower, upper] in [0,1].
struct HodgeInterval {
    Rational lower;
    Rational upper;
    bool exact = false;

    bool intersects(const HodgeInterval& o) const { return lower <= o.upper && o.lower <= upper; }
    bool operator==(const HodgeInterval&) const = default;
};

namespace detail {

/// min{p * prev, 1 - cur} clamped to [0,1]; exact unless the two arguments tie,
/// where only the lower bound survives.
inline HodgeInterval hodge_interval(int p, const Rational& prev, const Rational& cur)
{
    const Rational a = prev * p;
    const Rational b = 1 - cur;
    const Rational m = std::clamp(std::min(a, b), Rational(0), Rational(1));
    if (a != b)
        return {m, m, true};
    return {m, Rational(1), m == 1};
}

inline void require_non_cusp(const DegreeVector& v, const char* op)
{
    if (v.cusp())
        throw std::invalid_argument(std::string(op) + ": cusp degree vectors are not accepted");
}

inline void require_same_profile(const DegreeVector& a, const DegreeVector& b, const char* op)
{
    if (!(a.profile() == b.profile()))
        throw std::invalid_argument(std::string(op) + ": degree vectors over different profiles");
}

/// The stratum of a point, read from 0/1/open coordinates. Works for cusps too.
inline AdmissiblePair pair_of_coordinates(const DegreeVector& h)
{
    const auto& profile = h.profile();
    EmbeddingSubset phi(profile), eta(profile);
    for (int i = 0; i < profile.g(); ++i) {
        if (h[profile.sigma_inv(i)] > 0)
            phi.insert(i);
        if (h[i] < 1)
            eta.insert(i);
    }
    return {std::move(phi), std::move(eta)};
}

} // namespace detail

/// (phi, eta) with phi = {beta : h_{sigma^-1 beta} > 0} and eta = {beta : h_beta < 1}.
inline AdmissiblePair pair_of_degvec(const DegreeVector& h)
{
    detail::require_non_cusp(h, "pair_of_degvec");
    return detail::pair_of_coordinates(h);
}

/// Atkin-Lehner on degrees: beta -> 1 - h_beta on the blocks of T. The
/// generic flag is kept unless the caller supplies the image's flag.
inline DegreeVector w_T_deg(const DegreeVector& h, PrimeSet T, std::optional<bool> image_generic = std::nullopt)
{
    const auto& profile = h.profile();
    std::vector<Rational> out = h.values();
    for (int i = 0; i < profile.g(); ++i)
        if (T.contains(profile.prime_of(i)))
            out[i] = 1 - out[i];
    return DegreeVector(profile, std::move(out), image_generic.value_or(h.generic()), h.cusp());
}

inline HodgeInterval hodge_height(const DegreeVector& h, int beta)
{
    detail::require_non_cusp(h, "hodge_height");
    return detail::hodge_interval(h.profile().p(), h[h.profile().sigma_inv(beta)], h[beta]);
}

namespace detail {

/// sum_{i=0}^{f-1} p^{f-1-i} x_{sigma^i beta}, the Raynaud weighting.
template <class Get>
Rational raynaud_sum(const PrimeProfile& profile, int beta, Get&& x)
{
    const int f = profile.degree(profile.prime_of(beta));
    Rational s(0);
    std::int64_t w = ipow(profile.p(), f - 1);
    for (int i = 0; i < f; ++i) {
        s += x(profile.sigma(beta, i)) * w;
        w /= profile.p();
    }
    return s;
}

} // namespace detail

/// Raynaud's inequality for D[p] -> A[p]/H[p], at every beta in B_p.
inline bool raynaud_feasible(const DegreeVector& h, const DegreeVector& d, int prime)
{
    detail::require_non_cusp(h, "raynaud_feasible");
    detail::require_non_cusp(d, "raynaud_feasible");
    detail::require_same_profile(h, d, "raynaud_feasible");
    const auto& profile = h.profile();
    const auto block = prime_block(profile, prime);
    for (int beta : block.indices()) {
        const Rational lhs = detail::raynaud_sum(profile, beta, [&](int i) { return d[i]; });
        const Rational rhs = detail::raynaud_sum(profile, beta, [&](int i) { return 1 - h[i]; });
        if (lhs > rhs)
            return false;
    }
    return true;
}

/// Generic-point degree rules on the block of `prime`:
///   h_beta = 1                         => d_beta <= sum_{i=1}^{f-1} p^-i and d_{sigma^-1 beta} = 0
///   h_{sigma^-1 beta} = 0, d_beta < 1  => d_{sigma^-1 beta} = 0
inline bool genericity_constraints(const DegreeVector& h, const DegreeVector& d, int prime)
{
    if (!h.generic())
        throw std::invalid_argument("genericity_constraints: h is not flagged generic");
    detail::require_non_cusp(h, "genericity_constraints");
    detail::require_non_cusp(d, "genericity_constraints");
    detail::require_same_profile(h, d, "genericity_constraints");
    const auto& profile = h.profile();
    const Rational cap = inverse_power_sum(profile.p(), 1, profile.degree(prime) - 1);
    for (int beta : prime_block(profile, prime).indices()) {
        const int prev = profile.sigma_inv(beta);
        if (h[beta] == 1 && (d[beta] > cap || d[prev] != 0))
            return false;
        if (h[prev] == 0 && d[beta] < 1 && d[prev] != 0)
            return false;
    }
    return true;
}

} // namespace hmfac
