#pragma once

// Membership predicates for the admissible domains: interval regions,
// V_can, Sigma (cases 1, 2a, 2b, 2c), the unions Sigma_S, and the
// vertex/edge coverage check on the cube.

#include "degrees.hpp"
#include "newton.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hmfac {

struct Interval {
    Rational lower;
    Rational upper;
    bool lower_closed = true;
    bool upper_closed = true;

    static Interval open(Rational a, Rational b) { return {a, b, false, false}; }
    static Interval closed(Rational a, Rational b) { return {a, b, true, true}; }
    static Interval point(Rational a) { return {a, a, true, true}; }

    bool contains(const Rational& x) const
    {
        const bool lo = lower_closed ? x >= lower : x > lower;
        const bool hi = upper_closed ? x <= upper : x < upper;
        return lo && hi;
    }
    bool empty() const { return lower > upper || (lower == upper && !(lower_closed && upper_closed)); }
    bool operator==(const Interval&) const = default;

    std::string to_string() const
    {
        return std::string(lower_closed ? "[" : "(") + hmfac::to_string(lower) + ", " + hmfac::to_string(upper) +
               (upper_closed ? "]" : ")");
    }
};

/// One interval I_p in [0, f_p] per prime.
class IntervalMultiset {
public:
    IntervalMultiset(PrimeProfile profile, std::vector<Interval> intervals)
        : profile_(std::move(profile)), intervals_(std::move(intervals))
    {
        if (static_cast<int>(intervals_.size()) != profile_.prime_count())
            throw std::invalid_argument("interval multiset needs one interval per prime");
        for (int q = 0; q < profile_.prime_count(); ++q) {
            const auto& I = intervals_[q];
            if (I.lower < 0 || I.upper > profile_.degree(q))
                throw std::invalid_argument("interval " + I.to_string() + " not inside [0, f_p]");
        }
    }

    /// I_p = [0, f_p] everywhere.
    static IntervalMultiset full(const PrimeProfile& profile)
    {
        std::vector<Interval> v;
        for (int q = 0; q < profile.prime_count(); ++q)
            v.push_back(Interval::closed(0, profile.degree(q)));
        return IntervalMultiset(profile, std::move(v));
    }

    const PrimeProfile& profile() const { return profile_; }
    const Interval& operator[](int prime) const { return intervals_.at(prime); }

private:
    PrimeProfile profile_;
    std::vector<Interval> intervals_;
};

inline bool in_interval_region(const DegreeVector& h, const IntervalMultiset& I)
{
    if (!(h.profile() == I.profile()))
        throw std::invalid_argument("in_interval_region: profile mismatch");
    for (int q = 0; q < h.profile().prime_count(); ++q)
        if (!I[q].contains(h.prime_degree(q)))
            return false;
    return true;
}

/// I*_p = (sum_{i=1}^{f_p-1} p^-i, 1), which is (0,1) when f_p = 1.
inline Interval istar_interval(const PrimeProfile& profile, int prime)
{
    return Interval::open(inverse_power_sum(profile.p(), 1, profile.degree(prime) - 1), 1);
}

inline IntervalMultiset istar_multiset(const PrimeProfile& profile)
{
    std::vector<Interval> v;
    for (int q = 0; q < profile.prime_count(); ++q)
        v.push_back(istar_interval(profile, q));
    return IntervalMultiset(profile, std::move(v));
}

/// p h_{sigma^-1 beta} + h_beta > 1 on primes with f_p > 1, h_beta > 0 on f_p = 1.
inline bool in_Vcan(const DegreeVector& h)
{
    const auto& profile = h.profile();
    for (int i = 0; i < profile.g(); ++i) {
        if (profile.degree(profile.prime_of(i)) == 1) {
            if (h[i] <= 0)
                return false;
        } else if (h[profile.sigma_inv(i)] * profile.p() + h[i] <= 1) {
            return false;
        }
    }
    return true;
}

enum class Membership { In, Out, Indeterminate };

inline const char* to_string(Membership m)
{
    switch (m) {
    case Membership::In: return "in";
    case Membership::Out: return "out";
    default: return "indeterminate";
    }
}

enum class SigmaCase { None, Case1, Case2a, Case2b, Case2c };

inline const char* to_string(SigmaCase c)
{
    switch (c) {
    case SigmaCase::Case1: return "1";
    case SigmaCase::Case2a: return "2a";
    case SigmaCase::Case2b: return "2b";
    case SigmaCase::Case2c: return "2c";
    default: return "none";
    }
}

struct SigmaVerdict {
    Membership membership = Membership::Out;
    SigmaCase which = SigmaCase::None;
    AdmissiblePair pair;
    Classification classification;
};

/// Full evaluation of Sigma membership, with the case that decided it.
inline SigmaVerdict sigma_verdict(const DegreeVector& h)
{
    SigmaVerdict v{Membership::Out, SigmaCase::None, detail::pair_of_coordinates(h), {}};
    const int c = codim(v.pair);
    v.classification = classify(v.pair);
    if (c >= 2 || !v.classification.nowhere_etale)
        return v;
    if (c == 0) {
        v.which = SigmaCase::Case1;
        v.membership = h.generic() ? Membership::In : Membership::Out;
        return v;
    }
    const auto& profile = h.profile();
    const auto& cl = v.classification;
    if (cl.badness == Badness::Good) {
        v.which = SigmaCase::Case2a;
        v.membership = h.generic() ? Membership::In : Membership::Out;
        return v;
    }
    const int beta0 = *cl.beta0;
    if (!cl.j) {
        v.which = SigmaCase::Case2b;
        v.membership = istar_interval(profile, profile.prime_of(beta0)).contains(h[beta0]) ? Membership::In
                                                                                         : Membership::Out;
        return v;
    }
    v.which = SigmaCase::Case2c;
    if (!h.generic())
        return v;
    v.membership = h[beta0] == delta(profile.p(), *cl.j) ? Membership::Indeterminate : Membership::In;
    return v;
}

inline Membership in_Sigma(const DegreeVector& h) { return sigma_verdict(h).membership; }

/// Which w_T-images are assumed to specialize into the generic part.
/// Without a default the image inherits the flag of h.
struct GenericityScenario {
    std::optional<bool> default_generic;
    std::map<std::uint64_t, bool> overrides; ///< keyed by PrimeSet bits

    static GenericityScenario everywhere() { return {true, {}}; }
    static GenericityScenario inherit() { return {std::nullopt, {}}; }

    bool generic_for(PrimeSet T, const DegreeVector& h) const
    {
        if (auto it = overrides.find(T.bits()); it != overrides.end())
            return it->second;
        return default_generic.value_or(h.generic());
    }
};

/// Three-valued OR: In beats Indeterminate beats Out.
inline Membership membership_or(Membership a, Membership b)
{
    if (a == Membership::In || b == Membership::In)
        return Membership::In;
    if (a == Membership::Indeterminate || b == Membership::Indeterminate)
        return Membership::Indeterminate;
    return Membership::Out;
}

/// Sigma_S = union over T in S of w_T^{-1}(Sigma).
inline Membership in_Sigma_S(const DegreeVector& h, PrimeSet S,
                             const GenericityScenario& scenario = GenericityScenario::inherit())
{
    if (!S.subset_of(PrimeSet::all(h.profile().prime_count())))
        throw std::invalid_argument("in_Sigma_S: S contains unknown primes");
    Membership acc = Membership::Out;
    detail::for_each_superset(0, S.bits(), [&](std::uint64_t t) {
        const PrimeSet T(t);
        acc = membership_or(acc, in_Sigma(w_T_deg(h, T, scenario.generic_for(T, h))));
    });
    return acc;
}

/// Pass/fail report shared by the coverage check and the grid sweeps.
struct RegionReport {
    std::string region;
    PrimeProfile profile;
    std::optional<std::int64_t> denominator;
    bool pass = true;
    std::uint64_t counterexample_count = 0;
    std::vector<json> counterexamples; ///< first K, in canonical order
    json stats = json::object();
    std::vector<std::string> assumptions;

    json to_json() const
    {
        json j;
        j["region"] = region;
        j["profile"] = profile.to_json();
        j["denominator"] = denominator ? json(*denominator) : json(nullptr);
        j["pass"] = pass;
        j["counterexample_count"] = counterexample_count;
        j["counterexamples"] = counterexamples;
        j["stats"] = stats;
        j["assumptions"] = assumptions;
        return j;
    }
};

namespace detail {

inline Face vertex_face(int g, std::uint64_t ones)
{
    Face f;
    for (int i = 0; i < g; ++i)
        f.coords.push_back((ones >> i) & 1U ? FaceCoord::One : FaceCoord::Zero);
    return f;
}

inline json prime_set_json(PrimeSet s)
{
    json a = json::array();
    for (int id : s.ids())
        a.push_back(id);
    return a;
}

} // namespace detail

/// The combinatorial skeleton of the complement argument:
///   (a) for every vertex x with decomposition (T0, T1, T2), the strata
///       w_{T0}(x) and w_{T0 u T2}(x) are nowhere etale;
///   (b) for every edge with open coordinate beta0 in B_{p0}, the interval
///       (delta_{f-1}, 1) and its flip (0, 1 - delta_{f-1}) cover (0,1).
inline RegionReport coverage_check(const PrimeProfile& profile, std::size_t max_counterexamples = 64)
{
    if (profile.g() > default_enumeration_bound)
        throw std::invalid_argument("coverage_check: g exceeds the enumeration bound");
    RegionReport r{"coverage", profile, std::nullopt, true, 0, {}, json::object(), {}};
    r.assumptions = {
        "exceptional loci of codimension >= 2 (special points, non-generic divisors) are assumed negligible and are not recomputed",
        "points of codimension-one strata off the generic part are handled by the codimension-two statement"};
    const int g = profile.g();
    const std::uint64_t nverts = 1ULL << g;
    std::uint64_t vertex_fail = 0, edge_fail = 0, edges = 0;

    auto record = [&](json cx) {
        ++r.counterexample_count;
        if (r.counterexamples.size() < max_counterexamples)
            r.counterexamples.push_back(std::move(cx));
    };

    for (std::uint64_t ones = 0; ones < nverts; ++ones) {
        const Face x = detail::vertex_face(g, ones);
        const auto dec = vertex_decomposition(profile, x);
        const auto pair = pair_of_face(profile, x);
        for (PrimeSet T : {dec.t0, dec.t0 | dec.t2}) {
            if (!nowhere_etale(w_T_pair(pair, T))) {
                ++vertex_fail;
                record(json{{"step", "vertex"}, {"face", x.to_string()}, {"T", detail::prime_set_json(T)}});
            }
        }
    }
    // Edges: one Open coordinate, every other coordinate 0/1.
    for (int b = 0; b < g; ++b) {
        const int prime = profile.prime_of(b);
        const int f = profile.degree(prime);
        const Rational lo = inverse_power_sum(profile.p(), 1, f - 1);
        const bool covered = 1 - lo > lo;
        for (std::uint64_t ones = 0; ones < nverts; ++ones) {
            if ((ones >> b) & 1U)
                continue;
            ++edges;
            if (covered)
                continue;
            ++edge_fail;
            Face e = detail::vertex_face(g, ones);
            e.coords[b] = FaceCoord::Open;
            record(json{{"step", "edge-interval"},
                        {"face", e.to_string()},
                        {"beta0", profile.index_label(b)},
                        {"interval", Interval::open(lo, 1).to_string()},
                        {"flipped", Interval::open(0, 1 - lo).to_string()}});
        }
    }
    r.pass = r.counterexample_count == 0;
    r.stats = json{{"vertices", nverts}, {"edges", edges}, {"vertex_failures", vertex_fail}, {"edge_failures", edge_fail}};
    return r;
}

} // namespace hmfac
