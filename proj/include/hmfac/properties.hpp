#pragma once

// Exhaustive and seeded-random law checks on the stratum poset and on the
// Atkin-Lehner action. Every check returns a CheckResult with the first
// violation it saw.

#include "degrees.hpp"
#include "strata.hpp"

#include <random>
#include <set>
#include <string>

namespace hmfac {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    json first_violation = nullptr;
    json stats = json::object();

    void fail(json what)
    {
        pass = false;
        if (violations++ == 0)
            first_violation = std::move(what);
    }

    json to_json() const
    {
        return json{{"check", name},
                    {"pass", pass},
                    {"checked", checked},
                    {"violations", violations},
                    {"first_violation", first_violation},
                    {"stats", stats}};
    }
};

inline std::uint64_t ipow_u64(std::uint64_t b, int e)
{
    std::uint64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

/// enumerate_admissible against a direct filter of all 4^g label pairs, and
/// the count against 3^g.
inline CheckResult admissible_census(const PrimeProfile& profile)
{
    CheckResult r{"admissible-census"};
    const int g = profile.g();
    const auto listed = enumerate_admissible(profile);
    std::set<std::pair<std::uint64_t, std::uint64_t>> from_list, from_filter;
    for (const auto& a : listed)
        from_list.insert({a.phi.bits(), a.eta.bits()});
    const std::uint64_t universe = detail::universe_mask(g);
    for (std::uint64_t phi = 0; phi <= universe; ++phi)
        for (std::uint64_t eta = 0; eta <= universe; ++eta) {
            ++r.checked;
            // l(phi^c) <= eta, checked one embedding at a time.
            bool ok = true;
            for (int i = 0; i < g && ok; ++i)
                if (!((phi >> profile.sigma(i)) & 1U) && !((eta >> i) & 1U))
                    ok = false;
            if (ok)
                from_filter.insert({phi, eta});
        }
    const std::uint64_t expected = ipow_u64(3, g);
    if (listed.size() != expected)
        r.fail(json{{"reason", "count"}, {"listed", listed.size()}, {"expected", expected}});
    if (from_list != from_filter || from_list.size() != listed.size())
        r.fail(json{{"reason", "filter mismatch"}, {"listed", from_list.size()}, {"filtered", from_filter.size()}});
    r.stats = json{{"g", g}, {"admissible", listed.size()}, {"label_pairs", r.checked}};
    return r;
}

/// For `samples` admissible pairs drawn with the given seed: closure_set is
/// upward closed and equals the admissible pairs above the sample, pi_image
/// has 2^{|phi^c & eta^c|} members and codim = |phi| + |eta| - g.
inline CheckResult poset_laws(const PrimeProfile& profile, std::uint64_t samples, std::uint64_t seed)
{
    CheckResult r{"poset-laws"};
    const auto all = enumerate_admissible(profile);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const int g = profile.g();
    for (std::uint64_t s = 0; s < samples; ++s) {
        const auto& x = all[pick(rng)];
        ++r.checked;
        auto where = [&](const char* law) {
            return json{{"law", law}, {"phi", x.phi.to_json()}, {"eta", x.eta.to_json()}};
        };
        const auto cl = closure_set(x);
        std::set<std::pair<std::uint64_t, std::uint64_t>> members;
        for (const auto& y : cl)
            members.insert({y.phi.bits(), y.eta.bits()});
        std::size_t above = 0;
        for (const auto& y : all)
            if (x.phi.subset_of(y.phi) && x.eta.subset_of(y.eta))
                ++above;
        if (above != members.size() || members.size() != cl.size())
            r.fail(where("closure-members"));
        bool upward = true;
        for (const auto& y : cl) {
            if (!(x.phi.subset_of(y.phi) && x.eta.subset_of(y.eta)))
                upward = false;
            // Covers of y: one more embedding in phi or in eta.
            for (int i = 0; i < g; ++i) {
                const std::uint64_t bit = 1ULL << i;
                for (auto [ph, et] : {std::pair{y.phi.bits() | bit, y.eta.bits()}, std::pair{y.phi.bits(), y.eta.bits() | bit}})
                    if (is_admissible(EmbeddingSubset(profile, ph), EmbeddingSubset(profile, et)) && !members.count({ph, et}))
                        upward = false;
            }
            if (!upward)
                break;
        }
        if (!upward)
            r.fail(where("upward-closed"));
        const int free = (x.phi.complement() & x.eta.complement()).size();
        if (pi_image(x).size() != (std::size_t{1} << free))
            r.fail(where("pi-image-size"));
        if (codim(x) != x.phi.size() + x.eta.size() - g)
            r.fail(where("codim"));
    }
    r.stats = json{{"samples", samples}, {"seed", seed}, {"admissible", all.size()}};
    return r;
}

/// Random rational point of [0,1]^g with small denominators; about a third of
/// the coordinates sit on 0 or 1 so every stratum gets hit.
template <class Rng>
DegreeVector random_degree_vector(const PrimeProfile& profile, Rng& rng, int max_den = 12)
{
    std::uniform_int_distribution<int> kind(0, 5), den(1, max_den);
    std::vector<Rational> v;
    for (int i = 0; i < profile.g(); ++i) {
        const int k = kind(rng);
        if (k == 0)
            v.emplace_back(0);
        else if (k == 1)
            v.emplace_back(1);
        else {
            const int d = den(rng);
            v.emplace_back(std::uniform_int_distribution<int>(0, d)(rng), d);
        }
    }
    return DegreeVector(profile, std::move(v));
}

/// w_T_pair and w_T_deg are involutions and pair_of_degvec intertwines them.
inline CheckResult atkin_lehner_coherence(const PrimeProfile& profile, std::uint64_t samples, std::uint64_t seed)
{
    CheckResult r{"atkin-lehner-coherence"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pickT(0, (1ULL << profile.prime_count()) - 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const auto h = random_degree_vector(profile, rng);
        const PrimeSet T(pickT(rng));
        ++r.checked;
        const auto P = pair_of_degvec(h);
        auto where = [&](const char* law) {
            return json{{"law", law}, {"h", h.to_json()}, {"T", T.ids()}};
        };
        if (!(w_T_pair(w_T_pair(P, T), T) == P))
            r.fail(where("pair-involution"));
        if (!(w_T_deg(w_T_deg(h, T), T) == h))
            r.fail(where("degree-involution"));
        if (!(pair_of_degvec(w_T_deg(h, T)) == w_T_pair(P, T)))
            r.fail(where("commuting-square"));
    }
    r.stats = json{{"samples", samples}, {"seed", seed}};
    return r;
}

} // namespace hmfac
