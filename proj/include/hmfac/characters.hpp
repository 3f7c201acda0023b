#pragma once

// Multiplicative characters of F_q^x and (Z/n)^x, Gauss sums, and the
// coefficientwise check of the twist identity on the index group F_q x Z/n.
//
// At an index (u, v) the two displayed q-expansions give
//   LHS(u,v) = a(u,v) * sum_{j != 0} psi_p(j) zeta_p^{Tr(j u)}
//   g(u,v)   = b(u,v)      * sum_{k unit} psi_n^-1(k) zeta_n^{k v}
//   g0(u,v)  = [u = 0] b0(v) * sum_{k unit} psi_n^-1(k) zeta_n^{k v}
// and the identity is W(psi_n^-1) LHS = C W(psi_p) (g - s g0).

#include "cyclotomic.hpp"
#include "finite_field.hpp"
#include "parallel.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hmfac {

class MultChar {
public:
    enum class Domain { Field, Residues };

    Domain domain() const { return domain_; }
    /// q for characters of F_q^x, n for characters of (Z/n)^x.
    int modulus() const { return modulus_; }
    int order() const { return order_; }
    bool trivial() const { return order_ == 1; }
    const std::string& label() const { return label_; }

    /// chi(a) = zeta_order^exponent(a); -1 when a is not a unit.
    int exponent(int a) const { return exps_.at(((a % modulus_) + modulus_) % modulus_); }
    bool is_unit(int a) const { return exponent(a) >= 0; }

    /// chi(a) as a root of unity, 0 on non-units.
    CyclotomicInt value(int a) const
    {
        const int e = exponent(a);
        return e < 0 ? CyclotomicInt(order_) : CyclotomicInt::zeta(order_, e);
    }

    MultChar inverse() const
    {
        MultChar c = *this;
        for (auto& e : c.exps_)
            if (e >= 0)
                e = (order_ - e) % order_;
        c.label_ = label_ + "^-1";
        return c;
    }

    MultChar operator*(const MultChar& o) const
    {
        if (domain_ != o.domain_ || modulus_ != o.modulus_)
            throw std::invalid_argument("product of characters on different groups");
        const int N = std::lcm(order_, o.order_);
        std::vector<int> e(exps_.size());
        for (std::size_t a = 0; a < e.size(); ++a)
            e[a] = exps_[a] < 0 ? -1 : (exps_[a] * (N / order_) + o.exps_[a] * (N / o.order_)) % N;
        return MultChar(domain_, modulus_, N, std::move(e), label_ + "*" + o.label_);
    }

    json to_json() const
    {
        return json{{"domain", domain_ == Domain::Field ? "field" : "residues"},
                    {"modulus", modulus_},
                    {"order", order_},
                    {"label", label_}};
    }

    /// psi(g^i) = zeta_{q-1}^{k i} for the fixed generator g of F_q^x.
    static MultChar of_field(const FiniteField& F, long long k)
    {
        const int N = F.q() - 1;
        const long long kk = ((k % N) + N) % N;
        std::vector<int> e(F.q(), -1);
        for (int a = 1; a < F.q(); ++a)
            e[a] = static_cast<int>(kk * F.log(a) % N);
        return MultChar(Domain::Field, F.q(), N, std::move(e), "k=" + std::to_string(kk));
    }

    /// All q-1 characters of F_q^x, by exponent.
    static std::vector<MultChar> field_characters(const FiniteField& F)
    {
        std::vector<MultChar> out;
        for (int k = 0; k < F.q() - 1; ++k)
            out.push_back(of_field(F, k));
        return out;
    }

    /// All characters of (Z/n)^x, indexed by exponent tuples on a fixed
    /// generating set (a primitive root per odd prime power, -1 and 5 for 2^e).
    static std::vector<MultChar> residue_characters(int n)
    {
        if (n < 1)
            throw std::invalid_argument("modulus must be >= 1");
        struct Gen {
            int g;
            int order;
        };
        std::vector<Gen> gens;
        auto crt_lift = [n](int pe, int x) {
            // The residue congruent to x mod pe and to 1 mod n/pe.
            const int rest = n / pe;
            for (int y = 0; y < n; ++y)
                if (y % pe == ((x % pe) + pe) % pe && y % rest == 1 % rest)
                    return y;
            throw std::logic_error("crt_lift failed");
        };
        int m = n;
        for (int p = 2; m > 1; ++p) {
            if (m % p != 0)
                continue;
            int pe = 1, e = 0;
            while (m % p == 0) {
                m /= p;
                pe *= p;
                ++e;
            }
            if (p == 2) {
                if (e == 2)
                    gens.push_back({crt_lift(pe, 3), 2});
                if (e >= 3) {
                    gens.push_back({crt_lift(pe, pe - 1), 2});
                    gens.push_back({crt_lift(pe, 5), pe / 4});
                }
                continue;
            }
            const int phi = pe / p * (p - 1);
            for (int r = 2; r < pe; ++r) {
                if (r % p == 0)
                    continue;
                int x = 1, ord = 0;
                do {
                    x = static_cast<int>(static_cast<long long>(x) * r % pe);
                    ++ord;
                } while (x != 1);
                if (ord == phi) {
                    gens.push_back({crt_lift(pe, r), phi});
                    break;
                }
            }
        }
        // Coordinates of every unit on the generators.
        std::vector<std::vector<int>> coords(n);
        std::vector<int> t(gens.size(), 0);
        while (true) {
            long long x = 1 % n;
            for (std::size_t i = 0; i < gens.size(); ++i)
                for (int k = 0; k < t[i]; ++k)
                    x = x * gens[i].g % n;
            coords[x] = t;
            std::size_t i = 0;
            while (i < gens.size() && ++t[i] == gens[i].order)
                t[i++] = 0;
            if (i == gens.size())
                break;
        }
        int N = 1;
        for (const auto& g : gens)
            N = std::lcm(N, g.order);
        std::vector<MultChar> out;
        std::vector<int> k(gens.size(), 0);
        while (true) {
            std::vector<int> e(n, -1);
            for (int a = 0; a < n; ++a) {
                if (std::gcd(a, n) != 1)
                    continue;
                long long s = 0;
                for (std::size_t i = 0; i < gens.size(); ++i)
                    s += static_cast<long long>(k[i]) * coords[a][i] * (N / gens[i].order);
                e[a] = static_cast<int>(s % N);
            }
            std::string label = "k=(";
            for (std::size_t i = 0; i < k.size(); ++i)
                label += (i ? "," : "") + std::to_string(k[i]);
            out.push_back(MultChar(Domain::Residues, n, N, std::move(e), label + ")"));
            std::size_t i = 0;
            while (i < gens.size() && ++k[i] == gens[i].order)
                k[i++] = 0;
            if (i == gens.size())
                break;
        }
        return out;
    }

private:
    MultChar(Domain d, int modulus, int N, std::vector<int> exps, std::string label)
        : domain_(d), modulus_(modulus), exps_(std::move(exps)), label_(std::move(label))
    {
        // Reduce to the actual order of the character.
        int g = N;
        for (int e : exps_)
            if (e >= 0)
                g = std::gcd(g, e);
        order_ = N / g;
        for (auto& e : exps_)
            if (e >= 0)
                e /= g;
    }

    Domain domain_ = Domain::Field;
    int modulus_ = 1;
    int order_ = 1;
    std::vector<int> exps_;
    std::string label_;
};

namespace detail {

inline void require_field_char(const FiniteField& F, const MultChar& psi)
{
    if (psi.domain() != MultChar::Domain::Field || psi.modulus() != F.q())
        throw std::invalid_argument("character is not on F_" + std::to_string(F.q()) + "^x");
}

inline void require_residue_char(int n, const MultChar& chi)
{
    if (chi.domain() != MultChar::Domain::Residues || chi.modulus() != n)
        throw std::invalid_argument("character is not on (Z/" + std::to_string(n) + ")^x");
}

} // namespace detail

/// sum_{j != 0} psi(j) zeta_p^{Tr(j t)}.
inline CyclotomicInt twisted_sum(const FiniteField& F, const MultChar& psi, int t)
{
    detail::require_field_char(F, psi);
    const int M = std::lcm(F.p(), psi.order());
    std::vector<std::int64_t> counts(M, 0);
    for (int j = 1; j < F.q(); ++j)
        ++counts[(psi.exponent(j) * (M / psi.order()) + F.trace(F.mul(j, t)) * (M / F.p())) % M];
    return CyclotomicInt::from_power_counts(M, counts);
}

/// W(psi) = sum_{j != 0} psi(j) zeta_p^{Tr j}.
inline CyclotomicInt gauss_sum(const FiniteField& F, const MultChar& psi) { return twisted_sum(F, psi, 1); }

/// sum_{k in (Z/n)^x} chi(k) zeta_n^{k v}.
inline CyclotomicInt residue_twisted_sum(int n, const MultChar& chi, int v)
{
    detail::require_residue_char(n, chi);
    const int M = std::lcm(n, chi.order());
    std::vector<std::int64_t> counts(M, 0);
    for (int k = 0; k < n; ++k)
        if (chi.is_unit(k))
            ++counts[(chi.exponent(k) * (M / chi.order()) + static_cast<long long>(k) * v % n * (M / n)) % M];
    return CyclotomicInt::from_power_counts(M, counts);
}

/// W_n(chi) = sum_{k in (Z/n)^x} chi(k) zeta_n^k.
inline CyclotomicInt residue_gauss_sum(int n, const MultChar& chi) { return residue_twisted_sum(n, chi, 1); }

/// A coefficient map on F_q x Z/n (level p n a) together with the map on
/// Z/n (level n a) at the reduced indices.
class CoeffFamily {
public:
    CoeffFamily(int q, int n) : q_(q), n_(n), full_(static_cast<std::size_t>(q) * n), reduced_(n) {}

    int q() const { return q_; }
    int n() const { return n_; }
    const CyclotomicInt& at(int u, int v) const { return full_.at(index(u, v)); }
    void set(int u, int v, CyclotomicInt x) { full_.at(index(u, v)) = std::move(x); }
    const CyclotomicInt& reduced(int v) const { return reduced_.at(v); }
    void set_reduced(int v, CyclotomicInt x) { reduced_.at(v) = std::move(x); }

    json to_json() const
    {
        json f = json::array();
        for (int u = 0; u < q_; ++u)
            for (int v = 0; v < n_; ++v)
                f.push_back(json{{"u", u}, {"v", v}, {"value", at(u, v).to_string()}});
        json r = json::array();
        for (int v = 0; v < n_; ++v)
            r.push_back(json{{"v", v}, {"value", reduced(v).to_string()}});
        return json{{"q", q_}, {"n", n_}, {"full", f}, {"reduced", r}};
    }

private:
    std::size_t index(int u, int v) const
    {
        if (u < 0 || u >= q_ || v < 0 || v >= n_)
            throw std::out_of_range("coefficient index out of range");
        return static_cast<std::size_t>(u) * n_ + v;
    }

    int q_, n_;
    std::vector<CyclotomicInt> full_;
    std::vector<CyclotomicInt> reduced_;
};

/// Free coefficients: b on (u != 0, v unit), and b, a at the reduced level on units v.
struct TwistSeed {
    std::map<std::pair<int, int>, CyclotomicInt> b_full;
    std::map<int, CyclotomicInt> b_reduced;
    std::map<int, CyclotomicInt> a_reduced;
};

struct CompanionCoeffs {
    CoeffFamily a;
    CoeffFamily b;
};

namespace detail {

inline bool residue_unit(int n, int v) { return n == 1 || std::gcd(v, n) == 1; }

inline void check_seed(const FiniteField& F, int n, const TwistSeed& seed)
{
    for (const auto& [k, _] : seed.b_full)
        if (k.first <= 0 || k.first >= F.q() || k.second < 0 || k.second >= n || !residue_unit(n, k.second))
            throw std::invalid_argument("inconsistent seed: b given at (" + std::to_string(k.first) + "," +
                                        std::to_string(k.second) + ")");
    for (const auto* m : {&seed.b_reduced, &seed.a_reduced})
        for (const auto& [v, _] : *m)
            if (v < 0 || v >= n || !residue_unit(n, v))
                throw std::invalid_argument("inconsistent seed: reduced value given at v=" + std::to_string(v));
    for (int v = 0; v < n; ++v) {
        if (!residue_unit(n, v))
            continue;
        if (!seed.b_reduced.count(v) || !seed.a_reduced.count(v))
            throw std::invalid_argument("inconsistent seed: missing reduced value at v=" + std::to_string(v));
        for (int u = 1; u < F.q(); ++u)
            if (!seed.b_full.count({u, v}))
                throw std::invalid_argument("inconsistent seed: missing b at (" + std::to_string(u) + "," +
                                            std::to_string(v) + ")");
    }
}

} // namespace detail

/// Extends the seed by the character relations: b(0,v) = s b0(v),
/// a(u,v) = C psi_p(u) psi_n(v) b(u,v) for u != 0, a(0,v) = r a0(v),
/// and zero at every index with v not a unit.
inline CompanionCoeffs build_companion_coeffs(const FiniteField& F, int n, const MultChar& psi_p, const MultChar& psi_n,
                                              const CyclotomicInt& r, const CyclotomicInt& s, const CyclotomicInt& C,
                                              const TwistSeed& seed)
{
    detail::require_field_char(F, psi_p);
    detail::require_residue_char(n, psi_n);
    detail::check_seed(F, n, seed);
    CompanionCoeffs out{CoeffFamily(F.q(), n), CoeffFamily(F.q(), n)};
    for (int v = 0; v < n; ++v) {
        if (!detail::residue_unit(n, v))
            continue;
        out.b.set_reduced(v, seed.b_reduced.at(v));
        out.a.set_reduced(v, seed.a_reduced.at(v));
        out.b.set(0, v, s * seed.b_reduced.at(v));
        out.a.set(0, v, r * seed.a_reduced.at(v));
        for (int u = 1; u < F.q(); ++u) {
            const auto& bv = seed.b_full.at({u, v});
            out.b.set(u, v, bv);
            out.a.set(u, v, C * psi_p.value(u) * psi_n.value(v) * bv);
        }
    }
    return out;
}

struct TwistIndex {
    int u = 0;
    int v = 0;
    bool operator==(const TwistIndex&) const = default;
};

struct TwistResult {
    bool pass = true;
    std::size_t checked = 0;
    std::optional<TwistIndex> first_failure;
    CyclotomicInt lhs;
    CyclotomicInt rhs;

    json to_json() const
    {
        json j{{"pass", pass}, {"checked", checked}};
        if (first_failure)
            j["first_failure"] = json{{"u", first_failure->u},
                                      {"v", first_failure->v},
                                      {"lhs", lhs.to_string()},
                                      {"rhs", rhs.to_string()}};
        else
            j["first_failure"] = nullptr;
        return j;
    }
};

/// Checks W(psi_n^-1) LHS = C W(psi_p) (g - s g0) at every index of F_q x Z/n,
/// in lexicographic (u, v) order.
inline TwistResult verify_twist_identity(const FiniteField& F, int n, const MultChar& psi_p, const MultChar& psi_n,
                                         const CyclotomicInt& s, const CyclotomicInt& C, const CompanionCoeffs& coeffs)
{
    detail::require_field_char(F, psi_p);
    detail::require_residue_char(n, psi_n);
    if (psi_p.trivial())
        throw std::invalid_argument("verify_twist_identity: psi_p is trivial");
    if (coeffs.a.q() != F.q() || coeffs.a.n() != n || coeffs.b.q() != F.q() || coeffs.b.n() != n)
        throw std::invalid_argument("coefficient families do not match (q, n)");
    const MultChar psi_n_inv = psi_n.inverse();
    const CyclotomicInt Wn = residue_gauss_sum(n, psi_n_inv);
    const CyclotomicInt scale = C * gauss_sum(F, psi_p);
    std::vector<CyclotomicInt> Sp(F.q()), Sn(n);
    for (int u = 0; u < F.q(); ++u)
        Sp[u] = twisted_sum(F, psi_p, u);
    for (int v = 0; v < n; ++v)
        Sn[v] = residue_twisted_sum(n, psi_n_inv, v);

    TwistResult res;
    for (int u = 0; u < F.q(); ++u)
        for (int v = 0; v < n; ++v) {
            ++res.checked;
            const CyclotomicInt lhs = Wn * (coeffs.a.at(u, v) * Sp[u]);
            CyclotomicInt bracket = coeffs.b.at(u, v) * Sn[v];
            if (u == 0)
                bracket = bracket - s * (coeffs.b.reduced(v) * Sn[v]);
            const CyclotomicInt rhs = scale * bracket;
            if (!(lhs == rhs)) {
                res.pass = false;
                res.first_failure = TwistIndex{u, v};
                res.lhs = lhs;
                res.rhs = rhs;
                return res;
            }
        }
    return res;
}

inline TwistResult verify_twist_identity(const FiniteField& F, int n, const MultChar& psi_p, const MultChar& psi_n,
                                         const CyclotomicInt& r, const CyclotomicInt& s, const CyclotomicInt& C,
                                         const TwistSeed& seed)
{
    if (psi_p.trivial())
        throw std::invalid_argument("verify_twist_identity: psi_p is trivial");
    return verify_twist_identity(F, n, psi_p, psi_n, s, C, build_companion_coeffs(F, n, psi_p, psi_n, r, s, C, seed));
}

/// Random integer seed with entries in [-bound, bound].
template <class Rng>
TwistSeed random_twist_seed(const FiniteField& F, int n, Rng& rng, int bound = 5)
{
    std::uniform_int_distribution<int> dist(-bound, bound);
    TwistSeed seed;
    for (int v = 0; v < n; ++v) {
        if (!detail::residue_unit(n, v))
            continue;
        seed.b_reduced[v] = CyclotomicInt::from_int(dist(rng));
        seed.a_reduced[v] = CyclotomicInt::from_int(dist(rng));
        for (int u = 1; u < F.q(); ++u)
            seed.b_full[{u, v}] = CyclotomicInt::from_int(dist(rng));
    }
    return seed;
}

struct TwistTrialReport {
    int q = 0;
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::size_t failures = 0;
    json first_failure = nullptr;
    std::size_t degenerate_cases = 0; ///< W(psi_n^-1) = 0: both sides vanish identically
    std::size_t control_runs = 0;
    std::size_t control_detected = 0;
    json first_undetected_control = nullptr;

    bool identity_pass() const { return failures == 0; }
    bool control_pass() const { return control_runs > 0 && control_detected == control_runs; }
    bool pass() const { return identity_pass() && control_pass(); }

    json to_json() const
    {
        return json{{"check", "twist"},
                    {"q", q},
                    {"n", n},
                    {"trials", trials},
                    {"seed", seed},
                    {"pass", pass()},
                    {"cases", cases},
                    {"failures", failures},
                    {"first_failure", first_failure},
                    {"degenerate_cases", degenerate_cases},
                    {"negative_control",
                     json{{"runs", control_runs},
                          {"detected", control_detected},
                          {"pass", control_pass()},
                          {"first_undetected", first_undetected_control}}}};
    }
};

/// Runs the identity for every nontrivial psi_p, every psi_n and `trials`
/// random seeds, with r, s random integers and C a random signed root of
/// unity. Each run is paired with a corrupted copy of b (one full-order
/// coefficient shifted by 1) that must fail at exactly that index; runs with
/// W(psi_n^-1) = 0 cannot detect it and are counted as degenerate instead.
inline TwistTrialReport run_twist_trials(int q, int n, int trials, std::uint64_t seed, unsigned workers = 1)
{
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (n < 1)
        throw std::invalid_argument("n must be >= 1");
    const FiniteField F(q);
    std::vector<MultChar> psis;
    for (const auto& c : MultChar::field_characters(F))
        if (!c.trivial())
            psis.push_back(c);
    const auto chis = MultChar::residue_characters(n);

    struct Case {
        std::size_t i, k;
        int t;
    };
    std::vector<Case> cases;
    for (std::size_t i = 0; i < psis.size(); ++i)
        for (std::size_t k = 0; k < chis.size(); ++k)
            for (int t = 0; t < trials; ++t)
                cases.push_back({i, k, t});

    struct Outcome {
        bool pass = true;
        bool degenerate = false;
        bool control_run = false;
        bool control_detected = false;
        json failure = nullptr;
        json control_failure = nullptr;
    };
    auto outcomes = parallel_chunks(cases.size(), workers, [&](std::size_t c) {
        const auto [i, k, t] = cases[c];
        const auto& psi_p = psis[i];
        const auto& psi_n = chis[k];
        std::seed_seq ss{seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k),
                         static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(ss);
        const int M = std::lcm(std::lcm(F.p(), psi_p.order()), std::lcm(n, psi_n.order()));
        std::uniform_int_distribution<int> small(-4, 4), root(0, M - 1), sign(0, 1);
        const auto r = CyclotomicInt::from_int(small(rng));
        const auto s = CyclotomicInt::from_int(small(rng));
        const auto C = CyclotomicInt::zeta(M, root(rng)) * (sign(rng) ? 1 : -1);
        const auto seed_coeffs = random_twist_seed(F, n, rng);

        Outcome o;
        auto coeffs = build_companion_coeffs(F, n, psi_p, psi_n, r, s, C, seed_coeffs);
        const auto res = verify_twist_identity(F, n, psi_p, psi_n, s, C, coeffs);
        auto describe = [&](json extra) {
            json j{{"psi_p", psi_p.label()}, {"psi_n", psi_n.label()}, {"trial", t}};
            for (auto& [key, val] : extra.items())
                j[key] = val;
            return j;
        };
        o.pass = res.pass;
        if (!res.pass)
            o.failure = describe(res.to_json()["first_failure"]);
        o.degenerate = residue_gauss_sum(n, psi_n.inverse()).is_zero();
        if (!o.degenerate) {
            std::vector<TwistIndex> full;
            for (int u = 1; u < q; ++u)
                for (int v = 0; v < n; ++v)
                    if (detail::residue_unit(n, v))
                        full.push_back({u, v});
            const auto idx = full[std::uniform_int_distribution<std::size_t>(0, full.size() - 1)(rng)];
            coeffs.b.set(idx.u, idx.v, coeffs.b.at(idx.u, idx.v) + CyclotomicInt::one());
            const auto bad = verify_twist_identity(F, n, psi_p, psi_n, s, C, coeffs);
            o.control_run = true;
            o.control_detected = !bad.pass && bad.first_failure == idx;
            if (!o.control_detected)
                o.control_failure = describe(json{{"u", idx.u}, {"v", idx.v}});
        }
        return o;
    });

    TwistTrialReport rep{q, n, trials, seed};
    rep.cases = cases.size();
    for (const auto& o : outcomes) {
        if (!o.pass) {
            ++rep.failures;
            if (rep.first_failure.is_null())
                rep.first_failure = o.failure;
        }
        rep.degenerate_cases += o.degenerate;
        rep.control_runs += o.control_run;
        rep.control_detected += o.control_detected;
        if (o.control_run && !o.control_detected && rep.first_undetected_control.is_null())
            rep.first_undetected_control = o.control_failure;
    }
    return rep;
}

/// W(psi) W(psi^-1) = psi(-1) q for every nontrivial psi on F_q^x.
struct GaussNormReport {
    int q = 0;
    std::size_t characters = 0;
    std::size_t failures = 0;
    json first_failure = nullptr;
    bool pass() const { return failures == 0; }
    json to_json() const
    {
        return json{{"check", "gauss-norm"},
                    {"q", q},
                    {"pass", pass()},
                    {"characters", characters},
                    {"failures", failures},
                    {"first_failure", first_failure}};
    }
};

inline GaussNormReport gauss_norm_check(int q)
{
    const FiniteField F(q);
    GaussNormReport rep{q};
    for (const auto& psi : MultChar::field_characters(F)) {
        if (psi.trivial())
            continue;
        ++rep.characters;
        const auto lhs = gauss_sum(F, psi) * gauss_sum(F, psi.inverse());
        const auto rhs = psi.value(F.minus_one()) * q;
        if (!(lhs == rhs)) {
            ++rep.failures;
            if (rep.first_failure.is_null())
                rep.first_failure = json{{"psi", psi.label()}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
        }
    }
    return rep;
}

} // namespace hmfac
