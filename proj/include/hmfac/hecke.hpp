#pragma once

// The U_p correspondence on degree vectors. Over a point H we enumerate the
// grid points d that pass every necessary condition the argument imposes on
// a complementary subgroup D, and test the canonical-image inequality
//   p d_beta + d_{sigma beta} < p.
//
// A d that passes all constraints need not come from an actual subgroup
// scheme: the sweeps check "necessary conditions => can-test".

#include "parallel.hpp"
#include "regions.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hmfac {

/// Constraint families used by feasible_d_grid. Each one can be switched
/// off to run negative controls.
struct ConstraintOptions {
    bool raynaud = true;
    bool genericity = true; ///< the generic-point rules
    bool hodge = true;      ///< hodge_height(h) meets hodge_height(d) at every beta
    bool case1 = true;      ///< the 0/1-block rules
    bool bk = true;         ///< the Newton-polygon verdict on case 2c

    static ConstraintOptions all() { return {}; }
    /// Everything that rests on the generic-specialization hypothesis goes.
    static ConstraintOptions drop_genericity()
    {
        ConstraintOptions o;
        o.genericity = o.case1 = o.bk = false;
        return o;
    }
    static ConstraintOptions without_bk()
    {
        ConstraintOptions o;
        o.bk = false;
        return o;
    }

    json to_json() const
    {
        return json{{"raynaud", raynaud}, {"genericity", genericity}, {"hodge", hodge}, {"case1", case1}, {"bk", bk}};
    }
};

inline constexpr std::int64_t default_grid_cap = 100000;

struct IsogenyDatum {
    DegreeVector h;
    DegreeVector d;
};

struct CanTestViolation {
    int beta = 0;
    Rational value; ///< p d_beta + d_{sigma beta}
    bool required = true;
};

struct CanTestResult {
    bool pass = true;
    std::vector<CanTestViolation> violations;

    /// Only primes with f_p > 1 enter the canonical locus condition.
    bool required_pass() const
    {
        return std::none_of(violations.begin(), violations.end(), [](const auto& v) { return v.required; });
    }
};

inline CanTestResult can_test(const DegreeVector& d)
{
    detail::require_non_cusp(d, "can_test");
    const auto& profile = d.profile();
    CanTestResult r;
    for (int b = 0; b < profile.g(); ++b) {
        const Rational value = d[b] * profile.p() + d[profile.sigma(b)];
        if (value >= profile.p())
            r.violations.push_back({b, value, profile.degree(profile.prime_of(b)) > 1});
    }
    r.pass = r.violations.empty();
    return r;
}

namespace detail {

/// The case-2c data of h, when the Newton-polygon rule applies.
struct BkContext {
    int beta0 = -1;
    NewtonVerdict verdict;
};

inline std::optional<BkContext> bk_context(const DegreeVector& h)
{
    if (h.cusp() || !h.generic())
        return std::nullopt;
    const auto pair = pair_of_coordinates(h);
    if (codim(pair) != 1)
        return std::nullopt;
    const auto c = classify(pair);
    if (!c.nowhere_etale || c.badness != Badness::Bad || !c.j)
        return std::nullopt;
    const int b0 = *c.beta0;
    const int f = h.profile().degree(h.profile().prime_of(b0));
    return BkContext{b0, bk_newton_degree(h.profile().p(), f, *c.j, h[b0])};
}

/// Whether the 0/1-block rules apply on a block: h generic, entries in {0,1}, not all zero.
inline bool case1_applies(const DegreeVector& h, int prime)
{
    if (!h.generic())
        return false;
    bool any_one = false;
    for (int b : prime_block(h.profile(), prime).indices()) {
        if (h[b] != 0 && h[b] != 1)
            return false;
        any_one |= h[b] == 1;
    }
    return any_one;
}

/// [lo, hi] for d_beta from the 0/1-block rules.
inline std::pair<Rational, Rational> case1_bounds(const DegreeVector& h, int beta)
{
    const auto& profile = h.profile();
    if (h[beta] == 1 && h[profile.sigma(beta)] == 0)
        return {Rational(1, profile.p()), inverse_power_sum(profile.p(), 1, profile.degree(profile.prime_of(beta)) - 1)};
    return {Rational(0), Rational(0)};
}

} // namespace detail

/// First necessary condition violated by (h, d), or nullopt. This is the
/// plain, unoptimized statement of the feasible set.
inline std::optional<std::string> violated_constraint(const IsogenyDatum& x,
                                                      const ConstraintOptions& options = ConstraintOptions::all())
{
    const auto& h = x.h;
    const auto& d = x.d;
    detail::require_non_cusp(h, "violated_constraint");
    detail::require_non_cusp(d, "violated_constraint");
    detail::require_same_profile(h, d, "violated_constraint");
    const auto& profile = h.profile();
    for (int q = 0; q < profile.prime_count(); ++q) {
        if (options.raynaud && !raynaud_feasible(h, d, q))
            return "raynaud";
        if (options.genericity && h.generic() && !genericity_constraints(h, d, q))
            return "genericity";
        if (options.case1 && detail::case1_applies(h, q)) {
            for (int b : prime_block(profile, q).indices()) {
                const auto [lo, hi] = detail::case1_bounds(h, b);
                if (d[b] < lo || d[b] > hi)
                    return "case1";
            }
        }
    }
    if (options.hodge)
        for (int b = 0; b < profile.g(); ++b)
            if (!hodge_height(h, b).intersects(hodge_height(d, b)))
                return "hodge";
    if (options.bk) {
        if (auto ctx = detail::bk_context(h)) {
            const Rational& x0 = d[ctx->beta0];
            if (ctx->verdict.exact() ? x0 != ctx->verdict.degree : x0 < ctx->verdict.degree)
                return "bk";
        }
    }
    return std::nullopt;
}

namespace detail {

/// Finite union of closed integer ranges.
class IntSet {
public:
    struct Range {
        std::int64_t lo, hi;
    };

    IntSet() = default;
    static IntSet range(std::int64_t lo, std::int64_t hi)
    {
        IntSet s;
        if (lo <= hi)
            s.r_.push_back({lo, hi});
        return s;
    }

    bool empty() const { return r_.empty(); }
    const std::vector<Range>& ranges() const { return r_; }

    IntSet intersect(const IntSet& o) const
    {
        IntSet s;
        for (const auto& a : r_)
            for (const auto& b : o.r_) {
                const auto lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
                if (lo <= hi)
                    s.r_.push_back({lo, hi});
            }
        s.normalize();
        return s;
    }
    IntSet unite(const IntSet& o) const
    {
        IntSet s = *this;
        s.r_.insert(s.r_.end(), o.r_.begin(), o.r_.end());
        s.normalize();
        return s;
    }

private:
    void normalize()
    {
        std::sort(r_.begin(), r_.end(), [](const Range& a, const Range& b) { return a.lo < b.lo; });
        std::vector<Range> out;
        for (const auto& x : r_) {
            if (!out.empty() && x.lo <= out.back().hi + 1)
                out.back().hi = std::max(out.back().hi, x.hi);
            else
                out.push_back(x);
        }
        r_ = std::move(out);
    }

    std::vector<Range> r_;
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}
inline std::int64_t floor_scaled(const Rational& r, std::int64_t den) { return floor_div(r.numerator() * den, r.denominator()); }
inline std::int64_t ceil_scaled(const Rational& r, std::int64_t den) { return -floor_div(-r.numerator() * den, r.denominator()); }

/// Grid points x = k/den with [L,U] meeting the Hodge interval of (prev, x),
/// prev fixed. With a = p*prev: x > 1-a gives exact 1-x, x < 1-a gives exact a,
/// and x = 1-a gives [a, 1].
inline IntSet hodge_allowed_cur(const Rational& a, const HodgeInterval& t, std::int64_t den)
{
    const Rational c = 1 - a;
    IntSet s = IntSet::range(std::max(floor_scaled(c, den) + 1, ceil_scaled(1 - t.upper, den)), floor_scaled(1 - t.lower, den));
    if (t.lower <= a && a <= t.upper)
        s = s.unite(IntSet::range(0, ceil_scaled(c, den) - 1));
    if (c >= 0 && a <= t.upper && (c * den).denominator() == 1)
        s = s.unite(IntSet::range((c * den).numerator(), (c * den).numerator()));
    return s.intersect(IntSet::range(0, den));
}

/// Grid points y = k/den for the previous coordinate, x = current fixed.
inline IntSet hodge_allowed_prev(int p, const Rational& x, const HodgeInterval& t, std::int64_t den)
{
    const Rational b = 1 - x;
    IntSet s;
    if (t.lower <= b && b <= t.upper)
        s = IntSet::range(floor_scaled(b / p, den) + 1, den);
    s = s.unite(IntSet::range(std::max<std::int64_t>(0, ceil_scaled(t.lower / p, den)),
                              std::min(floor_scaled(t.upper / p, den), ceil_scaled(b / p, den) - 1)));
    if (b <= t.upper && ((b / p) * den).denominator() == 1)
        s = s.unite(IntSet::range(((b / p) * den).numerator(), ((b / p) * den).numerator()));
    return s.intersect(IntSet::range(0, den));
}

/// All feasible numerator tuples on one block, in lexicographic order.
class BlockSolver {
public:
    BlockSolver(const DegreeVector& h, int prime, std::int64_t den, const ConstraintOptions& options,
                const std::optional<BkContext>& bk, const std::vector<Rational>& grid)
        : h_(h), profile_(h.profile()), den_(den), opt_(options), grid_(grid)
    {
        p_ = profile_.p();
        f_ = profile_.degree(prime);
        off_ = profile_.block_offset(prime);
        const bool generic = opt_.genericity && h.generic();
        const Rational cap = inverse_power_sum(p_, 1, f_ - 1);
        domain_.assign(f_, IntSet::range(0, den_));
        rule3_.assign(f_, false);
        for (int k = 0; k < f_; ++k) {
            const int b = off_ + k;
            hb_.push_back(h[b]);
            if (opt_.hodge)
                target_.push_back(hodge_height(h, b));
            if (generic) {
                if (h[b] == 1) {
                    restrict(k, 0, cap);
                    restrict(prev(k), 0, 0);
                }
                rule3_[k] = h[profile_.sigma_inv(b)] == 0;
            }
        }
        if (opt_.case1 && case1_applies(h, prime))
            for (int k = 0; k < f_; ++k) {
                const auto [lo, hi] = case1_bounds(h, off_ + k);
                restrict(k, lo, hi);
            }
        if (opt_.bk && bk && profile_.prime_of(bk->beta0) == prime) {
            const int k = bk->beta0 - off_;
            if (bk->verdict.exact())
                restrict(k, bk->verdict.degree, bk->verdict.degree);
            else
                restrict(k, bk->verdict.degree, 1);
        }
        for (int k = 0; k < f_; ++k) {
            Rational s(0);
            for (int i = 0; i < f_; ++i)
                s += (1 - hb_[(k + i) % f_]) * ipow(p_, f_ - 1 - i);
            rhs_.push_back(s);
        }
    }

    std::vector<std::vector<std::int64_t>> solve()
    {
        cur_.assign(f_, 0);
        out_.clear();
        for (const auto& d : domain_)
            if (d.empty())
                return out_;
        descend(0);
        return std::move(out_);
    }

private:
    int prev(int k) const { return (k + f_ - 1) % f_; }
    void restrict(int k, const Rational& lo, const Rational& hi)
    {
        domain_[k] = domain_[k].intersect(IntSet::range(ceil_scaled(lo, den_), floor_scaled(hi, den_)));
    }

    bool rule3_ok(int k) const { return !rule3_[k] || cur_[k] == den_ || cur_[prev(k)] == 0; }

    bool raynaud_ok(int assigned) const
    {
        if (!opt_.raynaud)
            return true;
        for (int k = 0; k < f_; ++k) {
            Rational s(0);
            for (int i = 0; i < f_; ++i) {
                const int idx = (k + i) % f_;
                if (idx < assigned)
                    s += grid_[cur_[idx]] * ipow(p_, f_ - 1 - i);
            }
            if (s > rhs_[k])
                return false;
        }
        return true;
    }

    bool hodge_ok(int k) const
    {
        return detail::hodge_interval(p_, grid_[cur_[prev(k)]], grid_[cur_[k]]).intersects(target_[k]);
    }

    void descend(int k)
    {
        if (k == f_) {
            if (opt_.hodge)
                for (int i = 0; i < f_; ++i)
                    if (!hodge_ok(i))
                        return;
            for (int i = 0; i < f_; ++i)
                if (!rule3_ok(i))
                    return;
            if (!raynaud_ok(f_))
                return;
            out_.push_back(cur_);
            return;
        }
        IntSet cand = domain_[k];
        if (opt_.hodge && f_ > 1) {
            if (k >= 1)
                cand = cand.intersect(hodge_allowed_cur(grid_[cur_[k - 1]] * p_, target_[k], den_));
            if (k == f_ - 1)
                cand = cand.intersect(hodge_allowed_prev(p_, grid_[cur_[0]], target_[0], den_));
        }
        for (const auto& r : cand.ranges())
            for (std::int64_t v = r.lo; v <= r.hi; ++v) {
                cur_[k] = v;
                if (k >= 1 && !rule3_ok(k))
                    continue;
                if (!raynaud_ok(k + 1))
                    continue;
                descend(k + 1);
            }
    }

    const DegreeVector& h_;
    const PrimeProfile& profile_;
    std::int64_t den_;
    ConstraintOptions opt_;
    const std::vector<Rational>& grid_;
    int p_ = 0, f_ = 0, off_ = 0;
    std::vector<Rational> hb_;
    std::vector<HodgeInterval> target_;
    std::vector<IntSet> domain_;
    std::vector<bool> rule3_;
    std::vector<Rational> rhs_;
    std::vector<std::int64_t> cur_;
    std::vector<std::vector<std::int64_t>> out_;
};

inline std::vector<Rational> grid_values(std::int64_t den)
{
    std::vector<Rational> v;
    v.reserve(den + 1);
    for (std::int64_t k = 0; k <= den; ++k)
        v.emplace_back(k, den);
    return v;
}

inline void check_grid(const PrimeProfile& profile, std::int64_t den, std::int64_t cap)
{
    if (den < 1)
        throw std::invalid_argument("grid denominator must be >= 1");
    if (static_cast<std::int64_t>(profile.g()) * den > cap)
        throw std::invalid_argument("grid too large: |B| * denominator = " + std::to_string(profile.g() * den) +
                                    " exceeds the cap " + std::to_string(cap));
}

/// Per-block feasible tuples; the feasible set is their product.
inline std::vector<std::vector<std::vector<std::int64_t>>> feasible_blocks(const DegreeVector& h, std::int64_t den,
                                                                          const ConstraintOptions& options,
                                                                          const std::vector<Rational>& grid)
{
    require_non_cusp(h, "feasible_d_grid");
    const auto bk = options.bk ? bk_context(h) : std::nullopt;
    std::vector<std::vector<std::vector<std::int64_t>>> blocks;
    for (int q = 0; q < h.profile().prime_count(); ++q)
        blocks.push_back(BlockSolver(h, q, den, options, bk, grid).solve());
    return blocks;
}

/// Visits the product of the block lists in lexicographic order until fn returns false.
template <class Fn>
void for_each_product(const std::vector<std::vector<std::vector<std::int64_t>>>& blocks, Fn&& fn)
{
    for (const auto& b : blocks)
        if (b.empty())
            return;
    std::vector<std::size_t> idx(blocks.size(), 0);
    std::vector<std::int64_t> flat;
    while (true) {
        flat.clear();
        for (std::size_t q = 0; q < blocks.size(); ++q)
            flat.insert(flat.end(), blocks[q][idx[q]].begin(), blocks[q][idx[q]].end());
        if (!fn(flat))
            return;
        std::size_t q = blocks.size();
        while (q > 0) {
            --q;
            if (++idx[q] < blocks[q].size())
                break;
            idx[q] = 0;
            if (q == 0)
                return;
        }
    }
}

inline DegreeVector d_from_numerators(const PrimeProfile& profile, const std::vector<std::int64_t>& num,
                                      const std::vector<Rational>& grid)
{
    std::vector<Rational> v;
    v.reserve(num.size());
    for (auto k : num)
        v.push_back(grid[k]);
    return DegreeVector(profile, std::move(v), false, false);
}

} // namespace detail

/// Every d in (Z/den cap [0,1])^B passing the enabled necessary conditions,
/// in lexicographic order.
inline std::vector<DegreeVector> feasible_d_grid(const DegreeVector& h, std::int64_t den,
                                                 const ConstraintOptions& options = ConstraintOptions::all(),
                                                 std::int64_t cap = default_grid_cap)
{
    detail::require_non_cusp(h, "feasible_d_grid");
    detail::check_grid(h.profile(), den, cap);
    const auto grid = detail::grid_values(den);
    const auto blocks = detail::feasible_blocks(h, den, options, grid);
    std::vector<DegreeVector> out;
    detail::for_each_product(blocks, [&](const std::vector<std::int64_t>& num) {
        out.push_back(detail::d_from_numerators(h.profile(), num, grid));
        return true;
    });
    return out;
}

struct SweepOptions {
    ConstraintOptions constraints = ConstraintOptions::all();
    bool assume_generic = true;
    std::size_t max_counterexamples = 10;
    unsigned workers = 1;
    std::int64_t grid_cap = default_grid_cap;
    std::size_t chunk_size = 64;
    /// The D-grid has denominator den * d_refinement; H stays on the den grid.
    std::int64_t d_refinement = 1;
};

namespace detail {

/// Grid points with at most one coordinate in (0,1), in lexicographic order.
/// Points of codimension >= 2 lie outside Sigma by definition.
inline std::vector<std::vector<std::int64_t>> low_codim_points(int g, std::int64_t den)
{
    std::vector<std::vector<std::int64_t>> pts;
    const std::uint64_t nverts = 1ULL << g;
    for (std::uint64_t ones = 0; ones < nverts; ++ones) {
        std::vector<std::int64_t> v(g);
        for (int i = 0; i < g; ++i)
            v[i] = (ones >> i) & 1U ? den : 0;
        pts.push_back(v);
        for (int b = 0; b < g; ++b) {
            if ((ones >> b) & 1U)
                continue;
            for (std::int64_t k = 1; k < den; ++k) {
                auto w = v;
                w[b] = k;
                pts.push_back(std::move(w));
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

struct SweepTally {
    std::uint64_t candidates = 0, in_sigma = 0, indeterminate = 0, empty_fibers = 0;
    std::uint64_t case1 = 0, case2a = 0, case2b = 0, case2c = 0;
    std::uint64_t feasible_pairs = 0, checked_pairs = 0, counterexamples = 0;
    std::uint64_t istar_in = 0, roundtrip_mismatches = 0;
    std::vector<json> entries;

    void absorb(SweepTally&& o, std::size_t keep)
    {
        candidates += o.candidates;
        in_sigma += o.in_sigma;
        indeterminate += o.indeterminate;
        empty_fibers += o.empty_fibers;
        case1 += o.case1;
        case2a += o.case2a;
        case2b += o.case2b;
        case2c += o.case2c;
        feasible_pairs += o.feasible_pairs;
        checked_pairs += o.checked_pairs;
        counterexamples += o.counterexamples;
        istar_in += o.istar_in;
        roundtrip_mismatches += o.roundtrip_mismatches;
        for (auto& e : o.entries)
            if (entries.size() < keep)
                entries.push_back(std::move(e));
    }

    void count_case(SigmaCase c)
    {
        switch (c) {
        case SigmaCase::Case1: ++case1; break;
        case SigmaCase::Case2a: ++case2a; break;
        case SigmaCase::Case2b: ++case2b; break;
        case SigmaCase::Case2c: ++case2c; break;
        default: break;
        }
    }

    json to_json() const
    {
        return json{{"candidates", candidates},
                    {"in_sigma", in_sigma},
                    {"indeterminate", indeterminate},
                    {"by_case", json{{"1", case1}, {"2a", case2a}, {"2b", case2b}, {"2c", case2c}}},
                    {"feasible_pairs", feasible_pairs},
                    {"empty_fibers", empty_fibers}};
    }
};

template <class PerPoint>
SweepTally run_sweep(const PrimeProfile& profile, std::int64_t den, const SweepOptions& opt, PerPoint&& per_point)
{
    if (opt.d_refinement < 1)
        throw std::invalid_argument("d_refinement must be >= 1");
    const std::int64_t dden = den * opt.d_refinement;
    check_grid(profile, dden, opt.grid_cap);
    const auto grid = grid_values(den);
    const auto dgrid = grid_values(dden);
    const auto pts = low_codim_points(profile.g(), den);
    const std::size_t chunk = std::max<std::size_t>(1, opt.chunk_size);
    const std::size_t nchunks = (pts.size() + chunk - 1) / chunk;
    auto parts = parallel_chunks(nchunks, opt.workers, [&](std::size_t c) {
        SweepTally t;
        const std::size_t end = std::min(pts.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            DegreeVector h = d_from_numerators(profile, pts[i], grid).with_generic(opt.assume_generic);
            ++t.candidates;
            per_point(h, dgrid, dden, t);
        }
        return t;
    });
    SweepTally total;
    for (auto& p : parts)
        total.absorb(std::move(p), opt.max_counterexamples);
    return total;
}

} // namespace detail

/// Sigma -> U_p -> V_can at the degree level: over every grid point h
/// in Sigma, every feasible d passes the can-test on primes with f_p > 1.
inline RegionReport verify_sigma_up(const PrimeProfile& profile, std::int64_t den, const SweepOptions& opt = {})
{
    const std::size_t K = opt.max_counterexamples;
    auto tally = detail::run_sweep(profile, den, opt, [&](const DegreeVector& h, const std::vector<Rational>& grid,
                                                           std::int64_t dden, detail::SweepTally& t) {
        const auto v = sigma_verdict(h);
        if (v.membership == Membership::Indeterminate)
            ++t.indeterminate;
        if (v.membership != Membership::In)
            return;
        ++t.in_sigma;
        t.count_case(v.which);
        const auto blocks = detail::feasible_blocks(h, dden, opt.constraints, grid);
        // Failing required coordinates per block tuple.
        std::uint64_t total = 1;
        std::vector<std::vector<std::vector<int>>> bad(blocks.size());
        for (std::size_t q = 0; q < blocks.size(); ++q) {
            total *= blocks[q].size();
            const int f = profile.degree(static_cast<int>(q));
            const int off = profile.block_offset(static_cast<int>(q));
            for (const auto& tuple : blocks[q]) {
                std::vector<int> fails;
                if (f > 1)
                    for (int k = 0; k < f; ++k)
                        if (grid[tuple[k]] * profile.p() + grid[tuple[(k + 1) % f]] >= profile.p())
                            fails.push_back(off + k);
                bad[q].push_back(std::move(fails));
            }
        }
        t.feasible_pairs += total;
        if (total == 0) {
            ++t.empty_fibers;
            return;
        }
        // Triples (h, d, beta): failing tuples on one block times everything elsewhere.
        std::uint64_t triples = 0;
        for (std::size_t q = 0; q < blocks.size(); ++q) {
            std::uint64_t fails = 0;
            for (const auto& f : bad[q])
                fails += f.size();
            triples += fails * (total / blocks[q].size());
        }
        t.counterexamples += triples;
        if (triples == 0 || t.entries.size() >= K)
            return;
        detail::for_each_product(blocks, [&](const std::vector<std::int64_t>& num) {
            const auto d = detail::d_from_numerators(profile, num, grid);
            for (const auto& viol : can_test(d).violations) {
                if (!viol.required)
                    continue;
                if (t.entries.size() >= K)
                    return false;
                t.entries.push_back(json{{"h", h.to_json()},
                                         {"d", d.to_json()},
                                         {"beta", profile.index_label(viol.beta)},
                                         {"lhs", to_string(viol.value)}});
            }
            return t.entries.size() < K;
        });
    });
    RegionReport r{"sigma-up", profile, den, true, 0, {}, json::object(), {}};
    r.counterexample_count = tally.counterexamples;
    r.counterexamples = std::move(tally.entries);
    r.pass = r.counterexample_count == 0;
    r.stats = tally.to_json();
    r.stats["constraints"] = opt.constraints.to_json();
    r.stats["generic"] = opt.assume_generic;
    r.stats["d_denominator"] = den * opt.d_refinement;
    r.assumptions = {"feasible D-degrees are those passing the necessary conditions; they need not be realized by a subgroup scheme",
                     "grid points of codimension >= 2 lie outside Sigma and are skipped",
                     "indeterminate points (case 2c with deg = delta_j) are treated as outside Sigma"};
    return r;
}

/// Degree content of the saturation step:
///   (1) membership in Sigma and in the I*-interval region is a function of
///       the degree vector alone (re-evaluated on a serialized copy);
///   (2) for every point of Sigma and every feasible d, the image degrees
///       1 - d lie in V_can.
inline RegionReport saturation_check(const PrimeProfile& profile, std::int64_t den, const SweepOptions& opt = {})
{
    const auto istar = istar_multiset(profile);
    const std::size_t K = opt.max_counterexamples;
    auto tally = detail::run_sweep(profile, den, opt, [&](const DegreeVector& h, const std::vector<Rational>& grid,
                                                           std::int64_t dden, detail::SweepTally& t) {
        const auto m = in_Sigma(h);
        const bool sat = m == Membership::In && in_interval_region(h, istar);
        const auto copy = DegreeVector::from_json(profile, json::parse(h.to_json().dump()));
        if ((in_Sigma(copy) == Membership::In && in_interval_region(copy, istar)) != sat)
            ++t.roundtrip_mismatches;
        t.istar_in += sat;
        if (m != Membership::In)
            return;
        ++t.in_sigma;
        const auto blocks = detail::feasible_blocks(h, dden, opt.constraints, grid);
        detail::for_each_product(blocks, [&](const std::vector<std::int64_t>& num) {
            ++t.feasible_pairs;
            std::vector<Rational> image;
            for (auto k : num)
                image.push_back(1 - grid[k]);
            const DegreeVector img(profile, std::move(image), false, false);
            if (!in_Vcan(img)) {
                ++t.counterexamples;
                if (t.entries.size() < K)
                    t.entries.push_back(json{{"h", h.to_json()},
                                             {"d", detail::d_from_numerators(profile, num, grid).to_json()},
                                             {"image", img.to_json()}});
            }
            return true;
        });
    });
    RegionReport r{"saturation", profile, den, true, 0, {}, json::object(), {}};
    r.counterexample_count = tally.counterexamples + tally.roundtrip_mismatches;
    r.counterexamples = std::move(tally.entries);
    r.pass = r.counterexample_count == 0;
    r.stats = json{{"candidates", tally.candidates},
                   {"in_sigma", tally.in_sigma},
                   {"in_sigma_istar", tally.istar_in},
                   {"feasible_pairs", tally.feasible_pairs},
                   {"roundtrip_mismatches", tally.roundtrip_mismatches}};
    r.assumptions = {"the point-level statement for nonzero Q_p is taken from the literature; only its degree content is checked"};
    return r;
}

/// Compares the Newton-polygon verdict with the feasible set computed
/// without it, over every case-2c grid point of an inert prime of degree f.
/// The D-grid is refined by p^f so the Hodge relations stay on-grid.
///   h < delta_j : the beta0-coordinates of the feasible set are exactly {h}
///   otherwise   : their minimum is delta_j
inline RegionReport newton_consistency_check(int p, int f, std::int64_t den, std::size_t max_counterexamples = 10,
                                             std::int64_t cap = default_grid_cap)
{
    const PrimeProfile profile(p, {f});
    const std::int64_t dden = den * ipow(p, f);
    detail::check_grid(profile, dden, cap);
    const auto grid = detail::grid_values(dden);
    RegionReport r{"newton", profile, den, true, 0, {}, json::object(), {}};
    std::uint64_t configs = 0, points = 0, exact_points = 0;
    for (const auto& pair : enumerate_admissible(profile)) {
        const auto c = classify(pair);
        if (codim(pair) != 1 || !c.nowhere_etale || c.badness != Badness::Bad || !c.j)
            continue;
        ++configs;
        const Face face = face_of_pair(pair);
        const int b0 = *c.beta0;
        const Rational dj = delta(p, *c.j);
        for (std::int64_t k = 1; k < den; ++k) {
            std::vector<Rational> hv(f);
            for (int i = 0; i < f; ++i)
                hv[i] = face.coords[i] == FaceCoord::One ? Rational(1) : Rational(0);
            hv[b0] = Rational(k, den);
            const DegreeVector h(profile, hv, true);
            const auto verdict = bk_newton_degree(p, f, *c.j, hv[b0]);
            const auto blocks = detail::feasible_blocks(h, dden, ConstraintOptions::without_bk(), grid);
            ++points;
            std::optional<Rational> lo, hi;
            for (const auto& t : blocks[0]) {
                const Rational x = grid[t[b0]];
                lo = lo ? std::min(*lo, x) : x;
                hi = hi ? std::max(*hi, x) : x;
            }
            bool ok = lo.has_value();
            if (ok) {
                if (hv[b0] < dj) {
                    ok = *lo == verdict.degree && *hi == verdict.degree;
                } else {
                    ok = *lo == verdict.degree;
                }
            }
            exact_points += verdict.exact();
            if (!ok) {
                ++r.counterexample_count;
                if (r.counterexamples.size() < max_counterexamples)
                    r.counterexamples.push_back(json{{"h", h.to_json()},
                                                     {"j", *c.j},
                                                     {"verdict", verdict.exact() ? "exact" : "lower-bound"},
                                                     {"value", to_string(verdict.degree)},
                                                     {"min", lo ? json(to_string(*lo)) : json(nullptr)},
                                                     {"max", hi ? json(to_string(*hi)) : json(nullptr)}});
            }
        }
    }
    r.pass = r.counterexample_count == 0;
    r.stats = json{{"configurations", configs}, {"points", points}, {"exact_points", exact_points}, {"d_denominator", dden}};
    return r;
}

} // namespace hmfac
