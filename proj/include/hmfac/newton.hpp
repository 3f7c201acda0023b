#pragma once

// Newton polygons over a discretely valued ring and the slope computation
// that decides deg_{beta0}(D) on bad codimension-one strata with
// eta_{p0} != B_{p0}.

#include "rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hmfac {

/// A monomial c * y^exponent known only through v(c).
struct ValuedTerm {
    std::int64_t exponent = 0;
    Rational valuation;
};

struct NewtonSegment {
    std::int64_t from = 0;
    std::int64_t to = 0;
    Rational slope; ///< rise / run of the lower hull

    /// Valuation shared by the (to - from) roots on this segment.
    Rational root_valuation() const { return -slope; }
    std::int64_t root_count() const { return to - from; }
};

/// Lower convex hull of {(exponent, valuation)}, left to right. Terms with
/// the same exponent keep the smaller valuation.
inline std::vector<NewtonSegment> newton_polygon(std::vector<ValuedTerm> terms)
{
    if (terms.size() < 2)
        throw std::invalid_argument("newton_polygon: need at least two terms");
    std::sort(terms.begin(), terms.end(), [](const ValuedTerm& a, const ValuedTerm& b) {
        return a.exponent != b.exponent ? a.exponent < b.exponent : a.valuation < b.valuation;
    });
    std::vector<ValuedTerm> pts;
    for (const auto& t : terms)
        if (pts.empty() || pts.back().exponent != t.exponent)
            pts.push_back(t);

    // Monotone chain; a middle point stays only if it lies strictly below the chord.
    std::vector<ValuedTerm> hull;
    for (const auto& t : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const Rational lhs = (b.valuation - a.valuation) * Rational(t.exponent - a.exponent);
            const Rational rhs = (t.valuation - a.valuation) * Rational(b.exponent - a.exponent);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(t);
    }
    std::vector<NewtonSegment> segs;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const auto& a = hull[i - 1];
        const auto& b = hull[i];
        segs.push_back({a.exponent, b.exponent, (b.valuation - a.valuation) / Rational(b.exponent - a.exponent)});
    }
    return segs;
}

/// delta_j = sum_{i=1}^{j} p^{-i}.
inline Rational delta(int p, int j)
{
    if (j < 1)
        throw std::invalid_argument("delta: j must be >= 1");
    return inverse_power_sum(p, 1, j);
}

struct NewtonVerdict {
    enum class Kind { Exact, LowerBound };
    Kind kind = Kind::Exact;
    Rational degree;                        ///< deg_{beta0}(D), or its lower bound
    Rational y_valuation;                   ///< v_p(y_{sigma^-1 beta0}); an upper bound when kind == LowerBound
    std::vector<NewtonSegment> polygon;     ///< the polygon the slope was read from

    bool exact() const { return kind == Kind::Exact; }
};

namespace detail {

/// Valuations of the three terms of the phi^f-stability equation for
/// y = y_{sigma^-1 beta0}, for an inert block of degree f with
/// deg(sigma^i beta0) = 0 for 1 <= i <= j and = 1 for j < i < f.
/// Returns {v(constant), v(coefficient of y^{p^f - 1}), v(coefficient of y^{p^f})}.
struct StabilityEquation {
    Rational constant;
    Rational middle;
    Rational leading;
};

inline StabilityEquation stability_equation(int p, int f, int j, const Rational& h)
{
    // deg at sigma^{-i} beta0 for i = 1..f; sigma^{-i} = sigma^{f-i}.
    auto deg_back = [&](int i) -> Rational {
        const int fwd = ((f - i) % f + f) % f;
        if (fwd == 0)
            return h;
        return fwd <= j ? Rational(0) : Rational(1);
    };
    StabilityEquation eq;
    for (int i = 1; i <= f; ++i) {
        eq.constant += (1 - deg_back(i)) * ipow(p, i - 1);
        eq.middle += deg_back(i) * ipow(p, i - 1);
    }
    const Rational d = delta(p, j);
    if (h > d) {
        // The i = f - 1 summand (b_{beta0} a unit) dominates.
        for (int i = 1; i <= f - 1; ++i)
            eq.leading += (1 - deg_back(i)) * ipow(p, i - 1);
    } else {
        // The summand through the unit b_{sigma^{j+1} beta0} dominates (or bounds it, at h = delta_j).
        for (int i = 1; i <= f - j - 2; ++i)
            eq.leading += (1 - deg_back(i)) * ipow(p, i - 1);
        eq.leading += h * ipow(p, f - 1);
    }
    return eq;
}

} // namespace detail

/// deg_{beta0}(D) for every D != H above a generic point of a bad
/// codimension-one stratum with run length j, on a block of degree f.
///   h > delta_j : Exact(delta_j)
///   h < delta_j : Exact(h)
///   h = delta_j : LowerBound(delta_j)
inline NewtonVerdict bk_newton_degree(int p, int f, int j, const Rational& h_beta0)
{
    if (h_beta0 <= 0 || h_beta0 >= 1)
        throw std::invalid_argument("bk_newton_degree: deg_{beta0}(H) must lie in (0,1)");
    if (j < 1 || j > f - 1)
        throw std::invalid_argument("bk_newton_degree: need 1 <= j <= f-1");
    const auto eq = detail::stability_equation(p, f, j, h_beta0);
    const std::int64_t top = ipow(p, f);
    NewtonVerdict v;
    // With j = f-1 the block has no One coordinate and the y^{p^f - 1} term
    // carries no information; the equation is read as a binomial.
    if (j == f - 1)
        v.polygon = newton_polygon({{0, eq.constant}, {top, eq.leading}});
    else
        v.polygon = newton_polygon({{0, eq.constant}, {top - 1, eq.middle}, {top, eq.leading}});
    if (v.polygon.size() != 1 || v.polygon.front().from != 0 || v.polygon.front().to != top)
        throw std::logic_error("bk_newton_degree: stability polygon is not a single segment");
    v.y_valuation = v.polygon.front().root_valuation();
    const Rational d = delta(p, j);
    if (h_beta0 > d) {
        v.kind = NewtonVerdict::Kind::Exact;
        v.degree = d;
    } else if (h_beta0 < d) {
        v.kind = NewtonVerdict::Kind::Exact;
        // v(a_{beta0}) = 1 - h < p v(y) = v(b_{beta0} y^p), so the first term decides.
        v.degree = 1 - std::min(1 - h_beta0, v.y_valuation * p);
    } else {
        v.kind = NewtonVerdict::Kind::LowerBound;
        v.degree = d;
    }
    return v;
}

} // namespace hmfac
