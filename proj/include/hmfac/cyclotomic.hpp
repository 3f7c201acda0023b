#pragma once

// Elements of Z[zeta_m] as integer polynomials in zeta_m reduced modulo the
// m-th cyclotomic polynomial. Binary operations on different conductors lift
// both operands to the lcm first.

#include "embeddings.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmfac {

inline constexpr int max_cyclotomic_degree = 1000;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("cyclotomic coefficient overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("cyclotomic coefficient overflow");
    return r;
}

inline int euler_phi(int m)
{
    int r = m;
    for (int d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            while (m % d == 0)
                m /= d;
            r -= r / d;
        }
    if (m > 1)
        r -= r / m;
    return r;
}

/// Exact division of integer polynomials by a monic divisor (low degree first).
inline std::vector<std::int64_t> poly_div_exact(std::vector<std::int64_t> num, const std::vector<std::int64_t>& den)
{
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    std::vector<std::int64_t> quo(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        const std::int64_t c = num[i];
        quo[i - dn] = c;
        if (c != 0)
            for (int k = 0; k <= dn; ++k)
                num[i - dn + k] = checked_add(num[i - dn + k], -checked_mul(c, den[k]));
    }
    for (int i = 0; i < dn; ++i)
        if (num[i] != 0)
            throw std::logic_error("poly_div_exact: nonzero remainder");
    return quo;
}

/// Phi_m, low degree first. Cached; safe to call from several threads.
inline const std::vector<std::int64_t>& cyclotomic_polynomial(int m)
{
    static std::mutex mu;
    static std::map<int, std::vector<std::int64_t>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(m); it != cache.end())
            return it->second;
    }
    if (m < 1)
        throw std::invalid_argument("cyclotomic polynomial of conductor < 1");
    // x^m - 1 divided by Phi_d for the proper divisors d of m.
    std::vector<std::int64_t> poly(m + 1, 0);
    poly[0] = -1;
    poly[m] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0)
            poly = poly_div_exact(std::move(poly), cyclotomic_polynomial(d));
    std::lock_guard lock(mu);
    return cache.emplace(m, std::move(poly)).first->second;
}

} // namespace detail

class CyclotomicInt {
public:
    /// Zero of Z[zeta_m].
    explicit CyclotomicInt(int m = 1) : m_(check_conductor(m)), c_(detail::euler_phi(m_), 0) {}

    static CyclotomicInt from_int(std::int64_t v, int m = 1)
    {
        CyclotomicInt x(m);
        x.c_[0] = v;
        return x;
    }
    static CyclotomicInt one(int m = 1) { return from_int(1, m); }

    /// zeta_m^k.
    static CyclotomicInt zeta(int m, std::int64_t k)
    {
        std::vector<std::int64_t> counts(m, 0);
        counts[((k % m) + m) % m] = 1;
        return from_power_counts(m, counts);
    }

    /// sum_k counts[k] zeta_m^k, counts of length m.
    static CyclotomicInt from_power_counts(int m, const std::vector<std::int64_t>& counts)
    {
        if (static_cast<int>(counts.size()) != m)
            throw std::invalid_argument("from_power_counts: need m counts");
        CyclotomicInt x(m);
        x.c_ = reduce(m, counts);
        return x;
    }

    /// Coefficients in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
    static CyclotomicInt from_coefficients(int m, std::vector<std::int64_t> coeffs)
    {
        CyclotomicInt x(m);
        coeffs.resize(std::max<std::size_t>(coeffs.size(), 1), 0);
        x.c_ = reduce(m, coeffs);
        return x;
    }

    int conductor() const { return m_; }
    const std::vector<std::int64_t>& coefficients() const { return c_; }
    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
    }

    /// The same element viewed in Z[zeta_M], m | M.
    CyclotomicInt lift(int M) const
    {
        if (M % m_ != 0)
            throw std::invalid_argument("lift: " + std::to_string(m_) + " does not divide " + std::to_string(M));
        if (M == m_)
            return *this;
        std::vector<std::int64_t> counts(M, 0);
        const int step = M / m_;
        for (std::size_t i = 0; i < c_.size(); ++i)
            counts[i * step] = c_[i];
        return from_power_counts(M, counts);
    }

    /// Image under zeta -> zeta^{-1} (complex conjugation).
    CyclotomicInt conj() const
    {
        std::vector<std::int64_t> counts(m_, 0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            counts[(m_ - static_cast<int>(i)) % m_] = detail::checked_add(counts[(m_ - static_cast<int>(i)) % m_], c_[i]);
        return from_power_counts(m_, counts);
    }

    CyclotomicInt operator-() const
    {
        CyclotomicInt x = *this;
        for (auto& v : x.c_)
            v = detail::checked_mul(v, -1);
        return x;
    }

    friend CyclotomicInt operator+(const CyclotomicInt& a, const CyclotomicInt& b)
    {
        const int M = std::lcm(a.m_, b.m_);
        CyclotomicInt x = a.lift(M);
        const CyclotomicInt y = b.lift(M);
        for (std::size_t i = 0; i < x.c_.size(); ++i)
            x.c_[i] = detail::checked_add(x.c_[i], y.c_[i]);
        return x;
    }
    friend CyclotomicInt operator-(const CyclotomicInt& a, const CyclotomicInt& b) { return a + (-b); }

    friend CyclotomicInt operator*(const CyclotomicInt& a, const CyclotomicInt& b)
    {
        const int M = std::lcm(a.m_, b.m_);
        const CyclotomicInt x = a.lift(M), y = b.lift(M);
        std::vector<std::int64_t> prod(x.c_.size() + y.c_.size() - 1, 0);
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] == 0)
                continue;
            for (std::size_t j = 0; j < y.c_.size(); ++j)
                if (y.c_[j] != 0)
                    prod[i + j] = detail::checked_add(prod[i + j], detail::checked_mul(x.c_[i], y.c_[j]));
        }
        CyclotomicInt r(M);
        r.c_ = reduce(M, prod);
        return r;
    }
    friend CyclotomicInt operator*(const CyclotomicInt& a, std::int64_t k)
    {
        CyclotomicInt x = a;
        for (auto& v : x.c_)
            v = detail::checked_mul(v, k);
        return x;
    }

    CyclotomicInt& operator+=(const CyclotomicInt& o) { return *this = *this + o; }
    CyclotomicInt& operator*=(const CyclotomicInt& o) { return *this = *this * o; }

    friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b)
    {
        const int M = std::lcm(a.m_, b.m_);
        return a.lift(M).c_ == b.lift(M).c_;
    }

    json to_json() const { return json{{"conductor", m_}, {"coefficients", c_}}; }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0)
                continue;
            const bool neg = c_[i] < 0;
            const std::int64_t mag = neg ? -c_[i] : c_[i];
            s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (i == 0 || mag != 1)
                s += std::to_string(mag);
            if (i > 0)
                s += (mag != 1 ? "*" : "") + std::string("z") + std::to_string(m_) + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return s.empty() ? "0" : s;
    }

private:
    static int check_conductor(int m)
    {
        if (m < 1)
            throw std::invalid_argument("conductor must be >= 1");
        if (detail::euler_phi(m) > max_cyclotomic_degree)
            throw std::invalid_argument("conductor " + std::to_string(m) + " exceeds the cyclotomic degree cap");
        return m;
    }

    /// Reduce a polynomial in zeta_m modulo Phi_m; returns phi(m) coefficients.
    static std::vector<std::int64_t> reduce(int m, std::vector<std::int64_t> poly)
    {
        const auto& phi = detail::cyclotomic_polynomial(m);
        const int d = static_cast<int>(phi.size()) - 1;
        // First fold with zeta^m = 1 so the division stays short.
        if (static_cast<int>(poly.size()) > m) {
            for (std::size_t i = m; i < poly.size(); ++i)
                poly[i % m] = detail::checked_add(poly[i % m], poly[i]);
            poly.resize(m);
        }
        for (int i = static_cast<int>(poly.size()) - 1; i >= d; --i) {
            const std::int64_t c = poly[i];
            if (c == 0)
                continue;
            for (int k = 0; k <= d; ++k)
                poly[i - d + k] = detail::checked_add(poly[i - d + k], -detail::checked_mul(c, phi[k]));
        }
        poly.resize(d, 0);
        return poly;
    }

    int m_ = 1;
    std::vector<std::int64_t> c_;
};

} // namespace hmfac
