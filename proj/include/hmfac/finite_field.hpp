#pragma once

// F_q with q = p^f. Elements are encoded as integers sum c_i p^i over the
// basis 1, x, ..., x^{f-1} of F_p[x]/(m), where m is the first primitive
// monic polynomial in lexicographic order; x is then a generator of F_q^x.

#include <stdexcept>
#include <string>
#include <vector>

namespace hmfac {

class FiniteField {
public:
    explicit FiniteField(int q)
    {
        if (q < 2)
            throw std::invalid_argument("field size must be >= 2");
        int p = 2;
        while (q % p != 0)
            ++p;
        int f = 0;
        for (int r = q; r > 1; r /= p) {
            if (r % p != 0)
                throw std::invalid_argument("field size " + std::to_string(q) + " is not a prime power");
            ++f;
        }
        p_ = p;
        f_ = f;
        q_ = q;
        find_generator();
    }

    int p() const { return p_; }
    int f() const { return f_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    int add(int a, int b) const
    {
        int r = 0;
        for (int i = 0, w = 1; i < f_; ++i, w *= p_)
            r += ((a / w % p_ + b / w % p_) % p_) * w;
        return r;
    }
    int neg(int a) const
    {
        int r = 0;
        for (int i = 0, w = 1; i < f_; ++i, w *= p_)
            r += ((p_ - a / w % p_) % p_) * w;
        return r;
    }
    int mul(int a, int b) const
    {
        if (a == 0 || b == 0)
            return 0;
        return exp_[(log_[a] + log_[b]) % (q_ - 1)];
    }
    int inv(int a) const
    {
        if (a == 0)
            throw std::domain_error("inverse of zero in F_q");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    /// g^k for the fixed generator g.
    int gen_pow(long long k) const { return exp_[((k % (q_ - 1)) + (q_ - 1)) % (q_ - 1)]; }
    /// Discrete log base g; a != 0.
    int log(int a) const
    {
        if (a <= 0 || a >= q_)
            throw std::domain_error("discrete log of zero or out-of-range element");
        return log_[a];
    }
    /// Tr_{F_q/F_p}(a) in [0, p).
    int trace(int a) const { return trace_[a]; }

    /// -1 as an element code.
    int minus_one() const { return neg(1); }

private:
    // Multiply an element by x modulo the monic polynomial m (coefficients low first, length f+1).
    int times_x(int a, const std::vector<int>& m) const
    {
        std::vector<int> c(f_ + 1, 0);
        for (int i = 0, w = 1; i < f_; ++i, w *= p_)
            c[i + 1] = a / w % p_;
        const int top = c[f_];
        for (int i = 0; i < f_; ++i)
            c[i] = ((c[i] - top * m[i]) % p_ + p_) % p_;
        int r = 0;
        for (int i = 0, w = 1; i < f_; ++i, w *= p_)
            r += c[i] * w;
        return r;
    }

    void find_generator()
    {
        // Monic candidates x^f + sum_{i<f} c_i x^i, c enumerated as base-p digits.
        for (int code = 0; code < q_; ++code) {
            std::vector<int> m(f_ + 1, 0);
            for (int i = 0, w = 1; i < f_; ++i, w *= p_)
                m[i] = code / w % p_;
            m[f_] = 1;
            if (m[0] == 0)
                continue;
            std::vector<int> ex(q_ - 1), lg(q_, -1);
            int cur = 1;
            bool ok = true;
            for (int k = 0; k < q_ - 1; ++k) {
                if (cur == 0 || lg[cur] != -1) {
                    ok = false;
                    break;
                }
                ex[k] = cur;
                lg[cur] = k;
                cur = times_x(cur, m);
            }
            if (!ok || cur != 1)
                continue;
            modulus_ = m;
            exp_ = std::move(ex);
            log_ = std::move(lg);
            break;
        }
        if (exp_.empty())
            throw std::logic_error("no primitive polynomial found");
        // Tr(a) = sum_i a^{p^i}, computed through logs; the result lies in F_p.
        trace_.assign(q_, 0);
        for (int a = 1; a < q_; ++a) {
            int t = 0;
            long long e = log_[a];
            for (int i = 0; i < f_; ++i) {
                t = add(t, exp_[e % (q_ - 1)]);
                e = e * p_ % (q_ - 1);
            }
            if (t >= p_)
                throw std::logic_error("trace left the prime field");
            trace_[a] = t;
        }
    }

    int p_ = 0, f_ = 0, q_ = 0;
    std::vector<int> modulus_;
    std::vector<int> exp_, log_, trace_;
};

} // namespace hmfac
