#pragma once

#include <cstddef>
#include <vector>

#include "toda/errors.hpp"

namespace toda {

// Truncated multilinear polynomial in m nilpotent variables (e_k^2 = 0).
// Coefficient c[S] multiplies prod_{k in S} e_k; the top coefficient is the
// mixed derivative in all variables.
template <class T>
class Jet {
public:
    Jet() : m_(0), c_(1, T(0)) {}
    explicit Jet(int m) : m_(m), c_(std::size_t(1) << m, T(0)) {}
    Jet(int m, const T& v) : Jet(m) { c_[0] = v; }

    int vars() const { return m_; }
    std::size_t size() const { return c_.size(); }
    T& operator[](std::size_t s) { return c_[s]; }
    const T& operator[](std::size_t s) const { return c_[s]; }
    const T& value() const { return c_[0]; }
    const T& top() const { return c_.back(); }

    Jet& operator+=(const Jet& o)
    {
        check(o);
        for (std::size_t s = 0; s < c_.size(); ++s)
            c_[s] += o.c_[s];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        check(o);
        for (std::size_t s = 0; s < c_.size(); ++s)
            c_[s] -= o.c_[s];
        return *this;
    }
    Jet& operator*=(const T& k)
    {
        for (auto& x : c_)
            x *= k;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a)
    {
        for (auto& x : a.c_)
            x = -x;
        return a;
    }
    friend Jet operator*(Jet a, const T& k) { return a *= k; }
    friend Jet operator*(const T& k, Jet a) { return a *= k; }
    friend Jet operator+(Jet a, const T& k)
    {
        a.c_[0] += k;
        return a;
    }
    friend Jet operator-(Jet a, const T& k)
    {
        a.c_[0] -= k;
        return a;
    }
    friend Jet operator+(const T& k, Jet a) { return a + k; }
    friend Jet operator-(const T& k, Jet a) { return -a + k; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        a.check(b);
        Jet r(a.m_);
        const std::size_t n = a.c_.size();
        for (std::size_t s = 0; s < n; ++s) {
            if (a.c_[s] == 0)
                continue;
            // t ranges over subsets of the complement of s
            const std::size_t comp = (n - 1) & ~s;
            for (std::size_t t = comp;; t = (t - 1) & comp) {
                if (b.c_[t] != 0)
                    r.c_[s | t] += a.c_[s] * b.c_[t];
                if (t == 0)
                    break;
            }
        }
        return r;
    }

    Jet inverse() const
    {
        if (c_[0] == 0)
            throw SingularElement("jet inverse: zero value");
        // 1/(a0 + n) = (1/a0) sum_k (-n/a0)^k, n^(m+1) = 0
        const T inv0 = T(1) / c_[0];
        Jet n = *this;
        n.c_[0] = 0;
        n *= -inv0;
        Jet r(m_, T(1));
        Jet term(m_, T(1));
        for (int k = 0; k < m_; ++k) {
            term = term * n;
            r += term;
        }
        return r * inv0;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inverse(); }
    friend Jet operator/(const T& k, const Jet& b) { return k * b.inverse(); }
    friend Jet operator/(Jet a, const T& k) { return a *= T(1) / k; }

    friend bool operator==(const Jet& a, const Jet& b) { return a.m_ == b.m_ && a.c_ == b.c_; }
    friend bool operator==(const Jet& a, int k)
    {
        if (a.c_[0] != k)
            return false;
        for (std::size_t s = 1; s < a.c_.size(); ++s)
            if (a.c_[s] != 0)
                return false;
        return true;
    }
    friend bool operator!=(const Jet& a, int k) { return !(a == k); }

private:
    void check(const Jet& o) const
    {
        if (o.m_ != m_)
            throw DimensionMismatch("jets over different variable sets");
    }

    int m_;
    std::vector<T> c_;
};

template <class T>
Jet<T> one_like(const Jet<T>& j)
{
    return Jet<T>(j.vars(), T(1));
}
template <class T>
const T& value_of(const Jet<T>& j)
{
    return j.value();
}

} // namespace toda
