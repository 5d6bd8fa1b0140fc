#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "toda/errors.hpp"

namespace toda {

// Dense row-major matrix. Used with mpq_class for the exact paths and with
// double for the integrated fields; dimensions never exceed 14 here.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw DimensionMismatch("ragged initializer");
            for (const auto& x : row)
                a_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<T>& data() const { return a_; }
    std::vector<T>& data() { return a_; }

    bool is_zero() const
    {
        for (const auto& x : a_)
            if (x != 0)
                return false;
        return true;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    T trace() const
    {
        T s(0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
            s += (*this)(i, i);
        return s;
    }

    Matrix& operator+=(const Matrix& b)
    {
        check_same(b, "+");
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] += b.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& b)
    {
        check_same(b, "-");
        for (std::size_t k = 0; k < a_.size(); ++k)
            a_[k] -= b.a_[k];
        return *this;
    }
    Matrix& operator*=(const T& s)
    {
        for (auto& x : a_)
            x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& x : a.a_)
            x = -x;
        return a;
    }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matrix product: inner dimensions differ");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    template <class U, class F>
    Matrix<U> map(F f) const
    {
        Matrix<U> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = f((*this)(i, j));
        return m;
    }

private:
    void check_same(const Matrix& b, const char* op) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw DimensionMismatch(std::string("matrix ") + op + ": shapes differ");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
Matrix<T> bracket(const Matrix<T>& a, const Matrix<T>& b)
{
    if (!a.square() || !b.square() || a.rows() != b.rows())
        throw DimensionMismatch("bracket needs square matrices of equal size");
    return a * b - b * a;
}

// exp(X) for nilpotent X, summed until the power vanishes. Exact for rationals.
template <class T>
Matrix<T> nilpotent_exp(const Matrix<T>& x)
{
    if (!x.square())
        throw DimensionMismatch("nilpotent_exp needs a square matrix");
    const std::size_t n = x.rows();
    Matrix<T> result = Matrix<T>::identity(n);
    Matrix<T> term = Matrix<T>::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        term = term * x;
        term *= T(1) / T(static_cast<long>(k));
        if (term.is_zero())
            return result;
        result += term;
    }
    if (!term.is_zero())
        throw InvalidParameter("nilpotent_exp: argument is not nilpotent");
    return result;
}

// Determinant by Gaussian elimination, first nonzero pivot. Meant for exact
// scalars; no magnitude pivoting.
template <class T>
T determinant(Matrix<T> m)
{
    if (!m.square())
        throw DimensionMismatch("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    T det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0)
            ++piv;
        if (piv == n)
            return T(0);
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == 0)
                continue;
            T f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j)
                m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

template <class T>
Matrix<T> inverse2(const Matrix<T>& m)
{
    if (m.rows() != 2 || m.cols() != 2)
        throw DimensionMismatch("inverse2 needs a 2x2 matrix");
    T d = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (d == 0)
        throw SingularElement("inverse2: zero determinant");
    return Matrix<T>{{m(1, 1) / d, -m(0, 1) / d}, {-m(1, 0) / d, m(0, 0) / d}};
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << m(i, j);
        os << '\n';
    }
    return os;
}

} // namespace toda
