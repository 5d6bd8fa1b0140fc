#pragma once

#include <gmpxx.h>

#include <string>

#include "toda/matrix.hpp"

namespace toda {

using Rational = mpq_class;
using RMatrix = Matrix<Rational>;
using DMatrix = Matrix<double>;

// "num/den", always with a denominator, so dumps parse back unambiguously.
inline std::string to_fraction(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_fraction(const std::string& s)
{
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw InvalidParameter("not a rational: '" + s + "'");
    q.canonicalize();
    return q;
}

inline DMatrix to_double(const RMatrix& m)
{
    return m.map<double>([](const Rational& q) { return q.get_d(); });
}

// Unit and value hooks so generic formulas work for scalars and jets alike.
template <class T>
T one_like(const T&)
{
    return T(1);
}
template <class T>
const T& value_of(const T& x)
{
    return x;
}

template <class T>
T ipow(const T& base, int e)
{
    if (e < 0) {
        if (value_of(base) == 0)
            throw SingularElement("negative power of zero");
        return one_like(base) / ipow(base, -e);
    }
    T r = one_like(base);
    for (int k = 0; k < e; ++k)
        r = r * base;
    return r;
}

} // namespace toda
