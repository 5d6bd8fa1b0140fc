#pragma once

#include <string>
#include <vector>

#include "toda/algebra.hpp"

namespace toda {

// A multi-commutator in the Chevalley generators, e.g. [[X⁺₂,X⁺₁],X⁺₁].
struct GenExpr {
    enum class Kind { Raise, Lower, Cartan, Bracket };
    Kind kind = Kind::Raise;
    int index = 1;               // simple root for leaves
    std::vector<GenExpr> args;   // two entries for Bracket

    static GenExpr raise(int i) { return {Kind::Raise, i, {}}; }
    static GenExpr lower(int i) { return {Kind::Lower, i, {}}; }
    static GenExpr h(int i) { return {Kind::Cartan, i, {}}; }
    static GenExpr br(GenExpr a, GenExpr b) { return {Kind::Bracket, 0, {std::move(a), std::move(b)}}; }

    std::string str() const;
    // sum of simple-root letters with sign (+ for raising)
    std::array<int, 2> root() const;
    int length() const;
};

RMatrix evaluate(const GenExpr& e, const Representation& r);

// Hermitian conjugation on words: X⁺ ↔ X⁻, [A,B] → [B†,A†].
GenExpr conjugate(const GenExpr& e);

// Left-normed word [[X_{w1},X_{w2}],...,X_{wn}] with the given sign of letters.
GenExpr left_normed(const std::vector<int>& letters, bool raising);

} // namespace toda
