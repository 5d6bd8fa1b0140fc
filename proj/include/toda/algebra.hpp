#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "toda/rational.hpp"

namespace toda {

// K[j][i] with [h_i, X±_j] = ±K[j][i] X±_j; indices here are 0-based, the
// public word alphabet is {1, 2}.
struct CartanData {
    int p = 1;
    std::array<std::array<int, 2>, 2> K{};
    RMatrix Kinv;

    int k(int j, int i) const { return K[j - 1][i - 1]; } // 1-based
};

CartanData cartan_matrix(int p);

// Lowering indices in application order: (2,1) is X⁻₁X⁻₂|j⟩.
struct BasisWord {
    std::vector<int> word;
    std::array<Rational, 2> weight;

    std::string str() const; // "()" or "(2,1)"
};

struct Representation {
    CartanData algebra;
    int label = 1;
    std::size_t dim = 0;
    std::vector<BasisWord> basis;
    std::vector<Rational> norms; // diagonal of the contravariant Gram matrix
    RMatrix E[2], F[2], H[2];

    const RMatrix& raise(int i) const { return E[index(i)]; }
    const RMatrix& lower(int i) const { return F[index(i)]; }
    const RMatrix& cartan(int i) const { return H[index(i)]; }

    // position of a basis word, or -1
    int find(const std::vector<int>& word) const;

private:
    static int index(int i);
};

Representation build_fundamental_rep(const CartanData& c, int j);

struct Relation {
    std::string name; // e.g. "[E1,F1]-H1"
    RMatrix residual;
};

struct RelationReport {
    std::vector<Relation> relations;
    bool all_zero() const;
};

RelationReport verify_defining_relations(const Representation& r);

// Plain-text dump: header, basis, then one block per matrix with "num/den" entries.
void write_dump(std::ostream& os, const Representation& r);
std::string dump_string(const Representation& r);

} // namespace toda
