#include "toda/algebra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>
#include <sstream>
#include <tuple>

namespace toda {

CartanData cartan_matrix(int p)
{
    if (p < 1 || p > 3)
        throw InvalidParameter(fmt::format("cartan_matrix: p must be 1, 2 or 3 (got {})", p));
    CartanData cd;
    cd.p = p;
    cd.K = {{{2, -1}, {-p, 2}}};
    Rational det = 4 - p;
    cd.Kinv = RMatrix{{Rational(2) / det, Rational(1) / det}, {Rational(p) / det, Rational(2) / det}};
    return cd;
}

std::string BasisWord::str() const
{
    std::string s = "(";
    for (std::size_t k = 0; k < word.size(); ++k)
        s += (k ? "," : "") + std::to_string(word[k]);
    return s + ")";
}

int Representation::index(int i)
{
    if (i != 1 && i != 2)
        throw InvalidParameter(fmt::format("simple root index must be 1 or 2 (got {})", i));
    return i - 1;
}

int Representation::find(const std::vector<int>& word) const
{
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (basis[k].word == word)
            return static_cast<int>(k);
    return -1;
}

namespace {

using Coords = std::vector<Rational>;

// A vector of level d+1 is known through its images E_1 v, E_2 v (coordinates
// on level d) and an expression sum_k F_{i_k} z_k with z_k on level d.
struct LevelVec {
    std::vector<int> word;
    std::array<Rational, 2> weight;
    std::array<Coords, 2> eimg;
    std::vector<std::pair<int, Coords>> fexpr;
    Rational norm;
};

} // namespace

Representation build_fundamental_rep(const CartanData& cd, int j)
{
    if (j != 1 && j != 2)
        throw InvalidParameter(fmt::format("fundamental label must be 1 or 2 (got {})", j));

    std::vector<std::vector<LevelVec>> levels;
    LevelVec top;
    top.weight = {Rational(j == 1 ? 1 : 0), Rational(j == 2 ? 1 : 0)};
    top.norm = 1;
    levels.push_back({top});

    // fmaps[d][i][b] = coordinates on level d+1 of F_i applied to vector b of level d
    std::vector<std::array<std::vector<Coords>, 2>> fmaps;

    for (;;) {
        const std::size_t d = levels.size() - 1;
        const auto& cur = levels[d];
        const std::size_t n = cur.size();

        std::vector<std::tuple<std::vector<int>, int, std::size_t>> cands;
        for (std::size_t b = 0; b < n; ++b)
            for (int i = 0; i < 2; ++i) {
                auto w = cur[b].word;
                w.push_back(i + 1);
                cands.emplace_back(w, i, b);
            }
        std::sort(cands.begin(), cands.end());

        // E_k F_i b = F_i E_k b + δ_ki h_i b
        auto e_of_f = [&](int i, std::size_t b) {
            std::array<Coords, 2> res;
            for (int k = 0; k < 2; ++k) {
                Coords v(n, Rational(0));
                if (d > 0) {
                    const Coords& ekb = cur[b].eimg[k];
                    for (std::size_t q = 0; q < ekb.size(); ++q) {
                        if (ekb[q] == 0)
                            continue;
                        const Coords& col = fmaps[d - 1][i][q];
                        for (std::size_t t = 0; t < n; ++t)
                            v[t] += ekb[q] * col[t];
                    }
                }
                if (k == i)
                    v[b] += cur[b].weight[i];
                res[k] = std::move(v);
            }
            return res;
        };
        // <x, sum F_i z> = sum <E_i x, z>, level-d form is diagonal
        auto inner = [&](const std::array<Coords, 2>& ex, const std::vector<std::pair<int, Coords>>& fy) {
            Rational s = 0;
            for (const auto& [i, z] : fy)
                for (std::size_t t = 0; t < n; ++t)
                    if (ex[i][t] != 0 && z[t] != 0)
                        s += ex[i][t] * z[t] * cur[t].norm;
            return s;
        };

        std::vector<LevelVec> next;
        for (const auto& [w, i, b] : cands) {
            LevelVec v;
            v.word = w;
            for (int k = 0; k < 2; ++k)
                v.weight[k] = cur[b].weight[k] - cd.K[i][k];
            v.eimg = e_of_f(i, b);
            Coords z(n, Rational(0));
            z[b] = 1;
            v.fexpr.emplace_back(i, z);
            // Gram-Schmidt against accepted vectors of the same weight
            for (const auto& u : next) {
                if (u.weight != v.weight)
                    continue;
                Rational coef = inner(u.eimg, v.fexpr) / u.norm;
                if (coef == 0)
                    continue;
                for (int k = 0; k < 2; ++k)
                    for (std::size_t t = 0; t < n; ++t)
                        v.eimg[k][t] -= coef * u.eimg[k][t];
                for (const auto& [ii, zz] : u.fexpr) {
                    Coords scaled(zz);
                    for (auto& x : scaled)
                        x *= -coef;
                    v.fexpr.emplace_back(ii, std::move(scaled));
                }
            }
            v.norm = inner(v.eimg, v.fexpr);
            if (v.norm < 0)
                throw Error("contravariant form is not positive; Cartan data inconsistent");
            if (v.norm != 0)
                next.push_back(std::move(v));
        }
        if (next.empty())
            break;

        // <F_i b, b'> / N(b') = N(b) * (E_i b')[b] / N(b')
        std::array<std::vector<Coords>, 2> fm;
        for (int i = 0; i < 2; ++i) {
            fm[i].resize(n);
            for (std::size_t b = 0; b < n; ++b) {
                Coords col(next.size());
                for (std::size_t a = 0; a < next.size(); ++a)
                    col[a] = cur[b].norm * next[a].eimg[i][b] / next[a].norm;
                fm[i][b] = std::move(col);
            }
        }
        fmaps.push_back(std::move(fm));
        levels.push_back(std::move(next));
    }

    Representation r;
    r.algebra = cd;
    r.label = j;
    std::vector<std::size_t> offset{0};
    for (const auto& lv : levels)
        offset.push_back(offset.back() + lv.size());
    r.dim = offset.back();
    for (const auto& lv : levels)
        for (const auto& v : lv) {
            r.basis.push_back({v.word, v.weight});
            r.norms.push_back(v.norm);
        }
    for (int i = 0; i < 2; ++i) {
        r.E[i] = RMatrix(r.dim, r.dim);
        r.F[i] = RMatrix(r.dim, r.dim);
        r.H[i] = RMatrix(r.dim, r.dim);
        for (std::size_t a = 0; a < r.dim; ++a)
            r.H[i](a, a) = r.basis[a].weight[i];
    }
    for (std::size_t d = 1; d < levels.size(); ++d)
        for (std::size_t a = 0; a < levels[d].size(); ++a)
            for (int i = 0; i < 2; ++i) {
                const Coords& e = levels[d][a].eimg[i];
                for (std::size_t t = 0; t < e.size(); ++t)
                    r.E[i](offset[d - 1] + t, offset[d] + a) = e[t];
            }
    for (std::size_t d = 0; d + 1 < levels.size(); ++d)
        for (int i = 0; i < 2; ++i)
            for (std::size_t b = 0; b < levels[d].size(); ++b) {
                const Coords& col = fmaps[d][i][b];
                for (std::size_t a = 0; a < col.size(); ++a)
                    r.F[i](offset[d + 1] + a, offset[d] + b) = col[a];
            }
    return r;
}

bool RelationReport::all_zero() const
{
    return std::all_of(relations.begin(), relations.end(),
                       [](const Relation& r) { return r.residual.is_zero(); });
}

RelationReport verify_defining_relations(const Representation& r)
{
    RelationReport rep;
    const auto& K = r.algebra.K;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            RMatrix ef = bracket(r.E[i], r.F[j]);
            if (i == j)
                ef -= r.H[j];
            rep.relations.push_back({fmt::format("[E{},F{}]{}", i + 1, j + 1, i == j ? fmt::format("-H{}", j + 1) : ""), ef});
        }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Rational kji = K[j][i];
            rep.relations.push_back({fmt::format("[H{},E{}]-K{}{}E{}", i + 1, j + 1, j + 1, i + 1, j + 1),
                                     bracket(r.H[i], r.E[j]) - kji * r.E[j]});
            rep.relations.push_back({fmt::format("[H{},F{}]+K{}{}F{}", i + 1, j + 1, j + 1, i + 1, j + 1),
                                     bracket(r.H[i], r.F[j]) + kji * r.F[j]});
        }
    rep.relations.push_back({"[H1,H2]", bracket(r.H[0], r.H[1])});
    return rep;
}

void write_dump(std::ostream& os, const Representation& r)
{
    os << "# fundamental representation p=" << r.algebra.p << " j=" << r.label << " dim=" << r.dim << '\n';
    os << "basis\n";
    for (std::size_t a = 0; a < r.dim; ++a)
        os << a << ' ' << r.basis[a].str() << " weight " << to_fraction(r.basis[a].weight[0]) << ' '
           << to_fraction(r.basis[a].weight[1]) << " norm " << to_fraction(r.norms[a]) << '\n';
    const char* names[6] = {"E1", "E2", "F1", "F2", "H1", "H2"};
    const RMatrix* mats[6] = {&r.E[0], &r.E[1], &r.F[0], &r.F[1], &r.H[0], &r.H[1]};
    for (int m = 0; m < 6; ++m) {
        os << "matrix " << names[m] << '\n';
        for (std::size_t i = 0; i < r.dim; ++i) {
            for (std::size_t j = 0; j < r.dim; ++j)
                os << (j ? " " : "") << to_fraction((*mats[m])(i, j));
            os << '\n';
        }
    }
}

std::string dump_string(const Representation& r)
{
    std::ostringstream os;
    write_dump(os, r);
    return os.str();
}

} // namespace toda
