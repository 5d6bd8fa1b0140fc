#include "toda/generators.hpp"

namespace toda {

std::string GenExpr::str() const
{
    switch (kind) {
    case Kind::Raise:
        return "X+" + std::to_string(index);
    case Kind::Lower:
        return "X-" + std::to_string(index);
    case Kind::Cartan:
        return "h" + std::to_string(index);
    case Kind::Bracket:
        return "[" + args[0].str() + "," + args[1].str() + "]";
    }
    return {};
}

std::array<int, 2> GenExpr::root() const
{
    switch (kind) {
    case Kind::Raise:
        return {index == 1 ? 1 : 0, index == 2 ? 1 : 0};
    case Kind::Lower:
        return {index == 1 ? -1 : 0, index == 2 ? -1 : 0};
    case Kind::Cartan:
        return {0, 0};
    case Kind::Bracket: {
        auto a = args[0].root(), b = args[1].root();
        return {a[0] + b[0], a[1] + b[1]};
    }
    }
    return {0, 0};
}

int GenExpr::length() const
{
    return kind == Kind::Bracket ? args[0].length() + args[1].length() : 1;
}

RMatrix evaluate(const GenExpr& e, const Representation& r)
{
    switch (e.kind) {
    case GenExpr::Kind::Raise:
        return r.raise(e.index);
    case GenExpr::Kind::Lower:
        return r.lower(e.index);
    case GenExpr::Kind::Cartan:
        return r.cartan(e.index);
    case GenExpr::Kind::Bracket:
        return bracket(evaluate(e.args[0], r), evaluate(e.args[1], r));
    }
    return {};
}

GenExpr conjugate(const GenExpr& e)
{
    switch (e.kind) {
    case GenExpr::Kind::Raise:
        return GenExpr::lower(e.index);
    case GenExpr::Kind::Lower:
        return GenExpr::raise(e.index);
    case GenExpr::Kind::Cartan:
        return e;
    case GenExpr::Kind::Bracket:
        return GenExpr::br(conjugate(e.args[1]), conjugate(e.args[0]));
    }
    return e;
}

GenExpr left_normed(const std::vector<int>& letters, bool raising)
{
    if (letters.empty())
        throw InvalidParameter("left_normed: empty word");
    auto leaf = [&](int i) { return raising ? GenExpr::raise(i) : GenExpr::lower(i); };
    GenExpr e = leaf(letters[0]);
    for (std::size_t k = 1; k < letters.size(); ++k)
        e = GenExpr::br(e, leaf(letters[k]));
    return e;
}

} // namespace toda
