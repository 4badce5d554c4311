#include "aclab/table.hpp"

namespace aclab {

RationalTable to_rational(const IntTable& table)
{
    std::vector<Rational> entries;
    entries.reserve(table.size());
    for (auto v : table.entries()) entries.emplace_back(static_cast<long>(v));
    return RationalTable(table.shape(), std::move(entries));
}

Rational sup_distance(const RationalTable& a, const RationalTable& b)
{
    if (a.shape() != b.shape()) throw ValidationError("tables have different shapes");
    Rational best = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational d = abs(a[i] - b[i]);
        if (d > best) best = d;
    }
    return best;
}

} // namespace aclab
