#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "aclab/errors.hpp"
#include "aclab/rational.hpp"

namespace aclab {

// Shade tuple (j_1, ..., j_g), each j_i in 1..t_i.
using ShadeTuple = std::vector<int>;

std::uint64_t shape_volume(const std::vector<int>& shape);

// Dense function on [t_1] x ... x [t_g], stored row-major with the last
// coordinate fastest. The empty shape holds exactly one entry.
template <class T>
class TableFunction {
public:
    TableFunction() : entries_(1) {}
    explicit TableFunction(std::vector<int> shape, T fill = T{})
        : shape_(std::move(shape)), entries_(shape_volume(shape_), fill)
    {
    }
    TableFunction(std::vector<int> shape, std::vector<T> entries)
        : shape_(std::move(shape)), entries_(std::move(entries))
    {
        if (entries_.size() != shape_volume(shape_))
            throw ValidationError("table entry count does not match its shape");
    }

    const std::vector<int>& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<T>& entries() const noexcept { return entries_; }

    T& operator[](std::size_t flat) { return entries_[flat]; }
    const T& operator[](std::size_t flat) const { return entries_[flat]; }

    std::size_t flat_index(const ShadeTuple& shades) const
    {
        if (shades.size() != shape_.size()) throw ValidationError("shade tuple has wrong length");
        std::size_t idx = 0;
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            if (shades[i] < 1 || shades[i] > shape_[i]) throw ValidationError("shade out of range");
            idx = idx * static_cast<std::size_t>(shape_[i]) + static_cast<std::size_t>(shades[i] - 1);
        }
        return idx;
    }

    ShadeTuple tuple_at(std::size_t flat) const
    {
        ShadeTuple out(shape_.size());
        for (std::size_t i = shape_.size(); i-- > 0;) {
            out[i] = static_cast<int>(flat % static_cast<std::size_t>(shape_[i])) + 1;
            flat /= static_cast<std::size_t>(shape_[i]);
        }
        return out;
    }

    T& at(const ShadeTuple& shades) { return entries_[flat_index(shades)]; }
    const T& at(const ShadeTuple& shades) const { return entries_[flat_index(shades)]; }

    friend bool operator==(const TableFunction& a, const TableFunction& b)
    {
        return a.shape_ == b.shape_ && a.entries_ == b.entries_;
    }

private:
    std::vector<int> shape_;
    std::vector<T> entries_;
};

using IntTable = TableFunction<std::int64_t>;
using RationalTable = TableFunction<Rational>;

inline std::uint64_t shape_volume(const std::vector<int>& shape)
{
    std::uint64_t v = 1;
    for (int s : shape) {
        if (s < 1) throw ValidationError("table shape entries must be positive");
        v *= static_cast<std::uint64_t>(s);
    }
    return v;
}

RationalTable to_rational(const IntTable& table);

// max over entries of |a - b|; shapes must agree.
Rational sup_distance(const RationalTable& a, const RationalTable& b);

} // namespace aclab
