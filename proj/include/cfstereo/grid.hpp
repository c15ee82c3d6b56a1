#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cfstereo/errors.hpp"

namespace cfstereo {

/// Storage scalar for every grid in the library.
using Real = double;

/// Dense row-major array of fixed rank. The last axis is contiguous.
///
/// Volumes use the axis order (feature, plane, row, column); score volumes
/// drop the feature axis and 2D maps are (row, column).
template <std::size_t Rank>
class Grid {
public:
    using Shape = std::array<std::size_t, Rank>;

    Grid() { shape_.fill(0); }

    explicit Grid(const Shape& shape, Real fill = Real(0))
        : shape_(shape), data_(count(shape), fill) {
        for (std::size_t d : shape_) {
            if (d == 0) throw ShapeError("grid dimensions must be positive");
        }
    }

    Grid(const Shape& shape, std::vector<Real> data) : shape_(shape), data_(std::move(data)) {
        if (data_.size() != count(shape_)) {
            throw ShapeError("grid data length " + std::to_string(data_.size()) +
                             " does not match shape volume " + std::to_string(count(shape_)));
        }
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t dim(std::size_t axis) const noexcept { return shape_[axis]; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    Real* data() noexcept { return data_.data(); }
    const Real* data() const noexcept { return data_.data(); }
    std::span<Real> values() noexcept { return data_; }
    std::span<const Real> values() const noexcept { return data_; }
    std::vector<Real>& storage() noexcept { return data_; }
    const std::vector<Real>& storage() const noexcept { return data_; }

    template <typename... I>
    Real& operator()(I... idx) noexcept {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }
    template <typename... I>
    const Real& operator()(I... idx) const noexcept {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    /// Offset of an index tuple into the flat buffer.
    std::size_t offset(const Shape& idx) const noexcept {
        std::size_t off = 0;
        for (std::size_t a = 0; a < Rank; ++a) off = off * shape_[a] + idx[a];
        return off;
    }

    /// Number of elements spanned by one step along `axis`.
    std::size_t stride(std::size_t axis) const noexcept {
        std::size_t s = 1;
        for (std::size_t a = axis + 1; a < Rank; ++a) s *= shape_[a];
        return s;
    }

    /// Pointer to the contiguous last-axis row selected by the leading indices.
    template <typename... I>
    Real* row(I... lead) noexcept {
        static_assert(sizeof...(I) == Rank - 1);
        return data_.data() + row_offset({static_cast<std::size_t>(lead)...});
    }
    template <typename... I>
    const Real* row(I... lead) const noexcept {
        static_assert(sizeof...(I) == Rank - 1);
        return data_.data() + row_offset({static_cast<std::size_t>(lead)...});
    }

    static std::size_t count(const Shape& shape) noexcept {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.shape_ == b.shape_ && a.data_ == b.data_;
    }

private:
    std::size_t row_offset(const std::array<std::size_t, Rank - 1>& lead) const noexcept {
        std::size_t off = 0;
        for (std::size_t a = 0; a + 1 < Rank; ++a) off = off * shape_[a] + lead[a];
        return off * shape_[Rank - 1];
    }

    Shape shape_;
    std::vector<Real> data_;
};

using Grid2D = Grid<2>;
using Grid3D = Grid<3>;
using Grid4D = Grid<4>;

/// Shape of a grid rendered as "(a, b, c)".
template <std::size_t Rank>
std::string shape_string(const typename Grid<Rank>::Shape& shape) {
    std::string s = "(";
    for (std::size_t a = 0; a < Rank; ++a) {
        if (a) s += ", ";
        s += std::to_string(shape[a]);
    }
    return s + ")";
}

template <std::size_t Rank>
std::string shape_string(const Grid<Rank>& g) {
    return shape_string<Rank>(g.shape());
}

}  // namespace cfstereo
