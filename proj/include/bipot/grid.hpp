#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bipot/extreal.hpp"

namespace bipot {

/// One uniform axis: nodes lo + i·h, i = 0..n-1, h = (hi-lo)/(n-1).
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 3;

    double spacing() const { return (hi - lo) / (n - 1); }
    double node(int i) const { return lo + i * spacing(); }
    /// Nearest node index, clamped to the axis.
    int nearest(double x) const;

    friend bool operator==(const Axis&, const Axis&) = default;
};

using Point = std::array<double, 2>;
using NodeIndex = std::array<int, 2>;

/// Uniform grid over a box in R^1 or R^2. Flat indices are row-major, the
/// first axis outermost.
class Grid {
public:
    Grid() = default;
    /// 1D grid. Throws InvalidInput unless lo < hi and n >= 3.
    Grid(double lo, double hi, int n);
    /// 2D grid over the product of the two axes.
    Grid(Axis a0, Axis a1);

    static Grid square(double lo, double hi, int n) { return Grid(Axis{lo, hi, n}, Axis{lo, hi, n}); }

    int dim() const { return dim_; }
    const Axis& axis(int k) const { return axes_[static_cast<std::size_t>(k)]; }
    std::size_t size() const { return size_; }
    /// Largest per-axis spacing.
    double spacing() const;

    std::size_t flat(int i0, int i1 = 0) const
    {
        return dim_ == 1 ? static_cast<std::size_t>(i0)
                         : static_cast<std::size_t>(i0) * static_cast<std::size_t>(axes_[1].n) +
                               static_cast<std::size_t>(i1);
    }
    std::size_t flat(NodeIndex m) const { return flat(m[0], m[1]); }
    NodeIndex multi(std::size_t k) const;
    Point coord(std::size_t k) const;
    bool in_range(NodeIndex m) const;
    /// Index of the node nearest to p (clamped to the box).
    std::size_t nearest(Point p) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int dim_ = 1;
    std::array<Axis, 2> axes_{Axis{}, Axis{0.0, 0.0, 1}};
    std::size_t size_ = 3;
};

/// ⟨x, y⟩ with the dimension taken from the grid.
inline double dot(int dim, const Point& x, const Point& y)
{
    return dim == 1 ? x[0] * y[0] : x[0] * y[0] + x[1] * y[1];
}

std::string describe(const Grid& g);

/// Extended-real samples of a function on a grid.
struct SampledFunction {
    Grid grid;
    std::vector<ExtReal> vals;

    SampledFunction() = default;
    explicit SampledFunction(Grid g) : grid(std::move(g)), vals(grid.size(), kPlusInf) {}
    SampledFunction(Grid g, std::vector<ExtReal> v);

    ExtReal operator[](std::size_t k) const { return vals[k]; }
    ExtReal& operator[](std::size_t k) { return vals[k]; }
    std::size_t size() const { return vals.size(); }
    bool domain_empty() const;
    std::size_t domain_size() const;
    /// max |value| over finite nodes (0 when the domain is empty).
    double scale() const;
};

/// Evaluates f at every node of g.
template <class F>
SampledFunction sample(const Grid& g, F&& f)
{
    SampledFunction out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        out.vals[k] = ExtReal(f(g.coord(k)));
    }
    return out;
}

/// Extended-real samples on the product grid X × Y. Entry (ix, iy) lives at
/// ix·|Y| + iy.
class SampledBivariate {
public:
    /// Refuses to allocate more than this many entries.
    static constexpr std::size_t kMaxEntries = std::size_t{1} << 26;

    SampledBivariate() = default;
    SampledBivariate(Grid xg, Grid yg, ExtReal fill = kPlusInf);

    const Grid& xgrid() const { return xgrid_; }
    const Grid& ygrid() const { return ygrid_; }
    std::size_t nx() const { return xgrid_.size(); }
    std::size_t ny() const { return ygrid_.size(); }

    ExtReal at(std::size_t ix, std::size_t iy) const { return vals_[ix * ny() + iy]; }
    ExtReal& at(std::size_t ix, std::size_t iy) { return vals_[ix * ny() + iy]; }
    std::span<const ExtReal> values() const { return vals_; }
    std::span<ExtReal> values() { return vals_; }

    /// b(x, ·) as a function on the Y-grid.
    SampledFunction x_slice(std::size_t ix) const;
    /// b(·, y) as a function on the X-grid.
    SampledFunction y_slice(std::size_t iy) const;

    double pairing(std::size_t ix, std::size_t iy) const
    {
        return dot(xgrid_.dim(), xgrid_.coord(ix), ygrid_.coord(iy));
    }

private:
    Grid xgrid_;
    Grid ygrid_;
    std::vector<ExtReal> vals_;
};

/// Evaluates f(x, y) at every node pair.
template <class F>
SampledBivariate sample(const Grid& xg, const Grid& yg, F&& f)
{
    SampledBivariate out(xg, yg);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const Point x = xg.coord(ix);
        for (std::size_t iy = 0; iy < yg.size(); ++iy) {
            out.at(ix, iy) = ExtReal(f(x, yg.coord(iy)));
        }
    }
    return out;
}

/// Finite set of node pairs (x-node, y-node), stored as a dense membership map.
class GraphSet {
public:
    GraphSet() = default;
    GraphSet(Grid xg, Grid yg);

    const Grid& xgrid() const { return xgrid_; }
    const Grid& ygrid() const { return ygrid_; }

    bool contains(std::size_t ix, std::size_t iy) const { return bits_[ix * ygrid_.size() + iy] != 0; }
    void insert(std::size_t ix, std::size_t iy) { bits_[ix * ygrid_.size() + iy] = 1; }
    void erase(std::size_t ix, std::size_t iy) { bits_[ix * ygrid_.size() + iy] = 0; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    /// Membership mask over the Y-grid of M(x).
    std::vector<std::uint8_t> x_section(std::size_t ix) const;
    /// Membership mask over the X-grid of M*(y) = {x : (x, y) ∈ M}.
    std::vector<std::uint8_t> y_section(std::size_t iy) const;

    /// Minkowski clipping flag, set by blur constructions that lost offsets at the box edge.
    bool clipped = false;

    friend bool operator==(const GraphSet& a, const GraphSet& b)
    {
        return a.xgrid_ == b.xgrid_ && a.ygrid_ == b.ygrid_ && a.bits_ == b.bits_;
    }

    std::span<const std::uint8_t> bits() const { return bits_; }

private:
    Grid xgrid_;
    Grid ygrid_;
    std::vector<std::uint8_t> bits_;
};

/// Node-wise dilation of a mask by one node in every direction (Chebyshev).
std::vector<std::uint8_t> dilate_one(const Grid& g, std::span<const std::uint8_t> mask);

/// Set equality up to one node per axis: each set lies inside the one-node
/// dilation of the other. Returns the first offending pair when they differ.
struct NearEquality {
    bool equal = true;
    std::size_t ix = 0;
    std::size_t iy = 0;
};
NearEquality equal_within_one_node(const GraphSet& a, const GraphSet& b);

/// Same comparison for two masks over one grid.
bool masks_equal_within_one_node(const Grid& g, std::span<const std::uint8_t> a,
                                 std::span<const std::uint8_t> b, std::size_t* witness = nullptr);

} // namespace bipot
