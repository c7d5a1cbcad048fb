#include "bipot/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace bipot {

std::string format_real(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_string(ExtReal v)
{
    return v.is_finite() ? format_real(v.value()) : std::string("inf");
}

ExtReal parse_extreal(const std::string& token)
{
    std::string t = token;
    t.erase(0, t.find_first_not_of(" \t\r"));
    t.erase(t.find_last_not_of(" \t\r") + 1);
    if (t == "inf" || t == "+inf" || t == "Inf" || t == "INF") {
        return kPlusInf;
    }
    double v = 0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') {
        ++first;
    }
    auto res = std::from_chars(first, last, v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != last) {
        throw InvalidInput("not a real number or 'inf': '" + token + "'");
    }
    return ExtReal(v);
}

int Axis::nearest(double x) const
{
    const double t = std::round((x - lo) / spacing());
    if (!(t > 0)) {
        return 0;
    }
    return t >= n - 1 ? n - 1 : static_cast<int>(t);
}

namespace {

void validate(const Axis& a)
{
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
        throw InvalidInput("grid axis needs finite lo < hi");
    }
    if (a.n < 3) {
        throw InvalidInput("grid axis needs at least 3 nodes");
    }
}

} // namespace

Grid::Grid(double lo, double hi, int n) : dim_(1), axes_{Axis{lo, hi, n}, Axis{0.0, 0.0, 1}}
{
    validate(axes_[0]);
    size_ = static_cast<std::size_t>(n);
}

Grid::Grid(Axis a0, Axis a1) : dim_(2), axes_{a0, a1}
{
    validate(a0);
    validate(a1);
    size_ = static_cast<std::size_t>(a0.n) * static_cast<std::size_t>(a1.n);
}

double Grid::spacing() const
{
    return dim_ == 1 ? axes_[0].spacing() : std::max(axes_[0].spacing(), axes_[1].spacing());
}

NodeIndex Grid::multi(std::size_t k) const
{
    if (dim_ == 1) {
        return {static_cast<int>(k), 0};
    }
    const auto n1 = static_cast<std::size_t>(axes_[1].n);
    return {static_cast<int>(k / n1), static_cast<int>(k % n1)};
}

Point Grid::coord(std::size_t k) const
{
    const NodeIndex m = multi(k);
    if (dim_ == 1) {
        return {axes_[0].node(m[0]), 0.0};
    }
    return {axes_[0].node(m[0]), axes_[1].node(m[1])};
}

bool Grid::in_range(NodeIndex m) const
{
    if (m[0] < 0 || m[0] >= axes_[0].n) {
        return false;
    }
    return dim_ == 1 ? m[1] == 0 : (m[1] >= 0 && m[1] < axes_[1].n);
}

std::size_t Grid::nearest(Point p) const
{
    if (dim_ == 1) {
        return static_cast<std::size_t>(axes_[0].nearest(p[0]));
    }
    return flat(axes_[0].nearest(p[0]), axes_[1].nearest(p[1]));
}

std::string describe(const Grid& g)
{
    std::ostringstream os;
    for (int k = 0; k < g.dim(); ++k) {
        if (k > 0) {
            os << " x ";
        }
        os << '[' << format_real(g.axis(k).lo) << ',' << format_real(g.axis(k).hi) << "]/" << g.axis(k).n;
    }
    return os.str();
}

SampledFunction::SampledFunction(Grid g, std::vector<ExtReal> v) : grid(std::move(g)), vals(std::move(v))
{
    if (vals.size() != grid.size()) {
        throw InvalidInput("SampledFunction: value count does not match grid size");
    }
}

bool SampledFunction::domain_empty() const
{
    return std::none_of(vals.begin(), vals.end(), [](ExtReal v) { return v.is_finite(); });
}

std::size_t SampledFunction::domain_size() const
{
    return static_cast<std::size_t>(
        std::count_if(vals.begin(), vals.end(), [](ExtReal v) { return v.is_finite(); }));
}

double SampledFunction::scale() const
{
    double s = 0;
    for (ExtReal v : vals) {
        if (v.is_finite()) {
            s = std::max(s, std::abs(v.value()));
        }
    }
    return s;
}

SampledBivariate::SampledBivariate(Grid xg, Grid yg, ExtReal fill) : xgrid_(std::move(xg)), ygrid_(std::move(yg))
{
    if (xgrid_.dim() != ygrid_.dim()) {
        throw InvalidInput("SampledBivariate: X and Y grids must have the same dimension");
    }
    const std::size_t n = xgrid_.size() * ygrid_.size();
    if (n > kMaxEntries) {
        throw InvalidInput("SampledBivariate: product grid too large (" + std::to_string(n) +
                           " entries); use the slice-wise routines");
    }
    vals_.assign(n, fill);
}

SampledFunction SampledBivariate::x_slice(std::size_t ix) const
{
    SampledFunction s(ygrid_);
    std::copy_n(vals_.begin() + static_cast<std::ptrdiff_t>(ix * ny()), ny(), s.vals.begin());
    return s;
}

SampledFunction SampledBivariate::y_slice(std::size_t iy) const
{
    SampledFunction s(xgrid_);
    for (std::size_t ix = 0; ix < nx(); ++ix) {
        s.vals[ix] = at(ix, iy);
    }
    return s;
}

GraphSet::GraphSet(Grid xg, Grid yg) : xgrid_(std::move(xg)), ygrid_(std::move(yg))
{
    if (xgrid_.dim() != ygrid_.dim()) {
        throw InvalidInput("GraphSet: X and Y grids must have the same dimension");
    }
    bits_.assign(xgrid_.size() * ygrid_.size(), 0);
}

std::size_t GraphSet::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::pair<std::size_t, std::size_t>> GraphSet::pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t ny = ygrid_.size();
    for (std::size_t k = 0; k < bits_.size(); ++k) {
        if (bits_[k]) {
            out.emplace_back(k / ny, k % ny);
        }
    }
    return out;
}

std::vector<std::uint8_t> GraphSet::x_section(std::size_t ix) const
{
    const std::size_t ny = ygrid_.size();
    return {bits_.begin() + static_cast<std::ptrdiff_t>(ix * ny),
            bits_.begin() + static_cast<std::ptrdiff_t>((ix + 1) * ny)};
}

std::vector<std::uint8_t> GraphSet::y_section(std::size_t iy) const
{
    const std::size_t ny = ygrid_.size();
    std::vector<std::uint8_t> out(xgrid_.size());
    for (std::size_t ix = 0; ix < out.size(); ++ix) {
        out[ix] = bits_[ix * ny + iy];
    }
    return out;
}

namespace {

// Visits the flat indices of the 3^dim block around node k.
template <class F>
void for_each_neighbor(const Grid& g, std::size_t k, F&& f)
{
    const NodeIndex m = g.multi(k);
    const int r1 = g.dim() == 2 ? 1 : 0;
    for (int d0 = -1; d0 <= 1; ++d0) {
        for (int d1 = -r1; d1 <= r1; ++d1) {
            const NodeIndex q{m[0] + d0, m[1] + d1};
            if (g.in_range(q)) {
                if (f(g.flat(q))) {
                    return;
                }
            }
        }
    }
}

} // namespace

std::vector<std::uint8_t> dilate_one(const Grid& g, std::span<const std::uint8_t> mask)
{
    std::vector<std::uint8_t> out(mask.size(), 0);
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (mask[k]) {
            for_each_neighbor(g, k, [&](std::size_t q) {
                out[q] = 1;
                return false;
            });
        }
    }
    return out;
}

bool masks_equal_within_one_node(const Grid& g, std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                 std::size_t* witness)
{
    const auto da = dilate_one(g, a);
    const auto db = dilate_one(g, b);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if ((a[k] && !db[k]) || (b[k] && !da[k])) {
            if (witness) {
                *witness = k;
            }
            return false;
        }
    }
    return true;
}

namespace {

bool near_member(const GraphSet& s, std::size_t ix, std::size_t iy)
{
    bool hit = false;
    for_each_neighbor(s.xgrid(), ix, [&](std::size_t qx) {
        for_each_neighbor(s.ygrid(), iy, [&](std::size_t qy) {
            hit = s.contains(qx, qy);
            return hit;
        });
        return hit;
    });
    return hit;
}

} // namespace

NearEquality equal_within_one_node(const GraphSet& a, const GraphSet& b)
{
    if (!(a.xgrid() == b.xgrid()) || !(a.ygrid() == b.ygrid())) {
        throw InvalidInput("graph comparison across different grids");
    }
    const std::size_t ny = a.ygrid().size();
    for (std::size_t ix = 0; ix < a.xgrid().size(); ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const bool in_a = a.contains(ix, iy);
            const bool in_b = b.contains(ix, iy);
            if (in_a == in_b) {
                continue;
            }
            if ((in_a && !near_member(b, ix, iy)) || (in_b && !near_member(a, ix, iy))) {
                return {false, ix, iy};
            }
        }
    }
    return {};
}

} // namespace bipot
