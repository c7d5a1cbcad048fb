#include "bipot/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bipot {

namespace {

std::string node_str(const Grid& g, std::size_t k)
{
    const Point p = g.coord(k);
    std::string s = "(" + format_real(p[0]);
    if (g.dim() == 2) {
        s += "," + format_real(p[1]);
    }
    return s + ")";
}

// 1D test along one line of flat indices. Returns false and fills the report
// on the first violation.
bool check_line(const SampledFunction& f, const std::vector<std::size_t>& line, double tol, CheckReport& rep)
{
    // Contiguity of the finite run.
    std::size_t first = line.size();
    std::size_t last = 0;
    for (std::size_t t = 0; t < line.size(); ++t) {
        if (f[line[t]].is_finite()) {
            first = std::min(first, t);
            last = t;
        }
    }
    if (first == line.size()) {
        return true;
    }
    for (std::size_t t = first; t <= last; ++t) {
        if (!f[line[t]].is_finite()) {
            rep.fail("domain", "gap in the finite domain at " + node_str(f.grid, line[t]) + " between " +
                                   node_str(f.grid, line[first]) + " and " + node_str(f.grid, line[last]),
                     0.0);
            rep.witness_nodes = {line[first], line[t], line[last]};
            return false;
        }
    }
    for (std::size_t t = first + 1; t + 1 <= last; ++t) {
        const double d2 = f[line[t - 1]].value() - 2.0 * f[line[t]].value() + f[line[t + 1]].value();
        if (d2 < -tol) {
            rep.fail("convexity", "second difference " + format_real(d2) + " at " + node_str(f.grid, line[t]), -d2);
            rep.witness_nodes = {line[t - 1], line[t], line[t + 1]};
            return false;
        }
    }
    return true;
}

} // namespace

CheckReport is_convex(const SampledFunction& f, double tol)
{
    if (!(tol >= 0)) {
        throw InvalidInput("is_convex: tol must be >= 0");
    }
    CheckReport rep = CheckReport::pass("is_convex");
    rep.note("tol", tol);
    const Grid& g = f.grid;
    for (int k = 0; k < g.dim(); ++k) {
        if (g.axis(k).n < 3) {
            throw InvalidInput("is_convex: need at least 3 nodes per axis");
        }
    }
    if (f.domain_empty()) {
        rep.note("domain", "empty");
        return rep;
    }
    if (g.dim() == 1) {
        std::vector<std::size_t> line(g.size());
        std::iota(line.begin(), line.end(), std::size_t{0});
        check_line(f, line, tol, rep);
        return rep;
    }
    static constexpr std::array<NodeIndex, 4> kDirs{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
    std::vector<std::size_t> line;
    for (const NodeIndex& d : kDirs) {
        for (std::size_t k = 0; k < g.size(); ++k) {
            const NodeIndex m = g.multi(k);
            if (g.in_range({m[0] - d[0], m[1] - d[1]})) {
                continue; // not a line start
            }
            line.clear();
            for (NodeIndex q = m; g.in_range(q); q = {q[0] + d[0], q[1] + d[1]}) {
                line.push_back(g.flat(q));
            }
            if (line.size() >= 3 && !check_line(f, line, tol, rep)) {
                return rep;
            }
        }
    }
    return rep;
}

std::vector<std::uint8_t> make_mask(const Grid& g, const std::vector<std::size_t>& points)
{
    std::vector<std::uint8_t> mask(g.size(), 0);
    for (std::size_t k : points) {
        if (k >= g.size()) {
            throw InvalidInput("node index out of range: " + std::to_string(k));
        }
        mask[k] = 1;
    }
    return mask;
}

std::vector<std::size_t> mask_members(std::span<const std::uint8_t> mask)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (mask[k]) {
            out.push_back(k);
        }
    }
    return out;
}

namespace {

long long cross(const NodeIndex& o, const NodeIndex& a, const NodeIndex& b)
{
    return static_cast<long long>(a[0] - o[0]) * (b[1] - o[1]) - static_cast<long long>(a[1] - o[1]) * (b[0] - o[0]);
}

} // namespace

std::vector<NodeIndex> lattice_hull(std::vector<NodeIndex> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<NodeIndex> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) {
            --k;
        }
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) {
            --k;
        }
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

CheckReport is_set_convex(std::span<const std::uint8_t> mask, const Grid& g)
{
    if (mask.size() != g.size()) {
        throw InvalidInput("is_set_convex: mask size does not match grid");
    }
    CheckReport rep = CheckReport::pass("is_set_convex");
    const auto members = mask_members(mask);
    if (members.empty()) {
        throw InvalidInput("is_set_convex: empty set");
    }
    auto missing = [&](std::size_t k) {
        rep.fail("set-convexity", "missing node " + node_str(g, k), 0.0);
        rep.witness_nodes = {k};
        return rep;
    };

    if (g.dim() == 1) {
        for (std::size_t k = members.front(); k <= members.back(); ++k) {
            if (!mask[k]) {
                return missing(k);
            }
        }
        return rep;
    }

    std::vector<NodeIndex> pts;
    pts.reserve(members.size());
    for (std::size_t k : members) {
        pts.push_back(g.multi(k));
    }
    const auto hull = lattice_hull(pts);
    if (hull.size() <= 1) {
        return rep;
    }
    if (hull.size() == 2) {
        // Collinear members: every lattice point of the segment must be present.
        const NodeIndex a = hull[0];
        const NodeIndex b = hull[1];
        const int steps = std::gcd(std::abs(b[0] - a[0]), std::abs(b[1] - a[1]));
        const int s0 = (b[0] - a[0]) / steps;
        const int s1 = (b[1] - a[1]) / steps;
        for (int t = 0; t <= steps; ++t) {
            const std::size_t k = g.flat(a[0] + t * s0, a[1] + t * s1);
            if (!mask[k]) {
                return missing(k);
            }
        }
        rep.note("hull", "degenerate");
        return rep;
    }

    const double h0 = g.axis(0).spacing();
    const double h1 = g.axis(1).spacing();
    const double margin = 0.5 * g.spacing();
    // Edge normals in physical units, for the distance margin.
    struct Edge {
        NodeIndex a;
        NodeIndex b;
        double inv_len;
    };
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < hull.size(); ++e) {
        const NodeIndex a = hull[e];
        const NodeIndex b = hull[(e + 1) % hull.size()];
        const double dx = (b[0] - a[0]) * h0;
        const double dy = (b[1] - a[1]) * h1;
        edges.push_back({a, b, 1.0 / std::hypot(dx, dy)});
    }
    int lo0 = hull[0][0], hi0 = hull[0][0], lo1 = hull[0][1], hi1 = hull[0][1];
    for (const auto& p : hull) {
        lo0 = std::min(lo0, p[0]);
        hi0 = std::max(hi0, p[0]);
        lo1 = std::min(lo1, p[1]);
        hi1 = std::max(hi1, p[1]);
    }
    for (int i = lo0; i <= hi0; ++i) {
        for (int j = lo1; j <= hi1; ++j) {
            const std::size_t k = g.flat(i, j);
            if (mask[k]) {
                continue;
            }
            bool deep = true;
            for (const Edge& e : edges) {
                const long long c = cross(e.a, e.b, {i, j});
                // Signed distance to the edge line, positive inside (CCW hull).
                const double dist = static_cast<double>(c) * h0 * h1 * e.inv_len;
                if (c < 0 || dist <= margin) {
                    deep = false;
                    break;
                }
            }
            if (deep) {
                return missing(k);
            }
        }
    }
    return rep;
}

CheckReport is_set_convex(const std::vector<std::size_t>& points, const Grid& g)
{
    if (points.empty()) {
        throw InvalidInput("is_set_convex: empty set");
    }
    const auto mask = make_mask(g, points);
    return is_set_convex(std::span<const std::uint8_t>(mask), g);
}

} // namespace bipot
