#include "bipot/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bipot {

bool legendre_1d(std::span<const double> xs, std::span<const double> vs, std::span<const double> ys,
                 std::span<double> out)
{
    const std::size_t n = xs.size();
    if (n == 0) {
        return false;
    }
    // Lower convex hull, left to right; points on or above a chord are dropped.
    std::vector<std::size_t> hull;
    hull.reserve(n);
    for (std::size_t p = 0; p < n; ++p) {
        while (hull.size() >= 2) {
            const std::size_t o = hull[hull.size() - 2];
            const std::size_t a = hull.back();
            const double cr = (xs[a] - xs[o]) * (vs[p] - vs[o]) - (vs[a] - vs[o]) * (xs[p] - xs[o]);
            if (cr > 0) {
                break;
            }
            hull.pop_back();
        }
        hull.push_back(p);
    }
    const std::size_t nh = hull.size();
    std::vector<double> slope(nh > 0 ? nh - 1 : 0);
    for (std::size_t e = 0; e + 1 < nh; ++e) {
        slope[e] = (vs[hull[e + 1]] - vs[hull[e]]) / (xs[hull[e + 1]] - xs[hull[e]]);
    }

    // Walk the ys in order. The maximizer for slope y is the hull vertex k with
    // slope[k-1] < y <= slope[k]; near-ties are resolved by evaluating every
    // original point spanned by the edges whose slopes lie within a relative
    // 1e-9 of y, which keeps the float maximum identical to exhaustive search.
    std::size_t k = 0;
    for (std::size_t t = 0; t < ys.size(); ++t) {
        const double y = ys[t];
        while (k + 1 < nh && slope[k] < y) {
            ++k;
        }
        while (k > 0 && slope[k - 1] >= y) {
            --k; // ys not ascending
        }
        const double delta = 1e-9 * (1.0 + std::abs(y));
        std::size_t lo = k;
        std::size_t hi = k;
        while (lo > 0 && slope[lo - 1] >= y - delta) {
            --lo;
        }
        while (hi + 1 < nh && slope[hi] <= y + delta) {
            ++hi;
        }
        // One extra vertex on each side guards against slope rounding.
        lo = lo > 0 ? lo - 1 : lo;
        hi = hi + 1 < nh ? hi + 1 : hi;
        const std::size_t first = hull[lo];
        const std::size_t last = hull[hi];
        double best = xs[first] * y - vs[first];
        for (std::size_t p = first + 1; p <= last; ++p) {
            const double v = xs[p] * y - vs[p];
            if (v > best) {
                best = v;
            }
        }
        out[t] = best;
    }
    return true;
}

namespace {

std::vector<double> axis_nodes(const Axis& a)
{
    std::vector<double> v(static_cast<std::size_t>(a.n));
    for (int i = 0; i < a.n; ++i) {
        v[static_cast<std::size_t>(i)] = a.node(i);
    }
    return v;
}

SampledFunction apply_cap(const Grid& yg, const std::vector<double>& raw, double cap)
{
    SampledFunction out(yg);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out.vals[k] = raw[k] > cap ? kPlusInf : ExtReal(raw[k]);
    }
    return out;
}

} // namespace

bool conjugate_raw(const Grid& xg, std::span<const ExtReal> vals, const Grid& yg, std::span<double> out)
{
    if (xg.dim() != yg.dim()) {
        throw InvalidInput("conjugate: X and Y grids must have the same dimension");
    }
    if (xg.dim() == 1) {
        const auto xn = axis_nodes(xg.axis(0));
        std::vector<double> xs, vs;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (vals[i].is_finite()) {
                xs.push_back(xn[i]);
                vs.push_back(vals[i].value());
            }
        }
        return legendre_1d(xs, vs, axis_nodes(yg.axis(0)), out);
    }

    const int n0 = xg.axis(0).n;
    const int n1 = xg.axis(1).n;
    const int m0 = yg.axis(0).n;
    const int m1 = yg.axis(1).n;
    const auto x0 = axis_nodes(xg.axis(0));
    const auto x1 = axis_nodes(xg.axis(1));
    const auto y0 = axis_nodes(yg.axis(0));
    const auto y1 = axis_nodes(yg.axis(1));

    // Stage 1: g(i, y1) = max_j x1_j·y1 - φ(i, j), per x0-row.
    std::vector<double> g(static_cast<std::size_t>(n0) * static_cast<std::size_t>(m1));
    std::vector<char> row_live(static_cast<std::size_t>(n0), 0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n0; ++i) {
        std::vector<double> xs, vs;
        for (int j = 0; j < n1; ++j) {
            const ExtReal v = vals[xg.flat(i, j)];
            if (v.is_finite()) {
                xs.push_back(x1[static_cast<std::size_t>(j)]);
                vs.push_back(v.value());
            }
        }
        std::span<double> dst(g.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(m1),
                              static_cast<std::size_t>(m1));
        row_live[static_cast<std::size_t>(i)] = legendre_1d(xs, vs, y1, dst) ? 1 : 0;
    }
    if (std::none_of(row_live.begin(), row_live.end(), [](char c) { return c != 0; })) {
        return false;
    }
    // Stage 2: out(y0, y1) = max_i x0_i·y0 - (-g(i, y1)).
#pragma omp parallel for schedule(static)
    for (int jy = 0; jy < m1; ++jy) {
        std::vector<double> xs, vs;
        for (int i = 0; i < n0; ++i) {
            if (row_live[static_cast<std::size_t>(i)]) {
                xs.push_back(x0[static_cast<std::size_t>(i)]);
                vs.push_back(-g[static_cast<std::size_t>(i) * static_cast<std::size_t>(m1) +
                                static_cast<std::size_t>(jy)]);
            }
        }
        std::vector<double> col(static_cast<std::size_t>(m0));
        legendre_1d(xs, vs, y0, col);
        for (int iy = 0; iy < m0; ++iy) {
            out[yg.flat(iy, jy)] = col[static_cast<std::size_t>(iy)];
        }
    }
    return true;
}

SampledFunction conjugate(const SampledFunction& phi, const Grid& ygrid, double cap)
{
    std::vector<double> raw(ygrid.size());
    if (!conjugate_raw(phi.grid, phi.vals, ygrid, raw)) {
        throw InvalidInput("conjugate: dom(phi) is empty");
    }
    return apply_cap(ygrid, raw, cap);
}

SampledFunction conjugate_bruteforce(const SampledFunction& phi, const Grid& ygrid, double cap)
{
    if (phi.grid.dim() != ygrid.dim()) {
        throw InvalidInput("conjugate: X and Y grids must have the same dimension");
    }
    if (phi.domain_empty()) {
        throw InvalidInput("conjugate: dom(phi) is empty");
    }
    const Grid& xg = phi.grid;
    std::vector<double> raw(ygrid.size(), -std::numeric_limits<double>::max());
    for (std::size_t iy = 0; iy < ygrid.size(); ++iy) {
        const Point y = ygrid.coord(iy);
        double best = 0;
        bool any = false;
        for (std::size_t ix = 0; ix < xg.size(); ++ix) {
            if (!phi[ix].is_finite()) {
                continue;
            }
            const Point x = xg.coord(ix);
            const double v = xg.dim() == 1 ? x[0] * y[0] - phi[ix].value()
                                           : x[0] * y[0] + (x[1] * y[1] - phi[ix].value());
            if (!any || v > best) {
                best = v;
                any = true;
            }
        }
        raw[iy] = best;
    }
    return apply_cap(ygrid, raw, cap);
}

Grid default_dual_grid(const SampledFunction& phi)
{
    const Grid& g = phi.grid;
    if (phi.domain_empty()) {
        throw InvalidInput("default_dual_grid: dom(phi) is empty");
    }
    auto axis_for = [&](int a) -> Axis {
        const Axis& ax = g.axis(a);
        const double h = ax.spacing();
        double smin = std::numeric_limits<double>::infinity();
        double smax = -smin;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!phi[k].is_finite()) {
                continue;
            }
            NodeIndex m = g.multi(k);
            m[static_cast<std::size_t>(a)] += 1;
            if (!g.in_range(m)) {
                continue;
            }
            const ExtReal nb = phi[g.flat(m)];
            if (nb.is_finite()) {
                const double s = (nb.value() - phi[k].value()) / h;
                smin = std::min(smin, s);
                smax = std::max(smax, s);
            }
        }
        if (!(smax >= smin)) {
            return ax;
        }
        if (!(smax > smin)) {
            return Axis{smin - 1.0, smax + 1.0, ax.n};
        }
        const double pad = 0.1 * (smax - smin);
        return Axis{smin - pad, smax + pad, ax.n};
    };
    if (g.dim() == 1) {
        const Axis a = axis_for(0);
        return Grid(a.lo, a.hi, a.n);
    }
    return Grid(axis_for(0), axis_for(1));
}

ExtReal ConjugatePair::residual(std::size_t ix, std::size_t iy) const
{
    const ExtReal a = phi[ix];
    const ExtReal b = phistar[iy];
    if (!a.is_finite() || !b.is_finite()) {
        return kPlusInf;
    }
    return ExtReal(a.value() + b.value() - dot(phi.grid.dim(), phi.grid.coord(ix), phistar.grid.coord(iy)));
}

double ConjugatePair::default_tol(std::size_t iy) const
{
    const Point y = phistar.grid.coord(iy);
    const double norm = phi.grid.dim() == 1 ? std::abs(y[0]) : std::hypot(y[0], y[1]);
    return std::max(phi.grid.spacing(), phistar.grid.spacing()) * (1.0 + norm);
}

namespace {

void verify_fenchel_young(const ConjugatePair& pair)
{
    const SampledFunction& phi = pair.phi;
    const std::size_t ny = pair.phistar.size();
    for (std::size_t ix = 0; ix < phi.size(); ++ix) {
        if (!phi[ix].is_finite()) {
            continue;
        }
        const double slack = pair.fy_tol * (1.0 + std::abs(phi[ix].value()));
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const ExtReal r = pair.residual(ix, iy);
            if (r.is_finite() && r.value() < -slack) {
                throw std::logic_error("Fenchel-Young inequality violated at node pair (" + std::to_string(ix) +
                                       "," + std::to_string(iy) + ")");
            }
        }
    }
}

} // namespace

ConjugatePair make_conjugate_pair(const SampledFunction& phi, const Grid& ygrid, double fy_tol, double cap)
{
    ConjugatePair pair{phi, conjugate(phi, ygrid, cap), fy_tol};
    verify_fenchel_young(pair);
    return pair;
}

ConjugatePair make_conjugate_pair(const SampledFunction& phi, const SampledFunction& phistar, double fy_tol)
{
    if (phi.grid.dim() != phistar.grid.dim()) {
        throw InvalidInput("conjugate pair: X and Y grids must have the same dimension");
    }
    if (phi.domain_empty() || phistar.domain_empty()) {
        throw InvalidInput("conjugate pair: empty domain");
    }
    ConjugatePair pair{phi, phistar, fy_tol};
    verify_fenchel_young(pair);
    return pair;
}

std::vector<std::size_t> subdiff_points(const ConjugatePair& pair, std::size_t iy, double tol)
{
    std::vector<std::size_t> out;
    if (!pair.phistar[iy].is_finite()) {
        return out;
    }
    for (std::size_t ix = 0; ix < pair.phi.size(); ++ix) {
        const ExtReal r = pair.residual(ix, iy);
        if (r.is_finite() && r.value() <= tol) {
            out.push_back(ix);
        }
    }
    return out;
}

double biconjugate_residual(const SampledFunction& phi)
{
    const SampledFunction star = conjugate(phi, default_dual_grid(phi));
    const SampledFunction bi = conjugate(star, phi.grid);
    double r = 0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (phi[k].is_finite() && bi[k].is_finite()) {
            r = std::max(r, std::abs(bi[k].value() - phi[k].value()));
        }
    }
    return r;
}

} // namespace bipot
