#include "bipot/bipotential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bipot/convexity.hpp"
#include "bipot/legendre.hpp"

namespace bipot {

namespace {

std::string pt(const Grid& g, std::size_t k)
{
    const Point p = g.coord(k);
    return g.dim() == 1 ? format_real(p[0]) : "(" + format_real(p[0]) + "," + format_real(p[1]) + ")";
}

std::string pair_str(const SampledBivariate& b, std::size_t ix, std::size_t iy)
{
    return "x=" + pt(b.xgrid(), ix) + " y=" + pt(b.ygrid(), iy);
}

double slice_tol(const SampledFunction& s, double rel) { return rel * (1.0 + s.scale()); }

} // namespace

SampledBivariate sync_from_bipotential(const SampledBivariate& b)
{
    SampledBivariate c(b.xgrid(), b.ygrid());
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            c.at(ix, iy) = b.at(ix, iy) - b.pairing(ix, iy);
        }
    }
    return c;
}

SampledBivariate bipotential_from_sync(const SampledBivariate& c)
{
    SampledBivariate b(c.xgrid(), c.ygrid());
    for (std::size_t ix = 0; ix < c.nx(); ++ix) {
        for (std::size_t iy = 0; iy < c.ny(); ++iy) {
            const ExtReal v = c.at(ix, iy);
            if (v < ExtReal(0.0)) {
                throw InvalidInput("bipotential_from_sync: negative sync value at node pair (" +
                                   std::to_string(ix) + "," + std::to_string(iy) + ")");
            }
            b.at(ix, iy) = v + c.pairing(ix, iy);
        }
    }
    return b;
}

SampledBivariate separable(const SampledFunction& phi, const Grid& ygrid)
{
    const SampledFunction star = conjugate(phi, ygrid);
    SampledBivariate b(phi.grid, ygrid);
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            b.at(ix, iy) = phi[ix] + star[iy];
        }
    }
    return b;
}

SampledBivariate separable(const SampledFunction& phi) { return separable(phi, default_dual_grid(phi)); }

SampledBivariate b_infinity(const GraphSet& m)
{
    if (m.empty()) {
        throw InvalidInput("b_infinity: empty graph");
    }
    SampledBivariate b(m.xgrid(), m.ygrid());
    for (const auto& [ix, iy] : m.pairs()) {
        b.at(ix, iy) = ExtReal(b.pairing(ix, iy));
    }
    return b;
}

GraphSet graph_of(const SampledBivariate& b, double tol)
{
    if (!(tol >= 0)) {
        throw InvalidInput("graph_of: tol must be >= 0");
    }
    GraphSet g(b.xgrid(), b.ygrid());
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            const ExtReal v = b.at(ix, iy);
            if (v.is_finite() && v.value() - b.pairing(ix, iy) <= tol) {
                g.insert(ix, iy);
            }
        }
    }
    return g;
}

CheckReport check_bipotential(const SampledBivariate& b, const BipotentialCheckOptions& opt)
{
    CheckReport rep = CheckReport::pass("check_bipotential");
    const double h = std::max(b.xgrid().spacing(), b.ygrid().spacing());
    auto tol_at = [&](std::size_t ix, std::size_t iy) {
        return opt.tol ? *opt.tol : 3.0 * h * (1.0 + std::abs(b.pairing(ix, iy)));
    };
    rep.note("tol", opt.tol ? format_real(*opt.tol) : std::string("3h(1+|<x,y>|)"));
    rep.note("convexity_rel_tol", opt.convexity_rel_tol);

    // (a) slice convexity.
    std::vector<SampledFunction> yslices(b.ny());
    std::vector<SampledFunction> xslices(b.nx());
    for (std::size_t iy = 0; iy < b.ny(); ++iy) {
        yslices[iy] = b.y_slice(iy);
        const SampledFunction& s = yslices[iy];
        if (s.domain_empty()) {
            continue;
        }
        const CheckReport c = is_convex(s, slice_tol(s, opt.convexity_rel_tol));
        if (!c.passed) {
            rep.fail("a", "b(.,y) not convex at y=" + pt(b.ygrid(), iy) + ": " + c.witness, c.residual);
            rep.witness_nodes = c.witness_nodes;
            rep.note("slice", "y");
            rep.note("slice_index", static_cast<double>(iy));
            return rep;
        }
    }
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        xslices[ix] = b.x_slice(ix);
        const SampledFunction& s = xslices[ix];
        if (s.domain_empty()) {
            continue;
        }
        const CheckReport c = is_convex(s, slice_tol(s, opt.convexity_rel_tol));
        if (!c.passed) {
            rep.fail("a", "b(x,.) not convex at x=" + pt(b.xgrid(), ix) + ": " + c.witness, c.residual);
            rep.witness_nodes = c.witness_nodes;
            rep.note("slice", "x");
            rep.note("slice_index", static_cast<double>(ix));
            return rep;
        }
    }

    // (b) b >= <x,y>.
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            const ExtReal v = b.at(ix, iy);
            if (!v.is_finite()) {
                continue;
            }
            const double gap = v.value() - b.pairing(ix, iy);
            if (gap < -tol_at(ix, iy)) {
                rep.fail("b", "b < <x,y> at " + pair_str(b, ix, iy), -gap);
                rep.witness_nodes = {ix, iy};
                return rep;
            }
        }
    }

    // (c) Fenchel–Young residuals of the conjugated slices. For the y-slice
    // s = b(.,y), y ∈ ∂s(x) iff s(x) + s*(y) - <x,y> = 0.
    std::vector<ExtReal> ystar(b.ny(), kPlusInf);
    std::vector<ExtReal> xstar(b.nx(), kPlusInf);
    {
        std::vector<double> raw(b.ny());
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            if (conjugate_raw(b.xgrid(), yslices[iy].vals, b.ygrid(), raw)) {
                ystar[iy] = ExtReal(raw[iy]);
            }
        }
    }
    {
        std::vector<double> raw(b.nx());
        for (std::size_t ix = 0; ix < b.nx(); ++ix) {
            if (conjugate_raw(b.ygrid(), xslices[ix].vals, b.xgrid(), raw)) {
                xstar[ix] = ExtReal(raw[ix]);
            }
        }
    }
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            const ExtReal v = b.at(ix, iy);
            if (!v.is_finite()) {
                continue; // all three residuals are +inf
            }
            const double pair = b.pairing(ix, iy);
            const double rc = v.value() - pair;
            const double ra = v.value() + ystar[iy].value() - pair;
            const double rb = v.value() + xstar[ix].value() - pair;
            const double spread = std::max({std::abs(ra - rc), std::abs(rb - rc)});
            if (spread > tol_at(ix, iy)) {
                std::ostringstream os;
                os << "subdifferential memberships disagree at " << pair_str(b, ix, iy) << " (r_a=" << format_real(ra)
                   << " r_b=" << format_real(rb) << " r_c=" << format_real(rc) << ")";
                rep.fail("c", os.str(), spread);
                rep.witness_nodes = {ix, iy};
                return rep;
            }
        }
    }
    return rep;
}

CheckReport check_sync(const SampledBivariate& c, double tol, double convexity_rel_tol)
{
    if (!(tol >= 0)) {
        throw InvalidInput("check_sync: tol must be >= 0");
    }
    CheckReport rep = CheckReport::pass("check_sync");
    rep.note("tol", tol);
    [&] {
        for (std::size_t ix = 0; ix < c.nx(); ++ix) {
            for (std::size_t iy = 0; iy < c.ny(); ++iy) {
                const ExtReal v = c.at(ix, iy);
                if (v.is_finite() && v.value() < -tol) {
                    rep.fail("nonnegativity", "c < 0 at " + pair_str(c, ix, iy), -v.value());
                    rep.witness_nodes = {ix, iy};
                    return;
                }
            }
        }
        auto check_slices = [&](bool by_y) {
            const std::size_t count = by_y ? c.ny() : c.nx();
            for (std::size_t k = 0; k < count; ++k) {
                const SampledFunction s = by_y ? c.y_slice(k) : c.x_slice(k);
                if (s.domain_empty()) {
                    continue;
                }
                const std::string where = by_y ? "c(.,y) at y=" + pt(c.ygrid(), k) : "c(x,.) at x=" + pt(c.xgrid(), k);
                const CheckReport cv = is_convex(s, slice_tol(s, convexity_rel_tol));
                if (!cv.passed) {
                    rep.fail("a", where + " not convex: " + cv.witness, cv.residual);
                    rep.witness_nodes = cv.witness_nodes;
                    return false;
                }
                const auto it = std::min_element(s.vals.begin(), s.vals.end());
                if (it->value() > tol) {
                    rep.fail("b", "minimum of " + where + " is " + to_string(*it) + ", not 0", it->value());
                    rep.witness_nodes = {static_cast<std::size_t>(it - s.vals.begin())};
                    return false;
                }
            }
            return true;
        };
        if (check_slices(true)) {
            check_slices(false);
        }
    }();

    // c is a sync iff c + <x,y> is a bipotential.
    BipotentialCheckOptions bopt;
    bopt.tol = tol;
    bopt.convexity_rel_tol = convexity_rel_tol;
    SampledBivariate b(c.xgrid(), c.ygrid());
    for (std::size_t ix = 0; ix < c.nx(); ++ix) {
        for (std::size_t iy = 0; iy < c.ny(); ++iy) {
            b.at(ix, iy) = c.at(ix, iy) + c.pairing(ix, iy);
        }
    }
    const CheckReport bip = check_bipotential(b, bopt);
    const bool agree = bip.passed == rep.passed;
    rep.note("psync_crosscheck", agree ? "agree" : "disagree");
    rep.note("bipotential_verdict", bip.passed ? "pass" : "fail:" + bip.axiom);
    if (!agree) {
        rep.fail("psync-crosscheck",
                 rep.passed ? "check_bipotential failed: " + bip.witness : "sync failed but bipotential passed",
                 bip.residual);
    }
    return rep;
}

CheckReport check_bbgraph(const GraphSet& m)
{
    if (m.empty()) {
        throw InvalidInput("check_bbgraph: empty graph");
    }
    CheckReport rep = CheckReport::pass("check_bbgraph");
    rep.note("closedness", "vacuous on finite grids");
    auto scan = [&](bool by_y) {
        const std::size_t count = by_y ? m.ygrid().size() : m.xgrid().size();
        const Grid& sg = by_y ? m.xgrid() : m.ygrid();
        for (std::size_t k = 0; k < count; ++k) {
            const auto mask = by_y ? m.y_section(k) : m.x_section(k);
            if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; })) {
                continue;
            }
            const CheckReport c = is_set_convex(std::span<const std::uint8_t>(mask), sg);
            if (!c.passed) {
                const std::string where = by_y ? "section M*(y) at y=" + pt(m.ygrid(), k)
                                               : "section M(x) at x=" + pt(m.xgrid(), k);
                rep.fail("bi-convexity", where + " not convex: " + c.witness, 0.0);
                rep.witness_nodes = mask_members(mask);
                rep.note("section", by_y ? "y" : "x");
                rep.note("section_index", static_cast<double>(k));
                rep.note("missing_node", static_cast<double>(c.witness_nodes.front()));
                return false;
            }
        }
        return true;
    };
    if (scan(true)) {
        scan(false);
    }
    return rep;
}

CheckReport check_cyclically_monotone(std::span<const PointPair> pts, int n_max, int dim, double tol)
{
    CheckReport rep = CheckReport::pass("check_cyclically_monotone");
    if (pts.empty()) {
        throw InvalidInput("check_cyclically_monotone: empty point set");
    }
    if (n_max < 1) {
        throw InvalidInput("check_cyclically_monotone: n_max must be >= 1");
    }
    const int m = static_cast<int>(pts.size());
    if (n_max > m) {
        rep.note("warning", "n_max " + std::to_string(n_max) + " clamped to point count " + std::to_string(m));
        n_max = m;
    }
    rep.note("n_max", static_cast<double>(n_max));
    auto ip = [dim](const Point& a, const Point& b) { return dot(dim, a, b); };
    auto diff = [](const Point& a, const Point& b) { return Point{a[0] - b[0], a[1] - b[1]}; };
    std::vector<int> idx;
    for (int n = 1; n <= n_max; ++n) {
        // All (n+1)-tuples of points, lexicographic.
        idx.assign(static_cast<std::size_t>(n + 1), 0);
        while (true) {
            const auto& P = [&](int k) -> const PointPair& { return pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]; };
            double sum = ip(diff(P(n).x, P(0).x), P(n).y);
            for (int k = 1; k <= n; ++k) {
                sum += ip(diff(P(k - 1).x, P(k).x), P(k - 1).y);
            }
            if (sum < -tol) {
                std::string cyc;
                for (int k = 0; k <= n; ++k) {
                    cyc += (k ? " -> " : "") + std::to_string(idx[static_cast<std::size_t>(k)]);
                }
                rep.fail("cycle", "cycle " + cyc + " has sum " + format_real(sum), sum);
                for (int i : idx) {
                    rep.witness_nodes.push_back(static_cast<std::size_t>(i));
                }
                return rep;
            }
            int pos = n;
            while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == m) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) {
                break;
            }
        }
    }
    return rep;
}

} // namespace bipot
