#include "bipot/blur.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bipot/bipotential.hpp"
#include "bipot/convexity.hpp"

namespace bipot {

namespace {

std::string pt(const Grid& g, std::size_t k)
{
    const Point p = g.coord(k);
    return g.dim() == 1 ? format_real(p[0]) : "(" + format_real(p[0]) + "," + format_real(p[1]) + ")";
}

double offset_norm(const Grid& g, Offset o)
{
    const double a = o.d0 * g.axis(0).spacing();
    return g.dim() == 1 ? std::abs(a) : std::hypot(a, o.d1 * g.axis(1).spacing());
}

// Y-radius left for an x-offset of norm nx inside the product ball.
double residual_radius(double eps, double p, double nx)
{
    if (std::isinf(p)) {
        return eps;
    }
    if (p == 2.0) {
        return std::sqrt(std::max(0.0, eps * eps - nx * nx));
    }
    return std::pow(std::max(0.0, std::pow(eps, p) - std::pow(nx, p)), 1.0 / p);
}

void require_yball(const BlurSpec& spec, const char* what)
{
    if (spec.kind != BlurSpec::Kind::YBall) {
        throw InvalidInput(std::string(what) + ": only the y-ball blur is supported");
    }
}

} // namespace

std::string to_string(BlurSpec::Kind k) { return k == BlurSpec::Kind::YBall ? "yball" : "product"; }

BlurSpec::Kind parse_blur_kind(const std::string& s)
{
    if (s == "yball") {
        return BlurSpec::Kind::YBall;
    }
    if (s == "product") {
        return BlurSpec::Kind::Product;
    }
    throw InvalidInput("unknown blur kind '" + s + "' (expected yball or product)");
}

void check_blur_resolution(const BlurSpec& spec, const Grid& xg, const Grid& yg)
{
    if (!(spec.eps >= 0)) {
        throw InvalidInput("blur radius must be >= 0");
    }
    if (!(spec.p >= 1)) {
        throw InvalidInput("norm exponent must be >= 1");
    }
    const double h = spec.kind == BlurSpec::Kind::YBall ? yg.spacing() : std::max(xg.spacing(), yg.spacing());
    if (spec.eps > 0 && spec.eps < h * (1 - 1e-9)) {
        throw ResolutionError("blur radius below grid resolution (eps=" + format_real(spec.eps) +
                              ", h=" + format_real(h) + ")");
    }
}

std::vector<JointOffset> blur_offsets(const BlurSpec& spec, const Grid& xg, const Grid& yg)
{
    check_blur_resolution(spec, xg, yg);
    std::vector<JointOffset> out;
    if (spec.kind == BlurSpec::Kind::YBall) {
        for (const Offset& o : ball_offsets(yg, spec.eps)) {
            out.push_back({Offset{}, o});
        }
        return out;
    }
    for (const Offset& ox : ball_offsets(xg, spec.eps)) {
        const double r = residual_radius(spec.eps, spec.p, offset_norm(xg, ox));
        for (const Offset& oy : ball_offsets(yg, r)) {
            out.push_back({ox, oy});
        }
    }
    return out;
}

SampledBivariate inf_convolve_blur(const SampledBivariate& c, const BlurSpec& spec)
{
    const Grid& xg = c.xgrid();
    const Grid& yg = c.ygrid();
    check_blur_resolution(spec, xg, yg);
    if (spec.eps == 0) {
        return c;
    }
    const int nx = static_cast<int>(c.nx());
    const std::size_t ny = c.ny();
    auto filter_all = [&](double r, std::span<ExtReal> dst) {
        std::span<const ExtReal> src = c.values();
#pragma omp parallel for schedule(static)
        for (int ix = 0; ix < nx; ++ix) {
            const auto off = static_cast<std::size_t>(ix) * ny;
            min_filter_into(yg, src.subspan(off, ny), dst.subspan(off, ny), r);
        }
    };

    SampledBivariate out(xg, yg);
    if (spec.kind == BlurSpec::Kind::YBall) {
        filter_all(spec.eps, out.values());
        return out;
    }

    std::map<double, std::vector<Offset>> groups;
    for (const Offset& ox : ball_offsets(xg, spec.eps)) {
        groups[residual_radius(spec.eps, spec.p, offset_norm(xg, ox))].push_back(ox);
    }
    std::vector<ExtReal> filtered(c.values().size());
    std::span<ExtReal> res = out.values();
    for (const auto& [r, oxs] : groups) {
        filter_all(r, filtered);
#pragma omp parallel for schedule(static)
        for (int ix = 0; ix < nx; ++ix) {
            for (const Offset& ox : oxs) {
                const auto src = shifted(xg, static_cast<std::size_t>(ix), ox, -1);
                if (!src) {
                    continue;
                }
                for (std::size_t iy = 0; iy < ny; ++iy) {
                    ExtReal& v = res[static_cast<std::size_t>(ix) * ny + iy];
                    v = min(v, filtered[*src * ny + iy]);
                }
            }
        }
    }
    return out;
}

BlurredSlice blurred_slice(const ConjugatePair& pair, double eps, std::size_t iy)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    BlurredSlice s{SampledFunction(xg), SampledFunction(xg)};
    std::vector<ExtReal> psi(yg.size(), kPlusInf);
    for (const Offset& o : ball_offsets(yg, eps)) {
        if (const auto k = shifted(yg, iy, o)) {
            psi[*k] = pair.phistar[*k];
        }
    }
    std::vector<double> q(xg.size());
    if (!conjugate_raw(yg, psi, xg, q)) {
        return s;
    }
    const Point y = yg.coord(iy);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const ExtReal f = pair.phi[ix];
        if (!f.is_finite()) {
            continue;
        }
        const double ca = f.value() - q[ix];
        s.cA[ix] = ExtReal(ca);
        s.bA[ix] = ExtReal(ca + dot(xg.dim(), xg.coord(ix), y));
    }
    return s;
}

namespace {

SampledBivariate blurred_table(const ConjugatePair& pair, double eps, bool sync)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}, xg, yg);
    SampledBivariate out(xg, yg);
    const int ny = static_cast<int>(yg.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (int iy = 0; iy < ny; ++iy) {
        const BlurredSlice s = blurred_slice(pair, eps, static_cast<std::size_t>(iy));
        const SampledFunction& src = sync ? s.cA : s.bA;
        for (std::size_t ix = 0; ix < xg.size(); ++ix) {
            out.at(ix, static_cast<std::size_t>(iy)) = src[ix];
        }
    }
    return out;
}

} // namespace

SampledBivariate blurred_bipotential(const ConjugatePair& pair, double eps) { return blurred_table(pair, eps, false); }

SampledBivariate blurred_sync(const ConjugatePair& pair, double eps) { return blurred_table(pair, eps, true); }

SampledBivariate blurred_bipotential(const SampledFunction& phi, const Grid& ygrid, const BlurSpec& spec)
{
    require_yball(spec, "blurred_bipotential");
    return blurred_bipotential(make_conjugate_pair(phi, ygrid), spec.eps);
}

GraphSet fy_graph(const ConjugatePair& pair, double tol)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    GraphSet m(xg, yg);
    const int nx = static_cast<int>(xg.size());
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < yg.size(); ++iy) {
            const ExtReal r = pair.residual(static_cast<std::size_t>(ix), iy);
            if (r.is_finite() && r.value() <= tol) {
                m.insert(static_cast<std::size_t>(ix), iy);
            }
        }
    }
    return m;
}

GraphSet minkowski_sum(const GraphSet& m, const BlurSpec& spec)
{
    const auto offs = blur_offsets(spec, m.xgrid(), m.ygrid());
    GraphSet out(m.xgrid(), m.ygrid());
    for (const auto& [ix, iy] : m.pairs()) {
        for (const JointOffset& o : offs) {
            const auto jx = shifted(m.xgrid(), ix, o.x);
            const auto jy = shifted(m.ygrid(), iy, o.y);
            if (jx && jy) {
                out.insert(*jx, *jy);
            } else {
                out.clipped = true;
            }
        }
    }
    return out;
}

GraphSet blurred_graph(const ConjugatePair& pair, double eps, double tol)
{
    return minkowski_sum(fy_graph(pair, tol), BlurSpec{BlurSpec::Kind::YBall, eps, 2.0});
}

CheckReport check_newc(const ConjugatePair& pair, double eps, std::size_t iy, double tol)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}, xg, yg);
    CheckReport rep = CheckReport::pass("check_newc");
    rep.note("y", pt(yg, iy));
    rep.note("eps", eps);
    rep.note("tol", tol);
    rep.note("closedness", "vacuous on finite grids");

    std::vector<std::uint8_t> u(xg.size(), 0);
    for (const Offset& o : ball_offsets(yg, eps)) {
        if (const auto k = shifted(yg, iy, o)) {
            for (std::size_t ix : subdiff_points(pair, *k, tol)) {
                u[ix] = 1;
            }
        }
    }
    const auto members = mask_members(u);
    rep.note("union_size", static_cast<double>(members.size()));
    if (members.empty()) {
        rep.note("union", "empty");
        return rep;
    }

    const CheckReport conv = is_set_convex(std::span<const std::uint8_t>(u), xg);
    if (!conv.passed) {
        const std::size_t miss = conv.witness_nodes.front();
        rep.fail("newc", "union of subdifferentials over the ball at y=" + pt(yg, iy) +
                             " is not convex: node x=" + pt(xg, miss) + " lies inside its hull but is missing",
                 0.0);
        rep.witness_nodes = {miss};
    }

    // Section identity: U(y) against the zero set of c_A(., y).
    const BlurredSlice s = blurred_slice(pair, eps, iy);
    std::vector<std::uint8_t> zero(xg.size(), 0);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        zero[ix] = s.cA[ix].is_finite() && s.cA[ix].value() <= tol ? 1 : 0;
    }
    std::size_t w = 0;
    const bool same = masks_equal_within_one_node(xg, u, zero, &w);
    rep.note("section_identity", same ? "holds" : "violated at x=" + pt(xg, w));
    if (!same && rep.passed) {
        rep.fail("section-identity", "U(y) differs from the section of M+A at x=" + pt(xg, w), 0.0);
        rep.witness_nodes = {w};
    }
    return rep;
}

CheckReport check_admits_blurring(const GraphSet& m, const BlurSpec& spec)
{
    const GraphSet ma = minkowski_sum(m, spec);
    CheckReport rep = check_bbgraph(ma);
    rep.check = "check_admits_blurring";
    rep.note("form", "graph");
    rep.note("kind", to_string(spec.kind));
    rep.note("eps", spec.eps);
    rep.note("clipped", ma.clipped ? "true" : "false");
    return rep;
}

CheckReport check_admits_blurring(const SampledBivariate& c, const BlurSpec& spec, double tol)
{
    const SampledBivariate ca = inf_convolve_blur(c, spec);
    CheckReport rep = check_sync(ca, tol);
    rep.check = "check_admits_blurring";
    rep.note("form", "sync");
    rep.note("kind", to_string(spec.kind));
    rep.note("eps", spec.eps);

    GraphSet zero(c.xgrid(), c.ygrid());
    GraphSet zero_a(c.xgrid(), c.ygrid());
    for (std::size_t ix = 0; ix < c.nx(); ++ix) {
        for (std::size_t iy = 0; iy < c.ny(); ++iy) {
            if (c.at(ix, iy) <= ExtReal(tol)) {
                zero.insert(ix, iy);
            }
            if (ca.at(ix, iy) <= ExtReal(tol)) {
                zero_a.insert(ix, iy);
            }
        }
    }
    const GraphSet ma = minkowski_sum(zero, spec);
    rep.note("clipped", ma.clipped ? "true" : "false");
    const NearEquality eq = equal_within_one_node(zero_a, ma);
    rep.note("zero_set_identity", eq.equal ? "holds" : "violated");
    if (!eq.equal && rep.passed) {
        rep.fail("zero-set", "c_A^-1(0) differs from c^-1(0) + A at x=" + pt(c.xgrid(), eq.ix) +
                                 " y=" + pt(c.ygrid(), eq.iy),
                 0.0);
        rep.witness_nodes = {eq.ix, eq.iy};
    }
    return rep;
}

BlurredLaw make_blurred_law(const ConjugatePair& pair, const BlurSpec& spec, double tol)
{
    BlurredLaw law{pair.phi, spec, {}, {}, {}};
    if (spec.kind == BlurSpec::Kind::YBall) {
        law.cA = blurred_sync(pair, spec.eps);
        law.MplusA = blurred_graph(pair, spec.eps, tol);
    } else {
        SampledBivariate c(pair.phi.grid, pair.phistar.grid);
        for (std::size_t ix = 0; ix < c.nx(); ++ix) {
            for (std::size_t iy = 0; iy < c.ny(); ++iy) {
                const ExtReal r = pair.residual(ix, iy);
                c.at(ix, iy) = r.is_finite() ? ExtReal(std::max(0.0, r.value())) : r;
            }
        }
        law.cA = inf_convolve_blur(c, spec);
        law.MplusA = minkowski_sum(fy_graph(pair, tol), spec);
    }
    law.bA = SampledBivariate(law.cA.xgrid(), law.cA.ygrid());
    for (std::size_t ix = 0; ix < law.cA.nx(); ++ix) {
        for (std::size_t iy = 0; iy < law.cA.ny(); ++iy) {
            law.bA.at(ix, iy) = law.cA.at(ix, iy) + law.cA.pairing(ix, iy);
        }
    }
    return law;
}

} // namespace bipot
