#include "bipot/covers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "bipot/blur.hpp"
#include "bipot/convexity.hpp"

namespace bipot {

namespace {

std::string pt(const Grid& g, std::size_t k)
{
    const Point p = g.coord(k);
    return g.dim() == 1 ? format_real(p[0]) : "(" + format_real(p[0]) + "," + format_real(p[1]) + ")";
}

Point offset_vector(const Grid& yg, Offset o)
{
    return {o.d0 * yg.axis(0).spacing(), yg.dim() == 2 ? o.d1 * yg.axis(1).spacing() : 0.0};
}

// Flat index of α·z1 + (1-α)·z2 when it is exactly a node.
std::optional<std::size_t> aligned_mid(const Grid& g, std::size_t z1, std::size_t z2, double alpha)
{
    const NodeIndex a = g.multi(z1);
    const NodeIndex b = g.multi(z2);
    NodeIndex m{};
    for (std::size_t k = 0; k < 2; ++k) {
        const double v = alpha * a[k] + (1 - alpha) * b[k];
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-9) {
            return std::nullopt;
        }
        m[k] = static_cast<int>(r);
    }
    return g.flat(m);
}

} // namespace

void IndexedFamily::fiber_min(std::vector<ExtReal>& m, std::vector<std::size_t>& arg) const
{
    const std::size_t nz = zgrid().size();
    m.assign(nz, kPlusInf);
    arg.assign(nz, 0);
    for (std::size_t l = 0; l < lambda_count(); ++l) {
        for (std::size_t z = 0; z < nz; ++z) {
            const ExtReal v = value(l, z);
            if (v < m[z]) {
                m[z] = v;
                arg[z] = l;
            }
        }
    }
}

ExtReal CoverFamily::value(std::size_t k, std::size_t ix, std::size_t iy) const
{
    const ExtReal f = pair.phi[ix];
    if (!f.is_finite()) {
        return kPlusInf;
    }
    const Grid& yg = pair.phistar.grid;
    const auto src = shifted(yg, iy, lambda_nodes[k], -1);
    if (!src || !pair.phistar[*src].is_finite()) {
        return kPlusInf;
    }
    const Grid& xg = pair.phi.grid;
    const double t = pair.phistar[*src].value() + dot(xg.dim(), xg.coord(ix), offset_vector(yg, lambda_nodes[k]));
    return ExtReal(f.value() + t);
}

SampledBivariate CoverFamily::member(std::size_t k) const
{
    SampledBivariate b(pair.phi.grid, pair.phistar.grid);
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            b.at(ix, iy) = value(k, ix, iy);
        }
    }
    return b;
}

std::size_t CoverFamily::zero_index() const
{
    for (std::size_t k = 0; k < lambda_nodes.size(); ++k) {
        if (lambda_nodes[k].d0 == 0 && lambda_nodes[k].d1 == 0) {
            return k;
        }
    }
    throw std::logic_error("cover without the zero offset");
}

CoverFamily build_cover(const ConjugatePair& pair, double eps)
{
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}, pair.phi.grid, pair.phistar.grid);
    return CoverFamily{pair, eps, ball_offsets(pair.phistar.grid, eps)};
}

CoverFamily build_cover(const SampledFunction& phi, const Grid& ygrid, double eps)
{
    return build_cover(make_conjugate_pair(phi, ygrid), eps);
}

void CoverYSlice::fiber_min(std::vector<ExtReal>& m, std::vector<std::size_t>& arg) const
{
    const Grid& xg = c_.pair.phi.grid;
    if (xg.dim() == 1) {
        IndexedFamily::fiber_min(m, arg);
        return;
    }
    const Grid& yg = c_.pair.phistar.grid;
    const SampledFunction& star = c_.pair.phistar;
    const double h0 = yg.axis(0).spacing();
    const double h1 = yg.axis(1).spacing();
    const NodeIndex y = yg.multi(iy_);
    const int n0 = xg.axis(0).n;
    const int n1 = xg.axis(1).n;

    // Group the ball by row d0.
    int w0 = 0;
    for (const Offset& o : c_.lambda_nodes) {
        w0 = std::max(w0, std::abs(o.d0));
    }
    const int rows = 2 * w0 + 1;
    std::vector<std::vector<std::size_t>> by_row(static_cast<std::size_t>(rows));
    for (std::size_t k = 0; k < c_.lambda_nodes.size(); ++k) {
        by_row[static_cast<std::size_t>(c_.lambda_nodes[k].d0 + w0)].push_back(k);
    }

    // G(d0, j) = min over the row of φ*(y - a) + x1_j·a1.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(static_cast<std::size_t>(rows) * static_cast<std::size_t>(n1), inf);
    std::vector<std::size_t> gk(g.size(), 0);
    for (int r = 0; r < rows; ++r) {
        const int src0 = y[0] - (r - w0);
        if (src0 < 0 || src0 >= yg.axis(0).n) {
            continue;
        }
        for (std::size_t k : by_row[static_cast<std::size_t>(r)]) {
            const int d1 = c_.lambda_nodes[k].d1;
            const int src1 = y[1] - d1;
            if (src1 < 0 || src1 >= yg.axis(1).n) {
                continue;
            }
            const ExtReal ps = star[yg.flat(src0, src1)];
            if (!ps.is_finite()) {
                continue;
            }
            const double a1 = d1 * h1;
            for (int j = 0; j < n1; ++j) {
                const double v = ps.value() + xg.axis(1).node(j) * a1;
                auto& slot = g[static_cast<std::size_t>(r) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)];
                if (v < slot) {
                    slot = v;
                    gk[static_cast<std::size_t>(r) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)] = k;
                }
            }
        }
    }

    m.assign(xg.size(), kPlusInf);
    arg.assign(xg.size(), 0);
    for (int i = 0; i < n0; ++i) {
        const double x0 = xg.axis(0).node(i);
        for (int j = 0; j < n1; ++j) {
            const std::size_t ix = xg.flat(i, j);
            if (!c_.pair.phi[ix].is_finite()) {
                continue;
            }
            double best = inf;
            std::size_t bk = 0;
            for (int r = 0; r < rows; ++r) {
                const double v0 = g[static_cast<std::size_t>(r) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)];
                if (v0 == inf) {
                    continue;
                }
                const double v = v0 + x0 * ((r - w0) * h0);
                if (v < best) {
                    best = v;
                    bk = gk[static_cast<std::size_t>(r) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)];
                }
            }
            if (best < inf) {
                // Report the value with the member's own rounding.
                m[ix] = c_.value(bk, ix, iy_);
                arg[ix] = bk;
            }
        }
    }
}

CheckReport check_implicitly_convex(const IndexedFamily& f, const ImplicitOptions& opt)
{
    if (opt.alphas.empty() ||
        std::none_of(opt.alphas.begin(), opt.alphas.end(), [](double a) { return a == 0.5; })) {
        throw InvalidInput("check_implicitly_convex: alphas must include 0.5");
    }
    for (double a : opt.alphas) {
        if (!(a >= 0 && a <= 1)) {
            throw InvalidInput("check_implicitly_convex: alphas must lie in [0,1]");
        }
    }
    if (!(opt.tol >= 0)) {
        throw InvalidInput("check_implicitly_convex: tol must be >= 0");
    }
    const Grid& g = f.zgrid();
    // Some pair of nodes must combine onto a node.
    {
        bool any = false;
        for (double a : opt.alphas) {
            for (std::size_t z2 = 1; z2 < g.size() && !any; ++z2) {
                const auto mid = aligned_mid(g, 0, z2, a);
                any = mid && *mid != 0 && *mid != z2;
            }
        }
        if (!any) {
            throw ResolutionError("grid too coarse for alpha set");
        }
    }

    CheckReport rep = CheckReport::pass("check_implicitly_convex");
    std::string al;
    for (double a : opt.alphas) {
        al += (al.empty() ? "" : ";") + format_real(a);
    }
    rep.note("alphas", al);
    rep.note("tol", opt.tol);
    rep.note("lambda_count", static_cast<double>(f.lambda_count()));

    std::vector<ExtReal> m;
    std::vector<std::size_t> arg;
    f.fiber_min(m, arg);
    std::vector<std::size_t> fin;
    for (std::size_t z = 0; z < m.size(); ++z) {
        if (m[z].is_finite()) {
            fin.push_back(z);
        }
    }
    rep.note("finite_nodes", static_cast<double>(fin.size()));

    // Returns true on a violation and fills the report.
    auto test = [&](std::size_t z1, std::size_t z2, double a) {
        const auto mid = aligned_mid(g, z1, z2, a);
        if (!mid) {
            return false;
        }
        const double rhs = a * m[z1].value() + (1 - a) * m[z2].value();
        const ExtReal mm = m[*mid];
        if (mm.is_finite() && mm.value() <= rhs + opt.tol) {
            return false;
        }
        std::ostringstream os;
        os << "no lambda at z=" << pt(g, *mid) << " for (lambda " << arg[z1] << ", z1=" << pt(g, z1) << ") and (lambda "
           << arg[z2] << ", z2=" << pt(g, z2) << "), alpha=" << format_real(a) << ": min f = " << to_string(mm)
           << " > " << format_real(rhs);
        rep.fail("implicit-convexity", os.str(), mm.is_finite() ? mm.value() - rhs : kPlusInf.raw());
        rep.witness_nodes = {z1, z2, *mid};
        return true;
    };

    // Candidate count: same-parity pairs for 0.5, an upper bound otherwise.
    double candidates = 0;
    {
        std::map<std::pair<int, int>, double> cls;
        for (std::size_t z : fin) {
            const NodeIndex k = g.multi(z);
            cls[{k[0] & 1, k[1] & 1}] += 1;
        }
        for (const auto& [key, n] : cls) {
            candidates += n * (n - 1) / 2;
        }
        const double nf = static_cast<double>(fin.size());
        for (double a : opt.alphas) {
            if (a != 0.5 && a != 0 && a != 1) {
                candidates += nf * (nf - 1);
            }
        }
    }
    rep.note("candidate_pairs", candidates);
    rep.note("pair_cap", static_cast<double>(opt.pair_cap));

    if (candidates <= static_cast<double>(opt.pair_cap)) {
        rep.note("mode", "exhaustive");
        for (std::size_t i = 0; i < fin.size(); ++i) {
            for (std::size_t j = i + 1; j < fin.size(); ++j) {
                for (double a : opt.alphas) {
                    if (test(fin[i], fin[j], a) || (a != 0.5 && test(fin[j], fin[i], a))) {
                        return rep;
                    }
                }
            }
        }
        return rep;
    }

    rep.note("mode", "sampled");
    rep.note("seed", static_cast<double>(opt.seed));
    // Stratum 1: neighbouring triples along the lattice directions.
    std::vector<NodeIndex> dirs = g.dim() == 1 ? std::vector<NodeIndex>{{1, 0}}
                                               : std::vector<NodeIndex>{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    std::size_t local = 0;
    for (std::size_t z1 : fin) {
        const NodeIndex k = g.multi(z1);
        for (const NodeIndex& d : dirs) {
            const NodeIndex k2{k[0] + 2 * d[0], k[1] + 2 * d[1]};
            if (!g.in_range(k2) || !m[g.flat(k2)].is_finite()) {
                continue;
            }
            ++local;
            if (test(z1, g.flat(k2), 0.5)) {
                return rep;
            }
        }
    }
    rep.note("local_pairs", static_cast<double>(local));
    // Stratum 2: seeded draws over the remaining pairs.
    std::map<std::pair<int, int>, std::vector<std::size_t>> cls;
    for (std::size_t z : fin) {
        const NodeIndex k = g.multi(z);
        cls[{k[0] & 1, k[1] & 1}].push_back(z);
    }
    const std::size_t budget = opt.pair_cap > local ? opt.pair_cap - local : 0;
    rep.note("random_pairs", static_cast<double>(budget));
    rep.note("stride", candidates / static_cast<double>(local + budget));
    std::mt19937_64 rng(opt.seed);
    for (std::size_t t = 0; t < budget; ++t) {
        const std::size_t z1 = fin[rng() % fin.size()];
        const double a = opt.alphas[rng() % opt.alphas.size()];
        std::size_t z2;
        if (a == 0.5) {
            const NodeIndex k = g.multi(z1);
            const auto& c = cls[{k[0] & 1, k[1] & 1}];
            z2 = c[rng() % c.size()];
        } else {
            z2 = fin[rng() % fin.size()];
        }
        if (z1 != z2 && test(z1, z2, a)) {
            return rep;
        }
    }
    return rep;
}

SampledBivariate infimum_bipotential(const CoverFamily& family)
{
    if (family.size() == 0) {
        throw InvalidInput("infimum_bipotential: empty family");
    }
    SampledBivariate out(family.pair.phi.grid, family.pair.phistar.grid);
    const int nx = static_cast<int>(out.nx());
    const std::size_t ny = out.ny();
#pragma omp parallel for schedule(dynamic, 4)
    for (int ix = 0; ix < nx; ++ix) {
        const auto x = static_cast<std::size_t>(ix);
        for (std::size_t k = 0; k < family.size(); ++k) {
            for (std::size_t iy = 0; iy < ny; ++iy) {
                ExtReal& v = out.at(x, iy);
                v = min(v, family.value(k, x, iy));
            }
        }
    }
    return out;
}

CoverFamily reparameterize(const CoverFamily& family, std::span<const std::size_t> perm)
{
    const std::size_t n = family.size();
    if (perm.size() != n) {
        throw InvalidInput("reparameterize: permutation has the wrong length");
    }
    std::vector<char> seen(n, 0);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) {
            throw InvalidInput("reparameterize: map is not a bijection");
        }
        seen[p] = 1;
    }
    CoverFamily out{family.pair, family.eps, {}};
    out.lambda_nodes.reserve(n);
    for (std::size_t p : perm) {
        out.lambda_nodes.push_back(family.lambda_nodes[p]);
    }
    return out;
}

CheckReport check_maithm_equivalence(const ConjugatePair& pair, double eps, const MaithmOptions& opt)
{
    const CoverFamily cover = build_cover(pair, eps);
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    const GraphSet graph = blurred_graph(pair, eps, opt.tol);

    // 0 skipped, bit 1 verdict 1 passed, bit 2 verdict 2 passed, bit 4 scanned.
    std::vector<int> state(yg.size(), 0);
    const int ny = static_cast<int>(yg.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < ny; ++t) {
        const auto iy = static_cast<std::size_t>(t);
        const BlurredSlice s = blurred_slice(pair, eps, iy);
        if (s.bA.domain_empty()) {
            continue;
        }
        int st = 4;
        std::vector<std::uint8_t> zero(xg.size(), 0);
        for (std::size_t ix = 0; ix < xg.size(); ++ix) {
            zero[ix] = s.cA[ix].is_finite() && s.cA[ix].value() <= opt.tol ? 1 : 0;
        }
        const auto section = graph.y_section(iy);
        if (is_convex(s.bA, opt.tol).passed && masks_equal_within_one_node(xg, zero, section)) {
            st |= 1;
        }
        ImplicitOptions io;
        io.tol = opt.tol / 2;
        io.pair_cap = opt.pair_cap;
        io.seed = opt.seed + iy;
        if (check_implicitly_convex(CoverYSlice(cover, iy), io).passed) {
            st |= 2;
        }
        state[iy] = st;
    }

    CheckReport rep = CheckReport::pass("check_maithm_equivalence");
    rep.note("eps", eps);
    rep.note("tol", opt.tol);
    rep.note("pair_cap", static_cast<double>(opt.pair_cap));
    rep.note("seed", static_cast<double>(opt.seed));
    std::size_t scanned = 0, f1 = 0, f2 = 0, dis = 0;
    std::optional<std::size_t> first_dis, first_f1, first_f2;
    for (std::size_t iy = 0; iy < yg.size(); ++iy) {
        const int st = state[iy];
        if (!(st & 4)) {
            continue;
        }
        ++scanned;
        const bool v1 = st & 1;
        const bool v2 = st & 2;
        if (!v1) {
            ++f1;
            first_f1 = first_f1.value_or(iy);
        }
        if (!v2) {
            ++f2;
            first_f2 = first_f2.value_or(iy);
        }
        if (v1 != v2) {
            ++dis;
            first_dis = first_dis.value_or(iy);
        }
    }
    rep.note("y_scanned", static_cast<double>(scanned));
    rep.note("y_skipped", static_cast<double>(yg.size() - scanned));
    rep.note("verdict1", f1 == 0 ? "pass" : "fail");
    rep.note("verdict2", f2 == 0 ? "pass" : "fail");
    rep.note("verdict1_failing_y", static_cast<double>(f1));
    rep.note("verdict2_failing_y", static_cast<double>(f2));
    if (first_f1) {
        rep.note("verdict1_first_failing_y", pt(yg, *first_f1));
    }
    if (first_f2) {
        rep.note("verdict2_first_failing_y", pt(yg, *first_f2));
    }
    rep.note("disagreements", static_cast<double>(dis));
    if (first_dis) {
        const int st = state[*first_dis];
        rep.fail("agreement",
                 "verdicts disagree at y=" + pt(yg, *first_dis) + ": verdict1=" + ((st & 1) ? "pass" : "fail") +
                     " verdict2=" + ((st & 2) ? "pass" : "fail"),
                 static_cast<double>(dis));
        rep.witness_nodes = {*first_dis};
    }
    return rep;
}

} // namespace bipot
