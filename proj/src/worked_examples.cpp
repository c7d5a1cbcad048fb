#include "bipot/worked_examples.hpp"

#include <cmath>

namespace bipot {

void validate(const ElasticityFixture& fix)
{
    if (!(fix.K > 0)) {
        throw InvalidInput("elasticity fixture: K must be > 0");
    }
    if (fix.x.dim() != fix.y.dim()) {
        throw InvalidInput("elasticity fixture: grids must have the same dimension");
    }
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, fix.eps, 2.0}, fix.x, fix.y);
}

ElasticityFixture elasticity_from_config(const Config& c)
{
    ElasticityFixture f;
    f.K = config_real(c, "K", f.K);
    f.eps = config_real(c, "eps", f.eps);
    const double lo = config_real(c, "lo", -2.0);
    const double hi = config_real(c, "hi", 2.0);
    const int n = config_int(c, "n", 401);
    f.x = Grid(lo, hi, n);
    f.y = Grid(lo, hi, n);
    validate(f);
    return f;
}

double elasticity_cA(double K, double eps, double x, double y)
{
    const double r = std::max(0.0, std::abs(y - K * x) - eps);
    return r * r / (2 * K);
}

SampledBivariate elasticity_closed_form_cA(const ElasticityFixture& fix)
{
    validate(fix);
    return sample(fix.x, fix.y, [&](const Point& x, const Point& y) {
        if (fix.x.dim() == 1) {
            return elasticity_cA(fix.K, fix.eps, x[0], y[0]);
        }
        const double d = std::max(0.0, std::hypot(y[0] - fix.K * x[0], y[1] - fix.K * x[1]) - fix.eps);
        return d * d / (2 * fix.K);
    });
}

SampledBivariate elasticity_sync(const ElasticityFixture& fix)
{
    validate(fix);
    const int dim = fix.x.dim();
    return sample(fix.x, fix.y, [&](const Point& x, const Point& y) {
        const double c = fix.K / 2 * dot(dim, x, x) + dot(dim, y, y) / (2 * fix.K) - dot(dim, x, y);
        return std::max(0.0, c);
    });
}

SampledFunction elasticity_phi(const ElasticityFixture& fix)
{
    validate(fix);
    const int dim = fix.x.dim();
    return sample(fix.x, [&](const Point& x) { return fix.K / 2 * dot(dim, x, x); });
}

bool elasticity_interior(const ElasticityFixture& fix, std::size_t iy)
{
    const Point y = fix.y.coord(iy);
    for (int a = 0; a < fix.y.dim(); ++a) {
        const Axis& ax = fix.y.axis(a);
        const double v = y[static_cast<std::size_t>(a)];
        if (v - ax.lo < fix.eps || ax.hi - v < fix.eps) {
            return false;
        }
    }
    return true;
}

TwoPointFixture two_point_fixture(double x1, double y1, double x2, double y2, double eps, const Grid& xg,
                                  const Grid& yg)
{
    if (xg.dim() != 1 || yg.dim() != 1) {
        throw InvalidInput("two-point fixture: 1D grids expected");
    }
    if (x1 == x2 || y1 == y2) {
        throw InvalidInput("two-point fixture: the points must differ in both x and y");
    }
    const std::size_t ix1 = xg.nearest({x1, 0});
    const std::size_t ix2 = xg.nearest({x2, 0});
    const std::size_t iy1 = yg.nearest({y1, 0});
    const std::size_t iy2 = yg.nearest({y2, 0});
    if (ix1 == ix2 || iy1 == iy2) {
        throw InvalidInput("two-point fixture: points coincide on the grid");
    }
    TwoPointFixture f{GraphSet(xg, yg), BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}};
    f.m.insert(ix1, iy1);
    f.m.insert(ix2, iy2);
    check_blur_resolution(f.spec, xg, yg);
    return f;
}

Grid two_point_default_grid() { return Grid(-1.0, 3.0, 201); }

ConeFixture cone_from_config(const Config& c)
{
    ConeFixture f;
    f.alpha = config_real(c, "alpha", f.alpha);
    f.y1 = config_real(c, "y1", f.y1);
    f.eps = config_real(c, "eps", f.eps);
    const int nx = config_int(c, "x_n", 81);
    const int ny = config_int(c, "y_n", 81);
    f.x = Grid(Axis{config_real(c, "x_lo", -1.0), config_real(c, "x_hi", 1.0), nx},
               Axis{config_real(c, "x_lo", -1.0), config_real(c, "x_hi", 1.0), nx});
    f.y = Grid(Axis{config_real(c, "y0_lo", -1.0), config_real(c, "y0_hi", 3.0), ny},
               Axis{config_real(c, "y1_lo", -2.0), config_real(c, "y1_hi", 2.0), ny});
    return f;
}

std::array<double, 2> cone_window(double alpha, double y1)
{
    const double s = std::sqrt(1 + alpha * alpha);
    return {2 * alpha / s * y1, y1 * s};
}

std::array<Point, 2> cone_normals(double alpha)
{
    const double s = std::sqrt(1 + alpha * alpha);
    return {Point{-alpha / s, 1 / s}, Point{-alpha / s, -1 / s}};
}

ConeData cone_fixture(const ConeFixture& fix)
{
    if (!(fix.alpha > 0 && fix.alpha < 1)) {
        throw InvalidInput("cone fixture: alpha must lie in (0,1)");
    }
    if (!(fix.y1 > 0)) {
        throw InvalidInput("cone fixture: y1 must be > 0");
    }
    if (fix.x.dim() != 2 || fix.y.dim() != 2) {
        throw InvalidInput("cone fixture: 2D grids expected");
    }
    const auto w = cone_window(fix.alpha, fix.y1);
    if (!(fix.eps > w[0] && fix.eps < w[1])) {
        throw InvalidInput("cone fixture: eps=" + format_real(fix.eps) + " outside the admissible window (" +
                           format_real(w[0]) + ", " + format_real(w[1]) + ")");
    }
    const Point ystar{fix.y1, fix.alpha * fix.y1};
    const std::size_t k = fix.y.nearest(ystar);
    const Point snapped = fix.y.coord(k);
    if (std::abs(snapped[0] - ystar[0]) > 1e-9 || std::abs(snapped[1] - ystar[1]) > 1e-9) {
        throw InvalidInput("cone fixture: y* is not a node of the y-grid");
    }
    SampledFunction chi(fix.y);
    for (std::size_t j = 0; j < fix.y.size(); ++j) {
        const Point y = fix.y.coord(j);
        if (std::abs(y[1]) <= fix.alpha * y[0] + 1e-12) {
            chi[j] = ExtReal(0.0);
        }
    }
    const SampledFunction phi = conjugate(chi, fix.x);
    return ConeData{make_conjugate_pair(phi, chi), k, w};
}

} // namespace bipot
