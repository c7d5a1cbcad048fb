#include <doctest.h>

#include <algorithm>
#include <random>

#include "../common/corpus.hpp"
#include "bipot/convexity.hpp"
#include "bipot/legendre.hpp"

using namespace bipot;

namespace {

bool same_bits(const SampledFunction& a, const SampledFunction& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].raw() != b[k].raw()) {
            return false;
        }
    }
    return true;
}

SampledFunction interval_indicator(const Grid& g, double r)
{
    return sample(g, [&](const Point& x) { return std::abs(x[0]) <= r + 1e-12 ? 0.0 : std::numeric_limits<double>::infinity(); });
}

} // namespace

TEST_CASE("quadratic is self-conjugate up to h^2")
{
    const Grid g(-4.0, 4.0, 161);
    const double h = g.spacing();
    const SampledFunction star = conjugate(sample(g, [](const Point& x) { return x[0] * x[0] / 2; }), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double y = g.coord(k)[0];
        CHECK(std::abs(star[k].value() - y * y / 2) <= h * h);
    }
}

TEST_CASE("conjugate of an interval indicator is |y| at nodes")
{
    const Grid g(-2.0, 2.0, 41);
    const SampledFunction star = conjugate(interval_indicator(g, 1.0), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(star[k].value() == doctest::Approx(std::abs(g.coord(k)[0])).epsilon(1e-12));
    }
}

TEST_CASE("2D quadratic with K = 2 conjugates to |y|^2 / 4")
{
    const Grid g = Grid::square(-2, 2, 41);
    const double h = g.spacing();
    const SampledFunction star = conjugate(sample(g, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; }), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point y = g.coord(k);
        CHECK(std::abs(star[k].value() - (y[0] * y[0] + y[1] * y[1]) / 4) <= 2 * h * h);
    }
}

TEST_CASE("one-point domain gives a linear conjugate")
{
    const Grid g(-1.0, 1.0, 11);
    SampledFunction phi(g);
    phi[7] = ExtReal(0.3);
    const double x0 = g.coord(7)[0];
    const SampledFunction star = conjugate(phi, g);
    const SampledFunction brute = conjugate_bruteforce(phi, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double y = g.coord(k)[0];
        CHECK(star[k].value() == doctest::Approx(x0 * y - 0.3));
    }
    CHECK(same_bits(star, brute));
}

TEST_CASE("conjugate of |x| is the indicator of [-1,1] capped to +inf")
{
    const Grid x(-1e13, 1e13, 201);
    const Grid y(-2.0, 2.0, 41);
    const SampledFunction star = conjugate_bruteforce(sample(x, [](const Point& p) { return std::abs(p[0]); }), y);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double v = y.coord(k)[0];
        if (std::abs(v) <= 1 - 1e-9) {
            CHECK(star[k].value() == doctest::Approx(0.0).epsilon(1e-6));
        } else if (std::abs(v) > 1.15) {
            CHECK(star[k].is_infinite());
        }
    }
}

TEST_CASE("fast and exhaustive conjugates agree bit for bit")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const SampledFunction phi = testing::random_convex_1d(rng);
        const Grid yg = default_dual_grid(phi);
        CHECK(same_bits(conjugate(phi, yg), conjugate_bruteforce(phi, yg)));
    }
    for (int t = 0; t < 8; ++t) {
        const SampledFunction phi = testing::random_separable_2d(rng);
        const Grid yg = default_dual_grid(phi);
        CHECK(same_bits(conjugate(phi, yg), conjugate_bruteforce(phi, yg)));
    }
    // Nonconvex input too: the max over nodes is still the conjugate.
    const Grid g(-2.0, 2.0, 57);
    const SampledFunction wavy = sample(g, [](const Point& x) { return std::sin(5 * x[0]) + x[0] * x[0]; });
    CHECK(same_bits(conjugate(wavy, g), conjugate_bruteforce(wavy, g)));
}

TEST_CASE("conjugation reverses order and always returns a convex function")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        const SampledFunction phi = testing::random_convex_1d(rng);
        SampledFunction psi = phi;
        for (std::size_t k = 0; k < psi.size(); ++k) {
            psi[k] = psi[k] + testing::uniform(rng, 0, 1);
        }
        const Grid yg = default_dual_grid(phi);
        const SampledFunction a = conjugate(phi, yg);
        const SampledFunction b = conjugate(psi, yg);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(b[k] <= a[k]);
        }
        // psi need not be convex; its conjugate is.
        CHECK(is_convex(b, 1e-9 * (1 + b.scale())).passed);
    }
}

TEST_CASE("empty domain is rejected")
{
    const Grid g(0.0, 1.0, 5);
    CHECK_THROWS_AS(conjugate(SampledFunction(g), g), InvalidInput);
    CHECK_THROWS_AS(conjugate_bruteforce(SampledFunction(g), g), InvalidInput);
    CHECK_THROWS_AS(default_dual_grid(SampledFunction(g)), InvalidInput);
}

TEST_CASE("Fenchel-Young holds and a fake pair is refused")
{
    const Grid g(-2.0, 2.0, 41);
    const SampledFunction phi = sample(g, [](const Point& x) { return x[0] * x[0] / 2; });
    const ConjugatePair pair = make_conjugate_pair(phi, g);
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
        for (std::size_t iy = 0; iy < g.size(); ++iy) {
            CHECK(pair.residual(ix, iy).value() >= -1e-12);
        }
    }
    const SampledFunction zero = sample(g, [](const Point&) { return 0.0; });
    CHECK_THROWS_AS(make_conjugate_pair(phi, zero), std::logic_error);
}

TEST_CASE("subdifferential examples")
{
    const Grid g(-2.0, 2.0, 81);
    const double h = g.spacing();
    const std::size_t y1 = g.nearest({1.0, 0});

    // x^2/2: residual (x - y)^2 / 2 <= h means |x - 1| <= sqrt(2h).
    const ConjugatePair quad = make_conjugate_pair(sample(g, [](const Point& x) { return x[0] * x[0] / 2; }), g);
    for (std::size_t ix : subdiff_points(quad, y1, h)) {
        CHECK(std::abs(g.coord(ix)[0] - 1) <= std::sqrt(2 * h) + 1e-12);
    }
    CHECK(subdiff_points(quad, y1, 1e-12) == std::vector<std::size_t>{g.nearest({1.0, 0})});

    // |x| at y = 1: residual |x| - x, zero on x >= 0 and 2|x| on x < 0.
    const ConjugatePair absf = make_conjugate_pair(sample(g, [](const Point& x) { return std::abs(x[0]); }), g);
    const auto pts = subdiff_points(absf, y1, h);
    for (std::size_t ix = 0; ix < g.size(); ++ix) {
        const bool in = std::find(pts.begin(), pts.end(), ix) != pts.end();
        CHECK(in == (g.coord(ix)[0] >= -h / 2 - 1e-12));
    }
}

TEST_CASE("subdifferentials grow with the tolerance")
{
    const Grid g(-2.0, 2.0, 61);
    const ConjugatePair pair = make_conjugate_pair(sample(g, [](const Point& x) { return std::exp(x[0]); }), g);
    for (std::size_t iy = 0; iy < g.size(); iy += 5) {
        std::vector<std::size_t> prev;
        for (double tol : {1e-12, 1e-3, 1e-2, 0.1, 1.0}) {
            const auto cur = subdiff_points(pair, iy, tol);
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
    }
}

TEST_CASE("biconjugate residual")
{
    const Grid g(-4.0, 4.0, 161);
    const double h = g.spacing();
    CHECK(biconjugate_residual(sample(g, [](const Point& x) { return x[0] * x[0] / 2; })) <= h * h);

    // Indicator of [-1,1]: exact at every domain node.
    CHECK(biconjugate_residual(interval_indicator(Grid(-2.0, 2.0, 41), 1.0)) <= 1e-12);

    // Nonconvex: the largest gap to the convex envelope is 1 at x = 9/8.
    const Grid ng(-1.0, 3.0, 801);
    const double gap = biconjugate_residual(
        sample(ng, [](const Point& x) { return std::min(x[0] * x[0], (x[0] - 2) * (x[0] - 2) + 0.5); }));
    CHECK(gap == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Fenchel-Moreau bound on random convex samples")
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 60; ++t) {
        const SampledFunction phi = testing::random_convex_1d(rng);
        CHECK(biconjugate_residual(phi) <= testing::max_second_difference(phi) + 1e-12);
    }
}
