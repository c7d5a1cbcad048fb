#include <doctest.h>

#include "bipot/bipotential.hpp"
#include "bipot/blur.hpp"
#include "bipot/covers.hpp"
#include "bipot/worked_examples.hpp"

using namespace bipot;

TEST_CASE("elasticity closed form on a small grid")
{
    ElasticityFixture fix;
    fix.K = 2.0;
    fix.eps = 0.3;
    fix.x = Grid(-1.5, 1.5, 61);
    fix.y = Grid(-1.5, 1.5, 61);
    const double h = fix.y.spacing();
    const SampledBivariate ca = inf_convolve_blur(elasticity_sync(fix), BlurSpec{BlurSpec::Kind::YBall, fix.eps, 2.0});
    const SampledBivariate oracle = elasticity_closed_form_cA(fix);
    for (std::size_t ix = 0; ix < ca.nx(); ++ix) {
        for (std::size_t iy = 0; iy < ca.ny(); ++iy) {
            if (elasticity_interior(fix, iy)) {
                CHECK(std::abs(ca.at(ix, iy).value() - oracle.at(ix, iy).value()) <= 2 * h);
            }
        }
    }
    CHECK(elasticity_cA(1, 0.5, 1, 1.2) == 0.0);
    CHECK(elasticity_cA(1, 0.5, 0, 1.5) == doctest::Approx(0.5));
}

TEST_CASE("elasticity fixture validation")
{
    ElasticityFixture fix;
    fix.K = 0;
    CHECK_THROWS_AS(validate(fix), InvalidInput);
    fix.K = 1;
    fix.eps = 0.001;
    CHECK_THROWS_AS(validate(fix), ResolutionError);
    Config c{{"K", "2"}, {"n", "101"}};
    const ElasticityFixture f = elasticity_from_config(c);
    CHECK(f.K == 2.0);
    CHECK(f.x.axis(0).n == 101);
}

TEST_CASE("two-point fixture")
{
    const Grid g = two_point_default_grid();
    CHECK_THROWS_AS(two_point_fixture(0, 0, 0, 1, 0.4, g, g), InvalidInput);
    CHECK_THROWS_AS(two_point_fixture(0, 0, 1, 1, 0.01, g, g), ResolutionError);
    const TwoPointFixture f = two_point_fixture(0, 0, 1, 1, 0.6, g, g);
    CHECK(f.m.count() == 2);
    const CheckReport r = check_admits_blurring(f.m, f.spec);
    CHECK_FALSE(r.passed);
    CHECK(r.witness_nodes == std::vector<std::size_t>{g.nearest({0, 0}), g.nearest({1, 0})});
}

TEST_CASE("cone window and normals")
{
    const auto w = cone_window(0.5, 1.0);
    CHECK(w[0] == doctest::Approx(1 / std::sqrt(1.25)));
    CHECK(w[1] == doctest::Approx(std::sqrt(1.25)));
    const auto n = cone_normals(0.5);
    CHECK(n[0][0] * n[0][0] + n[0][1] * n[0][1] == doctest::Approx(1.0));
    // n1 is orthogonal to the boundary ray (1, alpha).
    CHECK(n[0][0] + 0.5 * n[0][1] == doctest::Approx(0.0));

    ConeFixture fix;
    fix.eps = 0.5;
    CHECK_THROWS_WITH_AS(cone_fixture(fix), doctest::Contains("outside the admissible window"), InvalidInput);
    fix.eps = 1.0;
    fix.y = Grid(Axis{-1, 3, 80}, Axis{-2, 2, 80});
    CHECK_THROWS_WITH_AS(cone_fixture(fix), doctest::Contains("not a node"), InvalidInput);
}

TEST_CASE("cone fixture: newc fails at y* and the blurred graph is not a BB-graph")
{
    ConeFixture fix;
    fix.x = Grid::square(-1, 1, 41);
    fix.y = Grid(Axis{-1, 3, 41}, Axis{-2, 2, 41});
    const ConeData d = cone_fixture(fix);
    const CheckReport r = check_newc(d.pair, fix.eps, d.y_star, 1e-9);
    CHECK_FALSE(r.passed);
    CHECK(r.axiom == "newc");
    CHECK_FALSE(check_bbgraph(blurred_graph(d.pair, fix.eps, 1e-9)).passed);
    // phi is the support function of the cone: positively homogeneous.
    const std::size_t a = fix.x.nearest({0.5, 0.25});
    const std::size_t b = fix.x.nearest({1.0, 0.5});
    CHECK(d.pair.phi[b].value() == doctest::Approx(2 * d.pair.phi[a].value()).epsilon(1e-9));
}

TEST_CASE("cone config overrides")
{
    const ConeFixture f = cone_from_config(Config{{"alpha", "0.25"}, {"x_n", "21"}});
    CHECK(f.alpha == 0.25);
    CHECK(f.x.axis(1).n == 21);
}
