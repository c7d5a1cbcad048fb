#include <doctest.h>

#include <random>
#include <sstream>

#include "../common/corpus.hpp"
#include "bipot/convexity.hpp"
#include "bipot/csv_io.hpp"
#include "bipot/extreal.hpp"
#include "bipot/grid.hpp"
#include "bipot/min_filter.hpp"
#include "bipot/serial.hpp"

using namespace bipot;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("extreal arithmetic absorbs +inf")
{
    const ExtReal a(2.5);
    CHECK((a + kPlusInf).is_infinite());
    CHECK((kPlusInf + kPlusInf).is_infinite());
    CHECK(kPlusInf.scaled(0.0).is_infinite());
    CHECK(a.scaled(0.0).value() == 0.0);
    CHECK((kPlusInf - 3.0).is_infinite());
    CHECK(min(a, kPlusInf) == a);
    CHECK(max(a, kPlusInf) == kPlusInf);
    CHECK(a < kPlusInf);
    CHECK_THROWS_AS(ExtReal(std::nan("")), InvalidInput);
    CHECK_THROWS_AS(ExtReal(-kInf), InvalidInput);
    CHECK_THROWS_AS(a.scaled(-1), InvalidInput);
    CHECK_THROWS_AS(static_cast<void>(kPlusInf.value()), std::logic_error);
}

TEST_CASE("extreal text round trip")
{
    CHECK(to_string(kPlusInf) == "inf");
    CHECK(parse_extreal("inf").is_infinite());
    for (double v : {0.1, -1e-300, 3.0, 1.0 / 3.0, 123456.789}) {
        CHECK(parse_extreal(to_string(ExtReal(v))).value() == v);
    }
    CHECK_THROWS_AS(parse_extreal("-inf"), InvalidInput);
    CHECK_THROWS_AS(parse_extreal("1.5x"), InvalidInput);
    CHECK_THROWS_AS(parse_extreal("nan"), InvalidInput);
}

TEST_CASE("grid indexing is row-major with the first axis outermost")
{
    const Grid g(Axis{0, 1, 3}, Axis{-1, 1, 5});
    CHECK(g.size() == 15);
    CHECK(g.flat(1, 2) == 7);
    CHECK(g.multi(7) == NodeIndex{1, 2});
    CHECK(g.coord(7)[0] == doctest::Approx(0.5));
    CHECK(g.coord(7)[1] == doctest::Approx(0.0));
    CHECK(g.nearest({0.9, -0.6}) == g.flat(2, 1));
    CHECK(g.nearest({5, 5}) == g.flat(2, 4));
    CHECK_FALSE(g.in_range({3, 0}));
    CHECK_THROWS_AS(Grid(1.0, 1.0, 5), InvalidInput);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 2), InvalidInput);
    CHECK_THROWS_AS(SampledBivariate(Grid(0, 1, 3), Grid::square(0, 1, 3)), InvalidInput);
    CHECK_THROWS_AS(SampledBivariate(Grid::square(0, 1, 300), Grid::square(0, 1, 300)), InvalidInput);
}

TEST_CASE("is_convex examples")
{
    const Grid g(-1.0, 1.0, 21);
    CHECK(is_convex(sample(g, [](const Point& x) { return x[0] * x[0]; }), 1e-12).passed);
    CHECK(is_convex(sample(g, [](const Point& x) { return std::abs(x[0]); }), 1e-12).passed);
    const CheckReport bad = is_convex(sample(g, [](const Point& x) { return -x[0] * x[0]; }), 1e-12);
    CHECK_FALSE(bad.passed);
    CHECK(bad.axiom == "convexity");
    CHECK(bad.witness_nodes.size() == 3);
    CHECK(bad.residual > 0);

    // A hole in the domain is not convex.
    SampledFunction holed = sample(g, [](const Point&) { return 0.0; });
    holed[10] = kPlusInf;
    CHECK_FALSE(is_convex(holed, 0).passed);
    CHECK(is_convex(SampledFunction(g), 0).passed);

    const Grid g2 = Grid::square(-1, 1, 11);
    CHECK(is_convex(sample(g2, [](const Point& x) { return x[0] * x[0] + std::abs(x[1]); }), 1e-12).passed);
    // Convex along rows and columns but not along the diagonal.
    CHECK_FALSE(is_convex(sample(g2, [](const Point& x) { return -x[0] * x[1]; }), 1e-12).passed);
}

TEST_CASE("is_set_convex on masks")
{
    const Grid g(0.0, 1.0, 11);
    CHECK(is_set_convex(std::vector<std::size_t>{2, 3, 4}, g).passed);
    const CheckReport r = is_set_convex(std::vector<std::size_t>{2, 4}, g);
    CHECK_FALSE(r.passed);
    REQUIRE(r.witness_nodes.size() == 1);
    CHECK(r.witness_nodes[0] == 3);
    CHECK_THROWS_AS(is_set_convex(std::vector<std::size_t>{}, g), InvalidInput);

    const Grid g2 = Grid::square(0, 1, 11);
    std::vector<std::size_t> square;
    for (int i = 2; i <= 6; ++i) {
        for (int j = 3; j <= 7; ++j) {
            square.push_back(g2.flat(i, j));
        }
    }
    CHECK(is_set_convex(square, g2).passed);
    std::vector<std::size_t> hole = square;
    std::erase(hole, g2.flat(4, 5));
    CHECK_FALSE(is_set_convex(hole, g2).passed);
    // Collinear members must fill their segment.
    CHECK(is_set_convex(std::vector<std::size_t>{g2.flat(0, 0), g2.flat(1, 1), g2.flat(2, 2)}, g2).passed);
    CHECK_FALSE(is_set_convex(std::vector<std::size_t>{g2.flat(0, 0), g2.flat(2, 2)}, g2).passed);
}

TEST_CASE("lattice hull drops interior and collinear points")
{
    const auto h = lattice_hull({{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}});
    CHECK(h.size() == 4);
}

TEST_CASE("min_filter matches the serial reference bit for bit")
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const Grid g = t % 2 ? Grid(-1.0, 1.0, testing::uniform_int(rng, 5, 80))
                             : Grid(Axis{-1, 1, testing::uniform_int(rng, 5, 40)}, Axis{0, 2, testing::uniform_int(rng, 5, 40)});
        SampledFunction f(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (testing::u01(rng) < 0.8) {
                f[k] = ExtReal(testing::uniform(rng, -5, 5));
            }
        }
        const double r = testing::uniform(rng, 0, 0.6);
        const SampledFunction a = min_filter(f, r);
        const SampledFunction b = serial::min_filter(f, r);
        bool same = true;
        for (std::size_t k = 0; k < g.size(); ++k) {
            same = same && a[k].raw() == b[k].raw();
        }
        CHECK(same);
    }
}

TEST_CASE("min_filter of radius zero is the identity")
{
    const Grid g(0.0, 1.0, 9);
    const SampledFunction f = sample(g, [](const Point& x) { return std::sin(7 * x[0]); });
    const SampledFunction m = min_filter(f, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(m[k] == f[k]);
    }
    CHECK_THROWS_AS(min_filter(f, -1.0), InvalidInput);
}

TEST_CASE("ball offsets respect the norm")
{
    const Grid g = Grid::square(0, 1, 11);
    CHECK(ball_offsets(g, 0.1, 2.0).size() == 5);
    CHECK(ball_offsets(g, 0.1, kInf).size() == 9);
    CHECK(ball_offsets(g, 0.2, 1.0).size() == 13);
}

TEST_CASE("function and bivariate CSV round trip")
{
    const Grid g(-1.0, 2.0, 7);
    SampledFunction f = sample(g, [](const Point& x) { return x[0] / 3; });
    f[0] = kPlusInf;
    std::stringstream s;
    write_function(s, f);
    const SampledFunction back = read_function(s);
    CHECK(back.grid == g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(back[k].raw() == f[k].raw());
    }

    const Grid g2(Axis{0, 1, 3}, Axis{0, 2, 4});
    SampledBivariate b = sample(g2, g2, [](const Point& x, const Point& y) { return x[0] * y[1] - x[1]; });
    b.at(2, 3) = kPlusInf;
    std::stringstream s2;
    write_bivariate(s2, b);
    const SampledBivariate b2 = read_bivariate(s2);
    CHECK(b2.xgrid() == g2);
    for (std::size_t k = 0; k < b.values().size(); ++k) {
        CHECK(b2.values()[k].raw() == b.values()[k].raw());
    }

    GraphSet m(g, g);
    m.insert(1, 2);
    m.insert(5, 0);
    std::stringstream s3;
    write_graph(s3, m);
    CHECK(read_graph(s3) == m);
}

TEST_CASE("CSV parse errors name the line")
{
    auto line_of = [](const std::string& text) -> std::size_t {
        std::stringstream s(text);
        try {
            read_function(s);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("x,value\n0,1\n0.5,2\n1,zz\n") == 4);
    CHECK(line_of("x,value\n0,1\n0.5\n1,2\n") == 3);
    CHECK(line_of("q,value\n0,1\n") == 1);
    CHECK(line_of("x,value\n0,1\n0.5,1\n2,1\n") > 0); // not uniform
    CHECK(line_of("x,value\n0,1\n0.5,2\n1,3\n") == 0);

    std::stringstream graph("# xgrid 0 1 3\n# ygrid 0 1 3\nx_index,y_index\n0,9\n");
    CHECK_THROWS_AS(read_graph(graph), ParseError);
}

TEST_CASE("grid specs and configs")
{
    const Grid g(Axis{-1, 3, 81}, Axis{-2, 2, 41});
    CHECK(parse_grid(grid_spec(g)) == g);
    CHECK(parse_grid("-2:2:101") == Grid(-2.0, 2.0, 101));
    CHECK_THROWS_AS(parse_grid("1:2"), InvalidInput);
    std::stringstream cfg("# comment\nK = 2\neps=0.25\n\nn=11\n");
    const Config c = read_config(cfg);
    CHECK(config_real(c, "K", 0) == 2.0);
    CHECK(config_real(c, "missing", 7) == 7.0);
    CHECK(config_int(c, "n", 0) == 11);
    CHECK_THROWS_AS(config_int(c, "eps", 0), InvalidInput);
}

TEST_CASE("graph sections and near equality")
{
    const Grid g(0.0, 1.0, 5);
    GraphSet a(g, g), b(g, g);
    a.insert(1, 1);
    b.insert(2, 2);
    CHECK(a.y_section(1)[1] == 1);
    CHECK(a.x_section(1)[1] == 1);
    CHECK(equal_within_one_node(a, b).equal);
    b.erase(2, 2);
    b.insert(4, 4);
    CHECK_FALSE(equal_within_one_node(a, b).equal);
}
