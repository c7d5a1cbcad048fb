#pragma once

#include <array>
#include <string>

#include "bipot/blur.hpp"
#include "bipot/csv_io.hpp"
#include "bipot/grid.hpp"
#include "bipot/legendre.hpp"

namespace bipot {

// Blurred linear elasticity: φ(x) = K/2 x², A = {0} × B̄(eps).
struct ElasticityFixture {
    double K = 1.0;
    double eps = 0.5;
    Grid x{-2.0, 2.0, 401};
    Grid y{-2.0, 2.0, 401};
};
/// Throws InvalidInput unless K > 0 and eps = 0 or eps >= h.
void validate(const ElasticityFixture& fix);
ElasticityFixture elasticity_from_config(const Config& c);

/// 1/(2K)·((|y - Kx| - eps)_+)².
double elasticity_cA(double K, double eps, double x, double y);
SampledBivariate elasticity_closed_form_cA(const ElasticityFixture& fix);
/// K/2 x² + y²/(2K) - xy.
SampledBivariate elasticity_sync(const ElasticityFixture& fix);
SampledFunction elasticity_phi(const ElasticityFixture& fix);
/// True when (x, y) lies at least eps inside the y-box (the blur window is not clipped).
bool elasticity_interior(const ElasticityFixture& fix, std::size_t iy);

// Two points M = {(x1,y1), (x2,y2)} with the y-ball blur.
struct TwoPointFixture {
    GraphSet m;
    BlurSpec spec;
};
/// Snaps the points to the nearest nodes. Throws InvalidInput when x1 == x2 or y1 == y2.
TwoPointFixture two_point_fixture(double x1, double y1, double x2, double y2, double eps, const Grid& xg,
                                  const Grid& yg);
/// [-1, 3] with 201 nodes, so that 0 and 1 are nodes and the blur is never clipped.
Grid two_point_default_grid();

// Cone: φ* = χ_F, F = {|y2| <= alpha·y1}, probed at y* = (y1, alpha·y1).
struct ConeFixture {
    double alpha = 0.5;
    double y1 = 1.0;
    double eps = 1.0;
    Grid x = Grid::square(-1.0, 1.0, 81);
    Grid y = Grid(Axis{-1.0, 3.0, 81}, Axis{-2.0, 2.0, 81});
};
ConeFixture cone_from_config(const Config& c);

/// The admissible window (2α/√(1+α²)·y1, y1·√(1+α²)).
std::array<double, 2> cone_window(double alpha, double y1);
/// Outward unit normals of the half-lines y2 = ±alpha·y1.
std::array<Point, 2> cone_normals(double alpha);

struct ConeData {
    ConjugatePair pair; // φ = support function of F on the X-grid, φ* = χ_F
    std::size_t y_star = 0;
    std::array<double, 2> window{};
};
/// Throws InvalidInput (with both bounds) when eps is outside the window or
/// y* is not a node of the y-grid.
ConeData cone_fixture(const ConeFixture& fix);

} // namespace bipot
