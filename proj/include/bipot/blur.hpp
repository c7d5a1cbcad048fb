#pragma once

#include <string>
#include <vector>

#include "bipot/check_report.hpp"
#include "bipot/grid.hpp"
#include "bipot/legendre.hpp"
#include "bipot/min_filter.hpp"

namespace bipot {

/// Indeterminacy set A. YBall: {0} × B̄_Y(eps). Product: {‖(x,y)‖ <= eps} with
/// ‖(x,y)‖ = (‖x‖^p + ‖y‖^p)^(1/p).
struct BlurSpec {
    enum class Kind { YBall, Product };
    Kind kind = Kind::YBall;
    double eps = 0.0;
    double p = 2.0;
};

std::string to_string(BlurSpec::Kind k);
/// "yball" or "product"; throws InvalidInput otherwise.
BlurSpec::Kind parse_blur_kind(const std::string& s);

/// Throws ResolutionError("blur radius below grid resolution") when
/// 0 < eps < h, h the largest spacing of the grids A acts on.
void check_blur_resolution(const BlurSpec& spec, const Grid& xg, const Grid& yg);

/// Joint node offsets of A: pairs (x-offset, y-offset). The y-ball kind has a
/// zero x-offset throughout. For the product kind the y-offsets paired with an
/// x-offset ox form the Y-ball of radius (eps^p - ‖ox‖^p)^(1/p).
struct JointOffset {
    Offset x;
    Offset y;
};
std::vector<JointOffset> blur_offsets(const BlurSpec& spec, const Grid& xg, const Grid& yg);

/// c_A = c ∇ χ_A. Y-ball: a per-x min_filter in y, parallel over x. Product:
/// the x-offsets are grouped by their residual y-radius and each group reuses
/// one filtered copy of c.
SampledBivariate inf_convolve_blur(const SampledBivariate& c, const BlurSpec& spec);

/// One y-slice of the blurred law computed through the conjugate of
/// ψ_y = φ* restricted to the ball around y:
///   c_A(x,y) = φ(x) - ψ_y*(x),  b_A(x,y) = c_A(x,y) + ⟨x,y⟩.
struct BlurredSlice {
    SampledFunction cA;
    SampledFunction bA;
};
BlurredSlice blurred_slice(const ConjugatePair& pair, double eps, std::size_t iy);

/// b_A(x,y) = φ(x) + min over ball offsets a of [φ*(y-a) + ⟨x,a⟩] on the pair's grids.
SampledBivariate blurred_bipotential(const ConjugatePair& pair, double eps);
/// Same, with φ* = conjugate(φ) on ygrid. Requires the y-ball kind.
SampledBivariate blurred_bipotential(const SampledFunction& phi, const Grid& ygrid, const BlurSpec& spec);
/// c_A of the separable sync, via the same conjugate route.
SampledBivariate blurred_sync(const ConjugatePair& pair, double eps);

/// Fenchel–Young equality set {(x,ȳ) : φ(x) + φ*(ȳ) - ⟨x,ȳ⟩ <= tol}.
GraphSet fy_graph(const ConjugatePair& pair, double tol);

/// Nodewise M + A; sets `clipped` when some offset left the box.
GraphSet minkowski_sum(const GraphSet& m, const BlurSpec& spec);

/// M(φ, eps) = M + A for the y-ball kind: the Fenchel–Young set stamped with
/// the ball offsets.
GraphSet blurred_graph(const ConjugatePair& pair, double eps, double tol);

/// U(y) = ⋃ over ball nodes ȳ of subdiff_points(pair, ȳ, tol), tested with
/// is_set_convex. Also compares U(y) with the zero set of c_A(·,y) from
/// blurred_slice (within one node). An empty union passes vacuously.
CheckReport check_newc(const ConjugatePair& pair, double eps, std::size_t iy, double tol);

/// Graph form: check_bbgraph(M + A).
CheckReport check_admits_blurring(const GraphSet& m, const BlurSpec& spec);
/// Sync form: check_sync(c_A) and {c_A <= tol} == {c <= tol} + A within one node.
CheckReport check_admits_blurring(const SampledBivariate& c, const BlurSpec& spec, double tol);

struct BlurredLaw {
    SampledFunction phi;
    BlurSpec spec;
    SampledBivariate cA;
    SampledBivariate bA;
    GraphSet MplusA;
};
BlurredLaw make_blurred_law(const ConjugatePair& pair, const BlurSpec& spec, double tol);

} // namespace bipot
