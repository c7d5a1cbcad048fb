#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bipot/check_report.hpp"
#include "bipot/grid.hpp"

namespace bipot {

/// c(x,y) = b(x,y) - ⟨x,y⟩, +∞ absorbing.
SampledBivariate sync_from_bipotential(const SampledBivariate& b);
/// b(x,y) = c(x,y) + ⟨x,y⟩. Throws InvalidInput if c has a negative entry.
SampledBivariate bipotential_from_sync(const SampledBivariate& c);

/// b(x,y) = φ(x) + φ*(y) with φ* from conjugate() on ygrid.
SampledBivariate separable(const SampledFunction& phi, const Grid& ygrid);
/// Same, on default_dual_grid(phi).
SampledBivariate separable(const SampledFunction& phi);

/// b_∞ = ⟨x,y⟩ on M, +∞ elsewhere. Throws InvalidInput on empty M.
SampledBivariate b_infinity(const GraphSet& m);

/// Node pairs with b(x,y) - ⟨x,y⟩ <= tol.
GraphSet graph_of(const SampledBivariate& b, double tol);

struct BipotentialCheckOptions {
    /// Scalar tolerance for axioms (b) and (c). Unset: 3h·(1 + |⟨x,y⟩|) per pair.
    std::optional<double> tol;
    /// Slice convexity tolerance, relative to 1 + the slice's max |value|.
    double convexity_rel_tol = 1e-9;
};

/// Checks the bipotential axioms on a sampled b.
///
/// (a) every slice with nonempty domain passes is_convex (y-slices b(·,y)
/// first, then x-slices b(x,·)); (b) b >= ⟨x,y⟩ - tol; (c) the three
/// memberships y ∈ ∂b(·,y)(x), x ∈ ∂b(x,·)(y), b = ⟨x,y⟩ coincide: each is
/// decided by a residual (the first two by the Fenchel–Young residual of the
/// conjugated slice) and the residuals must agree within tol. All-+∞ slices
/// are skipped.
CheckReport check_bipotential(const SampledBivariate& b, const BipotentialCheckOptions& opt = {});

/// Checks the sync axioms: c >= -tol, slice convexity, every attained slice
/// minimum over a nonempty slice is <= tol. The verdict is cross-checked
/// against check_bipotential(c + ⟨x,y⟩) and a disagreement is itself a failure
/// (axiom "psync-crosscheck").
CheckReport check_sync(const SampledBivariate& c, double tol, double convexity_rel_tol = 1e-9);

/// Every nonempty section M*(y) and M(x) passes is_set_convex. Closedness is
/// vacuous on finite grids and reported as such. The witness nodes are the
/// members of the failing section.
CheckReport check_bbgraph(const GraphSet& m);

struct PointPair {
    Point x{};
    Point y{};
};

/// Exhaustive cyclic-monotonicity test over all cycles of length <= n_max
/// (n_max is clamped to the point count). The residual of a failure is the
/// violating cycle sum.
CheckReport check_cyclically_monotone(std::span<const PointPair> pts, int n_max, int dim = 1, double tol = 1e-12);

} // namespace bipot
