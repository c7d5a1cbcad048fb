#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bipot/check_report.hpp"
#include "bipot/grid.hpp"

namespace bipot {

/// Discrete convexity of a sampled extended-real function.
///
/// 1D: the finite nodes form one contiguous run and every interior second
/// difference f(i-1) - 2 f(i) + f(i+1) is >= -tol. 2D: the same test along
/// every row, column, diagonal and anti-diagonal. On failure the report
/// carries the offending triple (witness_nodes) and the violation amount
/// -(second difference) as residual. An empty domain passes vacuously.
CheckReport is_convex(const SampledFunction& f, double tol);

/// Convexity of a node set given as a membership mask over g.
///
/// 1D: the members are contiguous. 2D: every node lying in the convex hull of
/// the members at distance > h/2 from its boundary (h = largest spacing) is a
/// member; when the members are collinear, every lattice point on the spanned
/// segment must be a member. Witness: the first missing node. Throws
/// InvalidInput on an empty set.
CheckReport is_set_convex(std::span<const std::uint8_t> mask, const Grid& g);
CheckReport is_set_convex(const std::vector<std::size_t>& points, const Grid& g);

/// Mask with the given flat indices set.
std::vector<std::uint8_t> make_mask(const Grid& g, const std::vector<std::size_t>& points);
std::vector<std::size_t> mask_members(std::span<const std::uint8_t> mask);

/// Lattice-exact convex hull (monotone chain, counter-clockwise, collinear
/// points dropped) of integer node indices.
std::vector<NodeIndex> lattice_hull(std::vector<NodeIndex> pts);

} // namespace bipot
