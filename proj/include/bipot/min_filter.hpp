#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bipot/grid.hpp"

namespace bipot {

/// Node offset inside a discrete ball.
struct Offset {
    int d0 = 0;
    int d1 = 0;
};

/// Flat index of node k moved by sign·o, or nullopt when it leaves the grid.
std::optional<std::size_t> shifted(const Grid& g, std::size_t k, Offset o, int sign = 1);

/// Offsets (d0, d1) with ‖(d0·h0, d1·h1)‖_p <= radius, p >= 1 (p = inf allowed).
/// Membership uses a relative slack of 1e-9 so that nodes exactly on the
/// sphere are kept despite rounding in lo + i·h.
std::vector<Offset> ball_offsets(const Grid& g, double radius, double p = 2.0);

/// Largest |d1| in the ball for each d0 in [-W0, W0] (index d0 + W0).
std::vector<int> ball_row_widths(const Grid& g, double radius, double p = 2.0);

/// g(y) = min{ f(ȳ) : ȳ a node, ‖ȳ - y‖ <= radius }.
///
/// The 2D disc is decomposed into row segments and evaluated with sliding
/// window minima; rows are processed in parallel. Only comparisons are made,
/// so the result is bit-identical to serial::min_filter.
SampledFunction min_filter(const SampledFunction& f, double radius);

/// Kernel form of min_filter on raw values laid out on g.
void min_filter_into(const Grid& g, std::span<const ExtReal> in, std::span<ExtReal> out, double radius);

/// out[j] = min(in[j-w .. j+w]) clipped to the range, for a strided line.
void sliding_min(std::span<const ExtReal> in, std::span<ExtReal> out, int w);

} // namespace bipot
