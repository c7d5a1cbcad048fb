#pragma once

// Straightforward single-threaded implementations of the parallel kernels.
// They follow the defining formulas directly and serve as test oracles and
// benchmark baselines.

#include "bipot/blur.hpp"
#include "bipot/grid.hpp"
#include "bipot/legendre.hpp"

namespace bipot::serial {

/// min over every ball offset, node by node.
SampledFunction min_filter(const SampledFunction& f, double radius);

/// min over every joint offset of A, pair by pair.
SampledBivariate inf_convolve_blur(const SampledBivariate& c, const BlurSpec& spec);

/// b_A(x,y) = φ(x) + min over ball offsets a of [φ*(y-a) + ⟨x,a⟩].
SampledBivariate blurred_bipotential(const ConjugatePair& pair, double eps);

/// (x,y) with some ball node ȳ around y having Fenchel–Young residual <= tol.
GraphSet blurred_graph(const ConjugatePair& pair, double eps, double tol);

} // namespace bipot::serial
