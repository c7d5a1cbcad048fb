#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bipot/grid.hpp"

namespace bipot {

/// Conjugate values above this are reported as +∞ (finite grids cannot
/// otherwise express an unbounded supremum).
inline constexpr double kDefaultConjugateCap = 1e12;

/// φ*(y) = max over finite x-nodes of ⟨x,y⟩ - φ(x), evaluated on ygrid.
///
/// 1D uses the linear-time Legendre transform over the lower hull of the
/// finite graph points. 2D applies the 1D transform along axis 1 and then
/// along axis 0; the per-term rounding is x0·y0 + (x1·y1 - φ) in both this
/// routine and conjugate_bruteforce, so the two agree bit for bit.
/// Throws InvalidInput when φ ≡ +∞.
SampledFunction conjugate(const SampledFunction& phi, const Grid& ygrid, double cap = kDefaultConjugateCap);

/// Exhaustive O(N·M) maximization with the same contract as conjugate.
SampledFunction conjugate_bruteforce(const SampledFunction& phi, const Grid& ygrid,
                                     double cap = kDefaultConjugateCap);

/// Dual grid covering the slopes of φ: per axis, the range of finite
/// differences padded by 10% on each side, same node count. A single slope is
/// padded by 1; an axis without any finite difference keeps the primal box.
Grid default_dual_grid(const SampledFunction& phi);

/// Kernel: max over the finite entries of (xs[i], vs[i]) of xs[i]·y - vs[i] for
/// each ascending y. xs must be strictly increasing. Returns false when there
/// are no points.
bool legendre_1d(std::span<const double> xs, std::span<const double> vs, std::span<const double> ys,
                 std::span<double> out);

/// Kernel: uncapped conjugate of raw values on xg evaluated on yg. Returns
/// false (and leaves out untouched) when every value is +∞.
bool conjugate_raw(const Grid& xg, std::span<const ExtReal> vals, const Grid& yg, std::span<double> out);

/// The pair (φ, φ*) with its Fenchel–Young tolerance.
struct ConjugatePair {
    SampledFunction phi;
    SampledFunction phistar;
    double fy_tol = 0.0;

    /// φ(x) + φ*(y) - ⟨x,y⟩; +∞ when either term is.
    ExtReal residual(std::size_t ix, std::size_t iy) const;
    /// Default subdifferential tolerance at a y-node: h·(1 + ‖y‖), h the larger spacing.
    double default_tol(std::size_t iy) const;
};

/// Builds the pair and checks Fenchel–Young (φ + φ* >= ⟨x,y⟩ - fy_tol) at every
/// finite node pair; throws std::logic_error if it fails.
ConjugatePair make_conjugate_pair(const SampledFunction& phi, const Grid& ygrid, double fy_tol = 1e-9,
                                  double cap = kDefaultConjugateCap);

/// Pairs φ with a given φ* (e.g. an indicator whose conjugate φ was derived
/// from it) after the same Fenchel–Young verification.
ConjugatePair make_conjugate_pair(const SampledFunction& phi, const SampledFunction& phistar, double fy_tol = 1e-9);

/// Discrete ∂φ*(y): x-nodes whose Fenchel–Young residual at y is <= tol.
std::vector<std::size_t> subdiff_points(const ConjugatePair& pair, std::size_t iy, double tol);

/// max |φ**(x) - φ(x)| over nodes where both are finite; φ* is taken on the
/// default dual grid and φ** back on φ's grid.
double biconjugate_residual(const SampledFunction& phi);

} // namespace bipot
