#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bipot/check_report.hpp"
#include "bipot/grid.hpp"
#include "bipot/legendre.hpp"
#include "bipot/min_filter.hpp"

namespace bipot {

/// Finite family z ↦ f(λ, z) over a grid of z-nodes.
class IndexedFamily {
public:
    virtual ~IndexedFamily() = default;
    virtual std::size_t lambda_count() const = 0;
    virtual const Grid& zgrid() const = 0;
    virtual ExtReal value(std::size_t lambda, std::size_t z) const = 0;
    /// m(z) = min over λ of f(λ, z) and one minimizing λ per node.
    /// The default loops over every λ.
    virtual void fiber_min(std::vector<ExtReal>& m, std::vector<std::size_t>& arg) const;
};

/// Family given by a callable f(λ, z-node index).
class FunctionFamily final : public IndexedFamily {
public:
    FunctionFamily(Grid z, std::size_t lambdas, std::function<ExtReal(std::size_t, std::size_t)> f)
        : z_(std::move(z)), n_(lambdas), f_(std::move(f))
    {
    }
    std::size_t lambda_count() const override { return n_; }
    const Grid& zgrid() const override { return z_; }
    ExtReal value(std::size_t l, std::size_t z) const override { return f_(l, z); }

private:
    Grid z_;
    std::size_t n_;
    std::function<ExtReal(std::size_t, std::size_t)> f_;
};

/// The cover b_a(x,y) = φ(x) + φ*(y-a) + ⟨x,a⟩, a ranging over the y-node
/// offsets of the closed eps-ball. y - a is taken on the node grid; outside
/// the box the member is +∞.
struct CoverFamily {
    ConjugatePair pair;
    double eps = 0.0;
    std::vector<Offset> lambda_nodes;

    std::size_t size() const { return lambda_nodes.size(); }
    ExtReal value(std::size_t k, std::size_t ix, std::size_t iy) const;
    SampledBivariate member(std::size_t k) const;
    /// Index of the zero offset.
    std::size_t zero_index() const;
};

/// Throws ResolutionError when 0 < eps < h (h = largest y spacing).
CoverFamily build_cover(const ConjugatePair& pair, double eps);
CoverFamily build_cover(const SampledFunction& phi, const Grid& ygrid, double eps);

/// f(·,·,y) of a cover: λ = a, z = x. In 2D the fiber minimum is computed row
/// by row over the ball, which is exact and avoids the full |ball|·|X| scan.
class CoverYSlice final : public IndexedFamily {
public:
    CoverYSlice(const CoverFamily& c, std::size_t iy) : c_(c), iy_(iy) {}
    std::size_t lambda_count() const override { return c_.size(); }
    const Grid& zgrid() const override { return c_.pair.phi.grid; }
    ExtReal value(std::size_t k, std::size_t ix) const override { return c_.value(k, ix, iy_); }
    void fiber_min(std::vector<ExtReal>& m, std::vector<std::size_t>& arg) const override;

private:
    const CoverFamily& c_;
    std::size_t iy_;
};

/// f(·,x,·) of a cover: λ = a, z = y.
class CoverXSlice final : public IndexedFamily {
public:
    CoverXSlice(const CoverFamily& c, std::size_t ix) : c_(c), ix_(ix) {}
    std::size_t lambda_count() const override { return c_.size(); }
    const Grid& zgrid() const override { return c_.pair.phistar.grid; }
    ExtReal value(std::size_t k, std::size_t iy) const override { return c_.value(k, ix_, iy); }

private:
    const CoverFamily& c_;
    std::size_t ix_;
};

struct ImplicitOptions {
    std::vector<double> alphas{0.5};
    double tol = 1e-9;
    /// Above this many candidate pairs the scan is subsampled.
    std::size_t pair_cap = 200000;
    std::uint64_t seed = 1;
};

/// Implicit convexity on grid-aligned combinations.
///
/// For fixed z1, z2 and α the weakest right-hand side is attained at the fiber
/// minima, so ∀λ1,λ2 ∃λ: f(λ, αz1+βz2) <= α f(λ1,z1) + β f(λ2,z2) + tol
/// holds iff m(αz1+βz2) <= α m(z1) + β m(z2) + tol, m the fiber minimum.
/// Pairs whose combination is not exactly a node are skipped. When the
/// candidate count exceeds pair_cap, every pair two nodes apart along the
/// four lattice directions is kept and the rest of the budget is drawn with
/// a seeded generator; mode, cap, stride and seed are reported.
/// Throws InvalidInput if alphas lacks 0.5 and ResolutionError("grid too
/// coarse for alpha set") if no aligned pair exists.
CheckReport check_implicitly_convex(const IndexedFamily& f, const ImplicitOptions& opt = {});

/// Pointwise minimum over the members.
SampledBivariate infimum_bipotential(const CoverFamily& family);

/// New indexing λ'_k = λ_perm[k]. Throws InvalidInput unless perm is a bijection.
CoverFamily reparameterize(const CoverFamily& family, std::span<const std::size_t> perm);

struct MaithmOptions {
    /// Convexity tolerance of verdict 1 and graph membership tolerance.
    double tol = 1e-9;
    std::size_t pair_cap = 200000;
    std::uint64_t seed = 1;
};

/// Per y-node: verdict 1 = is_convex(b_A(·,y)) and {x : c_A(x,y) <= tol}
/// equals the y-section of blurred_graph within one node; verdict 2 =
/// check_implicitly_convex(f(·,·,y)) with tol/2 (so that neighbouring
/// triples are judged exactly as by is_convex). Passes iff the two agree at
/// every y; the witness is the first y where they disagree. y-nodes whose
/// ball misses dom φ* are skipped.
CheckReport check_maithm_equivalence(const ConjugatePair& pair, double eps, const MaithmOptions& opt = {});

} // namespace bipot
