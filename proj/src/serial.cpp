#include "bipot/serial.hpp"

#include "bipot/min_filter.hpp"

namespace bipot::serial {

SampledFunction min_filter(const SampledFunction& f, double radius)
{
    const auto offs = ball_offsets(f.grid, radius);
    SampledFunction out(f.grid);
    for (std::size_t k = 0; k < f.size(); ++k) {
        ExtReal best = kPlusInf;
        for (const Offset& o : offs) {
            if (const auto j = shifted(f.grid, k, o)) {
                best = min(best, f[*j]);
            }
        }
        out[k] = best;
    }
    return out;
}

SampledBivariate inf_convolve_blur(const SampledBivariate& c, const BlurSpec& spec)
{
    const auto offs = blur_offsets(spec, c.xgrid(), c.ygrid());
    SampledBivariate out(c.xgrid(), c.ygrid());
    for (std::size_t ix = 0; ix < c.nx(); ++ix) {
        for (std::size_t iy = 0; iy < c.ny(); ++iy) {
            ExtReal best = kPlusInf;
            for (const JointOffset& o : offs) {
                const auto jx = shifted(c.xgrid(), ix, o.x, -1);
                const auto jy = shifted(c.ygrid(), iy, o.y, -1);
                if (jx && jy) {
                    best = min(best, c.at(*jx, *jy));
                }
            }
            out.at(ix, iy) = best;
        }
    }
    return out;
}

SampledBivariate blurred_bipotential(const ConjugatePair& pair, double eps)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}, xg, yg);
    const auto offs = ball_offsets(yg, eps);
    const int dim = xg.dim();
    const double h0 = yg.axis(0).spacing();
    const double h1 = dim == 2 ? yg.axis(1).spacing() : 0.0;
    SampledBivariate out(xg, yg);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        if (!pair.phi[ix].is_finite()) {
            continue;
        }
        const Point x = xg.coord(ix);
        for (std::size_t iy = 0; iy < yg.size(); ++iy) {
            ExtReal best = kPlusInf;
            for (const Offset& o : offs) {
                const auto src = shifted(yg, iy, o, -1); // y - a
                if (!src || !pair.phistar[*src].is_finite()) {
                    continue;
                }
                const Point a{o.d0 * h0, o.d1 * h1};
                best = min(best, ExtReal(pair.phistar[*src].value() + dot(dim, x, a)));
            }
            out.at(ix, iy) = pair.phi[ix] + best;
        }
    }
    return out;
}

GraphSet blurred_graph(const ConjugatePair& pair, double eps, double tol)
{
    const Grid& xg = pair.phi.grid;
    const Grid& yg = pair.phistar.grid;
    check_blur_resolution(BlurSpec{BlurSpec::Kind::YBall, eps, 2.0}, xg, yg);
    const auto offs = ball_offsets(yg, eps);
    GraphSet out(xg, yg);
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        for (std::size_t iy = 0; iy < yg.size(); ++iy) {
            bool hit = false;
            for (const Offset& o : offs) {
                const auto src = shifted(yg, iy, o, -1);
                if (!src) {
                    continue;
                }
                const ExtReal r = pair.residual(ix, *src);
                hit = hit || (r.is_finite() && r.value() <= tol);
            }
            if (hit) {
                out.insert(ix, iy);
            }
        }
    }
    return out;
}

} // namespace bipot::serial
