#include "bipot/min_filter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace bipot {

namespace {

double pnorm(double a, double b, double p)
{
    a = std::abs(a);
    b = std::abs(b);
    if (std::isinf(p)) {
        return std::max(a, b);
    }
    if (p == 2.0) {
        return std::hypot(a, b);
    }
    if (p == 1.0) {
        return a + b;
    }
    return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

constexpr double kBallSlack = 1e-9;

} // namespace

std::optional<std::size_t> shifted(const Grid& g, std::size_t k, Offset o, int sign)
{
    NodeIndex m = g.multi(k);
    m[0] += sign * o.d0;
    m[1] += sign * o.d1;
    if (!g.in_range(m)) {
        return std::nullopt;
    }
    return g.flat(m);
}

std::vector<Offset> ball_offsets(const Grid& g, double radius, double p)
{
    if (!(radius >= 0)) {
        throw InvalidInput("ball radius must be >= 0");
    }
    if (!(p >= 1)) {
        throw InvalidInput("norm exponent must be >= 1");
    }
    const double h0 = g.axis(0).spacing();
    const double lim = radius * (1 + kBallSlack);
    const int w0 = std::min(static_cast<int>(std::floor(lim / h0)), g.axis(0).n - 1);
    std::vector<Offset> out;
    if (g.dim() == 1) {
        for (int d = -w0; d <= w0; ++d) {
            out.push_back({d, 0});
        }
        return out;
    }
    const double h1 = g.axis(1).spacing();
    const int w1 = std::min(static_cast<int>(std::floor(lim / h1)), g.axis(1).n - 1);
    for (int d0 = -w0; d0 <= w0; ++d0) {
        for (int d1 = -w1; d1 <= w1; ++d1) {
            if (pnorm(d0 * h0, d1 * h1, p) <= lim) {
                out.push_back({d0, d1});
            }
        }
    }
    return out;
}

std::vector<int> ball_row_widths(const Grid& g, double radius, double p)
{
    const auto offs = ball_offsets(g, radius, p);
    int w0 = 0;
    for (const Offset& o : offs) {
        w0 = std::max(w0, std::abs(o.d0));
    }
    std::vector<int> widths(static_cast<std::size_t>(2 * w0 + 1), -1);
    for (const Offset& o : offs) {
        auto& w = widths[static_cast<std::size_t>(o.d0 + w0)];
        w = std::max(w, std::abs(o.d1));
    }
    return widths;
}

void sliding_min(std::span<const ExtReal> in, std::span<ExtReal> out, int w)
{
    const int n = static_cast<int>(in.size());
    if (w <= 0) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    // Monotone deque of indices with increasing values.
    std::deque<int> dq;
    int next = 0;
    for (int j = 0; j < n; ++j) {
        const int hi = std::min(n - 1, j + w);
        for (; next <= hi; ++next) {
            while (!dq.empty() && in[static_cast<std::size_t>(next)] <= in[static_cast<std::size_t>(dq.back())]) {
                dq.pop_back();
            }
            dq.push_back(next);
        }
        while (dq.front() < j - w) {
            dq.pop_front();
        }
        out[static_cast<std::size_t>(j)] = in[static_cast<std::size_t>(dq.front())];
    }
}

void min_filter_into(const Grid& g, std::span<const ExtReal> in, std::span<ExtReal> out, double radius)
{
    if (!(radius >= 0)) {
        throw InvalidInput("min_filter: radius must be >= 0");
    }
    if (g.dim() == 1) {
        const auto offs = ball_offsets(g, radius);
        sliding_min(in, out, offs.back().d0);
        return;
    }
    const auto widths = ball_row_widths(g, radius);
    const int w0 = static_cast<int>(widths.size() / 2);
    const int n0 = g.axis(0).n;
    const int n1 = g.axis(1).n;
    const auto row = [&](auto& v, int i) {
        return v.subspan(static_cast<std::size_t>(i) * static_cast<std::size_t>(n1), static_cast<std::size_t>(n1));
    };

    // Row minima for each distinct half-width.
    std::map<int, std::vector<ExtReal>> rowmins;
    for (int w : widths) {
        rowmins.try_emplace(w);
    }
    for (auto& [w, buf] : rowmins) {
        buf.resize(g.size());
        std::span<ExtReal> dst(buf);
        const int width = w;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n0; ++i) {
            sliding_min(row(in, i), row(dst, i), width);
        }
    }
    std::vector<const std::vector<ExtReal>*> by_offset(widths.size());
    for (std::size_t t = 0; t < widths.size(); ++t) {
        by_offset[t] = &rowmins.at(widths[t]);
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            ExtReal best = kPlusInf;
            for (int d0 = -w0; d0 <= w0; ++d0) {
                const int src = i + d0;
                if (src < 0 || src >= n0) {
                    continue;
                }
                const auto& rm = *by_offset[static_cast<std::size_t>(d0 + w0)];
                best = min(best, rm[static_cast<std::size_t>(src) * static_cast<std::size_t>(n1) +
                                    static_cast<std::size_t>(j)]);
            }
            out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)] = best;
        }
    }
}

SampledFunction min_filter(const SampledFunction& f, double radius)
{
    SampledFunction out(f.grid);
    min_filter_into(f.grid, f.vals, out.vals, radius);
    return out;
}

} // namespace bipot
