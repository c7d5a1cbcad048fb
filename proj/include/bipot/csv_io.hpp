#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "bipot/grid.hpp"

namespace bipot {

/// Thrown for malformed input files; the message names the line.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& what, std::size_t line)
        : InvalidInput("line " + std::to_string(line) + ": " + what), reason_(what), line_(line)
    {
    }
    std::size_t line() const { return line_; }
    /// The message without the line prefix.
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
    std::size_t line_;
};

// Function files: header `x,value` (1D) or `x,y,value` (2D), one row per node
// in row-major order. Bivariate files: `x,y,value` (1D) or
// `x1,x2,y1,y2,value` (2D), rows ordered by x-node then y-node. The grid is
// recovered from the coordinates, which must be uniform.
void write_function(std::ostream& out, const SampledFunction& f);
SampledFunction read_function(std::istream& in);
void write_bivariate(std::ostream& out, const SampledBivariate& b);
SampledBivariate read_bivariate(std::istream& in);

// Graph files: `# xgrid lo hi n [lo hi n]` and `# ygrid ...` lines, then the
// header `x_index,y_index` and one row per member with flat node indices.
void write_graph(std::ostream& out, const GraphSet& m);
GraphSet read_graph(std::istream& in);

SampledFunction load_function(const std::string& path);
SampledBivariate load_bivariate(const std::string& path);
GraphSet load_graph(const std::string& path);
void save(const std::string& path, const SampledFunction& f);
void save(const std::string& path, const SampledBivariate& b);
void save(const std::string& path, const GraphSet& m);

/// `lo hi n` per axis, space separated.
std::string grid_spec(const Grid& g);
/// Parses grid_spec output, or `lo:hi:n` / `lo:hi:n,lo:hi:n`.
Grid parse_grid(const std::string& s);

/// Flat key=value configuration; '#' starts a comment.
using Config = std::map<std::string, std::string>;
Config read_config(std::istream& in);
Config load_config(const std::string& path);
double config_real(const Config& c, const std::string& key, double fallback);
int config_int(const Config& c, const std::string& key, int fallback);

} // namespace bipot
