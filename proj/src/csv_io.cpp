#include "bipot/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace bipot {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return {};
    }
    return s.substr(a, s.find_last_not_of(" \t\r") + 1 - a);
}

double parse_real(const std::string& tok, std::size_t line)
{
    try {
        const ExtReal v = parse_extreal(tok);
        if (!v.is_finite()) {
            throw ParseError("coordinate must be finite", line);
        }
        return v.value();
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ParseError(e.what(), line);
    }
}

ExtReal parse_value(const std::string& tok, std::size_t line)
{
    try {
        return parse_extreal(tok);
    } catch (const InvalidInput& e) {
        throw ParseError(e.what(), line);
    }
}

struct Table {
    std::vector<std::vector<double>> coords; // one column per coordinate
    std::vector<ExtReal> vals;
    std::vector<std::size_t> lines;
};

Table read_table(std::istream& in, const std::vector<std::vector<std::string>>& headers, std::size_t& which)
{
    std::string line;
    std::size_t ln = 0;
    bool have_header = false;
    Table t;
    std::size_t ncoord = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') {
            continue;
        }
        auto cols = split(s, ',');
        for (auto& c : cols) {
            c = trim(c);
        }
        if (!have_header) {
            auto it = std::find(headers.begin(), headers.end(), cols);
            if (it == headers.end()) {
                throw ParseError("unexpected header '" + s + "'", ln);
            }
            which = static_cast<std::size_t>(it - headers.begin());
            ncoord = cols.size() - 1;
            t.coords.assign(ncoord, {});
            have_header = true;
            continue;
        }
        if (cols.size() != ncoord + 1) {
            throw ParseError("expected " + std::to_string(ncoord + 1) + " fields, got " + std::to_string(cols.size()),
                             ln);
        }
        for (std::size_t k = 0; k < ncoord; ++k) {
            t.coords[k].push_back(parse_real(cols[k], ln));
        }
        t.vals.push_back(parse_value(cols[ncoord], ln));
        t.lines.push_back(ln);
    }
    if (!have_header) {
        throw ParseError("missing header", ln + 1);
    }
    if (t.vals.empty()) {
        throw ParseError("no data rows", ln + 1);
    }
    return t;
}

// Sorted distinct values of a column, checked to be uniformly spaced.
Axis infer_axis(const std::vector<double>& col, const std::vector<std::size_t>& lines)
{
    std::vector<double> v = col;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 3) {
        throw ParseError("a grid axis needs at least 3 distinct coordinates", lines.front());
    }
    Axis a{v.front(), v.back(), static_cast<int>(v.size())};
    const double slack = 1e-9 * (a.hi - a.lo);
    for (int i = 0; i < a.n; ++i) {
        if (std::abs(v[static_cast<std::size_t>(i)] - a.node(i)) > slack) {
            throw ParseError("coordinates are not uniformly spaced near " + format_real(v[static_cast<std::size_t>(i)]),
                             lines.front());
        }
    }
    return a;
}

Grid make_grid(const std::vector<Axis>& ax)
{
    return ax.size() == 1 ? Grid(ax[0].lo, ax[0].hi, ax[0].n) : Grid(ax[0], ax[1]);
}

void check_coords(const Grid& g, const Table& t, std::size_t first_col, std::size_t row, std::size_t k)
{
    const Point p = g.coord(k);
    for (int a = 0; a < g.dim(); ++a) {
        const double v = t.coords[first_col + static_cast<std::size_t>(a)][row];
        const double slack = 1e-9 * (g.axis(a).hi - g.axis(a).lo);
        if (std::abs(v - p[static_cast<std::size_t>(a)]) > slack) {
            throw ParseError("row out of row-major order (coordinate " + format_real(v) + ", expected " +
                                 format_real(p[static_cast<std::size_t>(a)]) + ")",
                             t.lines[row]);
        }
    }
}

void write_point(std::ostream& out, const Grid& g, std::size_t k)
{
    const Point p = g.coord(k);
    out << format_real(p[0]);
    if (g.dim() == 2) {
        out << ',' << format_real(p[1]);
    }
}

template <class T>
T load(const std::string& path, T (*reader)(std::istream&))
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    try {
        return reader(in);
    } catch (const ParseError& e) {
        throw ParseError(e.reason() + " (in " + path + ")", e.line());
    }
}

template <class T>
void store(const std::string& path, const T& v, void (*writer)(std::ostream&, const T&))
{
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write '" + path + "'");
    }
    writer(out, v);
}

} // namespace

void write_function(std::ostream& out, const SampledFunction& f)
{
    out << (f.grid.dim() == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t k = 0; k < f.size(); ++k) {
        write_point(out, f.grid, k);
        out << ',' << to_string(f[k]) << '\n';
    }
}

SampledFunction read_function(std::istream& in)
{
    std::size_t which = 0;
    const Table t = read_table(in, {{"x", "value"}, {"x", "y", "value"}}, which);
    std::vector<Axis> ax;
    for (const auto& col : t.coords) {
        ax.push_back(infer_axis(col, t.lines));
    }
    const Grid g = make_grid(ax);
    if (t.vals.size() != g.size()) {
        throw ParseError("expected " + std::to_string(g.size()) + " rows for the inferred grid, got " +
                             std::to_string(t.vals.size()),
                         t.lines.back());
    }
    SampledFunction f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        check_coords(g, t, 0, k, k);
        f[k] = t.vals[k];
    }
    return f;
}

void write_bivariate(std::ostream& out, const SampledBivariate& b)
{
    out << (b.xgrid().dim() == 1 ? "x,y,value\n" : "x1,x2,y1,y2,value\n");
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy) {
            write_point(out, b.xgrid(), ix);
            out << ',';
            write_point(out, b.ygrid(), iy);
            out << ',' << to_string(b.at(ix, iy)) << '\n';
        }
    }
}

SampledBivariate read_bivariate(std::istream& in)
{
    std::size_t which = 0;
    const Table t = read_table(in, {{"x", "y", "value"}, {"x1", "x2", "y1", "y2", "value"}}, which);
    const std::size_t d = which == 0 ? 1 : 2;
    std::vector<Axis> xa, ya;
    for (std::size_t a = 0; a < d; ++a) {
        xa.push_back(infer_axis(t.coords[a], t.lines));
        ya.push_back(infer_axis(t.coords[d + a], t.lines));
    }
    SampledBivariate b(make_grid(xa), make_grid(ya));
    if (t.vals.size() != b.nx() * b.ny()) {
        throw ParseError("expected " + std::to_string(b.nx() * b.ny()) + " rows for the inferred grids, got " +
                             std::to_string(t.vals.size()),
                         t.lines.back());
    }
    std::size_t row = 0;
    for (std::size_t ix = 0; ix < b.nx(); ++ix) {
        for (std::size_t iy = 0; iy < b.ny(); ++iy, ++row) {
            check_coords(b.xgrid(), t, 0, row, ix);
            check_coords(b.ygrid(), t, d, row, iy);
            b.at(ix, iy) = t.vals[row];
        }
    }
    return b;
}

std::string grid_spec(const Grid& g)
{
    std::string s;
    for (int a = 0; a < g.dim(); ++a) {
        s += (a ? " " : "") + format_real(g.axis(a).lo) + " " + format_real(g.axis(a).hi) + " " +
             std::to_string(g.axis(a).n);
    }
    return s;
}

Grid parse_grid(const std::string& s)
{
    std::string norm = s;
    std::replace(norm.begin(), norm.end(), ':', ' ');
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::istringstream is(norm);
    std::vector<std::string> tok;
    for (std::string w; is >> w;) {
        tok.push_back(w);
    }
    if (tok.size() != 3 && tok.size() != 6) {
        throw InvalidInput("grid spec must be 'lo hi n' for each of 1 or 2 axes: '" + s + "'");
    }
    std::vector<Axis> ax;
    for (std::size_t k = 0; k < tok.size(); k += 3) {
        const ExtReal lo = parse_extreal(tok[k]);
        const ExtReal hi = parse_extreal(tok[k + 1]);
        int n = 0;
        const auto r = std::from_chars(tok[k + 2].data(), tok[k + 2].data() + tok[k + 2].size(), n);
        if (r.ec != std::errc{} || r.ptr != tok[k + 2].data() + tok[k + 2].size() || !lo.is_finite() ||
            !hi.is_finite()) {
            throw InvalidInput("bad grid spec '" + s + "'");
        }
        ax.push_back(Axis{lo.value(), hi.value(), n});
    }
    return make_grid(ax);
}

void write_graph(std::ostream& out, const GraphSet& m)
{
    out << "# xgrid " << grid_spec(m.xgrid()) << '\n';
    out << "# ygrid " << grid_spec(m.ygrid()) << '\n';
    out << "x_index,y_index\n";
    for (const auto& [ix, iy] : m.pairs()) {
        out << ix << ',' << iy << '\n';
    }
}

GraphSet read_graph(std::istream& in)
{
    std::string line;
    std::size_t ln = 0;
    std::optional<Grid> xg, yg;
    bool header = false;
    std::vector<std::pair<std::size_t, std::size_t>> rows;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++ln;
        const std::string s = trim(line);
        if (s.empty()) {
            continue;
        }
        if (s[0] == '#') {
            std::istringstream is(s.substr(1));
            std::string key;
            is >> key;
            std::string rest;
            std::getline(is, rest);
            try {
                if (key == "xgrid") {
                    xg = parse_grid(rest);
                } else if (key == "ygrid") {
                    yg = parse_grid(rest);
                }
            } catch (const InvalidInput& e) {
                throw ParseError(e.what(), ln);
            }
            continue;
        }
        if (!header) {
            if (s != "x_index,y_index") {
                throw ParseError("unexpected header '" + s + "'", ln);
            }
            header = true;
            continue;
        }
        const auto cols = split(s, ',');
        if (cols.size() != 2) {
            throw ParseError("expected 2 fields", ln);
        }
        std::size_t v[2];
        for (int k = 0; k < 2; ++k) {
            const std::string c = trim(cols[static_cast<std::size_t>(k)]);
            const auto r = std::from_chars(c.data(), c.data() + c.size(), v[k]);
            if (c.empty() || r.ec != std::errc{} || r.ptr != c.data() + c.size()) {
                throw ParseError("not a node index: '" + c + "'", ln);
            }
        }
        rows.emplace_back(v[0], v[1]);
        row_lines.push_back(ln);
    }
    if (!xg || !yg) {
        throw ParseError("missing '# xgrid' or '# ygrid' line", ln + 1);
    }
    if (!header) {
        throw ParseError("missing header", ln + 1);
    }
    GraphSet m(*xg, *yg);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].first >= xg->size() || rows[r].second >= yg->size()) {
            throw ParseError("node index out of range", row_lines[r]);
        }
        m.insert(rows[r].first, rows[r].second);
    }
    return m;
}

SampledFunction load_function(const std::string& path) { return load(path, &read_function); }
SampledBivariate load_bivariate(const std::string& path) { return load(path, &read_bivariate); }
GraphSet load_graph(const std::string& path) { return load(path, &read_graph); }
void save(const std::string& path, const SampledFunction& f) { store(path, f, &write_function); }
void save(const std::string& path, const SampledBivariate& b) { store(path, b, &write_bivariate); }
void save(const std::string& path, const GraphSet& m) { store(path, m, &write_graph); }

Config read_config(std::istream& in)
{
    Config c;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::string s = line.substr(0, line.find('#'));
        s = trim(s);
        if (s.empty()) {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key=value", ln);
        }
        c[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
    }
    return c;
}

Config load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    return read_config(in);
}

double config_real(const Config& c, const std::string& key, double fallback)
{
    const auto it = c.find(key);
    if (it == c.end()) {
        return fallback;
    }
    const ExtReal v = parse_extreal(it->second);
    if (!v.is_finite()) {
        throw InvalidInput("config key '" + key + "' must be finite");
    }
    return v.value();
}

int config_int(const Config& c, const std::string& key, int fallback)
{
    const auto it = c.find(key);
    if (it == c.end()) {
        return fallback;
    }
    int v = 0;
    const auto& s = it->second;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw InvalidInput("config key '" + key + "' must be an integer");
    }
    return v;
}

} // namespace bipot
