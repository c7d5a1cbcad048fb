// bipot: command-line front end for the library.
//
// Exit status: 0 success, 1 a mathematical check failed, 2 usage or input error.
// Every report starts with the schema line; wall time goes to stdout only so
// that report files stay byte-identical across runs.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bipot/bipotential.hpp"
#include "bipot/blur.hpp"
#include "bipot/convexity.hpp"
#include "bipot/covers.hpp"
#include "bipot/csv_io.hpp"
#include "bipot/legendre.hpp"
#include "bipot/parallel.hpp"
#include "bipot/worked_examples.hpp"

using namespace bipot;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
    std::string report;
    Clock::time_point t0 = Clock::now();
};

struct PairArgs {
    std::string phi;
    std::string phistar;
    std::string ygrid;
};

void add_pair_options(CLI::App* c, PairArgs& a)
{
    c->add_option("--phi", a.phi, "phi as a function CSV")->required();
    c->add_option("--phistar", a.phistar, "precomputed phi* CSV (default: conjugate of phi)");
    c->add_option("--ygrid", a.ygrid, "Y grid, 'lo:hi:n' or 'lo:hi:n,lo:hi:n' (default: slope range of phi)");
}

ConjugatePair load_pair(const PairArgs& a)
{
    const SampledFunction phi = load_function(a.phi);
    if (!a.phistar.empty()) {
        return make_conjugate_pair(phi, load_function(a.phistar));
    }
    return make_conjugate_pair(phi, a.ygrid.empty() ? default_dual_grid(phi) : parse_grid(a.ygrid));
}

Point parse_point(const std::string& s, int dim)
{
    Point p{0, 0};
    std::stringstream ss(s);
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',')) {
        if (k >= 2) {
            throw InvalidInput("point '" + s + "': too many coordinates");
        }
        try {
            std::size_t used = 0;
            p[static_cast<std::size_t>(k)] = std::stod(tok, &used);
            if (used != tok.size() && tok.find_first_not_of(" ", used) != std::string::npos) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("point '" + s + "': bad coordinate '" + tok + "'");
        }
        ++k;
    }
    if (k != dim) {
        throw InvalidInput("point '" + s + "': expected " + std::to_string(dim) + " coordinate(s)");
    }
    return p;
}

// Nearest node; points outside the box by more than half a spacing are refused.
std::size_t node_at(const Grid& g, const Point& p, CheckReport& rep, const std::string& key)
{
    for (int a = 0; a < g.dim(); ++a) {
        const Axis& ax = g.axis(a);
        const double v = p[static_cast<std::size_t>(a)];
        if (v < ax.lo - ax.spacing() / 2 || v > ax.hi + ax.spacing() / 2) {
            throw InvalidInput(key + " lies outside the grid box");
        }
    }
    const std::size_t k = g.nearest(p);
    const Point q = g.coord(k);
    rep.note(key + "_node", format_real(q[0]) + (g.dim() == 2 ? "," + format_real(q[1]) : ""));
    return k;
}

void nest(CheckReport& into, const std::string& prefix, const CheckReport& r)
{
    std::string s;
    serialize_into(s, r, prefix);
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) {
        const auto eq = line.find('=');
        into.details.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
}

void note_grid(CheckReport& r, const std::string& key, const Grid& g) { r.note(key, grid_spec(g)); }

// Writes the report, prints it with the wall time, returns the exit status.
int finish(const Common& c, const CheckReport& r, bool is_check)
{
    const std::string text = serialize(r);
    if (!c.report.empty()) {
        std::ofstream out(c.report);
        if (!out) {
            throw InvalidInput("cannot write report file " + c.report);
        }
        out << text;
    }
    std::cout << text;
    std::cout << "wall_time_s=" << format_real(std::chrono::duration<double>(Clock::now() - c.t0).count()) << "\n";
    if (is_check && !r.passed) {
        std::cerr << "FAIL " << r.check << " axiom " << r.axiom << ": " << r.witness << "\n";
        return 1;
    }
    return 0;
}

fs::path prepare_dir(const std::string& d)
{
    fs::create_directories(d);
    return fs::path(d);
}

std::vector<PointPair> load_points(const std::string& path, int& dim)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    std::string line;
    std::size_t ln = 0;
    if (!std::getline(in, line)) {
        throw ParseError("missing header", 1);
    }
    ++ln;
    if (line == "x,y") {
        dim = 1;
    } else if (line == "x1,x2,y1,y2") {
        dim = 2;
    } else {
        throw ParseError("expected header 'x,y' or 'x1,x2,y1,y2'", ln);
    }
    std::vector<PointPair> pts;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) {
            continue;
        }
        std::vector<double> v;
        std::stringstream ss(line);
        for (std::string tok; std::getline(ss, tok, ',');) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::logic_error&) {
                throw ParseError("bad number '" + tok + "'", ln);
            }
        }
        if (v.size() != static_cast<std::size_t>(2 * dim)) {
            throw ParseError("expected " + std::to_string(2 * dim) + " fields", ln);
        }
        pts.push_back(dim == 1 ? PointPair{{v[0], 0}, {v[1], 0}} : PointPair{{v[0], v[1]}, {v[2], v[3]}});
    }
    return pts;
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::logic_error&) {
            throw InvalidInput("bad number '" + tok + "' in list '" + s + "'");
        }
    }
    return out;
}

// Random convex profile for the Darboux search: a quadratic plus a few kinks.
SampledFunction random_profile(std::mt19937_64& rng, const Grid& g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = 2 * u(rng);
    const double c = -1 + 2 * u(rng);
    const int kinks = 1 + static_cast<int>(rng() % 3);
    std::vector<std::array<double, 2>> ks;
    for (int k = 0; k < kinks; ++k) {
        ks.push_back({-1.5 + 3 * u(rng), 2 * u(rng)});
    }
    const bool cut = u(rng) < 0.3;
    const double l = -2 + u(rng), r = 1 + u(rng);
    SampledFunction f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.coord(k)[0];
        if (cut && (x < l || x > r)) {
            continue;
        }
        double v = a * (x - c) * (x - c);
        for (const auto& kk : ks) {
            v += kk[1] * std::abs(x - kk[0]);
        }
        f[k] = ExtReal(v);
    }
    return f;
}

} // namespace

int main(int argc, char** argv)
{
    apply_thread_env();
    CLI::App app{"Bipotentials of blurred cyclically monotone laws on grids"};
    app.set_version_flag("--version", std::string(report_schema_version()));
    app.require_subcommand(1);

    Common common;
    auto add_report = [&](CLI::App* c) { c->add_option("--report", common.report, "also write the report here"); };
    std::function<int()> run;

    // conjugate
    std::string in_path, out_path, ygrid_spec;
    double cap = kDefaultConjugateCap;
    auto* conj = app.add_subcommand("conjugate", "Fenchel conjugate of a sampled function");
    conj->add_option("--input", in_path, "function CSV")->required();
    conj->add_option("--ygrid", ygrid_spec, "dual grid (default: slope range of the input)");
    conj->add_option("--cap", cap, "values above this are written as inf");
    conj->add_option("--out", out_path, "output CSV");
    add_report(conj);
    conj->callback([&] {
        run = [&] {
            const SampledFunction phi = load_function(in_path);
            const Grid yg = ygrid_spec.empty() ? default_dual_grid(phi) : parse_grid(ygrid_spec);
            const SampledFunction star = conjugate(phi, yg, cap);
            CheckReport rep = CheckReport::pass("conjugate");
            note_grid(rep, "xgrid", phi.grid);
            note_grid(rep, "ygrid", yg);
            rep.note("domain_size", static_cast<double>(phi.domain_size()));
            rep.note("cap", cap);
            const CheckReport conv = is_convex(star, 1e-9 * (1 + star.scale()));
            nest(rep, "output_convex", conv);
            if (!conv.passed) {
                rep.fail("convexity", conv.witness, conv.residual);
            }
            if (!out_path.empty()) {
                save(out_path, star);
            }
            return finish(common, rep, true);
        };
    });

    // blur
    PairArgs pa;
    double eps = 0, p = 2, tol = 1e-9;
    std::string kind = "yball", out_ca, out_ba, out_graph;
    auto* blur = app.add_subcommand("blur", "Blurred sync c_A, bipotential b_A and graph M + A");
    add_pair_options(blur, pa);
    blur->add_option("--eps", eps, "blur radius")->required()->check(CLI::NonNegativeNumber);
    blur->add_option("--kind", kind, "yball or product");
    blur->add_option("--p", p, "p-norm of the product ball")->check(CLI::Range(1.0, 1e300));
    blur->add_option("--tol", tol, "Fenchel-Young tolerance of the graph");
    blur->add_option("--out-ca", out_ca);
    blur->add_option("--out-ba", out_ba);
    blur->add_option("--out-graph", out_graph);
    add_report(blur);
    blur->callback([&] {
        run = [&] {
            const ConjugatePair pair = load_pair(pa);
            const BlurSpec spec{parse_blur_kind(kind), eps, p};
            check_blur_resolution(spec, pair.phi.grid, pair.phistar.grid);
            const BlurredLaw law = make_blurred_law(pair, spec, tol);
            CheckReport rep = CheckReport::pass("blur");
            note_grid(rep, "xgrid", pair.phi.grid);
            note_grid(rep, "ygrid", pair.phistar.grid);
            rep.note("kind", to_string(spec.kind));
            rep.note("eps", eps);
            rep.note("p", p);
            rep.note("tol", tol);
            rep.note("graph_size", static_cast<double>(law.MplusA.count()));
            rep.note("clipped", law.MplusA.clipped ? "true" : "false");
            nest(rep, "blurring", check_admits_blurring(law.MplusA, spec));
            if (!out_ca.empty()) {
                save(out_ca, law.cA);
            }
            if (!out_ba.empty()) {
                save(out_ba, law.bA);
            }
            if (!out_graph.empty()) {
                save(out_graph, law.MplusA);
            }
            return finish(common, rep, false);
        };
    });

    // check ...
    auto* check = app.add_subcommand("check", "Predicate checkers");
    check->require_subcommand(1);
    std::optional<double> opt_tol;
    std::string graph_path, sync_path, y_spec, alphas = "0.5", points_path;
    std::size_t pair_cap = 200000;
    std::uint64_t seed = 1;
    int n_max = 5;

    auto* ck_convex = check->add_subcommand("convex", "discrete convexity of a function");
    ck_convex->add_option("--input", in_path)->required();
    ck_convex->add_option("--tol", tol, "second-difference tolerance");
    add_report(ck_convex);
    ck_convex->callback([&] {
        run = [&] {
            const SampledFunction f = load_function(in_path);
            CheckReport rep = is_convex(f, tol);
            note_grid(rep, "grid", f.grid);
            return finish(common, rep, true);
        };
    });

    auto* ck_bb = check->add_subcommand("bbgraph", "convexity of every section of a graph");
    ck_bb->add_option("--graph", graph_path)->required();
    add_report(ck_bb);
    ck_bb->callback([&] { run = [&] { return finish(common, check_bbgraph(load_graph(graph_path)), true); }; });

    auto* ck_sync = check->add_subcommand("sync", "sync axioms of a bivariate CSV");
    ck_sync->add_option("--input", in_path)->required();
    ck_sync->add_option("--tol", opt_tol, "default: 3h");
    add_report(ck_sync);
    ck_sync->callback([&] {
        run = [&] {
            const SampledBivariate c = load_bivariate(in_path);
            const double t = opt_tol.value_or(3 * std::max(c.xgrid().spacing(), c.ygrid().spacing()));
            return finish(common, check_sync(c, t), true);
        };
    });

    auto* ck_bip = check->add_subcommand("bipotential", "bipotential axioms of a bivariate CSV");
    ck_bip->add_option("--input", in_path)->required();
    ck_bip->add_option("--tol", opt_tol, "default: 3h(1 + |<x,y>|) per pair");
    add_report(ck_bip);
    ck_bip->callback([&] {
        run = [&] {
            BipotentialCheckOptions o;
            o.tol = opt_tol;
            return finish(common, check_bipotential(load_bivariate(in_path), o), true);
        };
    });

    auto* ck_newc = check->add_subcommand("newc", "convexity of the blurred subdifferential union at y");
    add_pair_options(ck_newc, pa);
    ck_newc->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
    ck_newc->add_option("--y", y_spec, "y point, e.g. \"1,0.5\"")->required();
    ck_newc->add_option("--tol", opt_tol, "default: h(1 + |y|)");
    add_report(ck_newc);
    ck_newc->callback([&] {
        run = [&] {
            const ConjugatePair pair = load_pair(pa);
            CheckReport where = CheckReport::pass("");
            const std::size_t iy = node_at(pair.phistar.grid, parse_point(y_spec, pair.phistar.grid.dim()), where, "y");
            CheckReport rep = check_newc(pair, eps, iy, opt_tol.value_or(pair.default_tol(iy)));
            return finish(common, rep, true);
        };
    });

    auto* ck_blur = check->add_subcommand("blurring", "whether a graph (or sync) admits the blurring");
    ck_blur->add_option("--graph", graph_path, "graph CSV");
    ck_blur->add_option("--sync", sync_path, "sync CSV (alternative to --graph)");
    ck_blur->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
    ck_blur->add_option("--kind", kind, "yball or product");
    ck_blur->add_option("--p", p)->check(CLI::Range(1.0, 1e300));
    ck_blur->add_option("--tol", tol, "zero-set tolerance (sync form)");
    add_report(ck_blur);
    ck_blur->callback([&] {
        run = [&] {
            const BlurSpec spec{parse_blur_kind(kind), eps, p};
            if (graph_path.empty() == sync_path.empty()) {
                throw InvalidInput("check blurring: give exactly one of --graph and --sync");
            }
            if (!graph_path.empty()) {
                return finish(common, check_admits_blurring(load_graph(graph_path), spec), true);
            }
            return finish(common, check_admits_blurring(load_bivariate(sync_path), spec, tol), true);
        };
    });

    auto* ck_imp = check->add_subcommand("implicit", "implicit convexity of the cover slice at y");
    add_pair_options(ck_imp, pa);
    ck_imp->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
    ck_imp->add_option("--y", y_spec, "y point")->required();
    ck_imp->add_option("--alphas", alphas, "comma-separated weights, must contain 0.5");
    ck_imp->add_option("--tol", tol);
    ck_imp->add_option("--pair-cap", pair_cap, "candidate pairs above which the scan is sampled");
    ck_imp->add_option("--seed", seed);
    add_report(ck_imp);
    ck_imp->callback([&] {
        run = [&] {
            const ConjugatePair pair = load_pair(pa);
            const CoverFamily cover = build_cover(pair, eps);
            CheckReport where = CheckReport::pass("");
            const std::size_t iy = node_at(pair.phistar.grid, parse_point(y_spec, pair.phistar.grid.dim()), where, "y");
            CheckReport rep = check_implicitly_convex(CoverYSlice(cover, iy), ImplicitOptions{parse_list(alphas), tol, pair_cap, seed});
            rep.note("y", where.detail("y_node"));
            rep.note("eps", eps);
            return finish(common, rep, true);
        };
    });

    auto* ck_mt = check->add_subcommand("maithm", "agreement of the two convexity verdicts at every y");
    add_pair_options(ck_mt, pa);
    ck_mt->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
    ck_mt->add_option("--tol", tol);
    ck_mt->add_option("--pair-cap", pair_cap);
    ck_mt->add_option("--seed", seed);
    add_report(ck_mt);
    ck_mt->callback([&] {
        run = [&] {
            const ConjugatePair pair = load_pair(pa);
            return finish(common, check_maithm_equivalence(pair, eps, MaithmOptions{tol, pair_cap, seed}), true);
        };
    });

    double cyc_tol = 1e-12;
    auto* ck_cyc = check->add_subcommand("cyclic", "cyclic monotonicity of a finite point set");
    ck_cyc->add_option("--points", points_path, "CSV with header x,y or x1,x2,y1,y2")->required();
    ck_cyc->add_option("--n-max", n_max, "longest cycle")->check(CLI::PositiveNumber);
    ck_cyc->add_option("--tol", cyc_tol);
    add_report(ck_cyc);
    ck_cyc->callback([&] {
        run = [&] {
            int dim = 1;
            const auto pts = load_points(points_path, dim);
            return finish(common, check_cyclically_monotone(pts, n_max, dim, cyc_tol), true);
        };
    });

    // cover build
    std::string out_dir = ".";
    bool members = false;
    auto* cover = app.add_subcommand("cover", "Cover families");
    cover->require_subcommand(1);
    auto* cv_build = cover->add_subcommand("build", "ball-offset cover of the blurred bipotential");
    add_pair_options(cv_build, pa);
    cv_build->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
    cv_build->add_option("--out-dir", out_dir);
    cv_build->add_flag("--members", members, "also write every member as member_<k>.csv");
    add_report(cv_build);
    cv_build->callback([&] {
        run = [&] {
            const ConjugatePair pair = load_pair(pa);
            const CoverFamily fam = build_cover(pair, eps);
            const fs::path dir = prepare_dir(out_dir);
            {
                std::ofstream off(dir / "offsets.csv");
                off << (pair.phistar.grid.dim() == 1 ? "k,a\n" : "k,a1,a2\n");
                const double h0 = pair.phistar.grid.axis(0).spacing();
                for (std::size_t k = 0; k < fam.size(); ++k) {
                    const Offset o = fam.lambda_nodes[k];
                    off << k << ',' << format_real(o.d0 * h0);
                    if (pair.phistar.grid.dim() == 2) {
                        off << ',' << format_real(o.d1 * pair.phistar.grid.axis(1).spacing());
                    }
                    off << '\n';
                }
            }
            save((dir / "phi.csv").string(), pair.phi);
            save((dir / "phistar.csv").string(), pair.phistar);
            save((dir / "infimum.csv").string(), infimum_bipotential(fam));
            if (members) {
                for (std::size_t k = 0; k < fam.size(); ++k) {
                    save((dir / ("member_" + std::to_string(k) + ".csv")).string(), fam.member(k));
                }
            }
            CheckReport rep = CheckReport::pass("cover_build");
            note_grid(rep, "xgrid", pair.phi.grid);
            note_grid(rep, "ygrid", pair.phistar.grid);
            rep.note("eps", eps);
            rep.note("members", static_cast<double>(fam.size()));
            rep.note("zero_index", static_cast<double>(fam.zero_index()));
            return finish(common, rep, false);
        };
    });

    // example ...
    auto* example = app.add_subcommand("example", "Worked examples");
    example->require_subcommand(1);
    std::string config_path;
    std::optional<double> opt_k, opt_eps, opt_alpha;
    std::optional<int> opt_n;

    auto* ex_el = example->add_subcommand("elasticity", "blurred linear elasticity against its closed form");
    ex_el->add_option("--config", config_path, "key=value fixture file");
    ex_el->add_option("--k", opt_k, "stiffness K");
    ex_el->add_option("--eps", opt_eps);
    ex_el->add_option("--grid", opt_n, "nodes per axis");
    ex_el->add_option("--out-dir", out_dir);
    add_report(ex_el);
    ex_el->callback([&] {
        run = [&] {
            Config cfg = config_path.empty() ? Config{} : load_config(config_path);
            if (opt_k) cfg["K"] = format_real(*opt_k);
            if (opt_eps) cfg["eps"] = format_real(*opt_eps);
            if (opt_n) cfg["n"] = std::to_string(*opt_n);
            const ElasticityFixture fix = elasticity_from_config(cfg);
            const SampledBivariate ca = inf_convolve_blur(elasticity_sync(fix), BlurSpec{BlurSpec::Kind::YBall, fix.eps});
            const SampledBivariate ba = blurred_bipotential(make_conjugate_pair(elasticity_phi(fix), fix.y), fix.eps);
            const SampledBivariate oracle = elasticity_closed_form_cA(fix);
            double gap_c = 0, gap_b = 0;
            for (std::size_t ix = 0; ix < ca.nx(); ++ix) {
                for (std::size_t iy = 0; iy < ca.ny(); ++iy) {
                    if (elasticity_interior(fix, iy)) {
                        const double ref = oracle.at(ix, iy).value();
                        gap_c = std::max(gap_c, std::abs(ca.at(ix, iy).value() - ref));
                        gap_b = std::max(gap_b, std::abs(ba.at(ix, iy).value() - (ca.pairing(ix, iy) + ref)));
                    }
                }
            }
            const double h = fix.y.spacing();
            CheckReport rep = CheckReport::pass("example_elasticity");
            rep.note("K", fix.K);
            rep.note("eps", fix.eps);
            note_grid(rep, "grid", fix.x);
            rep.note("h", h);
            rep.note("max_gap_cA", gap_c);
            rep.note("max_gap_bA", gap_b);
            rep.note("bound", 2 * h);
            if (gap_c > 2 * h || gap_b > 2 * h) {
                rep.fail("oracle", "max gap to the closed form exceeds 2h", std::max(gap_c, gap_b));
            }
            const fs::path dir = prepare_dir(out_dir);
            save((dir / "phi.csv").string(), elasticity_phi(fix));
            save((dir / "ca.csv").string(), ca);
            save((dir / "ba.csv").string(), ba);
            save((dir / "ca_closed_form.csv").string(), oracle);
            return finish(common, rep, true);
        };
    });

    auto* ex_tp = example->add_subcommand("two-point", "two-point graph blurred by a y-ball");
    ex_tp->add_option("--config", config_path);
    ex_tp->add_option("--eps", opt_eps);
    ex_tp->add_option("--out-dir", out_dir);
    add_report(ex_tp);
    ex_tp->callback([&] {
        run = [&] {
            Config cfg = config_path.empty() ? Config{} : load_config(config_path);
            if (opt_eps) cfg["eps"] = format_real(*opt_eps);
            const Grid dg = two_point_default_grid();
            const Grid g(config_real(cfg, "lo", dg.axis(0).lo), config_real(cfg, "hi", dg.axis(0).hi),
                         config_int(cfg, "n", dg.axis(0).n));
            const TwoPointFixture f =
                two_point_fixture(config_real(cfg, "x1", 0), config_real(cfg, "y1", 0), config_real(cfg, "x2", 1),
                                  config_real(cfg, "y2", 1), config_real(cfg, "eps", 0.6), g, g);
            const GraphSet blurred = minkowski_sum(f.m, f.spec);
            CheckReport rep = CheckReport::pass("example_two_point");
            rep.note("eps", f.spec.eps);
            note_grid(rep, "grid", g);
            nest(rep, "blurring", check_admits_blurring(f.m, f.spec));
            const fs::path dir = prepare_dir(out_dir);
            save((dir / "twopoint.csv").string(), f.m);
            save((dir / "twopoint_blurred.csv").string(), blurred);
            return finish(common, rep, false);
        };
    });

    auto* ex_cone = example->add_subcommand("cone", "support function of a cone: (newc) fails at y*");
    ex_cone->add_option("--config", config_path);
    ex_cone->add_option("--eps", opt_eps);
    ex_cone->add_option("--alpha", opt_alpha);
    ex_cone->add_option("--tol", tol);
    ex_cone->add_option("--out-dir", out_dir);
    add_report(ex_cone);
    ex_cone->callback([&] {
        run = [&] {
            Config cfg = config_path.empty() ? Config{} : load_config(config_path);
            if (opt_eps) cfg["eps"] = format_real(*opt_eps);
            if (opt_alpha) cfg["alpha"] = format_real(*opt_alpha);
            const ConeFixture fix = cone_from_config(cfg);
            const ConeData d = cone_fixture(fix);
            const GraphSet mg = blurred_graph(d.pair, fix.eps, tol);
            CheckReport rep = CheckReport::pass("example_cone");
            rep.note("alpha", fix.alpha);
            rep.note("y1", fix.y1);
            rep.note("eps", fix.eps);
            rep.note("window_lo", d.window[0]);
            rep.note("window_hi", d.window[1]);
            note_grid(rep, "xgrid", fix.x);
            note_grid(rep, "ygrid", fix.y);
            rep.note("tol", tol);
            nest(rep, "newc", check_newc(d.pair, fix.eps, d.y_star, tol));
            nest(rep, "bbgraph", check_bbgraph(mg));
            const fs::path dir = prepare_dir(out_dir);
            save((dir / "phi.csv").string(), d.pair.phi);
            save((dir / "phistar.csv").string(), d.pair.phistar);
            save((dir / "blurred_graph.csv").string(), mg);
            return finish(common, rep, false);
        };
    });

    // explore darboux
    int trials = 200, nodes = 101;
    auto* explore = app.add_subcommand("explore", "Exploratory searches");
    explore->require_subcommand(1);
    auto* darboux = explore->add_subcommand("darboux", "random 1D search for a failure of (newc)");
    darboux->add_option("--trials", trials)->check(CLI::PositiveNumber);
    darboux->add_option("--seed", seed);
    darboux->add_option("--n", nodes, "grid nodes on [-2,2]")->check(CLI::Range(3, 100001));
    darboux->add_option("--eps", opt_eps, "blur radius (default: random in [h, 0.5])");
    darboux->add_option("--tol", opt_tol, "default: h(1 + |y|)");
    add_report(darboux);
    darboux->callback([&] {
        run = [&] {
            const Grid g(-2.0, 2.0, nodes);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            CheckReport rep = CheckReport::pass("explore_darboux");
            rep.note("trials", trials);
            rep.note("seed", static_cast<double>(seed));
            note_grid(rep, "grid", g);
            int found = 0;
            for (int t = 0; t < trials; ++t) {
                const SampledFunction phi = random_profile(rng, g);
                const ConjugatePair pair = make_conjugate_pair(phi, g);
                const double e = opt_eps.value_or(g.spacing() + (0.5 - g.spacing()) * u(rng));
                const std::size_t iy = static_cast<std::size_t>(rng() % g.size());
                const CheckReport r = check_newc(pair, e, iy, opt_tol.value_or(pair.default_tol(iy)));
                if (!r.passed) {
                    if (found == 0) {
                        rep.note("first_trial", t);
                        rep.note("first_eps", e);
                        rep.note("first_witness", r.witness);
                    }
                    ++found;
                }
            }
            rep.note("counterexamples", found);
            if (found > 0) {
                std::cout << "counterexample candidates: " << found << " (see first_witness)\n";
            }
            return finish(common, rep, false);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
