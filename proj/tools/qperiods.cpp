#include <qperiods/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace
{

using namespace qperiods::cli;

int emit(const std::string &text, const RunConfig &cfg)
{
    if (cfg.out.empty()) {
        std::cout << text;
        return exit_ok;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f || !(f << text)) {
        std::cerr << "error: cannot write " << cfg.out << '\n';
        return exit_failure;
    }
    return exit_ok;
}

std::string dump(const nlohmann::json &j)
{
    return j.dump(2) + "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Quasi-period ratio p(tau) = eta1/eta2: evaluation and verification"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::optional<double> tol;
    int order = cfg.series_order;
    std::optional<int> radius;
    double cutoff = cfg.cutoff;
    int depth = cfg.depth;
    std::string format, out;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--tol", tol, "target tolerance (command-specific default)");
        sub->add_option("--order", order, "maximum q-series order");
        sub->add_option("--format", format, "json, csv or svg");
        sub->add_option("--out", out, "output file (default stdout)");
    };

    std::string quantity, tau_text, lattice_text;
    auto *eval = app.add_subcommand("eval", "evaluate a quantity at tau or at a lattice");
    eval->add_option("quantity", quantity, "E2 E4 E6 Delta J p pprime eta1 eta2 Omega1 Omega2 H1 H2")->required();
    eval->add_option("--tau", tau_text, "point a+bi of the upper half-plane");
    eval->add_option("--lattice", lattice_text, "generators 'omega1,omega2'");
    eval->add_option("--radius", radius, "direct lattice summation radius for eta1, eta2");
    common(eval);

    std::string suite;
    auto *verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "legendre ramanujan ode schwarzian equivariance theorem-main bounds all")
        ->required();
    verify->add_option("--cutoff", cutoff, "truncation height of unbounded triangle sides");
    common(verify);

    auto *zeros = app.add_subcommand("zeros", "zero of E2 on the imaginary axis");
    common(zeros);

    std::string w_text;
    int count = 3;
    auto *invert = app.add_subcommand("invert", "solve p(tau) = w");
    invert->add_option("--w", w_text, "target value a+bi")->required();
    invert->add_option("--count", count, "number of distinct solutions");
    common(invert);

    auto *tess = app.add_subcommand("tessellate", "SVG of the reflected triangles g(T0)");
    tess->add_option("--depth", depth, "word length bound (0..12)");
    common(tess);

    std::string re_range = "-0.5:0.5", im_range = "0.6:2.0";
    int grid_n = 21;
    auto *grid = app.add_subcommand("grid", "CSV of p over a rectangular grid");
    grid->add_option("--re", re_range, "Re(tau) range lo:hi");
    grid->add_option("--im", im_range, "Im(tau) range lo:hi");
    grid->add_option("--n", grid_n, "points per axis");
    common(grid);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_bad_input;
    }

    try {
        cfg.tol = tol;
        cfg.series_order = order;
        cfg.zeta_radius = radius;
        cfg.cutoff = cutoff;
        cfg.depth = depth;
        cfg.out = out;
        if (!format.empty()) {
            cfg.format = parse_format(format);
        }
        cfg.validate();

        if (*eval) {
            EvalInput in;
            if (!tau_text.empty()) {
                in.tau = parse_complex(tau_text);
            }
            if (!lattice_text.empty()) {
                in.lattice = parse_lattice(lattice_text);
            }
            const Format f = cfg.format_or(Format::json, {Format::json, Format::csv});
            const auto rec = cmd_eval(quantity, in, cfg);
            return emit(f == Format::json ? dump(rec) : eval_csv(rec), cfg);
        }
        if (*verify) {
            const Format f = cfg.format_or(Format::json, {Format::json, Format::csv});
            const auto rep = cmd_verify(suite, cfg.cutoff);
            const int rc = emit(f == Format::json ? dump(suite_json(rep)) : suite_csv(rep), cfg);
            return rc != exit_ok ? rc : (rep.pass() ? exit_ok : exit_failure);
        }
        if (*zeros) {
            cfg.format_or(Format::json, {Format::json});
            return emit(dump(cmd_zeros(cfg)), cfg);
        }
        if (*invert) {
            cfg.format_or(Format::json, {Format::json});
            return emit(dump(cmd_invert(parse_complex(w_text), count, cfg)), cfg);
        }
        if (*tess) {
            cfg.format_or(Format::svg, {Format::svg});
            return emit(cmd_tessellate(cfg.depth), cfg);
        }
        if (*grid) {
            cfg.format_or(Format::csv, {Format::csv});
            GridSpec g;
            std::tie(g.re_lo, g.re_hi) = parse_range(re_range);
            std::tie(g.im_lo, g.im_hi) = parse_range(im_range);
            g.n = grid_n;
            return emit(cmd_grid(g, cfg), cfg);
        }
    } catch (const bad_input &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    } catch (const qperiods::error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_bad_input;
}
