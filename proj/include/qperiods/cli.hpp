#pragma once

// Command implementations behind the qperiods executable. Each command
// returns its serialized output; argument parsing lives in the tool.
// Requires nlohmann/json (json.hpp) on the include path.

#include "geom.hpp"
#include "group.hpp"
#include "hypergeo.hpp"
#include "lattice.hpp"
#include "pmap.hpp"
#include "qforms.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qperiods::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_bad_input = 2;

/// Malformed user input (exit code 2).
class bad_input : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Format
{
    json,
    csv,
    svg
};

inline Format parse_format(const std::string &s)
{
    if (s == "json") {
        return Format::json;
    }
    if (s == "csv") {
        return Format::csv;
    }
    if (s == "svg") {
        return Format::svg;
    }
    throw bad_input("unknown format '" + s + "' (json, csv, svg)");
}

struct RunConfig
{
    /// Command-specific default when unset.
    std::optional<double> tol;
    int series_order = 1024;
    /// Set to evaluate quasi-periods by direct lattice summation.
    std::optional<int> zeta_radius;
    double cutoff = 12.0;
    int depth = 3;
    std::optional<Format> format;
    std::string out;

    void validate() const
    {
        if ((tol && !(*tol > 0.0)) || series_order < 1 || (zeta_radius && *zeta_radius < 10) || !(cutoff > 2.0) ||
            depth < 0 || depth > max_tessellation_depth) {
            throw bad_input("numeric options out of range (tol > 0, order >= 1, radius >= 10, cutoff > 2, "
                            "0 <= depth <= 12)");
        }
    }

    SeriesParams series(double default_tol = 1e-15) const { return {series_order, tol.value_or(default_tol)}; }

    Format format_or(Format fallback, std::initializer_list<Format> allowed) const
    {
        const Format f = format.value_or(fallback);
        for (Format a : allowed) {
            if (a == f) {
                return f;
            }
        }
        throw bad_input("output format not supported by this command");
    }
};

namespace detail
{

inline std::string strip(const std::string &s)
{
    std::string r;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            r += c;
        }
    }
    return r;
}

inline double parse_real(const std::string &s, const std::string &whole)
{
    if (s.empty()) {
        throw bad_input("cannot parse complex number '" + whole + "'");
    }
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw bad_input("cannot parse complex number '" + whole + "'");
    }
    return v;
}

} // namespace detail

/// Parses "a+bi", "a-bi", "bi", "i", "-i" or "a" (j also accepted), whitespace ignored.
inline complex parse_complex(const std::string &text)
{
    const std::string s = detail::strip(text);
    if (s.empty()) {
        throw bad_input("empty complex number");
    }
    if (s.back() != 'i' && s.back() != 'j') {
        return {detail::parse_real(s, text), 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is neither leading nor part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+" || im == "-") {
        im += "1";
    }
    return {re.empty() ? 0.0 : detail::parse_real(re, text), detail::parse_real(im, text)};
}

/// "w1,w2" with complex entries.
inline std::pair<complex, complex> parse_lattice(const std::string &text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw bad_input("lattice must be given as 'omega1,omega2'");
    }
    return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

/// Fixed 17 significant digits.
inline std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct EvalInput
{
    std::optional<complex> tau;
    std::optional<std::pair<complex, complex>> lattice;
};

inline const std::vector<std::string> &eval_quantities()
{
    static const std::vector<std::string> q{"E2",   "E4",     "E6",   "Delta",  "J",      "p",  "pprime",
                                            "eta1", "eta2",   "Omega1", "Omega2", "H1", "H2"};
    return q;
}

namespace detail
{

inline nlohmann::json pair_json(complex z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

struct EvalResult
{
    std::optional<complex> value; // empty at infinity
    std::optional<double> tail;
};

inline EvalResult evaluate(const std::string &quantity, const TauPoint &tau, const std::optional<Lattice> &lat,
                           const RunConfig &cfg)
{
    const SeriesParams sp = cfg.series();
    auto form = [](const FormValue &f) { return EvalResult{f.value, f.tail_bound}; };
    if (quantity == "E2") {
        return form(eval_E2(tau, sp));
    }
    if (quantity == "E4") {
        return form(eval_E4(tau, sp));
    }
    if (quantity == "E6") {
        return form(eval_E6(tau, sp));
    }
    if (quantity == "Delta") {
        return form(eval_Delta(tau, DeltaMethod::product, sp));
    }
    if (quantity == "J") {
        return form(eval_J(tau, sp));
    }
    if (quantity == "p") {
        const FormValue e2 = eval_E2(tau, sp);
        const PValue pv = eval_p(tau, sp);
        if (pv.at_infinity) {
            return {std::nullopt, std::nullopt};
        }
        // First-order propagation of the E2 tail through 6i/(pi E2).
        return {pv.value.value(), 6.0 / (pi * std::norm(e2.value)) * e2.tail_bound};
    }
    if (quantity == "pprime") {
        return {eval_p_prime(tau, sp), std::nullopt};
    }
    if (quantity == "eta1" || quantity == "eta2") {
        const Lattice l = lat.value_or(Lattice(tau.value(), 1.0));
        const QuasiPeriods q =
            cfg.zeta_radius ? quasi_periods_direct(l, ZetaParams(*cfg.zeta_radius)) : quasi_periods_modular(l, sp);
        return {quantity == "eta1" ? q.eta1 : q.eta2, std::nullopt};
    }
    const NormalizedPeriods n = eval_normalized(tau, sp);
    if (quantity == "Omega1") {
        return {n.Omega1, std::nullopt};
    }
    if (quantity == "Omega2") {
        return {n.Omega2, std::nullopt};
    }
    if (quantity == "H1") {
        return {n.H1, std::nullopt};
    }
    return {n.H2, std::nullopt};
}

} // namespace detail

/// Record {quantity, input, value_re, value_im, tail_bound}; values are null
/// at infinity, tail_bound is null where no truncation bound is tracked.
inline nlohmann::json cmd_eval(const std::string &quantity, const EvalInput &in, const RunConfig &cfg)
{
    bool known = false;
    for (const auto &q : eval_quantities()) {
        known = known || q == quantity;
    }
    if (!known) {
        throw bad_input("unknown quantity '" + quantity + "'");
    }
    if (in.tau.has_value() == in.lattice.has_value()) {
        throw bad_input("give exactly one of --tau and --lattice");
    }
    nlohmann::json input;
    std::optional<Lattice> lat;
    complex t;
    try {
        if (in.lattice) {
            lat.emplace(in.lattice->first, in.lattice->second);
            input["lattice"] = {detail::pair_json(in.lattice->first), detail::pair_json(in.lattice->second)};
            t = lat->tau().value();
        } else {
            t = *in.tau;
        }
        if (!(t.imag() > 0.0)) {
            throw error(errc::invalid_tau, "Im(tau) must be positive");
        }
    } catch (const error &e) {
        throw bad_input(e.what());
    }
    input["tau"] = detail::pair_json(t);
    const auto r = detail::evaluate(quantity, TauPoint(t), lat, cfg);
    nlohmann::json rec;
    rec["quantity"] = quantity;
    rec["input"] = input;
    rec["value_re"] = r.value ? nlohmann::json(r.value->real()) : nlohmann::json(nullptr);
    rec["value_im"] = r.value ? nlohmann::json(r.value->imag()) : nlohmann::json(nullptr);
    rec["tail_bound"] = r.tail ? nlohmann::json(*r.tail) : nlohmann::json(nullptr);
    if (!r.value) {
        rec["at_infinity"] = true;
    }
    return rec;
}

inline std::string eval_csv(const nlohmann::json &rec)
{
    auto num = [](const nlohmann::json &v) { return v.is_null() ? std::string() : fmt17(v.get<double>()); };
    std::ostringstream os;
    os << "quantity,tau_re,tau_im,value_re,value_im,tail_bound\n";
    os << rec["quantity"].get<std::string>() << ',' << fmt17(rec["input"]["tau"][0].get<double>()) << ','
       << fmt17(rec["input"]["tau"][1].get<double>()) << ',' << num(rec["value_re"]) << ',' << num(rec["value_im"])
       << ',' << num(rec["tail_bound"]) << '\n';
    return os.str();
}

inline nlohmann::json suite_json(const SuiteReport &rep)
{
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["pass"] = rep.pass();
    j["criteria"] = nlohmann::json::array();
    for (const auto &c : rep.criteria) {
        nlohmann::json cj;
        cj["number"] = c.number;
        cj["title"] = c.title;
        cj["pass"] = c.pass();
        cj["checks"] = nlohmann::json::array();
        for (const auto &k : c.checks) {
            cj["checks"].push_back({{"name", k.name}, {"value", k.value}, {"threshold", k.threshold}, {"pass", k.pass}});
        }
        j["criteria"].push_back(cj);
    }
    return j;
}

inline std::string suite_csv(const SuiteReport &rep)
{
    std::ostringstream os;
    os << "criterion,check,value,threshold,pass\n";
    for (const auto &c : rep.criteria) {
        for (const auto &k : c.checks) {
            os << c.number << ",\"" << k.name << "\"," << fmt17(k.value) << ',' << fmt17(k.threshold) << ','
               << (k.pass ? "true" : "false") << '\n';
        }
    }
    return os.str();
}

inline SuiteReport cmd_verify(const std::string &suite, double cutoff = 12.0)
{
    bool known = false;
    for (const auto &s : suite_names()) {
        known = known || s == suite;
    }
    if (!known) {
        throw bad_input("unknown suite '" + suite + "'");
    }
    return run_suite(suite, cutoff);
}

/// {s_star, E2_residual}
inline nlohmann::json cmd_zeros(const RunConfig &cfg)
{
    const SeriesParams sp = cfg.series();
    const TauPoint z = find_e2_zero_on_axis({}, cfg.tol.value_or(1e-12), sp);
    return {{"s_star", z.im()}, {"E2_residual", std::abs(eval_E2(z, sp).value)}};
}

/// {w, solutions: [{tau_re, tau_im, residual}]}
inline nlohmann::json cmd_invert(complex w, int count, const RunConfig &cfg)
{
    if (count < 1) {
        throw bad_input("--count must be positive");
    }
    const SeriesParams sp = cfg.series();
    const double tol = cfg.tol.value_or(1e-10);
    nlohmann::json j;
    j["w"] = detail::pair_json(w);
    j["solutions"] = nlohmann::json::array();
    for (const TauPoint &t : invert_p(w, count, tol, sp)) {
        j["solutions"].push_back(
            {{"tau_re", t.value().real()}, {"tau_im", t.value().imag()}, {"residual", chordal(eval_p(t, sp).value, w)}});
    }
    return j;
}

namespace detail
{

/// Viewport [-1.5, 2.5] x [0, 3] at 200 px per unit.
struct Viewport
{
    static constexpr double x0 = -1.5, x1 = 2.5, y0 = 0.0, y1 = 3.0, scale = 200.0;
    static double px(double x) { return (x - x0) * scale; }
    static double py(double y) { return (y1 - std::clamp(y, y0, y1)) * scale; }
    static std::string pt(complex z)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f %.3f", px(z.real()), py(z.imag()));
        return buf;
    }
};

/// A finite stand-in for a vertex at infinity: far along the side's line.
inline complex far_point(complex from, const ExtComplex &through)
{
    const complex d = through.is_infinity() ? complex(0.0, 1.0) : through.value() - from;
    return from + d * (10.0 / std::abs(d));
}

inline std::string triangle_path(const ArcTriangle &t)
{
    int k0 = 0;
    while (t.vertices[k0].is_infinity()) {
        ++k0;
    }
    std::ostringstream d;
    d << "M " << Viewport::pt(t.vertices[k0].value());
    for (int i = 0; i < 3; ++i) {
        const int k = (k0 + i) % 3, next = (k + 1) % 3;
        if (t.vertices[k].is_infinity()) {
            d << " L " << Viewport::pt(t.vertices[next].value());
            continue;
        }
        const complex v = t.vertices[k].value();
        if (t.vertices[next].is_infinity()) {
            // Out along this side, across the clipped top, back down the next.
            const int after = (next + 1) % 3;
            d << " L " << Viewport::pt(far_point(v, t.mids[k])) << " L "
              << Viewport::pt(far_point(t.vertices[after].value(), t.mids[next]));
            continue;
        }
        const complex w = t.vertices[next].value();
        const GeneralizedCircle &c = t.sides[k];
        if (c.is_line()) {
            d << " L " << Viewport::pt(w);
            continue;
        }
        const complex ctr = c.center();
        const double rad = c.radius() * Viewport::scale;
        const double a0 = std::arg(v - ctr);
        double sweep = qperiods::detail::mod_2pi(std::arg(w - ctr) - a0);
        if (qperiods::detail::mod_2pi(std::arg(t.mids[k].value() - ctr) - a0) > sweep) {
            sweep -= 2.0 * pi;
        }
        char buf[128];
        // Counterclockwise in the plane stays counterclockwise on screen: sweep-flag 0.
        std::snprintf(buf, sizeof buf, " A %.3f %.3f 0 %d %d ", rad, rad, std::abs(sweep) > pi ? 1 : 0,
                      sweep > 0.0 ? 0 : 1);
        d << buf << Viewport::pt(w);
    }
    d << " Z";
    return d.str();
}

} // namespace detail

/// SVG 1.1 drawing of the images g(T0) for all words g of tessellate(depth).
inline std::string cmd_tessellate(int depth)
{
    const auto words = tessellate(depth);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
          "viewBox=\"0 0 800 600\">\n"
       << "<!-- triangles: " << words.size() << " -->\n"
       << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
       << "<g stroke=\"black\" stroke-width=\"0.6\" stroke-linejoin=\"round\">\n";
    const ArcTriangle t0 = triangle_T0();
    for (const auto &g : words) {
        os << "<path fill=\"" << (g.is_holomorphic() ? "#d9d9d9" : "#ffffff") << "\" d=\""
           << detail::triangle_path(image(g, t0)) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

struct GridSpec
{
    double re_lo = -0.5, re_hi = 0.5, im_lo = 0.6, im_hi = 2.0;
    int n = 21;
};

/// "lo:hi"
inline std::pair<double, double> parse_range(const std::string &text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw bad_input("range must be given as 'lo:hi'");
    }
    const double lo = detail::parse_real(detail::strip(text.substr(0, colon)), text);
    const double hi = detail::parse_real(detail::strip(text.substr(colon + 1)), text);
    if (!(hi >= lo)) {
        throw bad_input("range needs lo <= hi");
    }
    return {lo, hi};
}

/// CSV rows (re_tau, im_tau, re_p, im_p); p at infinity is written as inf.
inline std::string cmd_grid(const GridSpec &g, const RunConfig &cfg)
{
    if (g.n < 1 || !(g.im_lo > 0.0)) {
        throw bad_input("grid needs n >= 1 and Im > 0");
    }
    const SeriesParams sp = cfg.series();
    std::ostringstream os;
    os << "re_tau,im_tau,re_p,im_p\n";
    auto at = [&](double lo, double hi, int k) { return g.n == 1 ? lo : lo + (hi - lo) * k / (g.n - 1); };
    for (int a = 0; a < g.n; ++a) {
        for (int b = 0; b < g.n; ++b) {
            const complex z(at(g.re_lo, g.re_hi, b), at(g.im_lo, g.im_hi, a));
            const PValue pv = eval_p(TauPoint(z), sp);
            os << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',';
            if (pv.at_infinity) {
                os << "inf,inf\n";
            } else {
                os << fmt17(pv.value.value().real()) << ',' << fmt17(pv.value.value().imag()) << '\n';
            }
        }
    }
    return os.str();
}

} // namespace qperiods::cli
