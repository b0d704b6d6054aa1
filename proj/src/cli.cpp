#include "covario/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "covario/asymptotics.hpp"
#include "covario/body_io.hpp"
#include "covario/covariogram.hpp"
#include "covario/error.hpp"
#include "covario/fourier_laplace.hpp"
#include "covario/radon.hpp"
#include "covario/verify.hpp"

namespace covario::cli {

using nlohmann::json;

namespace {

/// Thrown for malformed flag values; mapped to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& s, const char* what) {
    try {
        const auto dots = s.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {v, v};
        }
        const int a = std::stoi(s.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument(s);
        const std::string rest = s.substr(dots + 2);
        const int b = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
        if (b < a) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError(std::string(what) + " must look like A..B with A <= B, got '" + s + "'");
    }
}

std::pair<int, int> parse_grid(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto x = s.find('x');
        const int nx = std::stoi(s.substr(0, x), &used);
        if (used != std::min(x, s.size())) throw std::invalid_argument(s);
        int ny = nx;
        if (x != std::string::npos) {
            const std::string rest = s.substr(x + 1);
            ny = std::stoi(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(s);
        }
        if (nx < 2 || ny < 2) throw std::invalid_argument(s);
        return {nx, ny};
    } catch (const std::logic_error&) {
        throw UsageError("--grid must look like NXxNY with both at least 2, got '" + s + "'");
    }
}

cdouble parse_complex(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto comma = s.find(',');
        const double re = std::stod(s.substr(0, comma), &used);
        if (used != std::min(comma, s.size())) throw std::invalid_argument(s);
        double im = 0.0;
        if (comma != std::string::npos) {
            const std::string rest = s.substr(comma + 1);
            im = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(s);
        }
        return {re, im};
    } catch (const std::logic_error&) {
        throw UsageError("--zeta must look like RE or RE,IM, got '" + s + "'");
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string shape_name(const Body& b) {
    if (b.is_polygon()) return "polygon";
    return std::holds_alternative<Disk>(b.shape()) ? "disk" : "support2d";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

json header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

json complex_json(cdouble z) { return {z.real(), z.imag()}; }

struct Context {
    std::ostream& out;
    std::ostream& err;
    bool as_json = false;

    void emit(const json& report, const std::string& text) const {
        if (as_json) out << report.dump(2) << '\n';
        else out << text;
    }
};

// ---------------------------------------------------------------------------

struct Config {
    std::string body, h, k, compare, out, grid = "41x41", m = "1..10", suite, re_range;
    std::vector<std::string> zetas;
    std::optional<double> u, tolerance, im;
    int directions = 0, samples = 201, family = 0;
    std::optional<int> vertices;
    std::uint64_t seed = 20240601;
};

std::vector<Direction> directions_of(const Config& c) {
    if (c.directions > 0) return direction_grid(c.directions, c.u.value_or(0.0));
    return {Direction(c.u.value_or(0.0))};
}

int cmd_body_validate(const Config& c, const Context& ctx) {
    json r = header("body-validate");
    r["path"] = c.body;
    try {
        const Body b = load_body(c.body);
        r["valid"] = true;
        r["kind"] = shape_name(b);
        r["smooth"] = b.is_smooth();
        r["area"] = area(b);
        r["hash"] = body_hash(b);
        r["body"] = body_to_json(b);
        if (b.is_polygon()) r["vertices"] = b.polygon().size();
        std::ostringstream t;
        t << "valid " << shape_name(b) << ", area " << num(area(b)) << ", hash " << body_hash(b) << '\n';
        ctx.emit(r, t.str());
        return kExitOk;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) throw;
        r["valid"] = false;
        r["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        ctx.emit(r, std::string("invalid: ") + e.what() + '\n');
        return kExitAssertion;
    }
}

int grid_command(const std::string& name, const Body& h, const Body& k, const Config& c, const Context& ctx) {
    const auto [nx, ny] = parse_grid(c.grid);
    const CrossCovariogram g(h, k, c.vertices.value_or(kSmoothVertices));
    const GridSpec spec = support_grid(h, k, nx, ny);
    const CovariogramGrid grid = evaluate_grid(g, spec, {body_hash(h), body_hash(k)});
    json r = header(name);
    r["grid"] = grid_metadata(grid);
    r["max_value"] = *std::max_element(grid.values.begin(), grid.values.end());
    r["value_at_origin"] = g({0.0, 0.0});
    if (!c.out.empty()) {
        write_grid(grid, c.out);
        r["out"] = c.out;
        r["sidecar"] = c.out + ".json";
    }
    std::ostringstream t;
    if (c.out.empty() && !ctx.as_json) {
        t << "x,y,value\n";
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const Vec2 p = grid.point(ix, iy);
                t << num(p.x) << ',' << num(p.y) << ',' << num(grid.at(ix, iy)) << '\n';
            }
    } else {
        t << nx << "x" << ny << " grid (" << to_string(grid.method) << "), g(o) = " << num(g({0.0, 0.0}));
        if (!c.out.empty()) t << ", written to " << c.out;
        t << '\n';
    }
    if (name == "crosscov") {
        const SupportReport s = support_of_crosscov(h, k);
        r["support_vertices"] = s.support.size();
        r["support_exact"] = s.exact;
        r["max_width_deviation"] = s.max_width_deviation;
        if (!(c.out.empty() && !ctx.as_json))
            t << "support H + (-K): " << s.support.size() << " vertices, width identity deviation "
              << num(s.max_width_deviation) << '\n';
    }
    ctx.emit(r, t.str());
    return kExitOk;
}

int cmd_radon(const Config& c, const Context& ctx) {
    const Body k = load_body(c.body);
    const Direction u(c.u.value_or(0.0));
    const ChordFunction chord(k, u);
    if (c.samples < 2) throw UsageError("--samples must be at least 2");
    std::ostringstream csv;
    csv << "t,value\n";
    for (int i = 0; i < c.samples; ++i) {
        const double t = chord.lower() + chord.width() * i / (c.samples - 1);
        csv << num(t) << ',' << num(chord(t)) << '\n';
    }
    const RayTransformContext rt(k, u);
    json r = header("radon");
    r["theta"] = u.theta();
    r["lower"] = chord.lower();
    r["upper"] = chord.upper();
    r["width"] = chord.width();
    r["method"] = chord.method();
    r["integral"] = rt.flt({0.0, 0.0}).real();
    r["area"] = area(k);
    std::ostringstream t;
    t << "chord function on [" << num(chord.lower()) << ", " << num(chord.upper()) << "] (" << chord.method()
      << "), integral " << num(rt.flt({0.0, 0.0}).real()) << ", area " << num(area(k)) << '\n';
    if (k.is_smooth()) {
        const LeadingCoefficients lc = leading_coefficients(k, u);
        r["a0"] = lc.a0;
        r["b0"] = lc.b0;
        t << "leading coefficients a0 = " << num(lc.a0) << ", b0 = " << num(lc.b0) << '\n';
    }
    if (!c.out.empty()) {
        write_text(c.out, csv.str());
        r["out"] = c.out;
    } else if (!ctx.as_json) {
        t << csv.str();
    }
    ctx.emit(r, t.str());
    return kExitOk;
}

int cmd_flt(const Config& c, const Context& ctx) {
    const Body k = load_body(c.body);
    const Direction u(c.u.value_or(0.0));
    std::vector<cdouble> points;
    for (const auto& z : c.zetas) points.push_back(parse_complex(z));
    if (!c.re_range.empty()) {
        const auto dots = c.re_range.find("..");
        if (dots == std::string::npos) throw UsageError("--re must look like A..B");
        double a = 0.0, b = 0.0;
        try {
            a = std::stod(c.re_range.substr(0, dots));
            b = std::stod(c.re_range.substr(dots + 2));
        } catch (const std::logic_error&) {
            throw UsageError("--re must look like A..B, got '" + c.re_range + "'");
        }
        if (c.samples < 2) throw UsageError("--samples must be at least 2");
        for (int i = 0; i < c.samples; ++i) points.emplace_back(a + (b - a) * i / (c.samples - 1), c.im.value_or(0.0));
    }
    if (points.empty()) throw UsageError("give --zeta or --re");
    RayTransformOptions opt;
    for (const auto& z : points) opt.max_frequency = std::max(opt.max_frequency, std::abs(z) + 1.0);
    const RayTransformContext rt(k, u, opt);
    std::ostringstream csv;
    csv << "re,im,re_F,im_F,abs_F\n";
    json rows = json::array();
    for (const auto& z : points) {
        const cdouble f = rt.flt(z);
        csv << num(z.real()) << ',' << num(z.imag()) << ',' << num(f.real()) << ',' << num(f.imag()) << ','
            << num(std::abs(f)) << '\n';
        rows.push_back({{"zeta", complex_json(z)}, {"F", complex_json(f)}});
    }
    json r = header("flt");
    r["theta"] = u.theta();
    r["width"] = rt.width();
    r["values"] = rows;
    std::string text = csv.str();
    if (!c.out.empty()) {
        write_text(c.out, csv.str());
        r["out"] = c.out;
        text = std::to_string(points.size()) + " values written to " + c.out + '\n';
    }
    ctx.emit(r, text);
    return kExitOk;
}

int cmd_zeros(const Config& c, const Context& ctx) {
    const Body k = load_body(c.body);
    const auto [m0, m1] = parse_range(c.m, "--m");
    if (m0 < 1) throw UsageError("--m must start at 1 or later");
    const BranchTable table = branch_sweep(k, directions_of(c), m0, m1);
    json r = header("zeros");
    r["rows"] = table.rows.size();
    r["validated"] = std::count_if(table.rows.begin(), table.rows.end(), [](const ZeroBranch& b) { return b.validated; });
    r["max_jump"] = table.max_jump;
    r["jump_bound"] = table.jump_bound;
    r["continuous"] = table.continuous;
    json fails = json::array();
    for (const auto& f : table.failures) fails.push_back({{"m", f.m}, {"theta", f.u.theta()}, {"message", f.message}});
    r["failures"] = fails;
    std::string text;
    if (!c.out.empty()) {
        write_branch_csv(table, c.out);
        r["out"] = c.out;
        text = std::to_string(table.rows.size()) + " branch rows, " + std::to_string(r["validated"].get<long>()) +
               " validated, written to " + c.out + '\n';
    } else {
        text = branch_csv(table);
    }
    for (const auto& f : table.failures) text += "failure m = " + std::to_string(f.m) + ": " + f.message + '\n';
    ctx.emit(r, text);
    return table.failures.empty() ? kExitOk : kExitAssertion;
}

int cmd_kobayashi(const Config& c, const Context& ctx) {
    const Body k = load_body(c.body);
    if (!k.is_smooth()) ctx.err << "warning: polygon input, the curvature terms of the center are undefined\n";
    auto [m0, m1] = parse_range(c.m, "--m");
    if (m0 < 1) throw UsageError("--m must start at 1 or later");
    const KobayashiReport rep = kobayashi_report(k, m0, m1, directions_of(c), c.body);
    json r = header("kobayashi");
    r["body"] = rep.body_id;
    r["smooth_input"] = rep.smooth_input;
    json per_m = json::array();
    std::ostringstream t;
    t << "   m   max deviation   max Re error   max Im error\n";
    for (std::size_t i = 0; i < rep.ms.size(); ++i) {
        per_m.push_back({{"m", rep.ms[i]},
                         {"max_deviation", rep.max_deviation[i]},
                         {"max_re_error", rep.max_re_error[i]},
                         {"max_im_error", std::isnan(rep.max_im_error[i]) ? json(nullptr) : json(rep.max_im_error[i])}});
        char line[128];
        std::snprintf(line, sizeof line, "%4d   %13.6g   %12.6g   %12.6g\n", rep.ms[i], rep.max_deviation[i],
                      rep.max_re_error[i], rep.max_im_error[i]);
        t << line;
    }
    r["per_m"] = per_m;
    r["exponent"] = std::isnan(rep.exponent) ? json(nullptr) : json(rep.exponent);
    r["prefactor"] = rep.prefactor;
    r["exponent_residual"] = rep.exponent_residual;
    r["failures"] = rep.failures.size();
    t << "deviation ~ " << num(rep.prefactor) << " m^" << num(rep.exponent) << " (RMS log residual "
      << num(rep.exponent_residual) << ")\n";
    if (!c.out.empty()) {
        write_branch_csv(rep.table, c.out);
        r["out"] = c.out;
    }
    ctx.emit(r, t.str());
    return rep.failures.empty() ? kExitOk : kExitAssertion;
}

int cmd_recover_curvature(const Config& c, const Context& ctx) {
    const Body k = load_body(c.body);
    const int vertices = c.vertices.value_or(CurvatureFitOptions{}.smooth_vertices);
    const auto dirs = directions_of(c);
    if (!c.compare.empty()) {
        const Body other = load_body(c.compare);
        DeterminationOptions opt;
        opt.fit.smooth_vertices = vertices;
        const DeterminationVerdict v =
            determination_experiment(black_box(k, vertices), black_box(other, vertices), dirs, opt);
        json r = header("recover-curvature");
        r["verdict"] = to_string(v.outcome);
        r["reason"] = v.reason;
        r["abstentions"] = v.abstentions;
        r["failures"] = v.failures;
        json rows = json::array();
        std::ostringstream t;
        for (const auto& row : v.rows) {
            rows.push_back({{"theta", row.u.theta()},
                            {"ok", row.ok},
                            {"failure", row.failure},
                            {"width_a", row.width_a},
                            {"width_b", row.width_b},
                            {"pair_a", {row.pair_a.low, row.pair_a.high}},
                            {"pair_b", {row.pair_b.low, row.pair_b.high}},
                            {"zeta_a", complex_json(row.zeta_a)},
                            {"zeta_b", complex_json(row.zeta_b)},
                            {"sign", row.sign}});
        }
        r["directions"] = rows;
        t << to_string(v.outcome) << ": " << v.reason << " (" << v.abstentions << " abstentions, " << v.failures
          << " failures)\n";
        ctx.emit(r, t.str());
        return kExitOk;
    }
    json rows = json::array();
    std::ostringstream t;
    t << "theta,low,high,exact_low,exact_high\n";
    bool within = true;
    const CovariogramFn g = black_box(k, vertices).covariogram;
    CurvatureFitOptions opt;
    opt.smooth_vertices = vertices;
    for (const auto& u : dirs) {
        const CurvaturePair p = curvature_pair_from_covariogram(g, u, opt);
        json row{{"theta", u.theta()}, {"low", p.low}, {"high", p.high}, {"sum", p.sum}, {"residual", p.residual}};
        t << num(u.theta()) << ',' << num(p.low) << ',' << num(p.high);
        if (k.is_smooth()) {
            const double a = curvature(k, u), b = curvature(k, u.antipode());
            const double lo = std::min(a, b), hi = std::max(a, b);
            const double rel = std::max(std::abs(p.low - lo) / lo, std::abs(p.high - hi) / hi);
            row["exact"] = {lo, hi};
            row["relative_error"] = rel;
            within = within && rel <= c.tolerance.value_or(0.05);
            t << ',' << num(lo) << ',' << num(hi);
        } else {
            t << ",,";
        }
        t << '\n';
        rows.push_back(row);
    }
    json r = header("recover-curvature");
    r["pairs"] = rows;
    r["within_tolerance"] = within;
    r["tolerance"] = c.tolerance.value_or(0.05);
    if (!c.out.empty()) {
        write_text(c.out, t.str());
        r["out"] = c.out;
    }
    ctx.emit(r, t.str());
    return within ? kExitOk : kExitAssertion;
}

int cmd_verify(const Config& c, const Context& ctx) {
    VerifyOptions opt;
    opt.seed = c.seed;
    opt.family = c.family;
    opt.tolerance = c.tolerance;
    if (c.family != 0 && c.family != 1 && c.family != 3) throw UsageError("--family must be 1 or 3");
    std::vector<SuiteResult> results;
    if (c.suite == "all") {
        results = run_all(opt);
    } else {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), c.suite) == names.end())
            throw UsageError("unknown suite '" + c.suite + "'");
        results.push_back(run_suite(c.suite, opt));
    }
    const bool ok = std::all_of(results.begin(), results.end(), [](const SuiteResult& s) { return s.passed; });
    json r = header("verify");
    r["suite"] = c.suite;
    r["passed"] = ok;
    json arr = json::array();
    for (const auto& s : results) arr.push_back(to_json(s));
    r["results"] = arr;
    ctx.emit(r, format_table(results));
    return ok ? kExitOk : kExitAssertion;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"covario: covariograms, chord transforms and their zero branches"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all subcommand help");
    Config c;
    bool as_json = false;
    app.add_flag("--json", as_json, "print a JSON report instead of text");

    const auto add_json = [&](CLI::App* s) { s->add_flag("--json", as_json, "print a JSON report instead of text"); };
    const auto add_u = [&](CLI::App* s) { s->add_option("--u", c.u, "direction angle in radians (default 0)"); };
    const auto add_dirs = [&](CLI::App* s) {
        s->add_option("--directions", c.directions, "uniform grid of N directions starting at --u")
            ->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("body-validate", "parse and validate a body file");
    validate->add_option("--body", c.body, "body JSON")->required();
    add_json(validate);

    auto* cov = app.add_subcommand("covariogram", "covariogram on a lattice over its support");
    cov->add_option("--body", c.body, "body JSON")->required();
    cov->add_option("--grid", c.grid, "lattice size NXxNY")->capture_default_str();
    cov->add_option("--out", c.out, "CSV path; a JSON sidecar is written next to it");
    cov->add_option("--vertices", c.vertices, "polygon resolution for smooth bodies (default 4096)");
    add_json(cov);

    auto* cross = app.add_subcommand("crosscov", "cross covariogram of two bodies on a lattice");
    cross->set_help_flag("--help", "print this help message and exit");
    cross->add_option("--h", c.h, "first body JSON")->required();
    cross->add_option("--k", c.k, "second body JSON")->required();
    cross->add_option("--grid", c.grid, "lattice size NXxNY")->capture_default_str();
    cross->add_option("--out", c.out, "CSV path; a JSON sidecar is written next to it");
    cross->add_option("--vertices", c.vertices, "polygon resolution for smooth bodies (default 4096)");
    add_json(cross);

    auto* rad = app.add_subcommand("radon", "chord function t -> S(u, t)");
    rad->add_option("--body", c.body, "body JSON")->required();
    add_u(rad);
    rad->add_option("--samples", c.samples, "number of t samples")->capture_default_str();
    rad->add_option("--out", c.out, "CSV path (t,value)");
    add_json(rad);

    auto* flt = app.add_subcommand("flt", "transform of the chord function at complex points");
    flt->add_option("--body", c.body, "body JSON")->required();
    add_u(flt);
    flt->add_option("--zeta", c.zetas, "evaluation point RE,IM (repeatable)");
    flt->add_option("--re", c.re_range, "real range A..B sampled with --samples points");
    flt->add_option("--im", c.im, "imaginary part for --re samples (default 0)");
    flt->add_option("--samples", c.samples, "points for --re")->capture_default_str();
    flt->add_option("--out", c.out, "CSV path (re,im,re_F,im_F,abs_F)");
    add_json(flt);

    auto* zeros = app.add_subcommand("zeros", "zero branches F_m(u) with validation");
    zeros->add_option("--body", c.body, "body JSON")->required();
    add_u(zeros);
    add_dirs(zeros);
    zeros->add_option("--m", c.m, "branch range A..B")->capture_default_str();
    zeros->add_option("--out", c.out, "branch CSV path");
    add_json(zeros);

    auto* kob = app.add_subcommand("kobayashi", "zero branches against their predicted centers");
    kob->add_option("--body", c.body, "body JSON")->required();
    add_u(kob);
    add_dirs(kob);
    kob->add_option("--m", c.m, "branch range A..B")->capture_default_str();
    kob->add_option("--out", c.out, "branch CSV path");
    add_json(kob);

    auto* rec = app.add_subcommand("recover-curvature",
                                   "curvature pairs from covariogram values; with --compare, the determination verdict");
    rec->add_option("--body", c.body, "body JSON")->required();
    rec->add_option("--compare", c.compare, "second body JSON: compare the two from black-box access");
    add_u(rec);
    add_dirs(rec);
    rec->add_option("--vertices", c.vertices, "polygon resolution for smooth bodies (default 16384)");
    rec->add_option("--tol", c.tolerance, "relative tolerance against exact curvatures (default 0.05)");
    rec->add_option("--out", c.out, "CSV path (theta,low,high,exact_low,exact_high)");
    add_json(rec);

    auto* ver = app.add_subcommand("verify", "run a verification suite and print a pass/fail table");
    std::string suites = "all";
    for (const auto& n : suite_names()) suites += " | " + n;
    ver->add_option("suite", c.suite, suites)->required();
    ver->add_option("--seed", c.seed, "random seed")->capture_default_str();
    ver->add_option("--family", c.family, "counterexample family (1 or 3; default both)");
    ver->add_option("--tol", c.tolerance, "override the suite's main tolerance");
    add_json(ver);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
        return kExitUsage;
    }

    const Context ctx{out, err, as_json};
    try {
        if (validate->parsed()) return cmd_body_validate(c, ctx);
        if (cov->parsed()) {
            const Body k = load_body(c.body);
            return grid_command("covariogram", k, k, c, ctx);
        }
        if (cross->parsed()) return grid_command("crosscov", load_body(c.h), load_body(c.k), c, ctx);
        if (rad->parsed()) return cmd_radon(c, ctx);
        if (flt->parsed()) return cmd_flt(c, ctx);
        if (zeros->parsed()) return cmd_zeros(c, ctx);
        if (kob->parsed()) return cmd_kobayashi(c, ctx);
        if (rec->parsed()) return cmd_recover_curvature(c, ctx);
        if (ver->parsed()) return cmd_verify(c, ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidArgument) return kExitUsage;
        return kExitAssertion;
    }
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace covario::cli
