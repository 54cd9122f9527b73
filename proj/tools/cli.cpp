#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "polarproj/asymptotics.hpp"
#include "polarproj/bodies.hpp"
#include "polarproj/fields.hpp"
#include "polarproj/gauges.hpp"
#include "polarproj/inequalities.hpp"
#include "polarproj/serialize.hpp"

namespace polarproj::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Vec parse_list(const std::string& s) {
    Vec v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) throw UsageError("empty entry in list '" + s + "'");
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
        if (used != item.size()) throw UsageError("not a number: '" + item + "'");
        v.push_back(x);
    }
    if (v.empty()) throw UsageError("empty list");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Common {
    // field
    std::string field;
    std::string field_json;
    int n = 2;
    double radius = 1.0;
    std::string matrix;  // rows separated by ';'
    std::string diag;
    std::string widths;
    double amplitude = 1.0;
    // kind
    std::string kind = "linf";
    double p = 2.0;
    double s = 0.5;
    std::string sign = "sym";
    // numerics
    double rel_tol = 0.0, abs_tol = 0.0;
    int max_sub = 0, cells = 0;
    std::uint64_t seed = 0;
    std::string config;
    int resolution = 0;
    // output
    std::string format;
    std::string out_path;

    CLI::App* app = nullptr;
    bool given(const std::string& name) const { return app->count(name) > 0; }
};

void add_field_options(CLI::App* sub, Common& c) {
    sub->add_option("--field", c.field, "cone | aniso | bump | tensor | tensor_symmetral");
    sub->add_option("--field-json", c.field_json, "field descriptor as JSON text");
    sub->add_option("--n", c.n, "dimension")->check(CLI::Range(1, 64));
    sub->add_option("--R", c.radius, "radius (cone, bump)");
    sub->add_option("--A", c.matrix, "matrix rows, e.g. 2,0;0,1 (aniso)");
    sub->add_option("--diag", c.diag, "diagonal matrix entries (aniso)");
    sub->add_option("--w", c.widths, "half-widths (tensor)");
    sub->add_option("--amplitude", c.amplitude, "peak value");
}

void add_kind_options(CLI::App* sub, Common& c) {
    sub->add_option("--kind", c.kind, "lp | fraclp | linf | fraclinf");
    sub->add_option("--p", c.p, "integrability exponent");
    sub->add_option("--s", c.s, "fractional order");
    sub->add_option("--sign", c.sign, "sym | plus | minus");
}

void add_numeric_options(CLI::App* sub, Common& c) {
    sub->add_option("--rel-tol", c.rel_tol);
    sub->add_option("--abs-tol", c.abs_tol);
    sub->add_option("--max-sub", c.max_sub);
    sub->add_option("--cells", c.cells, "x cells per axis for sup searches");
    sub->add_option("--seed", c.seed);
    sub->add_option("--config", c.config, "JSON file with defaults (explicit flags win)");
    sub->add_option("--resolution", c.resolution, "sphere grid resolution");
}

void add_output_options(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--format", c.format);
    sub->add_option("--out", c.out_path, "write output to a file");
}

// Configuration file merged under explicit flags.
struct Loaded {
    QuadConfig cfg;
    nlohmann::json extra = nlohmann::json::object();
};

Loaded load_config(const Common& c) {
    Loaded L;
    if (!c.config.empty()) {
        const std::string text = read_file(c.config);
        try {
            L.extra = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
        if (!L.extra.is_object()) throw UsageError("config: expected a JSON object");
        nlohmann::json q = L.extra.value("quad", L.extra);
        L.cfg = quad_config_from_json(q.dump(), L.cfg);
    }
    if (c.given("--rel-tol")) L.cfg.rel_tol = c.rel_tol;
    if (c.given("--abs-tol")) L.cfg.abs_tol = c.abs_tol;
    if (c.given("--max-sub")) L.cfg.max_subdivisions = c.max_sub;
    if (c.given("--cells")) L.cfg.x_cells_per_axis = c.cells;
    if (c.given("--seed")) L.cfg.seed = c.seed;
    L.cfg.validate();
    return L;
}

template <class T>
T config_value(const Common& c, const Loaded& L, const std::string& flag, const std::string& key, T explicit_value) {
    if (c.given(flag) || !L.extra.contains(key)) return explicit_value;
    try {
        return L.extra.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config key '" + key + "': " + e.what());
    }
}

std::optional<ScalarField> make_field(const Common& c, const Loaded& L) {
    if (!c.field_json.empty()) return field_from_json(c.field_json);
    if (c.field.empty()) {
        if (L.extra.contains("field")) return field_from_json(L.extra.at("field").dump());
        return std::nullopt;
    }
    const int n = config_value(c, L, "--n", "n", c.n);
    const double amp = c.amplitude;
    if (c.field == "cone") return ScalarField::cone(n, c.radius, amp);
    if (c.field == "bump") return ScalarField::smooth_bump(n, c.radius, amp);
    if (c.field == "aniso") {
        if (!c.matrix.empty()) {
            Vec flat;
            int rows = 0;
            std::stringstream ss(c.matrix);
            std::string row;
            while (std::getline(ss, row, ';')) {
                const Vec r = parse_list(row);
                flat.insert(flat.end(), r.begin(), r.end());
                ++rows;
            }
            if (static_cast<std::size_t>(rows * rows) != flat.size()) throw UsageError("--A must be square");
            return ScalarField::anisotropic_tent(Mat(rows, flat), amp);
        }
        Vec d = c.diag.empty() ? Vec{} : parse_list(c.diag);
        if (d.empty()) {
            d.assign(static_cast<std::size_t>(n), 1.0);
            d[0] = 2.0;
        }
        return ScalarField::anisotropic_tent(Mat::diagonal(d), amp);
    }
    if (c.field == "tensor" || c.field == "tensor_symmetral") {
        const Vec w = c.widths.empty() ? Vec(static_cast<std::size_t>(n), 1.0) : parse_list(c.widths);
        return c.field == "tensor" ? ScalarField::tensor_tent(w, amp) : ScalarField::tensor_tent_symmetral(w, amp);
    }
    throw UsageError("unknown field '" + c.field + "'");
}

ScalarField require_field(const Common& c, const Loaded& L) {
    auto f = make_field(c, L);
    if (!f) throw UsageError("--field is required");
    return *f;
}

GaugeKind make_kind(const Common& c) {
    Sign sg;
    try {
        sg = parse_sign(c.sign);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    GaugeFamily fam;
    try {
        fam = parse_family(c.kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    GaugeKind k;
    switch (fam) {
        case GaugeFamily::Lp: k = GaugeKind::lp(c.p, sg); break;
        case GaugeFamily::FracLp: k = GaugeKind::frac_lp(c.s, c.p, sg); break;
        case GaugeFamily::LInf: k = GaugeKind::linf(sg); break;
        case GaugeFamily::FracLInf: k = GaugeKind::frac_linf(c.s, sg); break;
    }
    k.validate();
    return k;
}

StarBody parse_body(const std::string& spec, int n) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "ball") return StarBody::ball(n, arg.empty() ? 1.0 : parse_list(arg).at(0));
    if (name == "ellipse" || name == "ellipsoid") {
        const Vec d = parse_list(arg);
        if (static_cast<int>(d.size()) != n) throw UsageError("ellipse needs " + std::to_string(n) + " entries");
        StarBody K = StarBody::ellipsoid(Mat::diagonal(d));
        return K;
    }
    if (name == "fourier") {
        if (n != 2) throw UsageError("fourier bodies are planar");
        return StarBody::random_fourier(static_cast<std::uint64_t>(parse_list(arg.empty() ? "1" : arg).at(0)));
    }
    throw UsageError("unknown body '" + spec + "'");
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + c.out_path + "'");
    f << text;
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (c.format == a) return;
    throw UsageError("format '" + c.format + "' is not valid for this command");
}

int resolution_for(const Common& c, const Loaded& L, int n) {
    const int r = config_value(c, L, "--resolution", "resolution", c.resolution);
    return r > 0 ? r : default_resolution(n);
}

// ---------------------------------------------------------------- commands

int cmd_gauge(const Common& c, const std::vector<std::string>& xis, const std::string& integrator,
              std::ostream& out) {
    const Loaded L = load_config(c);
    require_format(c, {"csv", "json"});
    const ScalarField f = require_field(c, L);
    const GaugeKind kind = make_kind(c);
    if (xis.empty()) throw UsageError("--xi is required");
    GaugeOptions opt;
    if (integrator == "cubature") opt.x_integrator = XIntegrator::Cubature;
    else if (integrator != "lines") throw UsageError("unknown integrator '" + integrator + "'");
    std::vector<Vec> dirs;
    for (const auto& s : xis) {
        Vec v = parse_list(s);
        if (static_cast<int>(v.size()) != f.dim()) throw UsageError("--xi has the wrong dimension");
        if (!(norm(v) > 0.0)) throw UsageError("--xi must be nonzero");
        dirs.push_back(std::move(v));
    }
    std::vector<GaugeValue> vals;
    for (const auto& d : dirs) vals.push_back(gauge(f, kind, d, L.cfg, opt));
    bool ok = true;
    std::ostringstream os;
    auto join = [](const Vec& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    if (c.format == "csv") {
        os << "xi,value,log_value,error_bound,converged,witness_x,witness_t\n";
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const GaugeValue& g = vals[i];
            os << csv_field(join(dirs[i])) << ',' << format_double(g.value) << ',' << format_double(g.log_value)
               << ',' << format_double(g.estimate.error_bound) << ',' << (g.estimate.converged ? "true" : "false")
               << ',';
            if (g.witness) os << csv_field(join(g.witness->x)) << ',' << format_double(g.witness->t);
            else os << ',';
            os << '\n';
            ok = ok && g.estimate.converged;
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const GaugeValue& g = vals[i];
            nlohmann::json j{{"xi", dirs[i]},
                             {"value", g.value},
                             {"log_value", g.log_value},
                             {"error_bound", g.estimate.error_bound},
                             {"converged", g.estimate.converged}};
            if (g.witness) j["witness"] = {{"x", g.witness->x}, {"t", g.witness->t}};
            arr.push_back(j);
            ok = ok && g.estimate.converged;
        }
        nlohmann::json doc{{"field", nlohmann::json::parse(field_to_json(f))}, {"kind", kind.label()}, {"rows", arr}};
        os << doc.dump(2) << '\n';
    }
    emit(c, out, os.str());
    return ok ? kOk : kNotConverged;
}

int cmd_body(const Common& c, bool with_volume, std::ostream& out) {
    const Loaded L = load_config(c);
    require_format(c, {"csv", "json"});
    const ScalarField f = require_field(c, L);
    const GaugeKind kind = make_kind(c);
    auto grid = std::make_shared<const SphereGrid>(make_sphere_grid(f.dim(), resolution_for(c, L, f.dim()), L.cfg.seed));
    const BodyOfField b = realize_body(f, kind, grid, L.cfg);
    std::string text;
    bool ok = b.converged;
    if (with_volume) {
        const Estimate v = volume(b.realized, *grid);
        ok = ok && v.converged;
        if (c.format == "csv") {
            text = "volume,error_bound,converged\n" + format_double(v.value) + "," + format_double(v.error_bound) +
                   "," + (v.converged ? "true" : "false") + "\n";
        } else {
            nlohmann::json j{{"volume", v.value}, {"error_bound", v.error_bound}, {"converged", v.converged}};
            text = j.dump() + "\n";
        }
    } else {
        text = c.format == "csv" ? body_to_csv(b.realized) : body_to_json(b.realized) + "\n";
    }
    emit(c, out, text);
    return ok ? kOk : kNotConverged;
}

struct LimitsArgs {
    std::string quantity = "gauge";
    std::string p_ladder, s_ladder, K = "ball", xi;
    double q = -2.0;
};

int cmd_limits(const Common& c, const LimitsArgs& a, std::ostream& out, std::ostream& err) {
    const Loaded L = load_config(c);
    require_format(c, {"csv", "json"});
    SweepSpec sp;
    sp.f = require_field(c, L);
    const int n = sp.f.dim();
    try {
        sp.quantity = parse_quantity(a.quantity);
        sp.sign = parse_sign(c.sign);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.p_ladder.empty()) sp.p_ladder = parse_list(a.p_ladder);
    if (!a.s_ladder.empty()) sp.s_ladder = parse_list(a.s_ladder);
    if (!a.xi.empty()) sp.direction = parse_list(a.xi);
    sp.q = a.q;
    sp.K = parse_body(a.K, n);
    sp.K_label = a.K;
    sp.grid_resolution = resolution_for(c, L, n);
    sp.validate();
    const SweepResult r = run_sweep(sp, L.cfg);
    emit(c, out, c.format == "csv" ? sweep_to_csv(r) : sweep_to_json(r));
    err << "corner_14=" << format_double(r.corner_14) << " corner_23=" << format_double(r.corner_23)
        << " commutation_gap=" << format_double(r.commutation_gap)
        << " bound=" << format_double(r.commutation_bound) << (r.degraded ? " degraded" : "") << '\n';
    return r.degraded ? kNotConverged : kOk;
}

struct CheckArgs {
    std::string suite = "all";
    std::string s_list = "0.5,0.8,0.95";
    std::string signs = "sym,plus,minus";
    std::string q_list;
    std::string K = "ball";
    int pairs = 25;
    int directions = 0;
};

std::vector<ScalarField> catalog(int n) {
    Vec d(static_cast<std::size_t>(n), 1.0);
    d[0] = 2.0;
    return {ScalarField::cone(n, 1.0), ScalarField::anisotropic_tent(Mat::diagonal(d)), ScalarField::smooth_bump(n, 1.0),
            ScalarField::tensor_tent(Vec(static_cast<std::size_t>(n), 1.0))};
}

int cmd_check(const Common& c, const CheckArgs& a, std::ostream& out) {
    const Loaded L = load_config(c);
    if (c.format != "json" && c.format != "table") throw UsageError("check supports --format json|table");
    static const std::vector<std::string> suites{"all", "holder", "gradient", "volume", "endpoint", "dualmixed"};
    if (std::find(suites.begin(), suites.end(), a.suite) == suites.end())
        throw UsageError("unknown suite '" + a.suite + "'");
    const int n = config_value(c, L, "--n", "n", c.n);
    const Vec svals = parse_list(a.s_list);
    std::vector<Sign> signs;
    {
        std::stringstream ss(a.signs);
        std::string t;
        while (std::getline(ss, t, ',')) {
            try {
                signs.push_back(parse_sign(t));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
    }
    CheckOptions opt;
    opt.grid_resolution = resolution_for(c, L, n);
    opt.directions = a.directions;
    const StarBody K = parse_body(a.K, n);
    std::vector<ScalarField> fields;
    if (auto f = make_field(c, L)) fields.push_back(*f);
    else fields = catalog(n);
    for (const auto& f : fields)
        if (f.dim() != n) throw UsageError("field dimension differs from --n");

    auto want = [&](const char* s) { return a.suite == "all" || a.suite == s; };
    // Independent checks are collected as closures and evaluated in order.
    std::vector<std::function<IneqReport()>> jobs;
    for (const auto& f : fields) {
        for (Sign sg : signs) {
            if (want("holder"))
                for (double s : svals)
                    jobs.push_back([&, f, sg, s] { return check_polya_szego_holder(f, K, s, sg, L.cfg, opt); });
            if (want("gradient"))
                jobs.push_back([&, f, sg] { return check_polya_szego_gradient(f, K, sg, L.cfg, opt); });
            if (want("volume")) {
                for (double s : svals)
                    jobs.push_back([&, f, sg, s] { return check_volume_polya_szego(f, s, sg, L.cfg, opt); });
                jobs.push_back([&, f, sg] { return check_volume_polya_szego(f, 1.0, sg, L.cfg, opt); });
            }
            if (want("endpoint")) {
                for (double s : svals)
                    jobs.push_back([&, f, sg, s] { return check_endpoint_isoperimetric(f, K, s, sg, L.cfg, opt); });
                jobs.push_back([&, f, sg] { return check_endpoint_isoperimetric(f, K, 1.0, sg, L.cfg, opt); });
            }
        }
    }
    std::shared_ptr<const SphereGrid> grid;
    if (want("dualmixed")) {
        if (n != 2) throw UsageError("the dualmixed suite uses planar random bodies (--n 2)");
        grid = std::make_shared<const SphereGrid>(make_sphere_grid(2, opt.grid_resolution, L.cfg.seed));
        const Vec qs = a.q_list.empty() ? Vec{-0.5, -2.0, -8.0} : parse_list(a.q_list);
        for (double q : qs) {
            if (!(q < 0.0)) throw UsageError("dual mixed checks need q < 0");
            for (int k = 0; k < a.pairs; ++k) {
                const std::uint64_t base = L.cfg.seed + 2 * static_cast<std::uint64_t>(k);
                jobs.push_back([&, q, base] {
                    return check_dual_mixed_inequality(StarBody::random_fourier(base), StarBody::random_fourier(base + 1),
                                                       q, *grid);
                });
            }
            jobs.push_back([&, q] {
                const StarBody U = StarBody::random_fourier(L.cfg.seed + 1000);
                return check_dual_mixed_inequality(U, U.dilated(1.5), q, *grid);
            });
        }
    }
    std::vector<IneqReport> reports;
    for (auto& j : jobs) reports.push_back(j());
    std::ostringstream os;
    if (c.format == "json") {
        for (const auto& r : reports) os << report_to_json(r) << '\n';
    } else {
        os << reports_table(reports);
    }
    emit(c, out, os.str());
    for (const auto& r : reports)
        if (r.verdict == Verdict::Violated) return kViolated;
    return kOk;
}

int cmd_symmetrize(const Common& c, const std::string& taus, std::ostream& out) {
    const Loaded L = load_config(c);
    require_format(c, {"json", "csv"});
    const ScalarField f = require_field(c, L);
    const ScalarField g = symmetrize(f);
    std::ostringstream os;
    if (taus.empty()) {
        if (c.format != "json") throw UsageError("symmetrize without --tau prints JSON");
        os << field_to_json(g) << '\n';
    } else {
        const Vec tv = parse_list(taus);
        if (c.format == "csv") {
            os << "tau,field,symmetral\n";
            for (double t : tv)
                os << format_double(t) << ',' << format_double(f.distribution_function(t)) << ','
                   << format_double(g.distribution_function(t)) << '\n';
        } else {
            nlohmann::json rows = nlohmann::json::array();
            for (double t : tv)
                rows.push_back({{"tau", t}, {"field", f.distribution_function(t)}, {"symmetral", g.distribution_function(t)}});
            nlohmann::json doc{{"symmetral", nlohmann::json::parse(field_to_json(g))}, {"levels", rows}};
            os << doc.dump(2) << '\n';
        }
    }
    emit(c, out, os.str());
    return kOk;
}

int cmd_plot(const Common& c, const std::vector<std::string>& overlays, std::ostream& out) {
    const Loaded L = load_config(c);
    require_format(c, {"svg"});
    const auto f = make_field(c, L);
    const int n = f ? f->dim() : config_value(c, L, "--n", "n", c.n);
    if (n != 2) throw UsageError("plot needs n = 2");
    if (!f && overlays.empty()) throw UsageError("plot needs --field or --overlay");
    std::vector<StarBody> bodies;
    std::vector<std::string> names;
    bool ok = true;
    if (f) {
        const GaugeKind kind = make_kind(c);
        auto grid = std::make_shared<const SphereGrid>(make_sphere_grid(2, resolution_for(c, L, 2), L.cfg.seed));
        BodyOfField b = realize_body(*f, kind, grid, L.cfg);
        ok = b.converged;
        bodies.push_back(b.realized);
        names.push_back(b.realized.label());
    }
    for (const auto& o : overlays) {
        bodies.push_back(parse_body(o, 2));
        names.push_back(o);
    }
    std::vector<PlotCurve> curves;
    for (std::size_t i = 0; i < bodies.size(); ++i) curves.push_back(PlotCurve{&bodies[i], names[i]});
    emit(c, out, polar_plot_svg(curves));
    return ok ? kOk : kNotConverged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"polar projection bodies of closed-form test functions", "polarproj"};
    app.require_subcommand(1);

    Common gc, bc, lc, cc, sc, pc;
    std::vector<std::string> xis, overlays;
    std::string integrator = "lines", taus;
    bool with_volume = false;
    LimitsArgs la;
    CheckArgs ca;

    auto* g = app.add_subcommand("gauge", "gauge values at directions");
    add_field_options(g, gc);
    add_kind_options(g, gc);
    add_numeric_options(g, gc);
    add_output_options(g, gc, "csv");
    g->add_option("--xi", xis, "direction, e.g. 1,0 (repeatable)");
    g->add_option("--integrator", integrator, "lines | cubature");
    gc.app = g;

    auto* b = app.add_subcommand("body", "realize a body on a sphere grid");
    add_field_options(b, bc);
    add_kind_options(b, bc);
    add_numeric_options(b, bc);
    add_output_options(b, bc, "csv");
    b->add_flag("--volume", with_volume, "print the volume instead of the radii");
    bc.app = b;

    auto* l = app.add_subcommand("limits", "(p, s) sweep with limit edges");
    add_field_options(l, lc);
    add_numeric_options(l, lc);
    add_output_options(l, lc, "csv");
    l->add_option("--quantity", la.quantity, "gauge | volume | dualmixed | vtilroot");
    l->add_option("--p-ladder", la.p_ladder);
    l->add_option("--s-ladder", la.s_ladder);
    l->add_option("--q", la.q, "dual mixed volume exponent");
    l->add_option("--K", la.K, "ball[:r] | ellipse:a,b,.. | fourier:seed");
    l->add_option("--xi", la.xi, "direction for --quantity gauge");
    l->add_option("--sign", lc.sign, "sym | plus | minus");
    lc.app = l;

    auto* c = app.add_subcommand("check", "inequality suites");
    add_field_options(c, cc);
    add_numeric_options(c, cc);
    add_output_options(c, cc, "json");
    c->add_option("--suite", ca.suite, "all | holder | gradient | volume | endpoint | dualmixed");
    c->add_option("--s-list", ca.s_list);
    c->add_option("--signs", ca.signs);
    c->add_option("--q", ca.q_list, "dual mixed exponents (< 0)");
    c->add_option("--K", ca.K);
    c->add_option("--pairs", ca.pairs)->check(CLI::Range(1, 100000));
    c->add_option("--directions", ca.directions);
    cc.app = c;

    auto* s = app.add_subcommand("symmetrize", "Schwarz symmetral of a field");
    add_field_options(s, sc);
    add_numeric_options(s, sc);
    add_output_options(s, sc, "json");
    s->add_option("--tau", taus, "levels for a distribution-function comparison");
    sc.app = s;

    auto* p = app.add_subcommand("plot", "SVG polar plot of planar bodies");
    add_field_options(p, pc);
    add_kind_options(p, pc);
    add_numeric_options(p, pc);
    add_output_options(p, pc, "svg");
    p->add_option("--overlay", overlays, "ball[:r] | ellipse:a,b | fourier:seed (repeatable)");
    pc.app = p;

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (g->parsed()) return cmd_gauge(gc, xis, integrator, out);
        if (b->parsed()) return cmd_body(bc, with_volume, out);
        if (l->parsed()) return cmd_limits(lc, la, out, err);
        if (c->parsed()) return cmd_check(cc, ca, out);
        if (s->parsed()) return cmd_symmetrize(sc, taus, out);
        if (p->parsed()) return cmd_plot(pc, overlays, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace polarproj::cli
