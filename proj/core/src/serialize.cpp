#include "polarproj/serialize.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace polarproj {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_fixed(double v, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    std::string s(buf, res.ptr);
    if (s == "-0.000") s = "0.000";
    return s;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// RFC 4180 records.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                rows.push_back(std::move(row));
            }
            row.clear();
            cell.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string field_to_json(const ScalarField& f) {
    json j;
    j["kind"] = to_string(f.kind());
    j["dim"] = f.dim();
    json p = json::object();
    switch (f.kind()) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump: p["radius"] = f.radius(); break;
        case FieldKind::AnisotropicTent: {
            json m = json::array();
            for (int i = 0; i < f.dim(); ++i) {
                json row = json::array();
                for (int k = 0; k < f.dim(); ++k) row.push_back(f.matrix()(i, k));
                m.push_back(row);
            }
            p["matrix"] = m;
            break;
        }
        case FieldKind::TensorTent:
        case FieldKind::RadialTable: p["widths"] = f.widths(); break;
    }
    p["amplitude"] = f.amplitude();
    j["params"] = p;
    return j.dump();
}

ScalarField field_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("field JSON: ") + e.what());
    }
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const json p = j.value("params", json::object());
        const double amp = p.value("amplitude", 1.0);
        int n = j.value("dim", 0);
        if (kind == "cone" || kind == "bump") {
            if (n < 1) throw std::invalid_argument("field JSON: dim must be >= 1");
            const double R = p.value("radius", 1.0);
            return kind == "cone" ? ScalarField::cone(n, R, amp) : ScalarField::smooth_bump(n, R, amp);
        }
        if (kind == "aniso") {
            const auto rows = p.at("matrix").get<std::vector<std::vector<double>>>();
            if (n == 0) n = static_cast<int>(rows.size());
            if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("field JSON: matrix size != dim");
            Vec flat;
            for (const auto& r : rows) {
                if (static_cast<int>(r.size()) != n) throw std::invalid_argument("field JSON: matrix must be square");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return ScalarField::anisotropic_tent(Mat(n, flat), amp);
        }
        if (kind == "tensor" || kind == "tensor_symmetral") {
            Vec w = p.contains("widths") ? p.at("widths").get<Vec>() : Vec(static_cast<std::size_t>(std::max(n, 0)), 1.0);
            if (n != 0 && static_cast<int>(w.size()) != n) throw std::invalid_argument("field JSON: widths size != dim");
            return kind == "tensor" ? ScalarField::tensor_tent(w, amp) : ScalarField::tensor_tent_symmetral(w, amp);
        }
        throw std::invalid_argument("field JSON: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("field JSON: ") + e.what());
    }
}

std::string quad_config_to_json(const QuadConfig& c) {
    json j;
    j["rel_tol"] = c.rel_tol;
    j["abs_tol"] = c.abs_tol;
    j["t_split"] = c.t_split;
    j["max_subdivisions"] = c.max_subdivisions;
    j["x_cells_per_axis"] = c.x_cells_per_axis;
    j["seed"] = c.seed;
    return j.dump();
}

QuadConfig quad_config_from_json(const std::string& text, QuadConfig c) {
    try {
        const json j = json::parse(text);
        c.rel_tol = j.value("rel_tol", c.rel_tol);
        c.abs_tol = j.value("abs_tol", c.abs_tol);
        c.t_split = j.value("t_split", c.t_split);
        c.max_subdivisions = j.value("max_subdivisions", c.max_subdivisions);
        c.x_cells_per_axis = j.value("x_cells_per_axis", c.x_cells_per_axis);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config JSON: ") + e.what());
    }
    c.validate();
    return c;
}

std::string body_to_csv(const StarBody& K) {
    if (!K.is_sampled()) throw std::invalid_argument("body_to_csv: body is not sampled");
    const SphereGrid& g = K.grid();
    std::ostringstream os;
    for (int i = 0; i < g.dim; ++i) os << 'x' << i << ',';
    os << "weight,radius\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
        for (double c : g.nodes[k]) os << format_double(c) << ',';
        os << format_double(g.weights[k]) << ',' << format_double(K.radii()[k]) << '\n';
    }
    return os.str();
}

namespace {

std::shared_ptr<SphereGrid> grid_from_samples(int n, std::vector<Vec> nodes, Vec weights, int resolution,
                                              std::uint64_t seed) {
    auto g = std::make_shared<SphereGrid>();
    const std::size_t count = nodes.size();
    if (n == 1 && count == 2) {
        *g = make_sphere_grid(1, 4);
    } else if (n == 2) {
        *g = make_sphere_grid(2, resolution > 0 ? resolution : static_cast<int>(count));
    } else if (n == 3) {
        const int m = resolution > 0 ? resolution : static_cast<int>(std::lround(std::sqrt(count / 2.0)));
        *g = make_sphere_grid(3, m);
    } else {
        g->dim = n;
        g->scheme = SphereScheme::MonteCarlo;
        g->resolution = resolution > 0 ? resolution : static_cast<int>(count);
        g->seed = seed;
        g->antipode.assign(count, -1);
    }
    if (g->size() != 0 && g->size() != count)
        throw std::invalid_argument("body: node count does not match a standard grid");
    g->nodes = std::move(nodes);
    g->weights = std::move(weights);
    return g;
}

}  // namespace

StarBody body_from_csv(const std::string& text, const std::string& label) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw std::invalid_argument("body CSV: empty input");
    const auto& head = rows.front();
    if (head.size() < 3 || head[head.size() - 2] != "weight" || head.back() != "radius")
        throw std::invalid_argument("body CSV: header must end with weight,radius");
    const int n = static_cast<int>(head.size()) - 2;
    std::vector<Vec> nodes;
    Vec weights, radii;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != head.size()) throw std::invalid_argument("body CSV: ragged row");
        Vec x;
        for (int i = 0; i < n; ++i) x.push_back(parse_double(row[static_cast<std::size_t>(i)]));
        nodes.push_back(std::move(x));
        weights.push_back(parse_double(row[static_cast<std::size_t>(n)]));
        radii.push_back(parse_double(row[static_cast<std::size_t>(n + 1)]));
    }
    auto g = grid_from_samples(n, std::move(nodes), std::move(weights), 0, 0);
    return StarBody::sampled(std::move(g), std::move(radii), label);
}

std::string body_to_json(const StarBody& K) {
    if (!K.is_sampled()) throw std::invalid_argument("body_to_json: body is not sampled");
    const SphereGrid& g = K.grid();
    json j;
    j["label"] = K.label();
    j["dim"] = g.dim;
    j["resolution"] = g.resolution;
    j["seed"] = g.seed;
    j["nodes"] = g.nodes;
    j["weights"] = g.weights;
    j["radii"] = K.radii();
    if (!K.radius_errors().empty()) j["radius_errors"] = K.radius_errors();
    return j.dump();
}

StarBody body_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const int n = j.at("dim").get<int>();
        auto g = grid_from_samples(n, j.at("nodes").get<std::vector<Vec>>(), j.at("weights").get<Vec>(),
                                   j.value("resolution", 0), j.value("seed", std::uint64_t{0}));
        return StarBody::sampled(std::move(g), j.at("radii").get<Vec>(), j.value("label", std::string("json")),
                                 j.value("radius_errors", Vec{}));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("body JSON: ") + e.what());
    }
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "p";
    for (double s : r.spec.s_ladder) os << ',' << format_double(s);
    os << ",1\n";
    for (std::size_t i = 0; i < r.spec.p_ladder.size(); ++i) {
        os << format_double(r.spec.p_ladder[i]);
        for (const Cell& c : r.table[i]) os << ',' << format_double(c.value);
        os << ',' << format_double(r.s_one[i].value) << '\n';
    }
    os << "inf";
    for (const Cell& c : r.p_inf) os << ',' << format_double(c.value);
    os << ',' << format_double(r.corner.value) << '\n';
    return os.str();
}

namespace {

json cell_json(const Cell& c) {
    return json{{"value", number_or_string(c.value)},
                {"error", number_or_string(c.error)},
                {"converged", c.converged},
                {"suspect", c.suspect}};
}

json extrap_json(const Extrapolation& e) {
    return json{{"value", number_or_string(e.value)}, {"bound", number_or_string(e.bound)}, {"valid", e.valid}};
}

}  // namespace

std::string sweep_to_json(const SweepResult& r) {
    json j;
    const SweepSpec& s = r.spec;
    j["field"] = json::parse(field_to_json(s.f));
    j["quantity"] = to_string(s.quantity);
    j["sign"] = to_string(s.sign);
    if (s.quantity == Quantity::DualMixedQ) j["q"] = s.q;
    if (s.quantity == Quantity::DualMixedQ || s.quantity == Quantity::VtilRoot) j["K"] = s.K_label;
    if (s.quantity == Quantity::Gauge) j["direction"] = s.direction.empty() ? unit_vector(s.f.dim(), 0) : s.direction;
    j["p_ladder"] = s.p_ladder;
    j["s_ladder"] = s.s_ladder;
    json table = json::array();
    for (const auto& row : r.table) {
        json jr = json::array();
        for (const Cell& c : row) jr.push_back(cell_json(c));
        table.push_back(jr);
    }
    j["table"] = table;
    json col = json::array(), row = json::array();
    for (const Cell& c : r.s_one) col.push_back(cell_json(c));
    for (const Cell& c : r.p_inf) row.push_back(cell_json(c));
    j["s_one"] = col;
    j["p_inf"] = row;
    j["corner"] = cell_json(r.corner);
    json e1 = json::array(), e2 = json::array();
    for (const auto& e : r.edge1) e1.push_back(extrap_json(e));
    for (const auto& e : r.edge2) e2.push_back(extrap_json(e));
    j["edge1"] = e1;
    j["edge2"] = e2;
    j["edge3"] = extrap_json(r.edge3);
    j["edge4"] = extrap_json(r.edge4);
    j["corner_14"] = number_or_string(r.corner_14);
    j["corner_23"] = number_or_string(r.corner_23);
    j["commutation_gap"] = number_or_string(r.commutation_gap);
    j["commutation_bound"] = number_or_string(r.commutation_bound);
    j["degraded"] = r.degraded;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string report_to_json(const IneqReport& r) {
    json j;
    j["name"] = r.name;
    j["lhs"] = number_or_string(r.lhs);
    j["rhs"] = number_or_string(r.rhs);
    j["margin"] = number_or_string(r.margin);
    j["tolerance"] = number_or_string(r.tolerance);
    j["equality_band"] = number_or_string(r.equality_band);
    j["verdict"] = to_string(r.verdict);
    j["inputs"] = r.inputs.empty() ? json::object() : json::parse(r.inputs);
    return j.dump();
}

std::string reports_table(const std::vector<IneqReport>& reports) {
    std::ostringstream os;
    auto pad = [&](const std::string& s, std::size_t w) {
        os << s;
        for (std::size_t i = s.size(); i < w; ++i) os << ' ';
    };
    pad("name", 24);
    pad("lhs", 24);
    pad("rhs", 24);
    pad("margin", 24);
    os << "verdict\n";
    for (const auto& r : reports) {
        pad(r.name, 24);
        pad(format_double(r.lhs), 24);
        pad(format_double(r.rhs), 24);
        pad(format_double(r.margin), 24);
        os << to_string(r.verdict) << '\n';
    }
    return os.str();
}

std::string polar_plot_svg(const std::vector<PlotCurve>& curves) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr int samples = 720;
    std::vector<Vec> radii;
    double rmax = 0.0;
    for (const auto& c : curves) {
        if (!c.body || c.body->dim() != 2) throw std::domain_error("polar plot needs planar bodies");
        Vec r(samples);
        for (int k = 0; k < samples; ++k) {
            const double th = 2.0 * std::numbers::pi * k / samples;
            r[static_cast<std::size_t>(k)] = radial(*c.body, Vec{std::cos(th), std::sin(th)});
            rmax = std::max(rmax, r[static_cast<std::size_t>(k)]);
        }
        radii.push_back(std::move(r));
    }
    const double scale = rmax > 0.0 ? 360.0 / rmax : 1.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" width=\"800\" height=\"800\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    os << "<line x1=\"20\" y1=\"400\" x2=\"780\" y2=\"400\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"400\" y1=\"20\" x2=\"400\" y2=\"780\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char* color = colors[c % 6];
        os << "<path d=\"";
        for (int k = 0; k < samples; ++k) {
            const double th = 2.0 * std::numbers::pi * k / samples;
            const double r = radii[c][static_cast<std::size_t>(k)] * scale;
            os << (k == 0 ? "M" : " L") << format_fixed(400.0 + r * std::cos(th), 3) << ' '
               << format_fixed(400.0 - r * std::sin(th), 3);
        }
        os << " Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        std::string name;
        for (char ch : curves[c].name) {
            if (ch == '<') name += "&lt;";
            else if (ch == '>') name += "&gt;";
            else if (ch == '&') name += "&amp;";
            else if (ch == '"') name += "&quot;";
            else name += ch;
        }
        os << "<text x=\"24\" y=\"" << 36 + 20 * static_cast<int>(c) << "\" font-family=\"monospace\" font-size=\"14\" fill=\""
           << color << "\">" << name << "</text>\n";
    }
    os << "<text x=\"24\" y=\"780\" font-family=\"monospace\" font-size=\"12\" fill=\"#555555\">scale: "
       << format_fixed(rmax, 6) << " = 360px</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace polarproj
