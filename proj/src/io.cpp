#include "subrlab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <tuple>

#include "subrlab/errors.hpp"

namespace subrlab {

using nlohmann::json;

namespace {

void fail(const std::string& where, const std::string& what) { throw ValidationError(where + ": " + what); }

void check_keys(const json& o, const std::set<std::string>& allowed, const std::string& where) {
    if (!o.is_object()) fail(where, "expected an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
    }
}

void require(const json& o, const std::string& key, const std::string& where) {
    if (!o.contains(key)) fail(where, "missing key '" + key + "'");
}

double num(const json& o, const std::string& key, const std::string& where, std::optional<double> def = {}) {
    if (!o.contains(key)) {
        if (def) return *def;
        fail(where, "missing key '" + key + "'");
    }
    const json& v = o.at(key);
    if (!v.is_number()) fail(where, "'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, "'" + key + "' must be finite");
    return x;
}

long integer(const json& o, const std::string& key, const std::string& where, std::optional<long> def = {}) {
    if (!o.contains(key)) {
        if (def) return *def;
        fail(where, "missing key '" + key + "'");
    }
    const json& v = o.at(key);
    if (!v.is_number_integer()) fail(where, "'" + key + "' must be an integer");
    return v.get<long>();
}

std::vector<double> numbers(const json& o, const std::string& key, const std::string& where, std::size_t n) {
    require(o, key, where);
    const json& v = o.at(key);
    if (!v.is_array() || (n && v.size() != n)) {
        fail(where, "'" + key + "' must be an array" + (n ? " of " + std::to_string(n) + " numbers" : ""));
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(where, "'" + key + "' must contain numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Vec4 point_from(const ModelSpace& space, const json& o, const std::string& key, const std::string& where) {
    const auto v = numbers(o, key, where, space.kappa() == 1 ? 4 : 3);
    Vec4 p(v[0], v[1], v[2], space.kappa() == 1 ? v[3] : 0.0);
    if (!space.in_domain(p, 1e-9)) fail(where, "'" + key + "' is outside the model space chart");
    return space.retract(p);
}

void validate_s_block(const json& s, const std::string& where, bool allow_period) {
    if (s.contains("period")) {
        if (!allow_period) fail(where, "periodic s grid not allowed here");
        check_keys(s, {"period", "count"}, where);
        if (!(num(s, "period", where) > 0.0) || integer(s, "count", where) < 9) {
            fail(where, "period must be positive and count >= 9");
        }
        return;
    }
    check_keys(s, {"min", "max", "step"}, where);
    const double lo = num(s, "min", where, 0.0), hi = num(s, "max", where), st = num(s, "step", where, 1e-3);
    if (!(lo <= 0.0 && hi >= 0.0 && st > 0.0)) fail(where, "need min <= 0 <= max and step > 0");
}

void validate_geodesic_block(const json& g, const std::string& where, bool allow_period) {
    check_keys(g, {"start", "direction_angle", "lambda", "s", "substeps"}, where);
    require(g, "start", where);
    num(g, "direction_angle", where, 0.0);
    num(g, "lambda", where);
    require(g, "s", where);
    validate_s_block(g.at("s"), where + ".s", allow_period);
    if (integer(g, "substeps", where, 1) < 1) fail(where, "substeps must be >= 1");
}

void validate_grid(const json& g, const std::string& where) {
    check_keys(g, {"start", "stop", "count"}, where);
    if (!(num(g, "stop", where) > num(g, "start", where)) || integer(g, "count", where) < 9) {
        fail(where, "need stop > start and count >= 9");
    }
}

void validate_certificate(const json& p, const std::string& where) {
    if (!p.contains("certificate")) return;
    const json& c = p.at("certificate");
    check_keys(c, {"max_n", "threshold", "s_scale"}, where + ".certificate");
    if (integer(c, "max_n", where, 64) < 1 || !(num(c, "threshold", where, 1e-6) >= 0.0) ||
        !(num(c, "s_scale", where, 1.0) > 0.0)) {
        fail(where + ".certificate", "need max_n >= 1, threshold >= 0, s_scale > 0");
    }
}

void validate_fd(const json& p, const std::string& where) {
    if (!p.contains("fd_check")) return;
    const json& f = p.at("fd_check");
    check_keys(f, {"h", "eps", "s"}, where + ".fd_check");
    if (!(num(f, "h", where, 1e-3) > 0.0)) fail(where + ".fd_check", "h must be positive");
    for (const char* k : {"eps", "s"}) {
        if (f.contains(k)) {
            const auto r = numbers(f, k, where + ".fd_check", 2);
            if (!(r[1] > r[0])) fail(where + ".fd_check", std::string(k) + " range must be increasing");
        }
    }
}

void validate_surface(Generator g, int kappa, const json& p, const std::string& where) {
    if (g == Generator::vertical_cylinder) {
        check_keys(p, {"gamma", "fiber", "certificate", "fd_check"}, where);
        require(p, "gamma", where);
        require(p, "fiber", where);
        validate_geodesic_block(p.at("gamma"), where + ".gamma", true);
        point_from(ModelSpace(kappa), p.at("gamma"), "start", where + ".gamma");
        validate_grid(p.at("fiber"), where + ".fiber");
    } else {
        check_keys(p, {"alpha", "H", "eps", "s", "certificate", "fd_check"}, where);
        require(p, "alpha", where);
        const json& a = p.at("alpha");
        check_keys(a, {"kind", "base", "angle0", "twist"}, where + ".alpha");
        require(a, "kind", where + ".alpha");
        const std::string kind = a.at("kind").is_string() ? a.at("kind").get<std::string>() : "";
        if (kind != "t_axis" && kind != "hopf_fiber") fail(where + ".alpha", "kind must be t_axis or hopf_fiber");
        if ((kind == "hopf_fiber") != (kappa == 1)) fail(where + ".alpha", "hopf_fiber needs kappa 1, t_axis kappa <= 0");
        require(a, "base", where + ".alpha");
        point_from(ModelSpace(kappa), a, "base", where + ".alpha");
        num(a, "angle0", where + ".alpha", 0.0);
        num(a, "twist", where + ".alpha", 0.0);
        num(p, "H", where);
        require(p, "eps", where);
        validate_grid(p.at("eps"), where + ".eps");
        require(p, "s", where);
        validate_s_block(p.at("s"), where + ".s", false);
    }
    validate_certificate(p, where);
    validate_fd(p, where);
}

Generator generator_from(const std::string& s) {
    if (s == "geodesic") return Generator::geodesic;
    if (s == "jacobi") return Generator::jacobi;
    if (s == "vertical_cylinder") return Generator::vertical_cylinder;
    if (s == "ruled_surface") return Generator::ruled_surface;
    if (s == "stability_sweep") return Generator::stability_sweep;
    throw ValidationError("scenario: unknown generator '" + s + "'");
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

const char* to_string(Generator g) {
    switch (g) {
        case Generator::geodesic: return "geodesic";
        case Generator::jacobi: return "jacobi";
        case Generator::vertical_cylinder: return "vertical_cylinder";
        case Generator::ruled_surface: return "ruled_surface";
        default: return "stability_sweep";
    }
}

Scenario parse_scenario(const json& doc) {
    check_keys(doc, {"schema", "name", "kappa", "generator", "params", "seed"}, "scenario");
    for (const char* k : {"schema", "name", "kappa", "generator", "params"}) require(doc, k, "scenario");
    if (!doc.at("schema").is_string() || doc.at("schema").get<std::string>() != kScenarioSchema) {
        fail("scenario", std::string("schema must be \"") + kScenarioSchema + "\"");
    }
    Scenario sc;
    if (!doc.at("name").is_string()) fail("scenario", "name must be a string");
    sc.name = doc.at("name").get<std::string>();
    sc.kappa = static_cast<int>(integer(doc, "kappa", "scenario"));
    if (sc.kappa < -1 || sc.kappa > 1) fail("scenario", "kappa must be -1, 0 or 1");
    if (!doc.at("generator").is_string()) fail("scenario", "generator must be a string");
    sc.generator = generator_from(doc.at("generator").get<std::string>());
    sc.params = doc.at("params");
    sc.seed = integer(doc, "seed", "scenario", 0);

    const ModelSpace space(sc.kappa);
    const json& p = sc.params;
    switch (sc.generator) {
        case Generator::geodesic:
            validate_geodesic_block(p, "params", false);
            point_from(space, p, "start", "params");
            break;
        case Generator::jacobi: {
            json g = p;
            check_keys(p, {"start", "direction_angle", "lambda", "s", "substeps", "V", "m"}, "params");
            numbers(p, "V", "params", 3);
            num(p, "m", "params", 0.0);
            g.erase("V");
            g.erase("m");
            validate_geodesic_block(g, "params", false);
            point_from(space, p, "start", "params");
            break;
        }
        case Generator::stability_sweep: {
            check_keys(p, {"surface", "H_values"}, "params");
            require(p, "surface", "params");
            const json& s = p.at("surface");
            check_keys(s, {"generator", "params"}, "params.surface");
            require(s, "generator", "params.surface");
            require(s, "params", "params.surface");
            if (!s.at("generator").is_string()) fail("params.surface", "generator must be a string");
            const Generator g = generator_from(s.at("generator").get<std::string>());
            if (g != Generator::vertical_cylinder && g != Generator::ruled_surface) {
                fail("params.surface", "sweeps need a vertical_cylinder or ruled_surface generator");
            }
            validate_surface(g, sc.kappa, s.at("params"), "params.surface.params");
            if (numbers(p, "H_values", "params", 0).empty()) fail("params", "H_values must not be empty");
            break;
        }
        default: validate_surface(sc.generator, sc.kappa, p, "params");
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

AlphaCurve fiber_alpha(const ModelSpace& space, const Vec4& base, double angle0, double twist) {
    AlphaCurve a;
    a.point = [space, base](double e) { return space.reeb_flow(base, e); };
    a.velocity = [space, base](double e) {
        return space.reeb_flow_push(space.from_frame(base, Vec3(0, 0, 1)), e);
    };
    a.angle = [angle0, twist](double e) { return angle0 + twist * e; };
    a.angle_rate = [twist](double) { return twist; };
    return a;
}

GeodesicSpec geodesic_spec_from(const ModelSpace& space, const json& p) {
    GeodesicSpec spec;
    spec.start = point_from(space, p, "start", "params");
    const double th = num(p, "direction_angle", "params", 0.0);
    spec.direction = Vec3(std::cos(th), std::sin(th), 0.0);
    spec.lambda = num(p, "lambda", "params");
    spec.substeps = static_cast<int>(integer(p, "substeps", "params", 1));
    const json& s = p.at("s");
    if (s.contains("period")) {
        const long n = integer(s, "count", "params.s");
        spec.step = num(s, "period", "params.s") / static_cast<double>(n);
        spec.s_min = 0.0;
        spec.s_max = spec.step * (static_cast<double>(n) - 0.5);
    } else {
        spec.s_min = num(s, "min", "params.s", 0.0);
        spec.s_max = num(s, "max", "params.s");
        spec.step = num(s, "step", "params.s", 1e-3);
    }
    return spec;
}

SurfacePatch build_patch(const Scenario& sc, const double* H) {
    const ModelSpace space(sc.kappa);
    Generator g = sc.generator;
    const json* p = &sc.params;
    if (g == Generator::stability_sweep) {
        g = generator_from(sc.params.at("surface").at("generator").get<std::string>());
        p = &sc.params.at("surface").at("params");
    }
    auto grid = [](const json& o) {
        return UniformGrid{o.at("start").get<double>(), o.at("stop").get<double>(), o.at("count").get<long>()};
    };
    if (g == Generator::vertical_cylinder) {
        GeodesicSpec spec = geodesic_spec_from(space, p->at("gamma"));
        if (H) spec.lambda = *H;
        const bool closed = p->at("gamma").at("s").contains("period");
        return build_vertical_cylinder(space, integrate_geodesic(space, spec), grid(p->at("fiber")), closed);
    }
    if (g == Generator::ruled_surface) {
        const json& a = p->at("alpha");
        const AlphaCurve alpha = fiber_alpha(space, point_from(space, a, "base", "params.alpha"),
                                             num(a, "angle0", "", 0.0), num(a, "twist", "", 0.0));
        const json& s = p->at("s");
        return build_ruled_surface(space, alpha, H ? *H : p->at("H").get<double>(), grid(p->at("eps")),
                                   num(s, "min", "", 0.0), num(s, "max", ""), num(s, "step", "", 1e-3));
    }
    throw ValidationError(std::string("generator ") + to_string(sc.generator) + " does not build a surface");
}

CertificateOptions certificate_options(const Scenario& sc) {
    const json& p = sc.generator == Generator::stability_sweep ? sc.params.at("surface").at("params") : sc.params;
    CertificateOptions o;
    if (p.contains("certificate")) {
        const json& c = p.at("certificate");
        o.max_n = integer(c, "max_n", "", 64);
        o.threshold = num(c, "threshold", "", 1e-6);
        o.s_scale = num(c, "s_scale", "", 1.0);
    }
    return o;
}

std::vector<double> variation_bump(const SurfacePatch& patch, const json& spec) {
    const long ne = patch.ne(), ns = patch.ns();
    // default: the middle half of the interior in each direction
    double e0 = patch.eps[2] + 0.25 * (patch.eps[ne - 3] - patch.eps[2]);
    double e1 = patch.eps[ne - 3] - 0.25 * (patch.eps[ne - 3] - patch.eps[2]);
    double s0 = patch.s[2] + 0.25 * (patch.s[ns - 3] - patch.s[2]);
    double s1 = patch.s[ns - 3] - 0.25 * (patch.s[ns - 3] - patch.s[2]);
    if (spec.is_object() && spec.contains("eps")) {
        e0 = spec.at("eps")[0].get<double>();
        e1 = spec.at("eps")[1].get<double>();
        if (patch.eps_reversed) std::tie(e0, e1) = std::pair(-e1, -e0);
    }
    if (spec.is_object() && spec.contains("s")) {
        s0 = spec.at("s")[0].get<double>();
        s1 = spec.at("s")[1].get<double>();
    }
    std::vector<double> u(static_cast<std::size_t>(patch.size()), 0.0);
    for (long i = 0; i < ne; ++i) {
        for (long j = 0; j < ns; ++j) {
            const double x = (patch.eps[i] - 0.5 * (e0 + e1)) / (0.5 * (e1 - e0));
            const double y = patch.closed_s ? 0.0 : (patch.s[j] - 0.5 * (s0 + s1)) / (0.5 * (s1 - s0));
            u[patch.index(i, j)] = bump(x) * bump(y);
        }
    }
    return u;
}

json report_to_json(const StabilityReport& r) {
    json j;
    j["kappa"] = r.kappa;
    j["H"] = r.H;
    j["HsqPlusK"] = r.HsqPlusK;
    j["area"] = r.area;
    j["Q_u1"] = r.Q_u1 ? json(*r.Q_u1) : json(nullptr);
    j["min_L_Nh"] = r.min_L_Nh;
    j["max_L_Nh"] = r.max_L_Nh;
    j["discriminant_residual"] = r.discriminant_field.empty() ? json(nullptr) : json(r.discriminant_residual);
    j["outcome"] = to_string(r.outcome);
    j["max_n_tried"] = r.max_n_tried;
    json trials = json::array();
    for (const auto& [n, q] : r.trials) trials.push_back({{"n", n}, {"Q_over_norm2", q}});
    j["trials"] = trials;
    if (r.certificate) {
        j["certificate"] = {{"n", r.certificate->n},
                            {"Q_value", r.certificate->Q_value},
                            {"norm2", r.certificate->norm2},
                            {"mean_residual", r.certificate->mean_residual}};
    } else {
        j["certificate"] = nullptr;
    }
    return j;
}

void write_trace_csv(std::ostream& os, const GeodesicTrace& trace) {
    os << std::setprecision(17);
    os << (trace.kappa == 1 ? "s,x1,y1,x2,y2,a,b,c\n" : "s,x,y,t,a,b,c\n");
    for (const auto& smp : trace.samples) {
        os << smp.s;
        for (int k = 0; k < (trace.kappa == 1 ? 4 : 3); ++k) os << ',' << smp.point[k];
        for (int k = 0; k < 3; ++k) os << ',' << smp.velocity[k];
        os << '\n';
    }
}

json trace_to_json(const GeodesicTrace& trace) {
    json j;
    j["kappa"] = trace.kappa;
    j["lambda"] = trace.lambda;
    j["step"] = trace.step;
    j["drift"] = {{"speed", trace.drift.speed}, {"vertical", trace.drift.vertical}};
    json s = json::array(), pts = json::array(), vel = json::array();
    const int dim = trace.kappa == 1 ? 4 : 3;
    for (const auto& smp : trace.samples) {
        s.push_back(smp.s);
        json p = json::array();
        for (int k = 0; k < dim; ++k) p.push_back(smp.point[k]);
        pts.push_back(p);
        vel.push_back({smp.velocity[0], smp.velocity[1], smp.velocity[2]});
    }
    j["s"] = s;
    j["points"] = pts;
    j["velocity"] = vel;
    return j;
}

void write_jacobi_csv(std::ostream& os, const JacobiTrace& jt, const VerticalClosedForm& cf) {
    os << std::setprecision(17);
    os << "s,V_a,V_b,V_c,Vp_a,Vp_b,Vp_c,conserved,f_closed_form\n";
    for (std::size_t i = 0; i < jt.states.size(); ++i) {
        const auto& st = jt.states[i];
        os << st.s;
        for (int k = 0; k < 3; ++k) os << ',' << st.V[k];
        for (int k = 0; k < 3; ++k) os << ',' << st.Vprime[k];
        os << ',' << jt.conserved[i] << ',' << cf(st.s) << '\n';
    }
}

void write_patch_csv(std::ostream& os, const SurfacePatch& patch, const SurfaceFields& fields) {
    os << std::setprecision(17);
    const bool sphere = patch.space.kappa() == 1;
    os << (sphere ? "eps,s,x1,y1,x2,y2" : "eps,s,x,y,t") << ",Nh,NT,H,BZZ,BZS,BSS,f_eps,singular\n";
    for (long i = 0; i < patch.ne(); ++i) {
        for (long j = 0; j < patch.ns(); ++j) {
            const long k = patch.index(i, j);
            const auto& d = fields.nodes[k];
            os << patch.eps[i] << ',' << patch.s[j];
            for (int c = 0; c < (sphere ? 4 : 3); ++c) os << ',' << patch.points[k][c];
            os << ',' << d.Nh_norm << ',' << d.NT << ',' << d.H << ',' << d.BZZ << ',' << d.BZS << ',' << d.BSS << ','
               << d.f_eps << ',' << (d.singular ? 1 : 0) << '\n';
        }
    }
}

}  // namespace subrlab
