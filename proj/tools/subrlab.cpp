#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "subrlab/errors.hpp"
#include "subrlab/io.hpp"
#include "subrlab/verify.hpp"

using namespace subrlab;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kChart = 3, kNoCertificate = 4, kSingular = 5 };

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

void write_json(const std::string& path, const json& j) {
    if (path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void print_trace_summary(const ModelSpace& m, const GeodesicTrace& tr) {
    const auto pc = projection_curvature_stats(m, tr);
    const auto c = classify_completeness(m, tr);
    std::printf("samples %zu  s in [%.6g, %.6g]\n", tr.samples.size(), tr.samples.front().s, tr.samples.back().s);
    std::printf("drift speed %.3e  vertical %.3e\n", tr.drift.speed, tr.drift.vertical);
    std::printf("projection curvature %.9f (min %.9f, max %.9f)\n", pc.mean, pc.min, pc.max);
    if (c.kind == Completeness::closed) {
        std::printf("completeness closed, period %.9f\n", c.period);
    } else {
        std::printf("completeness %s\n", to_string(c.kind));
    }
}

void write_trace(const std::string& path, const std::string& format, const GeodesicTrace& tr) {
    if (path.empty()) return;
    if (format == "json") {
        write_json(path, trace_to_json(tr));
        return;
    }
    auto out = open_out(path);
    write_trace_csv(out, tr);
}

struct GeodesicArgs {
    int kappa = 0;
    double lambda = 0.0;
    double s_max = 1.0;
    double step = 1e-3;
    int substeps = 1;
    std::vector<double> start;
    double direction = 0.0;
    std::string out;
    std::string format = "csv";
};

int cmd_geodesic(const GeodesicArgs& a) {
    const ModelSpace m(a.kappa);
    json p;
    std::vector<double> start = a.start;
    if (start.empty()) start = a.kappa == 1 ? std::vector<double>{1, 0, 0, 0} : std::vector<double>{0, 0, 0};
    p["start"] = start;
    p["direction_angle"] = a.direction;
    p["lambda"] = a.lambda;
    p["s"] = {{"min", 0.0}, {"max", a.s_max}, {"step", a.step}};
    p["substeps"] = a.substeps;
    json doc = {{"schema", kScenarioSchema}, {"name", "cli"}, {"kappa", a.kappa}, {"generator", "geodesic"}, {"params", p}};
    const Scenario sc = parse_scenario(doc);
    const auto tr = integrate_geodesic(m, geodesic_spec_from(m, sc.params));
    print_trace_summary(m, tr);
    write_trace(a.out, a.format, tr);
    return kOk;
}

int cmd_run(const std::string& path, const std::string& out, const std::string& format) {
    const Scenario sc = load_scenario(path);
    const ModelSpace m(sc.kappa);
    switch (sc.generator) {
        case Generator::geodesic: {
            const auto tr = integrate_geodesic(m, geodesic_spec_from(m, sc.params));
            print_trace_summary(m, tr);
            write_trace(out, format, tr);
            return kOk;
        }
        case Generator::jacobi: {
            json g = sc.params;
            g.erase("V");
            g.erase("m");
            const auto tr = integrate_geodesic(m, geodesic_spec_from(m, g));
            const auto o = tr.origin_index();
            const Vec3 w0 = tr.samples[static_cast<std::size_t>(o)].velocity;
            JacobiState st;
            const auto& v = sc.params.at("V");
            st.V = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
            st.Vprime = admissible_vprime(w0, st.V, sc.params.value("m", 0.0));
            const auto jt = integrate_jacobi(m, tr, st);
            const auto cf = vertical_closed_form(jt.mu, st.V[2], vertical_d1(w0, st), vertical_d2(tr.lambda, w0, st));
            double worst = 0.0;
            for (const auto& s : jt.states) worst = std::max(worst, std::abs(s.V[2] - cf(s.s)));
            std::printf("mu %.9f  branch %d\n", jt.mu, static_cast<int>(cf.branch));
            std::printf("closed form max deviation %.3e\n", worst);
            std::printf("conserved drift %.3e\n", jt.conserved_drift());
            if (!out.empty()) {
                auto os = open_out(out);
                write_jacobi_csv(os, jt, cf);
            }
            return kOk;
        }
        default: {
            const auto patch = build_patch(sc);
            const auto fields = compute_fields(patch);
            std::printf("grid %ld x %ld  singular nodes %ld\n", patch.ne(), patch.ns(), fields.singular_count);
            std::printf("area %.12g\n", sr_area(patch, fields));
            if (!out.empty()) {
                auto os = open_out(out);
                write_patch_csv(os, patch, fields);
            }
            return kOk;
        }
    }
}

json fd_json(const SurfacePatch& patch, const SurfaceFields& fields, const json& params) {
    const json spec = params.contains("fd_check") ? params.at("fd_check") : json::object();
    const auto u = make_test_function(patch, fields, variation_bump(patch, spec));
    const auto r = second_variation_fd_check(patch, fields, u, spec.value("h", 1e-3));
    return {{"fd_value", r.fd_value},
            {"Q_value", r.Q_value},
            {"relative_error", std::abs(r.fd_value - r.Q_value) / std::max(std::abs(r.Q_value), 1e-300)}};
}

json analyse(const Scenario& sc, const SurfacePatch& patch, long max_n, bool fd_check, bool& found) {
    const auto fields = compute_fields(patch);
    fields.require_regular();
    CertificateOptions opts = certificate_options(sc);
    if (max_n > 0) opts.max_n = max_n;
    const auto rep = instability_certificate(patch, fields, opts);
    found = rep.certificate.has_value();
    json j = report_to_json(rep);
    if (fd_check) {
        const json& p = sc.generator == Generator::stability_sweep ? sc.params.at("surface").at("params") : sc.params;
        j["fd_check"] = fd_json(patch, fields, p);
    }
    return j;
}

int cmd_stability(const std::string& path, const std::string& out, long max_n, bool fd_check) {
    const Scenario sc = load_scenario(path);
    if (sc.generator == Generator::geodesic || sc.generator == Generator::jacobi) {
        throw ValidationError(std::string("stability needs a surface scenario, got ") + to_string(sc.generator));
    }
    json doc = {{"schema", "subrlab.report/1"}, {"scenario", sc.name}};
    // keep stdout clean when the report goes there
    std::FILE* log = out == "-" ? stderr : stdout;
    bool any = false;
    if (sc.generator == Generator::stability_sweep) {
        json rows = json::array();
        for (const auto& h : sc.params.at("H_values")) {
            const double H = h.get<double>();
            bool found = false;
            rows.push_back(analyse(sc, build_patch(sc, &H), max_n, fd_check, found));
            any = any || found;
            std::fprintf(log, "H %.6g  outcome %s\n", H, rows.back().at("outcome").get<std::string>().c_str());
        }
        doc["reports"] = rows;
    } else {
        doc["report"] = analyse(sc, build_patch(sc), max_n, fd_check, any);
        std::fprintf(log, "outcome %s\n", doc["report"].at("outcome").get<std::string>().c_str());
    }
    write_json(out, doc);
    return any ? kOk : kNoCertificate;
}

int cmd_verify(const std::string& suite, unsigned long seed, double tol_scale, const std::string& fixture) {
    VerifyOptions o;
    o.seed = seed;
    o.tol_scale = tol_scale;
    o.helix_fixture = fixture;
    const auto results = run_verify(suite, o);
    long failed = 0;
    std::printf("%-10s %-44s %4s %12s %12s  %s\n", "suite", "check", "AC", "residual", "tolerance", "result");
    for (const auto& r : results) {
        std::printf("%-10s %-44s %4s %12.3e %12.3e  %s\n", r.suite.c_str(), r.name.c_str(),
                    r.criterion ? std::to_string(r.criterion).c_str() : "-", r.residual, r.tolerance,
                    r.pass ? "PASS" : "FAIL");
        failed += r.pass ? 0 : 1;
    }
    std::printf("%zu checks, %ld failed\n", results.size(), failed);
    return failed ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-Riemannian model space toolkit"};
    app.require_subcommand(1);

    GeodesicArgs ga;
    auto* geo = app.add_subcommand("geodesic", "integrate a CC-geodesic and report drift and curvature");
    geo->add_option("--kappa", ga.kappa, "model space curvature")->required()->check(CLI::IsMember({-1, 0, 1}));
    geo->add_option("--lambda", ga.lambda, "geodesic curvature")->required();
    geo->add_option("--s-max", ga.s_max, "arc length")->required()->check(CLI::PositiveNumber);
    geo->add_option("--step", ga.step, "sample spacing")->check(CLI::PositiveNumber);
    geo->add_option("--substeps", ga.substeps, "RK4 steps per sample")->check(CLI::PositiveNumber);
    geo->add_option("--start", ga.start, "start point, 3 coordinates (4 on the sphere)");
    geo->add_option("--direction", ga.direction, "initial direction angle in the horizontal frame");
    geo->add_option("--out", ga.out, "trace file, - for stdout");
    geo->add_option("--format", ga.format, "trace format")->check(CLI::IsMember({"csv", "json"}));

    std::string scenario, out, format = "csv";
    auto* run = app.add_subcommand("run", "build the object described by a scenario and export it");
    run->add_option("--scenario", scenario, "scenario JSON")->required();
    run->add_option("--out", out, "output file");
    run->add_option("--format", format, "trace format for geodesic scenarios")->check(CLI::IsMember({"csv", "json"}));

    long max_n = 0;
    bool fd_check = false;
    std::string report_out = "-";
    auto* stab = app.add_subcommand("stability", "instability certificate search for a surface scenario");
    stab->add_option("--scenario", scenario, "scenario JSON")->required();
    stab->add_option("--out", report_out, "report JSON, - for stdout");
    stab->add_option("--max-n", max_n, "largest certificate scale")->check(CLI::PositiveNumber);
    stab->add_flag("--fd-check", fd_check, "compare Q with finite differences of A + 2HV");

    std::string suite = "all", fixture;
    unsigned long seed = 42;
    double tol_scale = 1.0;
    auto* ver = app.add_subcommand("verify", "run the invariant suites");
    ver->add_option("--suite", suite, "suite name or all")
        ->check(CLI::IsMember({"frames", "geodesics", "jacobi", "surfaces", "stability", "all"}));
    ver->add_option("--seed", seed, "seed for random sample points");
    ver->add_option("--tol-scale", tol_scale, "multiplier on every scalable tolerance")->check(CLI::PositiveNumber);
    ver->add_option("--helix-fixture", fixture, "JSON with reference helix endpoints");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*geo) return cmd_geodesic(ga);
        if (*run) return cmd_run(scenario, out, format);
        if (*stab) return cmd_stability(scenario, report_out, max_n, fd_check);
        return cmd_verify(suite, seed, tol_scale, fixture);
    } catch (const ChartExit& e) {
        std::fprintf(stderr, "chart exit at s = %.9g: %s\n", e.s_exit, e.what());
        return kChart;
    } catch (const SingularPoint& e) {
        std::fprintf(stderr, "singular node %ld: %s\n", e.node, e.what());
        return kSingular;
    } catch (const SingularAfterDisplacement& e) {
        std::fprintf(stderr, "singular: %s\n", e.what());
        return kSingular;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalid;
    } catch (const ChartDomainViolation& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalid;
    } catch (const StepTooLarge& e) {
        std::fprintf(stderr, "step too large (drift %.3e): %s\n", e.drift, e.what());
        return kInvalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvalid;
    }
}
