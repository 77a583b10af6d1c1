#pragma once

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lagmin/isotropic.hpp"
#include "lagmin/json_io.hpp"
#include "lagmin/mesh.hpp"
#include "lagmin/pencils.hpp"
#include "lagmin/spec_parse.hpp"
#include "lagmin/verify.hpp"

namespace lagmin::cli {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flat key=value settings; unknown keys are rejected
struct Settings {
    std::map<std::string, double> values{
        {"guard", kDefaultGuard},
        {"tol.biharmonic", 1e-9},
        {"tol.gaussmap", 1e-8},
        {"tol.ruling", 1e-8},
        {"tol.curvature", 1e-5},
        {"tol.stationarity", 0.1},
        {"tol.tangency", 1e-5},
        {"samples.biharmonic", 1000},
        {"samples.curvature", 20},
        {"bumps.stationarity", 5},
        {"grid.gaussmap", 100},
        {"grid.tangency", 400},
    };
    double operator[](const std::string& k) const { return values.at(k); }
    void set(const std::string& k, const std::string& v) {
        if (!values.count(k)) throw UsageError("unknown config key '" + k + "'");
        try {
            size_t used = 0;
            values[k] = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
        } catch (const std::exception&) {
            throw UsageError("bad value for '" + k + "': " + v);
        }
    }
    void load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw UsageError("cannot read config " + path);
        std::string line;
        while (std::getline(f, line)) {
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            const size_t eq = line.find('=');
            auto trim = [](std::string s) {
                const size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
};

inline std::pair<int, int> parse_grid(const std::string& s) {
    int a = 0, b = 0;
    char x = 0, extra = 0;
    if (std::sscanf(s.c_str(), "%dx%d%c", &a, &b, &extra) != 2 || a < 2 || b < 2) throw UsageError("bad --grid '" + s + "' (want NxM)");
    (void)x;
    return {a, b};
}

inline std::vector<double> parse_list(const std::string& s, size_t n, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad ") + what + " '" + s + "'");
        }
    }
    if (out.size() != n) throw UsageError(std::string("bad ") + what + " '" + s + "'");
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_atomic(path, text);
}

// name of a single unrotated building block, else empty
inline std::string block_name(const ParamSurface& S) {
    if (S.terms().size() != 1 || S.terms()[0].first != 1.0) return "";
    const std::string& n = S.terms()[0].second;
    if (n != S.provenance() || n.find('@') != std::string::npos) return "";
    return n;
}

inline std::vector<std::string> preimages_of(const std::string& block) {
    static const std::map<std::string, std::vector<std::string>> table{
        {"r1", {"R1"}}, {"r2", {"R2"}}, {"r3", {"R3"}}, {"r4", {"R4"}}, {"r5", {"R5"}}, {"r6", {"R6"}}, {"r7", {"R7", "R7e"}},
        {"r8", {"R8"}}, {"r9", {"R9", "R9b"}}, {"r10", {"R10"}}, {"r11", {"R11"}}, {"r1~", {"R1~"}}, {"r3~", {"R3~"}}};
    auto it = table.find(block);
    return it == table.end() ? std::vector<std::string>{} : it->second;
}

inline const std::vector<double>& tangency_phis() {
    static const std::vector<double> p{-0.6, -0.3, 0.1, 0.35, 0.7};
    return p;
}

// spheres of the named preimage cones that touch the block, with predicted contacts
inline std::pair<std::vector<OrientedSphere>, std::vector<Vec2>> touching_set(const ScalarField& F, const CycloFamily& fam, int per_cone = 3) {
    std::pair<std::vector<OrientedSphere>, std::vector<Vec2>> out;
    for (double phi : tangency_phis()) {
        const CycloLine L = fam.at(phi);
        for (const auto& [p, lam] : touching_spheres(F, L, per_cone)) {
            out.first.push_back(L.sphere(lam));
            out.second.push_back(p);
        }
    }
    return out;
}

inline CheckReport skipped(const std::string& check, const std::string& why, double tol) {
    CheckReport c = ResidualStats{}.report(check, tol);
    c.pass = true;
    c.meta = {{"skipped", why}};
    return c;
}

inline CheckReport run_check(const std::string& check, const ParamSurface& S, unsigned seed, const Settings& cfg) {
    const double tol = cfg["tol." + check];
    const auto& F = S.field();
    if (check == "biharmonic") {
        if (!F) return skipped(check, "no isotropic field", tol);
        return biharmonic_report(*F, seed, static_cast<int>(cfg["samples.biharmonic"]), 5.0, tol);
    }
    if (check == "gaussmap") {
        if (!S.gauss()) return skipped(check, "not in Gauss coordinates", tol);
        const int n = static_cast<int>(cfg["grid.gaussmap"]);
        return gaussmap_identity_residual(S, Grid{n, n, -2, 2, -2, 2}, tol);
    }
    if (check == "ruling") {
        if (!S.immersed()) return skipped(check, "NonImmersed", tol);
        if (!S.ruled()) return skipped(check, "no ruling family", tol);
        return ruling_residual(S, rulings_of_convolution(*S.ruled(), true), {}, tol);
    }
    if (check == "curvature") {
        if (!S.immersed()) return skipped(check, "NonImmersed", tol);
        return curvature_report(S, seed, static_cast<int>(cfg["samples.curvature"]), 2.0, tol);
    }
    if (check == "stationarity") {
        if (!S.immersed()) return skipped(check, "NonImmersed", tol);
        if (!F) return skipped(check, "no isotropic field", tol);
        return stationarity_report(*F, seed, static_cast<int>(cfg["bumps.stationarity"]), tol);
    }
    if (check == "tangency") {
        const auto names = preimages_of(block_name(S));
        if (names.empty() || !F) return skipped(check, "no known cone family", tol);
        std::vector<OrientedSphere> spheres;
        TangencyOptions opt;
        const int n = static_cast<int>(cfg["grid.tangency"]);
        opt.mesh = Grid{n, n, -2, 2, -2, 2};
        for (const auto& name : names) {
            auto [sp, hints] = touching_set(*F, cyclographic_preimage(name));
            spheres.insert(spheres.end(), sp.begin(), sp.end());
            opt.hints.insert(opt.hints.end(), hints.begin(), hints.end());
        }
        CheckReport c = tangency_residual(S, spheres, opt, tol);
        c.meta["families"] = names;
        double env = 0.0;
        for (const auto& name : names)
            for (double phi : tangency_phis()) env = std::max(env, cone_envelope_residual(*F, cyclographic_preimage(name).at(phi)));
        c.meta["envelope_residual"] = env;
        return c;
    }
    throw UsageError("unknown check '" + check + "'");
}

// ---- gallery ----

struct NamedMesh {
    std::string name;
    Mesh mesh;
};

inline std::string to_obj_multi(const std::vector<NamedMesh>& parts, const std::string& comment) {
    std::string out = "# " + comment + "\n";
    int offset = 0;
    for (const auto& part : parts) {
        out += "o " + part.name + "\n";
        std::string body = to_obj(part.mesh);
        // shift indices of this part
        std::istringstream in(body);
        std::string line;
        int nverts = 0;
        while (std::getline(in, line)) {
            if (line.rfind("v ", 0) == 0) {
                ++nverts;
                out += line + "\n";
            } else if (line.rfind("f ", 0) == 0 || line.rfind("l ", 0) == 0) {
                std::istringstream ls(line.substr(2));
                out += line.substr(0, 1);
                int k;
                while (ls >> k) out += " " + std::to_string(k + offset);
                out += "\n";
            }
        }
        offset += nverts;
    }
    return out;
}

inline Mesh translated(Mesh m, const Vec3& t) {
    for (auto& v : m.vertices) v += t;
    for (auto& l : m.polylines)
        for (auto& p : l) p += t;
    return m;
}

inline Mesh ruled_mesh(double A, double B, double C, double D, double p0, double p1, double l0, double l1, int nu, int nv, int rulings) {
    const RuledPatch P = ruled_surface(A, B, C, D);
    Mesh m = mesh_grid([&](double phi, double lam) { return P.point(phi, lam); }, nu, nv, {p0, p1, l0, l1});
    for (int k = 0; k < rulings; ++k) {
        const double phi = rulings > 1 ? p0 + (p1 - p0) * k / (rulings - 1) : p0;
        m.polylines.push_back({P.point(phi, l0), P.point(phi, l1)});
    }
    return m;
}

// cycloid r2 as a polyline over the Gauss-plane angle
inline Mesh cycloid_polyline(const ParamSurface& r2, int n = 200) {
    Mesh m;
    std::vector<Vec3> line;
    for (int k = 0; k < n; ++k) {
        const double t = -M_PI + 2 * M_PI * (k + 0.5) / n;
        line.push_back(r2.point(std::cos(t), std::sin(t)));
    }
    m.polylines.push_back(line);
    return m;
}

inline std::vector<std::pair<std::string, std::string>> gallery(int n) {
    std::vector<std::pair<std::string, std::string>> files;
    const MeshRange box{-2, 2, -2, 2};
    auto block_mesh = [&](const std::string& name, double dx) {
        return NamedMesh{name, translated(mesh_surface(building_block(name), n, n, box), Vec3(dx, 0, 0))};
    };
    {
        const ParamSurface S = parse_surface("field:hyperbolic(a1=1, a2=0.5, a3=-1, b1=0.3, b2=0.2, c1=0.1, c2=0.2)");
        files.push_back({"hyperbolic_general.obj",
                         to_obj_multi({{"hyperbolic_general", mesh_surface(S, n, n, {0.3, 2.0, -1.5, 1.5})}},
                                      "hyperbolic family: a1=1 a2=0.5 a3=-1 b1=0.3 b2=0.2 c1=0.1 c2=0.2, Gauss range [0.3,2]x[-1.5,1.5]")});
    }
    {
        const ParamSurface r2 = building_block("r2");
        files.push_back({"elliptic_blocks.obj",
                         to_obj_multi({block_mesh("r1", 0.0), {"r2", translated(cycloid_polyline(r2), Vec3(12, 0, 0))}, block_mesh("r3", 24.0)},
                                      "helicoid r1, cycloid r2 (polyline), Pluecker conoid r3; Gauss range [-2,2]^2, parts offset along x")});
    }
    files.push_back({"ruled_convolution.obj",
                     to_obj_multi({{"ruled", ruled_mesh(0.3, 0.5, 0.7, 0.2, -2.5, 2.5, -2, 2, n, n / 2, 11)}},
                                  "ruled patch A=0.3 B=0.5 C=0.7 D=0.2, phi in [-2.5,2.5], lambda in [-2,2], 11 rulings")});
    files.push_back({"hyperbolic_blocks.obj", to_obj_multi({block_mesh("r4", 0.0), block_mesh("r5", 12.0), block_mesh("r6", 24.0)},
                                                           "catenoid r4 and blocks r5, r6; Gauss range [-2,2]^2, parts offset along x")});
    files.push_back({"parabolic_blocks.obj",
                     to_obj_multi({block_mesh("r7", 0.0), block_mesh("r8", 12.0), block_mesh("r9", 24.0), block_mesh("r10", 36.0), block_mesh("r11", 48.0)},
                                  "parabolic blocks r7..r11; Gauss range [-2,2]^2, parts offset along x")});
    {
        const ParamSurface S = parse_surface("field:parabolic(a1=0.2, a2=-0.3, b1=0.5, b2=0.1, b3=-0.2, c1=0.4, c2=0.3)");
        files.push_back({"parabolic_general.obj",
                         to_obj_multi({{"parabolic_general", mesh_surface(S, n, n, box)}},
                                      "parabolic family: a1=0.2 a2=-0.3 b1=0.5 b2=0.1 b3=-0.2 c1=0.4 c2=0.3, Gauss range [-2,2]^2")});
    }
    return files;
}

inline Json base_point_json(const BasePoint& b) {
    if (b.ideal) return "ideal";
    return Json::array({b.p.x(), b.p.y()});
}

inline std::vector<Cycle> read_cycles(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    std::vector<Json> records;
    const size_t first = text.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && text[first] == '[') {
            for (const auto& r : Json::parse(text)) records.push_back(r);
        } else {
            std::istringstream in(text);
            std::string line;
            while (std::getline(in, line))
                if (line.find_first_not_of(" \t\r") != std::string::npos) records.push_back(Json::parse(line));
        }
    } catch (const Json::exception& e) {
        throw UsageError(std::string("bad circle file: ") + e.what());
    }
    std::vector<Cycle> out;
    for (const auto& r : records) {
        auto get = [&](const char* k) { return r.contains(k) ? r.at(k).get<double>() : 0.0; };
        out.push_back({get("a"), get("b"), get("c"), get("d")});
    }
    return out;
}

inline const char* kGrammar =
    "usage: lagmin [--config FILE] <command>\n"
    "  generate --surface SPEC [--grid NxM] [--range u0,u1,v0,v1] [--branch K] -o OUT.obj\n"
    "  ruled --A a --B b --C c --D d [--phi-range p0,p1] [--lambda-range l0,l1] [--grid NxM] [--rulings N] -o OUT.obj\n"
    "  verify --surface SPEC [--checks biharmonic,gaussmap,ruling,curvature,stationarity,tangency] [--seed N] [--branch K] [--guard EPS] --report OUT.json\n"
    "  classify-pencil --input CIRCLES.json --report OUT.json\n"
    "  isotropic --surface SPEC [--grid NxM] [--range u0,u1,v0,v1] [--branch K] -o OUT.obj\n"
    "  gallery -o DIR [--grid N]\n"
    "  correspondences --report OUT.json\n";

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"lagmin: L-minimal surfaces, isotropic fields and circle pencils"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key=value settings file");

    auto* gen = app.add_subcommand("generate", "mesh a surface in Gauss coordinates");
    std::string g_surface, g_grid = "100x100", g_range = "-2,2,-2,2", g_out;
    int branch = 0;
    gen->add_option("--surface", g_surface)->required();
    gen->add_option("--grid", g_grid);
    gen->add_option("--range", g_range);
    gen->add_option("--branch", branch);
    gen->add_option("-o,--output", g_out)->required();

    auto* ruled = app.add_subcommand("ruled", "mesh the ruled patch with its rulings");
    double A = 0, B = 0, C = 0, D = 0;
    std::string phi_range = "-3,3", lambda_range = "-2,2", r_grid = "120x60", r_out;
    int rulings = 13;
    ruled->add_option("--A", A)->required();
    ruled->add_option("--B", B)->required();
    ruled->add_option("--C", C)->required();
    ruled->add_option("--D", D)->required();
    ruled->add_option("--phi-range", phi_range);
    ruled->add_option("--lambda-range", lambda_range);
    ruled->add_option("--grid", r_grid);
    ruled->add_option("--rulings", rulings);
    ruled->add_option("-o,--output", r_out)->required();

    auto* ver = app.add_subcommand("verify", "run numerical checks and write a JSON report");
    std::string v_surface, v_checks = "biharmonic,gaussmap", v_report;
    unsigned seed = 0;
    double guard = -1;
    ver->add_option("--surface", v_surface)->required();
    ver->add_option("--checks", v_checks);
    ver->add_option("--seed", seed);
    ver->add_option("--branch", branch);
    ver->add_option("--guard", guard);
    ver->add_option("--report", v_report)->required();

    auto* cls = app.add_subcommand("classify-pencil", "classify a family of circles");
    std::string c_in, c_report;
    cls->add_option("--input", c_in)->required();
    cls->add_option("--report", c_report)->required();

    auto* iso = app.add_subcommand("isotropic", "mesh the isotropic graph (x, y, F)");
    std::string i_surface, i_grid = "100x100", i_range = "-2,2,-2,2", i_out;
    iso->add_option("--surface", i_surface)->required();
    iso->add_option("--grid", i_grid);
    iso->add_option("--range", i_range);
    iso->add_option("--branch", branch);
    iso->add_option("-o,--output", i_out)->required();

    auto* gal = app.add_subcommand("gallery", "write the six gallery meshes");
    std::string gal_dir;
    int gal_n = 81;
    gal->add_option("-o,--output", gal_dir)->required();
    gal->add_option("--grid", gal_n);

    auto* cor = app.add_subcommand("correspondences", "plane-map vs i-M-map correspondence report");
    std::string cor_report;
    cor->add_option("--report", cor_report)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << kGrammar;
        return kExitUsage;
    }

    try {
        if (!config_path.empty()) cfg.load(config_path);
        if (guard >= 0) cfg.values["guard"] = guard;
        const double g_eps = cfg["guard"];

        if (gen->parsed()) {
            const auto [nu, nv] = parse_grid(g_grid);
            const auto r = parse_list(g_range, 4, "--range");
            const ParamSurface S = parse_surface(g_surface, branch).with_guard(g_eps);
            const Mesh m = mesh_surface(S, nu, nv, {r[0], r[1], r[2], r[3]});
            write_text(g_out, to_obj(m, S.provenance()));
            return kExitOk;
        }
        if (ruled->parsed()) {
            const auto [nu, nv] = parse_grid(r_grid);
            const auto p = parse_list(phi_range, 2, "--phi-range");
            const auto l = parse_list(lambda_range, 2, "--lambda-range");
            const Mesh m = ruled_mesh(A, B, C, D, p[0], p[1], l[0], l[1], nu, nv, rulings);
            write_text(r_out, to_obj(m, "ruled patch"));
            return kExitOk;
        }
        if (ver->parsed()) {
            const ParamSurface S = parse_surface(v_surface, branch).with_guard(g_eps);
            std::vector<std::string> checks;
            std::stringstream ss(v_checks);
            std::string c;
            static const std::set<std::string> known{"biharmonic", "gaussmap", "ruling", "curvature", "stationarity", "tangency"};
            while (std::getline(ss, c, ','))
                if (!known.count(c)) throw UsageError("unknown check '" + c + "'");
                else checks.push_back(c);
            Json report = Json::array();
            bool all = true;
            for (const auto& name : checks) {
                CheckReport r;
                try {
                    r = run_check(name, S, seed, cfg);
                } catch (const Error& e) {
                    r = ResidualStats{}.report(name, cfg["tol." + name]);
                    r.pass = false;
                    r.max_residual = r.rms_residual = std::numeric_limits<double>::quiet_NaN();
                    r.meta = {{"error", e.what()}};
                }
                r.meta["seed"] = seed;
                all = all && r.pass;
                report.push_back(r.to_json());
            }
            write_text(v_report, to_json_text(report) + "\n");
            return all ? kExitOk : kExitFail;
        }
        if (cls->parsed()) {
            const PencilClass p = classify_family(read_cycles(c_in));
            Json j;
            j["tag"] = p.tag;
            j["base_points"] = Json::array();
            for (const auto& b : p.base_points) j["base_points"].push_back(base_point_json(b));
            j["rank"] = p.rank;
            j["singular_values"] = p.singular_values;
            write_text(c_report, to_json_text(j) + "\n");
            return kExitOk;
        }
        if (iso->parsed()) {
            const auto [nu, nv] = parse_grid(i_grid);
            const auto r = parse_list(i_range, 4, "--range");
            const ParamSurface S = parse_surface(i_surface, branch);
            if (!S.field()) throw UsageError("surface '" + i_surface + "' has no isotropic field");
            const ScalarField F = S.field()->with_guard(std::max(g_eps, S.field()->guard()));
            write_text(i_out, to_obj(mesh_graph(F, nu, nv, {r[0], r[1], r[2], r[3]}), "isotropic graph of " + S.provenance()));
            return kExitOk;
        }
        if (gal->parsed()) {
            std::filesystem::create_directories(gal_dir);
            for (const auto& [name, text] : gallery(gal_n)) write_text((std::filesystem::path(gal_dir) / name).string(), text);
            return kExitOk;
        }
        if (cor->parsed()) {
            Json rows = Json::array();
            bool all = true;
            for (const auto& r : correspondence_report()) {
                rows.push_back({{"imap", r.imap}, {"ltransform", r.ltransform}, {"derived", r.derived}, {"listed_holds", r.holds},
                                {"max_deviation", r.max_deviation}, {"derived_residual", r.derived_residual}});
                all = all && r.derived_residual < 1e-9;
            }
            write_text(cor_report, to_json_text(rows) + "\n");
            return all ? kExitOk : kExitFail;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n" << kGrammar;
        return kExitUsage;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UnknownName || e.kind() == ErrorKind::TooFew) {
            err << "usage error: " << e.what() << "\n" << kGrammar;
            return kExitUsage;
        }
        err << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}

} // namespace lagmin::cli
