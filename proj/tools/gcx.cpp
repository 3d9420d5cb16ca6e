// gcx: command-line front end for the diagram complex, strata and gluing tools.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gcx/io.hpp"

#ifndef GCX_VERSION
#define GCX_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace gcx;

namespace {

// Domain errors leave with status 1 and a JSON error object.
struct DomainError : std::runtime_error {
    std::string kind;
    std::vector<std::string> details;
    DomainError(std::string k, const std::string& msg, std::vector<std::string> d = {})
        : std::runtime_error(msg), kind(std::move(k)), details(std::move(d)) {}
};

struct Common {
    std::string format = "json";
    std::string cache_dir;
    std::string out;
    int jobs = 1;
    bool no_cache = false;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("io", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("io", path + ": " + e.what());
    }
}

class Cache {
public:
    explicit Cache(fs::path dir) : dir_(std::move(dir)) {}

    std::optional<json> get(const json& key) const {
        fs::path p = path(key);
        std::ifstream in(p);
        if (!in) return std::nullopt;
        try {
            json e = json::parse(in);
            if (e.at("version") != GCX_VERSION || e.at("key") != key) return std::nullopt;
            if (e.at("payload_hash").get<std::string>() != sha256_hex(e.at("payload").dump())) return std::nullopt;
            return e.at("payload");
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    void put(const json& key, const json& payload) const {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) return;
        json e = {{"key", key}, {"version", GCX_VERSION}, {"payload_hash", sha256_hex(payload.dump())},
                  {"payload", payload}};
        fs::path p = path(key), tmp = p;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) return;
            out << e.dump() << "\n";
        }
        fs::rename(tmp, p, ec);
    }

private:
    fs::path path(const json& key) const { return dir_ / (sha256_hex(key.dump()) + ".json"); }
    fs::path dir_;
};

struct Grade {
    int m = 1, n = 2, k = 0;
    std::string convention = "odd";
    std::string ring = "Z";
    std::string policy = "single";
    int max_vertices = 12;

    Convention conv() const { return convention_from_string(convention); }
    Ring rng() const { return ring_from_string(ring); }
    CombinedFace pol() const { return policy == "both" ? CombinedFace::both : CombinedFace::single; }
    BasisOptions basis_opt() const { return {max_vertices}; }
    json key(const std::string& command) const {
        return {{"command", command}, {"m", m},     {"n", n},           {"k", k},
                {"convention", convention}, {"ring", ring}, {"policy", policy}, {"max_vertices", max_vertices},
                {"version", GCX_VERSION}};
    }
};

void add_grade(CLI::App* c, Grade& g, bool with_ring = true) {
    c->add_option("-m,--strands", g.m, "number of strands")->required()->check(CLI::PositiveNumber);
    c->add_option("-n,--order", g.n, "order |E| - |V_free|")->required()->check(CLI::NonNegativeNumber);
    c->add_option("-k,--defect", g.k, "defect")->required()->check(CLI::NonNegativeNumber);
    c->add_option("--convention", g.convention, "odd or even")->check(CLI::IsMember({"odd", "even"}));
    if (with_ring) c->add_option("--ring", g.ring, "Z, Q or Z2")->check(CLI::IsMember({"Z", "Q", "Z2"}));
    c->add_option("--policy", g.policy, "combined faces: single or both")->check(CLI::IsMember({"single", "both"}));
    c->add_option("--max-vertices", g.max_vertices, "enumeration budget")->check(CLI::PositiveNumber);
}

std::string text_of(const CochainElement& x) {
    std::ostringstream os;
    if (x.empty()) return "0\n";
    for (const auto& [d, c] : x.terms()) os << (c < 0 ? "" : "+") << to_decimal(c) << " * " << to_text(d) << "\n";
    return os.str();
}

std::string text_of_faces(const Diagram& d, const std::vector<FaceDescriptor>& faces) {
    std::ostringstream os;
    for (const auto& f : faces) {
        os << to_string(f.kind) << " {";
        for (std::size_t i = 0; i < f.vertices.size(); ++i) os << (i ? "," : "") << f.vertices[i];
        os << "}";
        for (const auto& l : f.labels) os << " " << describe(d, l);
        os << "\n";
    }
    return os.str();
}

std::string text_of_plan(const GluingPlan& p) {
    std::ostringstream os;
    os << "ring " << to_string(p.ring) << ", " << to_string(p.parity) << " parity, d = " << p.ambient_dim
       << ", N = " << p.N << "\n";
    for (std::size_t i = 0; i < p.spaces.size(); ++i)
        os << "space " << i << ": " << to_decimal(p.spaces[i].coefficient) << " * " << to_text(p.spaces[i].diagram)
           << "\n";
    for (const auto& x : p.pairings)
        os << "pair " << describe(p.spaces[x.a.space].diagram, x.id.label_a) << " (space " << x.a.space << ") ~ "
           << describe(p.spaces[x.b.space].diagram, x.id.label_b) << " (space " << x.b.space << "), "
           << x.id.flips.size() << " flips\n";
    for (const auto& x : p.principal_folds)
        os << "principal fold " << describe(p.spaces[x.face.space].diagram, x.label) << " (space " << x.face.space
           << ")\n";
    for (const auto& x : p.hidden_folds)
        os << "hidden fold at free vertex " << x.v << " (space " << x.face.space << ")\n";
    for (const auto& x : p.collapses)
        os << to_string(x.kind) << " collapse (space " << x.face.space << "): " << x.description << "\n";
    os << p.degenerate.size() << " degenerate faces\n";
    os << "verification: " << (p.verification.pass ? "pass" : "FAIL") << " (" << p.verification.faces_accounted
       << "/" << p.verification.faces_total << " faces accounted)\n";
    for (const auto& u : p.verification.unbalanced) os << "  " << u << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcx: graph complexes, configuration-space strata and gluing plans"};
    app.set_version_flag("--version", GCX_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--format", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cache", common.cache_dir, "cache directory (default $GCX_CACHE or .gcx-cache)");
    app.add_flag("--no-cache", common.no_cache, "neither read nor write the cache");
    app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", common.out, "write the result to a file instead of standard output");

    // Each subcommand leaves a JSON result and its text rendering here.
    std::function<std::pair<json, std::string>()> action;
    std::function<int(const json&)> status = [](const json&) { return 0; };

    auto cache = [&]() -> std::optional<Cache> {
        if (common.no_cache) return std::nullopt;
        std::string dir = common.cache_dir;
        if (dir.empty()) {
            const char* env = std::getenv("GCX_CACHE");
            dir = env && *env ? env : ".gcx-cache";
        }
        return Cache(dir);
    };
    auto cached = [&](const json& key, const std::function<json()>& compute) {
        auto c = cache();
        if (c)
            if (auto hit = c->get(key)) return *hit;
        json v = compute();
        if (c) c->put(key, v);
        return v;
    };

    // basis
    Grade g_basis;
    auto* basis = app.add_subcommand("basis", "canonical diagram basis in one grading");
    add_grade(basis, g_basis);
    basis->callback([&] {
        action = [&] {
            json j = cached(g_basis.key("basis"), [&] {
                BasisFile b{g_basis.m, g_basis.n, g_basis.k, g_basis.conv(), g_basis.rng(), {}};
                b.diagrams = generate_basis(b.m, b.n, b.k, b.convention, b.ring, g_basis.basis_opt());
                return basis_to_json(b);
            });
            std::ostringstream os;
            auto b = basis_from_json(j);
            for (const auto& d : b.diagrams) os << to_text(d) << "\n";
            os << b.diagrams.size() << " diagrams\n";
            return std::make_pair(j, os.str());
        };
    });

    // grading
    std::string grading_in;
    auto* grading_cmd = app.add_subcommand("grading", "order and defect of a diagram");
    grading_cmd->add_option("--in", grading_in, "diagram JSON")->required();
    grading_cmd->callback([&] {
        action = [&] {
            Diagram d = diagram_from_json(read_json(grading_in));
            Grading g = grading(d);
            json j = grading_to_json(g);
            return std::make_pair(j, "order " + std::to_string(g.order) + ", defect " + std::to_string(g.defect) + "\n");
        };
    });

    // d
    std::string d_in, d_policy = "single";
    auto* dcmd = app.add_subcommand("d", "coboundary of an element");
    dcmd->add_option("--in", d_in, "element JSON")->required();
    dcmd->add_option("--policy", d_policy, "single or both")->check(CLI::IsMember({"single", "both"}));
    dcmd->callback([&] {
        action = [&] {
            auto x = element_from_json(read_json(d_in));
            auto y = coboundary(x, d_policy == "both" ? CombinedFace::both : CombinedFace::single);
            return std::make_pair(element_to_json(y), text_of(y));
        };
    });

    // matrix
    Grade g_matrix;
    auto* matrix = app.add_subcommand("matrix", "sparse matrix of d from defect k to k+1");
    add_grade(matrix, g_matrix);
    matrix->callback([&] {
        action = [&] {
            json j = cached(g_matrix.key("matrix"), [&] {
                auto src = generate_basis(g_matrix.m, g_matrix.n, g_matrix.k, g_matrix.conv(), g_matrix.rng(),
                                          g_matrix.basis_opt());
                auto dst = generate_basis(g_matrix.m, g_matrix.n, g_matrix.k + 1, g_matrix.conv(), g_matrix.rng(),
                                          g_matrix.basis_opt());
                json out = matrix_to_json(coboundary_matrix(src, dst, g_matrix.rng(), g_matrix.pol()));
                out["source_hash"] = content_hash(src);
                out["target_hash"] = content_hash(dst);
                return out;
            });
            std::string t = std::to_string(j["rows"].get<int>()) + " x " + std::to_string(j["cols"].get<int>()) +
                            ", " + std::to_string(j["entries"].size()) + " nonzero entries\n";
            return std::make_pair(j, t);
        };
    });

    // cohomology
    Grade g_coh;
    auto* coh = app.add_subcommand("cohomology", "integral cohomology in one grading");
    add_grade(coh, g_coh, false);
    coh->callback([&] {
        action = [&] {
            json j = cached(g_coh.key("cohomology"), [&] {
                return cohomology_to_json(cohomology_group(g_coh.m, g_coh.n, g_coh.k, g_coh.conv(),
                                                           g_coh.basis_opt(), g_coh.pol()));
            });
            std::string t = "Z^" + std::to_string(j["free_rank"].get<int>());
            for (const auto& x : j["torsion"]) t += " + Z/" + x.get<std::string>();
            return std::make_pair(j, t + "\n");
        };
    });

    // cocycles
    Grade g_cocycles;
    auto* cocycles = app.add_subcommand("cocycles", "basis of the cocycle space");
    add_grade(cocycles, g_cocycles);
    cocycles->callback([&] {
        action = [&] {
            json j = cached(g_cocycles.key("cocycles"), [&] {
                json a = json::array();
                for (const auto& x : cocycle_space(g_cocycles.m, g_cocycles.n, g_cocycles.k, g_cocycles.conv(),
                                                   g_cocycles.rng(), g_cocycles.basis_opt(), g_cocycles.pol()))
                    a.push_back(element_to_json(x));
                return a;
            });
            std::string t;
            for (const auto& x : j) t += text_of(element_from_json(x)) + "--\n";
            return std::make_pair(j, t + std::to_string(j.size()) + " cocycles\n");
        };
    });

    // minimal
    Grade g_min;
    auto* minimal = app.add_subcommand("minimal", "support-minimal cocycles");
    add_grade(minimal, g_min);
    minimal->callback([&] {
        action = [&] {
            json j = cached(g_min.key("minimal"), [&] {
                json a = json::array();
                DecompositionOptions opt;
                opt.policy = g_min.pol();
                auto space = cocycle_space(g_min.m, g_min.n, g_min.k, g_min.conv(), g_min.rng(), g_min.basis_opt(),
                                           g_min.pol());
                for (const auto& x : minimal_decomposition(space, opt)) {
                    json s = json::array();
                    for (const auto& d : x.support) s.push_back(diagram_to_json(d));
                    a.push_back({{"element", element_to_json(x.element)}, {"support", s}});
                }
                return a;
            });
            std::string t;
            for (const auto& x : j) t += text_of(element_from_json(x["element"])) + "--\n";
            return std::make_pair(j, t + std::to_string(j.size()) + " minimal cocycles\n");
        };
    });

    // orient
    std::string orient_in;
    auto* orient = app.add_subcommand("orient", "consistently oriented expression of a cocycle");
    orient->add_option("--in", orient_in, "cocycle JSON (labeled terms)")->required();
    orient->callback([&] {
        action = [&] {
            auto x = cocycle_from_json(read_json(orient_in));
            auto y = consistent_orientation(x);
            auto rep = check_consistency(y);
            json j = cocycle_to_json(y);
            j["consistent"] = rep.consistent;
            return std::make_pair(j, text_of(y.element()) + (rep.consistent ? "consistent\n" : "inconsistent\n"));
        };
    });

    // extend
    std::string extend_in;
    Grade g_ext;
    auto* extend = app.add_subcommand("extend", "extend prescribed coefficients to a cocycle");
    extend->add_option("--partial", extend_in, "cocycle-shaped JSON with the prescribed terms")->required();
    add_grade(extend, g_ext);
    extend->callback([&] {
        action = [&] {
            auto partial = cocycle_from_json(read_json(extend_in));
            auto x = extend_to_cocycle(partial.terms, g_ext.m, g_ext.n, g_ext.k, g_ext.conv(), g_ext.rng(),
                                       g_ext.basis_opt(), g_ext.pol());
            if (!x) throw DomainError("no extension", "no cocycle agrees with the prescribed terms");
            return std::make_pair(element_to_json(*x), text_of(*x));
        };
    });

    // faces
    std::string faces_in;
    int faces_budget = 20;
    auto* faces = app.add_subcommand("faces", "codimension-one faces of a diagram's configuration space");
    faces->add_option("--in", faces_in, "diagram JSON")->required();
    faces->add_option("--max-vertices", faces_budget)->check(CLI::PositiveNumber);
    faces->callback([&] {
        action = [&] {
            Diagram d = diagram_from_json(read_json(faces_in));
            auto f = enumerate_faces(d, {faces_budget});
            return std::make_pair(face_list_to_json(d, f), text_of_faces(d, f));
        };
    });

    // certify
    std::string certify_in;
    int certify_dim = 3;
    bool certify_all = false;
    auto* certify = app.add_subcommand("certify", "codimension certificates of the degenerate faces");
    certify->add_option("--in", certify_in, "diagram JSON")->required();
    certify->add_option("-d,--dim", certify_dim, "ambient dimension")->check(CLI::Range(2, 64));
    certify->add_flag("--all", certify_all, "every hidden and infinity face, not just the degenerate locus");
    certify->callback([&] {
        action = [&] {
            Diagram d = diagram_from_json(read_json(certify_in));
            std::vector<FaceDescriptor> fs;
            if (certify_all) {
                for (const auto& f : enumerate_faces(d))
                    if (f.kind != FaceKind::principal || in_degenerate_locus(d, f)) fs.push_back(f);
            } else {
                fs = degenerate_faces(d);
            }
            json a = json::array();
            std::ostringstream os;
            for (const auto& f : fs) {
                auto c = codim_certificate(f, certify_dim, d);
                a.push_back({{"face", face_to_json(d, f)}, {"certificate", certificate_to_json(c)}});
                os << text_of_faces(d, {f}).substr(0, text_of_faces(d, {f}).size() - 1) << ": case "
                   << to_string(c.kind) << ", bound " << to_decimal(c.bound) << (c.anomalous ? " (anomalous)" : "")
                   << "\n";
            }
            return std::make_pair(a, os.str());
        };
    });

    // corners
    std::string corners_in;
    CornerOptions corner_opt;
    auto* corners = app.add_subcommand("corners", "families of pairwise compatible faces");
    corners->add_option("--in", corners_in, "diagram JSON")->required();
    corners->add_option("--max-size", corner_opt.max_size)->check(CLI::PositiveNumber);
    corners->add_flag("--include-infinity", corner_opt.include_infinity);
    corners->callback([&] {
        action = [&] {
            Diagram d = diagram_from_json(read_json(corners_in));
            auto p = corner_poset(d, corner_opt);
            return std::make_pair(corner_poset_to_json(d, p), std::to_string(p.faces.size()) + " faces, " +
                                                                  std::to_string(p.families.size()) + " families\n");
        };
    });

    // poincare
    std::string poincare_in, poincare_mode = "fiber";
    int poincare_dim = 3;
    std::vector<int> poincare_order;
    auto* poincare = app.add_subcommand("poincare", "Poincare polynomial of a configuration space");
    poincare->add_option("--in", poincare_in, "diagram JSON")->required();
    poincare->add_option("-d,--dim", poincare_dim, "ambient dimension")->check(CLI::Range(2, 64));
    poincare->add_option("--mode", poincare_mode, "ambient or fiber")->check(CLI::IsMember({"ambient", "fiber"}));
    poincare->add_option("--order", poincare_order, "vertex order")->delimiter(',');
    poincare->callback([&] {
        action = [&] {
            Diagram d = diagram_from_json(read_json(poincare_in));
            auto p = poincare_polynomial(d, poincare_dim,
                                         poincare_mode == "ambient" ? PoincareMode::ambient : PoincareMode::fiber,
                                         poincare_order);
            return std::make_pair(polynomial_to_json(p), to_string(p) + "\n");
        };
    });

    // dims
    std::string dims_in;
    int dims_dim = 3;
    auto* dims = app.add_subcommand("dims", "fiber dimension, class degree and sphere dimension");
    dims->add_option("--in", dims_in, "diagram or element JSON")->required();
    dims->add_option("-d,--dim", dims_dim, "ambient dimension")->check(CLI::Range(2, 64));
    dims->callback([&] {
        action = [&] {
            json in = read_json(dims_in);
            Dimensions x = in.contains("terms") ? dimensions(element_from_json(in), dims_dim)
                                                : dimensions(diagram_from_json(in), dims_dim);
            return std::make_pair(dimensions_to_json(x), "fiber " + std::to_string(x.fiber_dim) + ", degree " +
                                                             std::to_string(x.class_degree) + ", spheres " +
                                                             std::to_string(x.sphere_dim) + "\n");
        };
    });

    // glue, glue-mod2
    std::string glue_in;
    int glue_dim = 3;
    auto* glue = app.add_subcommand("glue", "gluing plan over Z (odd ambient dimension)");
    glue->add_option("--cocycle", glue_in, "cocycle JSON")->required();
    glue->add_option("-d,--dim", glue_dim, "ambient dimension")->check(CLI::Range(2, 64));
    glue->callback([&] {
        action = [&] {
            auto x = cocycle_from_json(read_json(glue_in));
            auto p = plan_gluing(x, {glue_dim, {}});
            return std::make_pair(plan_to_json(p), text_of_plan(p));
        };
    });
    std::string glue2_in;
    int glue2_dim = 4;
    auto* glue2 = app.add_subcommand("glue-mod2", "gluing plan over Z/2");
    glue2->add_option("--cocycle", glue2_in, "cocycle JSON")->required();
    glue2->add_option("-d,--dim", glue2_dim, "ambient dimension")->check(CLI::Range(2, 64));
    glue2->callback([&] {
        action = [&] {
            auto p = plan_mod2(cocycle_from_json(read_json(glue2_in)).element(), {glue2_dim, {}});
            return std::make_pair(plan_to_json(p), text_of_plan(p));
        };
    });
    std::string chord_in;
    auto* chord = app.add_subcommand("glue-chord", "mod-2 plan for a single chord diagram");
    chord->add_option("--in", chord_in, "diagram JSON")->required();
    chord->callback([&] {
        action = [&] {
            auto p = plan_chord_mod2(diagram_from_json(read_json(chord_in)));
            return std::make_pair(plan_to_json(p), text_of_plan(p));
        };
    });

    // verify
    std::string verify_in;
    auto* verify = app.add_subcommand("verify", "re-check a plan; status 1 when it fails");
    verify->add_option("--plan", verify_in, "plan JSON")->required();
    verify->callback([&] {
        action = [&] {
            auto r = verify_fundamental_cycle(plan_from_json(read_json(verify_in)));
            json j = {{"pass", r.pass},
                      {"faces_total", r.faces_total},
                      {"faces_accounted", r.faces_accounted},
                      {"unbalanced", r.unbalanced}};
            std::string t = std::string(r.pass ? "pass" : "FAIL") + "\n";
            for (const auto& u : r.unbalanced) t += "  " + u + "\n";
            return std::make_pair(j, t);
        };
        status = [](const json& j) { return j.at("pass").get<bool>() ? 0 : 1; };
    });

    // signatures
    std::string sig_in;
    auto* sig = app.add_subcommand("signatures", "spherical signature of every identification in a plan");
    sig->add_option("--plan", sig_in, "plan JSON")->required();
    sig->callback([&] {
        action = [&] {
            auto p = plan_from_json(read_json(sig_in));
            json a = json::array();
            std::ostringstream os;
            for (const auto& s : spherical_signatures(p)) {
                json x = signature_to_json(s);
                bool ok = in_symmetry_group(s, p.parity, p.ring);
                x["in_group"] = ok;
                a.push_back(x);
                os << s.source << ": perm";
                for (int v : s.perm) os << " " << v;
                os << ", flips {";
                for (std::size_t i = 0; i < s.flips.size(); ++i) os << (i ? "," : "") << s.flips[i];
                os << "}" << (ok ? "" : " (outside the group)") << "\n";
            }
            return std::make_pair(a, os.str());
        };
    });

    // collapse-analysis
    std::string ca_in;
    int ca_pairing = 0;
    CornerAnalysisOptions ca_opt;
    auto* ca = app.add_subcommand("collapse-analysis", "corner codimension changes across one pairing");
    ca->add_option("--plan", ca_in, "plan JSON")->required();
    ca->add_option("--pairing", ca_pairing, "pairing index")->check(CLI::NonNegativeNumber);
    ca->add_option("--max-size", ca_opt.max_size)->check(CLI::PositiveNumber);
    ca->callback([&] {
        action = [&] {
            auto p = plan_from_json(read_json(ca_in));
            auto r = corner_collapse_analysis(p, ca_pairing, ca_opt);
            int raised = 0;
            for (const auto& c : r.corners) raised += c.codim_after > c.codim_before;
            return std::make_pair(corner_analysis_to_json(r), std::to_string(r.corners.size()) + " corners, " +
                                                                  std::to_string(raised) + " raised\n");
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    set_jobs(common.jobs);
    auto emit = [&](const std::string& s) {
        if (common.out.empty()) {
            std::cout << s;
            return;
        }
        std::ofstream out(common.out);
        if (!out) throw DomainError("io", "cannot write " + common.out);
        out << s;
    };
    try {
        auto [j, text] = action();
        emit(common.format == "json" ? j.dump(2) + "\n" : text);
        return status(j);
    } catch (const std::exception& e) {
        json err = {{"error", {{"kind", "domain"}, {"message", e.what()}}}};
        if (auto* d = dynamic_cast<const DomainError*>(&e)) {
            err["error"]["kind"] = d->kind;
            err["error"]["details"] = d->details;
        } else if (auto* p = dynamic_cast<const PlanError*>(&e)) {
            err["error"]["kind"] = p->kind();
            err["error"]["details"] = p->details();
        } else if (auto* v = dynamic_cast<const ValidationError*>(&e)) {
            err["error"]["kind"] = "invalid diagram";
            err["error"]["details"] = v->problems();
        } else if (dynamic_cast<const OrientationConflict*>(&e)) {
            err["error"]["kind"] = "orientation conflict";
        } else if (dynamic_cast<const BudgetError*>(&e)) {
            err["error"]["kind"] = "budget";
        } else if (dynamic_cast<const OrderingError*>(&e)) {
            err["error"]["kind"] = "ordering";
        }
        std::cout << err.dump(2) << "\n";
        std::cerr << "gcx: " << e.what() << "\n";
        return 1;
    }
}
