#include "gcx/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

namespace gcx {

namespace {

const json& at(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

int int_at(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_number_integer()) throw IoError(std::string("key \"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string string_at(const json& j, const char* key) {
    const json& v = at(j, key);
    if (!v.is_string()) throw IoError(std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<int> ints(const json& j) {
    if (!j.is_array()) throw IoError("expected an array of integers");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw IoError("expected an array of integers");
        out.push_back(x.get<int>());
    }
    return out;
}

// Sphere factors are 0-based in memory and 1-based in files; -1 (none) maps to 0.
json factors_out(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x + 1);
    return a;
}

std::vector<int> factors_in(const json& j) {
    auto v = ints(j);
    for (int& x : v) --x;
    return v;
}

json strings(const std::vector<std::string>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

std::vector<std::string> strings_in(const json& j) {
    std::vector<std::string> out;
    if (!j.is_array()) throw IoError("expected an array of strings");
    for (const auto& x : j) out.push_back(x.get<std::string>());
    return out;
}

json int_lists(const std::vector<std::vector<int>>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x);
    return a;
}

}  // namespace

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw IoError("exact number must be a decimal string or an integer");
}

Integer integer_from_json(const json& j) {
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long long>());
    throw IoError("exact integer must be a decimal string or an integer");
}

json diagram_to_json(const Diagram& d) {
    json j;
    j["convention"] = to_string(d.convention);
    j["strands"] = int_lists(d.strands);
    j["free"] = d.free;
    json edges = json::array();
    for (const auto& e : d.edges) {
        json x;
        x["a"] = e.a;
        x["b"] = e.b;
        x["dir"] = e.forward ? "ab" : "ba";
        if (e.is_loop() && d.convention == Convention::odd) x["loop_order"] = e.loop_lr ? "lr" : "rl";
        edges.push_back(x);
    }
    j["edges"] = edges;
    return j;
}

Diagram diagram_from_json(const json& j) {
    Diagram d;
    d.convention = j.contains("convention") ? convention_from_string(string_at(j, "convention")) : Convention::odd;
    for (const auto& s : at(j, "strands")) d.strands.push_back(ints(s));
    if (j.contains("free")) d.free = ints(j.at("free"));
    for (const auto& x : at(j, "edges")) {
        Edge e;
        e.a = int_at(x, "a");
        e.b = int_at(x, "b");
        if (x.contains("dir")) {
            std::string dir = string_at(x, "dir");
            if (dir != "ab" && dir != "ba") throw IoError("edge dir must be \"ab\" or \"ba\"");
            e.forward = dir == "ab";
        }
        if (x.contains("loop_order")) {
            std::string lo = string_at(x, "loop_order");
            if (lo != "lr" && lo != "rl") throw IoError("loop_order must be \"lr\" or \"rl\"");
            e.loop_lr = lo == "lr";
        }
        d.edges.push_back(e);
    }
    return validate(d);
}

json element_to_json(const CochainElement& x) {
    json j;
    j["ring"] = to_string(x.ring());
    j["convention"] = to_string(x.convention());
    json terms = json::array();
    for (const auto& [d, c] : x.terms()) terms.push_back({{"diagram", diagram_to_json(d)}, {"coeff", to_decimal(c)}});
    j["terms"] = terms;
    return j;
}

CochainElement element_from_json(const json& j) {
    Ring ring = ring_from_string(string_at(j, "ring"));
    std::vector<std::pair<Diagram, Rational>> terms;
    for (const auto& t : at(j, "terms")) terms.emplace_back(diagram_from_json(at(t, "diagram")), rational_from_json(at(t, "coeff")));
    Convention conv = j.contains("convention") ? convention_from_string(string_at(j, "convention"))
                      : terms.empty()          ? Convention::odd
                                               : terms.front().first.convention;
    CochainElement x(ring, conv);
    for (const auto& [d, c] : terms) {
        if (d.convention != conv) throw IoError("element mixes conventions");
        x.add(d, c);
    }
    return x;
}

json cocycle_to_json(const OrientedCocycle& x) {
    json j;
    j["ring"] = to_string(x.ring);
    j["convention"] = to_string(x.convention);
    json terms = json::array();
    for (const auto& t : x.terms)
        terms.push_back({{"diagram", diagram_to_json(t.diagram)}, {"coeff", to_decimal(t.coefficient)}});
    j["terms"] = terms;
    return j;
}

OrientedCocycle cocycle_from_json(const json& j) {
    OrientedCocycle x;
    x.ring = ring_from_string(string_at(j, "ring"));
    for (const auto& t : at(j, "terms"))
        x.terms.push_back({diagram_from_json(at(t, "diagram")), rational_from_json(at(t, "coeff"))});
    x.convention = j.contains("convention") ? convention_from_string(string_at(j, "convention"))
                   : x.terms.empty()        ? Convention::odd
                                            : x.terms.front().diagram.convention;
    for (const auto& t : x.terms)
        if (t.diagram.convention != x.convention) throw IoError("cocycle mixes conventions");
    return x;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) throw IoError("sha256 failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string content_hash(const std::vector<Diagram>& diagrams) {
    json a = json::array();
    for (const auto& d : diagrams) a.push_back(diagram_to_json(d));
    return sha256_hex(a.dump());
}

json basis_to_json(const BasisFile& b) {
    json j;
    j["manifest"] = {{"m", b.m},
                     {"n", b.n},
                     {"k", b.k},
                     {"convention", to_string(b.convention)},
                     {"ring", to_string(b.ring)},
                     {"count", b.diagrams.size()},
                     {"content_hash", content_hash(b.diagrams)}};
    json a = json::array();
    for (const auto& d : b.diagrams) a.push_back(diagram_to_json(d));
    j["diagrams"] = a;
    return j;
}

BasisFile basis_from_json(const json& j) {
    BasisFile b;
    const json& m = at(j, "manifest");
    b.m = int_at(m, "m");
    b.n = int_at(m, "n");
    b.k = int_at(m, "k");
    b.convention = convention_from_string(string_at(m, "convention"));
    b.ring = ring_from_string(string_at(m, "ring"));
    for (const auto& d : at(j, "diagrams")) b.diagrams.push_back(diagram_from_json(d));
    if (int_at(m, "count") != static_cast<int>(b.diagrams.size())) throw IoError("basis count does not match");
    if (string_at(m, "content_hash") != content_hash(b.diagrams)) throw IoError("basis content hash does not match");
    return b;
}

json matrix_to_json(const SparseMatrix& m) {
    json entries = json::array();
    for (const auto& [i, k, v] : m.entries) entries.push_back(json::array({i, k, to_decimal(v)}));
    return {{"rows", m.rows}, {"cols", m.cols}, {"entries", entries}};
}

SparseMatrix matrix_from_json(const json& j) {
    SparseMatrix m;
    m.rows = int_at(j, "rows");
    m.cols = int_at(j, "cols");
    for (const auto& e : at(j, "entries")) {
        if (!e.is_array() || e.size() != 3) throw IoError("matrix entry must be [row, col, value]");
        int r = e[0].get<int>(), c = e[1].get<int>();
        if (r < 0 || r >= m.rows || c < 0 || c >= m.cols) throw IoError("matrix entry out of range");
        m.entries.emplace_back(r, c, integer_from_json(e[2]));
    }
    std::sort(m.entries.begin(), m.entries.end());
    return m;
}

json grading_to_json(const Grading& g) { return {{"order", g.order}, {"defect", g.defect}}; }

json cohomology_to_json(const CohomologyGroup& h) {
    json t = json::array();
    for (const auto& x : h.torsion) t.push_back(to_decimal(x));
    return {{"free_rank", h.free_rank}, {"torsion", t}};
}

json contractible_to_json(const Diagram& d, const Element& e) {
    json j;
    j["kind"] = e.kind == Element::Kind::edge ? "edge" : "arc";
    // Edges by 1-based position, arcs by their starting segment vertex.
    j["index"] = e.kind == Element::Kind::edge ? e.index + 1 : e.index;
    auto [x, y] = endpoints(d, e);
    j["ends"] = {x, y};
    return j;
}

Element contractible_from_json(const json& j) {
    Element e;
    std::string kind = string_at(j, "kind");
    if (kind == "edge") {
        e.kind = Element::Kind::edge;
        e.index = int_at(j, "index") - 1;
    } else if (kind == "arc") {
        e.kind = Element::Kind::arc;
        e.index = int_at(j, "index");
    } else {
        throw IoError("element kind must be \"edge\" or \"arc\"");
    }
    return e;
}

json face_to_json(const Diagram& d, const FaceDescriptor& f) {
    json j;
    j["kind"] = to_string(f.kind);
    if (f.kind == FaceKind::principal) {
        j["pair"] = f.vertices;
        json labels = json::array();
        for (const auto& l : f.labels) labels.push_back(contractible_to_json(d, l));
        j["labels"] = labels;
    } else {
        j["vertices"] = f.vertices;
    }
    return j;
}

FaceDescriptor face_from_json(const json& j) {
    FaceDescriptor f;
    std::string kind = string_at(j, "kind");
    if (kind == "principal") {
        f.kind = FaceKind::principal;
        f.vertices = ints(at(j, "pair"));
        for (const auto& l : at(j, "labels")) f.labels.push_back(contractible_from_json(l));
    } else if (kind == "hidden" || kind == "infinity") {
        f.kind = kind == "hidden" ? FaceKind::hidden : FaceKind::infinity;
        f.vertices = ints(at(j, "vertices"));
    } else {
        throw IoError("unknown face kind \"" + kind + "\"");
    }
    return f;
}

json face_list_to_json(const Diagram& d, const std::vector<FaceDescriptor>& faces) {
    json principal = json::array(), hidden = json::array(), infinity = json::array();
    for (const auto& f : faces) {
        if (f.kind == FaceKind::principal) {
            json x = face_to_json(d, f);
            x.erase("kind");
            principal.push_back(x);
        } else {
            (f.kind == FaceKind::hidden ? hidden : infinity).push_back(f.vertices);
        }
    }
    return {{"principal", principal}, {"hidden", hidden}, {"infinity", infinity}};
}

namespace {

CertificateCase case_from_string(const std::string& s) {
    for (auto c : {CertificateCase::I, CertificateCase::II, CertificateCase::III, CertificateCase::IV,
                   CertificateCase::principal_multiedge})
        if (to_string(c) == s) return c;
    throw IoError("unknown certificate case \"" + s + "\"");
}

}  // namespace

json certificate_to_json(const CodimCertificate& c) {
    return {{"case", to_string(c.kind)},       {"r", c.r},
            {"s", c.s},                         {"edges", c.edge_count},
            {"bound", to_decimal(c.bound)},     {"valence_bound", to_decimal(c.valence_bound)},
            {"anomalous", c.anomalous}};
}

CodimCertificate certificate_from_json(const json& j) {
    CodimCertificate c;
    c.kind = case_from_string(string_at(j, "case"));
    c.r = int_at(j, "r");
    c.s = int_at(j, "s");
    c.edge_count = int_at(j, "edges");
    c.bound = rational_from_json(at(j, "bound"));
    c.valence_bound = j.contains("valence_bound") ? rational_from_json(j.at("valence_bound")) : c.bound;
    c.anomalous = at(j, "anomalous").get<bool>();
    return c;
}

json corner_poset_to_json(const Diagram& d, const CornerPoset& p) {
    json faces = json::array();
    for (const auto& f : p.faces) faces.push_back(face_to_json(d, f));
    return {{"faces", faces}, {"families", int_lists(p.families)}};
}

json polynomial_to_json(const Polynomial& p) {
    json c = json::array();
    for (const auto& x : p) c.push_back(to_decimal(x));
    return {{"coefficients", c}, {"text", to_string(p)}};
}

json dimensions_to_json(const Dimensions& x) {
    return {{"fiber_dim", x.fiber_dim}, {"class_degree", x.class_degree}, {"sphere_dim", x.sphere_dim}};
}

namespace {

json face_ref_to_json(const GluingPlan& p, const FaceRef& f) {
    const Diagram& d = p.spaces.at(f.space).diagram;
    return {{"space", f.space}, {"copy", f.copy}, {"face", face_to_json(d, f.face)}};
}

FaceRef face_ref_from_json(const json& j) {
    return {int_at(j, "space"), int_at(j, "copy"), face_from_json(at(j, "face"))};
}

json element_label(const GluingPlan& p, int space, const Element& e) {
    return contractible_to_json(p.spaces.at(space).diagram, e);
}

DegenerateReason reason_from_string(const std::string& s) {
    for (auto r : {DegenerateReason::multi_edge_quotient, DegenerateReason::rigid_hidden, DegenerateReason::infinity,
                   DegenerateReason::empty})
        if (to_string(r) == s) return r;
    throw IoError("unknown degenerate reason \"" + s + "\"");
}

}  // namespace

json plan_to_json(const GluingPlan& p) {
    json j;
    j["d_parity"] = to_string(p.parity);
    j["ring"] = to_string(p.ring);
    j["ambient_dim"] = p.ambient_dim;
    j["N"] = p.N;
    json spaces = json::array();
    for (const auto& s : p.spaces)
        spaces.push_back({{"diagram", diagram_to_json(s.diagram)},
                          {"coefficient", to_decimal(s.coefficient)},
                          {"copies", s.copies},
                          {"orientation", s.orientation},
                          {"absent_edges", s.absent_edges}});
    j["spaces"] = spaces;

    json pairings = json::array();
    for (const auto& x : p.pairings) {
        const auto& id = x.id;
        pairings.push_back({{"face_a", face_ref_to_json(p, x.a)},
                            {"face_b", face_ref_to_json(p, x.b)},
                            {"class", diagram_to_json(x.class_diagram)},
                            {"identification",
                             {{"label_a", element_label(p, x.a.space, id.label_a)},
                              {"label_b", element_label(p, x.b.space, id.label_b)},
                              {"quotient_map", id.quotient_map},
                              {"vertex_map", id.vertex_map},
                              {"perm", factors_out(id.sphere_perm)},
                              {"flips", factors_out(id.flips)},
                              {"transposed", id.transposed},
                              {"special_a", id.special_a + 1},
                              {"special_b", id.special_b + 1}}}});
    }
    j["pairings"] = pairings;

    json folds = json::array();
    for (const auto& x : p.principal_folds)
        folds.push_back({{"face", face_ref_to_json(p, x.face)},
                         {"label", element_label(p, x.face.space, x.label)},
                         {"automorphism", x.automorphism},
                         {"perm", factors_out(x.sphere_perm)},
                         {"flips", factors_out(x.flips)},
                         {"transposed", x.transposed},
                         {"special", x.special + 1}});
    j["principal_folds"] = folds;

    json hidden = json::array();
    for (const auto& x : p.hidden_folds)
        hidden.push_back({{"face", face_ref_to_json(p, x.face)},
                          {"v", x.v},
                          {"u", x.u},
                          {"w", x.w},
                          {"edge_uv", x.edge_uv + 1},
                          {"edge_vw", x.edge_vw + 1},
                          {"flips", factors_out(x.flips)}});
    j["hidden_folds"] = hidden;

    json collapses = json::array();
    for (const auto& x : p.collapses)
        collapses.push_back({{"face", face_ref_to_json(p, x.face)},
                             {"kind", to_string(x.kind)},
                             {"forgotten", x.forgotten},
                             {"description", x.description}});
    j["collapses"] = collapses;

    json degenerate = json::array();
    for (const auto& x : p.degenerate) {
        json e = {{"face", face_ref_to_json(p, x.face)}, {"reason", to_string(x.reason)}};
        e["certificate"] = x.certificate ? certificate_to_json(*x.certificate) : json(nullptr);
        degenerate.push_back(e);
    }
    j["degenerate"] = degenerate;

    j["verification"] = {{"pass", p.verification.pass},
                         {"faces_total", p.verification.faces_total},
                         {"faces_accounted", p.verification.faces_accounted},
                         {"unbalanced", strings(p.verification.unbalanced)}};
    return j;
}

GluingPlan plan_from_json(const json& j) {
    GluingPlan p;
    std::string parity = string_at(j, "d_parity");
    if (parity != "odd" && parity != "even") throw IoError("d_parity must be \"odd\" or \"even\"");
    p.parity = parity == "odd" ? Parity::odd : Parity::even;
    p.ring = ring_from_string(string_at(j, "ring"));
    p.ambient_dim = j.contains("ambient_dim") ? int_at(j, "ambient_dim") : (p.parity == Parity::odd ? 3 : 4);
    p.N = int_at(j, "N");
    for (const auto& s : at(j, "spaces")) {
        SpaceEntry e;
        e.diagram = diagram_from_json(at(s, "diagram"));
        e.coefficient = integer_from_json(at(s, "coefficient"));
        e.copies = int_at(s, "copies");
        e.orientation = int_at(s, "orientation");
        e.absent_edges = int_at(s, "absent_edges");
        p.spaces.push_back(e);
    }
    for (const auto& x : at(j, "pairings")) {
        Pairing q;
        q.a = face_ref_from_json(at(x, "face_a"));
        q.b = face_ref_from_json(at(x, "face_b"));
        q.class_diagram = diagram_from_json(at(x, "class"));
        const json& id = at(x, "identification");
        q.id.label_a = contractible_from_json(at(id, "label_a"));
        q.id.label_b = contractible_from_json(at(id, "label_b"));
        q.id.quotient_map = ints(at(id, "quotient_map"));
        q.id.vertex_map = ints(at(id, "vertex_map"));
        q.id.sphere_perm = factors_in(at(id, "perm"));
        q.id.flips = factors_in(at(id, "flips"));
        q.id.transposed = at(id, "transposed").get<bool>();
        q.id.special_a = int_at(id, "special_a") - 1;
        q.id.special_b = int_at(id, "special_b") - 1;
        p.pairings.push_back(q);
    }
    for (const auto& x : at(j, "principal_folds")) {
        PrincipalFold f;
        f.face = face_ref_from_json(at(x, "face"));
        f.label = contractible_from_json(at(x, "label"));
        f.automorphism = ints(at(x, "automorphism"));
        f.sphere_perm = factors_in(at(x, "perm"));
        f.flips = factors_in(at(x, "flips"));
        f.transposed = at(x, "transposed").get<bool>();
        f.special = int_at(x, "special") - 1;
        p.principal_folds.push_back(f);
    }
    for (const auto& x : at(j, "hidden_folds")) {
        HiddenFold h;
        h.face = face_ref_from_json(at(x, "face"));
        h.v = int_at(x, "v");
        h.u = int_at(x, "u");
        h.w = int_at(x, "w");
        h.edge_uv = int_at(x, "edge_uv") - 1;
        h.edge_vw = int_at(x, "edge_vw") - 1;
        h.flips = factors_in(at(x, "flips"));
        p.hidden_folds.push_back(h);
    }
    for (const auto& x : at(j, "collapses")) {
        Collapse c;
        c.face = face_ref_from_json(at(x, "face"));
        std::string kind = string_at(x, "kind");
        if (kind != "c1" && kind != "c2") throw IoError("collapse kind must be \"c1\" or \"c2\"");
        c.kind = kind == "c1" ? CollapseKind::c1 : CollapseKind::c2;
        c.forgotten = ints(at(x, "forgotten"));
        c.description = string_at(x, "description");
        p.collapses.push_back(c);
    }
    for (const auto& x : at(j, "degenerate")) {
        DegenerateFace f;
        f.face = face_ref_from_json(at(x, "face"));
        f.reason = reason_from_string(string_at(x, "reason"));
        if (x.contains("certificate") && !x.at("certificate").is_null())
            f.certificate = certificate_from_json(x.at("certificate"));
        p.degenerate.push_back(f);
    }
    const json& v = at(j, "verification");
    p.verification.pass = at(v, "pass").get<bool>();
    p.verification.faces_total = v.contains("faces_total") ? int_at(v, "faces_total") : 0;
    p.verification.faces_accounted = v.contains("faces_accounted") ? int_at(v, "faces_accounted") : 0;
    p.verification.unbalanced = strings_in(at(v, "unbalanced"));
    return p;
}

json signature_to_json(const SphericalSignature& s) {
    return {{"source", s.source}, {"perm", s.perm}, {"flips", s.flips}};
}

json corner_analysis_to_json(const CornerAnalysis& a) {
    json splits = json::array();
    for (int side = 0; side < 2; ++side) {
        json list = json::array();
        for (const auto& r : a.splits[side])
            list.push_back({{"set", r.set},
                            {"transported", r.transported},
                            {"biconnected", r.biconnected},
                            {"parts", int_lists(r.parts)},
                            {"increase", r.increase}});
        splits.push_back(list);
    }
    json corners = json::array();
    for (const auto& c : a.corners)
        corners.push_back({{"side", c.side},
                           {"family", int_lists(c.family)},
                           {"codim_before", c.codim_before},
                           {"codim_after", c.codim_after}});
    return {{"splits", splits}, {"corners", corners}};
}

}  // namespace gcx
