#include "gcx/gluing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gcx {

std::string to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

std::string to_string(CollapseKind k) { return k == CollapseKind::c1 ? "c1" : "c2"; }

std::string to_string(DegenerateReason r) {
    switch (r) {
        case DegenerateReason::multi_edge_quotient: return "multi-edge-quotient";
        case DegenerateReason::rigid_hidden: return "rigid-hidden";
        case DegenerateReason::infinity: return "infinity";
        case DegenerateReason::empty: return "empty";
    }
    return "?";
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

}  // namespace

PlanError::PlanError(const std::string& kind, std::vector<std::string> details)
    : std::runtime_error(kind + (details.empty() ? "" : ": " + join(details))), kind_(kind),
      details_(std::move(details)) {}

namespace {

std::string describe_face(const GluingPlan& plan, const FaceRef& f) {
    std::ostringstream os;
    os << "space " << f.space << " copy " << f.copy << " " << to_string(f.face.kind) << " {";
    for (std::size_t i = 0; i < f.face.vertices.size(); ++i) os << (i ? "," : "") << f.face.vertices[i];
    os << "}";
    if (f.face.kind == FaceKind::principal && !f.face.labels.empty() && f.space < static_cast<int>(plan.spaces.size()))
        os << " via " << describe(plan.spaces[f.space].diagram, f.face.labels.front());
    return os.str();
}

// (first, second) endpoint of a contractible element: tail then head for edges, order along L
// for arcs.
std::pair<int, int> ordered_ends(const Diagram& d, const Element& e) {
    if (e.kind == Element::Kind::edge) return {d.edges[e.index].tail(), d.edges[e.index].head()};
    return endpoints(d, e);
}

using Multiplicity = std::vector<std::vector<int>>;

Multiplicity multiplicities(const Diagram& d) {
    int n = d.vertex_count();
    Multiplicity m(n + 1, std::vector<int>(n + 1, 0));
    for (const auto& e : d.edges) {
        ++m[e.a][e.b];
        if (e.a != e.b) ++m[e.b][e.a];
    }
    return m;
}

// Segment vertices of a and b matched by strand and position; nullopt if the strands differ.
std::optional<std::vector<int>> segment_match(const Diagram& a, const Diagram& b) {
    if (a.strands.size() != b.strands.size() || a.vertex_count() != b.vertex_count()) return std::nullopt;
    std::vector<int> m(a.vertex_count() + 1, 0);
    for (std::size_t s = 0; s < a.strands.size(); ++s) {
        if (a.strands[s].size() != b.strands[s].size()) return std::nullopt;
        for (std::size_t p = 0; p < a.strands[s].size(); ++p) m[a.strands[s][p]] = b.strands[s][p];
    }
    return m;
}

// Visits every isomorphism a -> b (segment vertices rigid) in lexicographic order of the
// images of a's free vertices; `fixed` pins one vertex. The visitor returns false to stop.
void for_each_isomorphism(const Diagram& a, const Diagram& b, std::pair<int, int> fixed,
                          const std::function<bool(const std::vector<int>&)>& visit) {
    auto seg = segment_match(a, b);
    if (!seg || a.free.size() != b.free.size()) return;
    auto ma = multiplicities(a), mb = multiplicities(b);
    std::vector<int> phi = *seg;
    std::vector<int> assigned;
    for (int v = 1; v <= a.vertex_count(); ++v)
        if (phi[v]) assigned.push_back(v);
    for (int v : assigned)
        for (int u : assigned)
            if (ma[v][u] != mb[phi[v]][phi[u]]) return;
    std::vector<char> used(b.vertex_count() + 1, 0);
    std::vector<int> freeA = a.free, freeB = b.free;
    std::sort(freeA.begin(), freeA.end());
    std::sort(freeB.begin(), freeB.end());
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (stop) return;
        if (i == freeA.size()) {
            if (!visit(phi)) stop = true;
            return;
        }
        int v = freeA[i];
        for (int w : freeB) {
            if (used[w]) continue;
            if (fixed.first == v && fixed.second != w) continue;
            if (fixed.second == w && fixed.first != v) continue;
            bool ok = ma[v][v] == mb[w][w];
            for (std::size_t j = 0; ok && j < assigned.size(); ++j)
                ok = ma[v][assigned[j]] == mb[w][phi[assigned[j]]];
            if (!ok) continue;
            phi[v] = w;
            used[w] = 1;
            assigned.push_back(v);
            rec(i + 1);
            assigned.pop_back();
            used[w] = 0;
            phi[v] = 0;
            if (stop) return;
        }
    };
    rec(0);
}

// Edge k of a goes to edge_of[k] of b under phi; reversed[k] when its direction flips.
struct EdgeCorrespondence {
    std::vector<int> edge_of;
    std::vector<char> reversed;
};

EdgeCorrespondence correspond(const Diagram& a, const Diagram& b, const std::vector<int>& phi) {
    EdgeCorrespondence c;
    std::vector<char> taken(b.edges.size(), 0);
    for (const auto& e : a.edges) {
        int pa = phi[e.a], pb = phi[e.b];
        int found = -1;
        for (int j = 0; j < b.edge_count() && found < 0; ++j) {
            const Edge& g = b.edges[j];
            if (taken[j]) continue;
            if ((g.a == pa && g.b == pb) || (g.a == pb && g.b == pa)) found = j;
        }
        if (found < 0) throw std::logic_error("correspond: map is not an isomorphism");
        taken[found] = 1;
        const Edge& g = b.edges[found];
        bool rev = e.is_loop() ? loop_sign(e) != loop_sign(g) : phi[e.tail()] != g.tail();
        c.edge_of.push_back(found);
        c.reversed.push_back(rev);
    }
    return c;
}

int permutation_sign(const std::vector<int>& p) {
    int n = static_cast<int>(p.size()) - 1;
    std::vector<char> seen(n + 1, 0);
    int sign = 1;
    for (int i = 1; i <= n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = p[j]) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

// Sign of the labeled diagram b relative to a under phi (odd convention).
int orientation_sign(const Diagram& a, const Diagram& b, const std::vector<int>& phi) {
    auto c = correspond(a, b, phi);
    int flips = static_cast<int>(std::count(c.reversed.begin(), c.reversed.end(), 1));
    return permutation_sign(phi) * (flips % 2 ? -1 : 1);
}

std::vector<int> inverse_edge_map(const std::vector<int>& edge_map, int size) {
    std::vector<int> inv(size, -1);
    for (std::size_t i = 0; i < edge_map.size(); ++i)
        if (edge_map[i] >= 0) inv[edge_map[i]] = static_cast<int>(i);
    return inv;
}

}  // namespace

std::optional<Identification> identify(const Diagram& a, const Element& e, int absent_a, const Diagram& b,
                                       const Element& f, int absent_b) {
    auto qa = contract_labeled(a, e), qb = contract_labeled(b, f);
    if (!qa || !qb) return std::nullopt;
    const Diagram &Qa = qa->diagram, &Qb = qb->diagram;
    if (has_multi_edge(Qa) || has_multi_edge(Qb)) return std::nullopt;

    auto [xa, ya] = ordered_ends(a, e);
    auto [xb, yb] = ordered_ends(b, f);
    int mergedA = qa->vertex_map[xa], mergedB = qb->vertex_map[xb];

    std::vector<int> phi;
    auto take = [&](const std::vector<int>& p) {
        phi = p;
        return false;
    };
    for_each_isomorphism(Qa, Qb, {mergedA, mergedB}, take);
    bool mergedKept = !phi.empty();
    if (!mergedKept) for_each_isomorphism(Qa, Qb, {0, 0}, take);
    if (phi.empty()) return std::nullopt;

    Identification id;
    id.label_a = e;
    id.label_b = f;
    id.quotient_map = phi;

    const int Ea = a.edge_count(), Eb = b.edge_count();
    const int N = Ea + absent_a;
    if (Eb + absent_b != N) throw std::invalid_argument("identify: spaces have different sphere counts");
    auto corr = correspond(Qa, Qb, phi);
    auto invB = inverse_edge_map(qb->edge_map, Qb.edge_count());

    id.sphere_perm.assign(N, -1);
    int reversed = 0;
    std::vector<int> flips;
    for (int i = 0; i < Ea; ++i) {
        int k = qa->edge_map[i];
        if (k < 0) continue;
        id.sphere_perm[i] = invB[corr.edge_of[k]];
        if (corr.reversed[k]) {
            ++reversed;
            flips.push_back(i);
        }
    }
    std::vector<int> absA, absB;
    for (int i = Ea; i < N; ++i) absA.push_back(i);
    for (int i = Eb; i < N; ++i) absB.push_back(i);
    bool ea = e.kind == Element::Kind::edge, fb = f.kind == Element::Kind::edge;
    if (ea || fb) {
        if (ea) {
            id.special_a = e.index;
        } else {
            if (absA.empty()) throw std::invalid_argument("identify: arc face without an absent factor");
            id.special_a = absA.front();
            absA.erase(absA.begin());
        }
        if (fb) {
            id.special_b = f.index;
        } else {
            if (absB.empty()) throw std::invalid_argument("identify: arc face without an absent factor");
            id.special_b = absB.front();
            absB.erase(absB.begin());
        }
        id.sphere_perm[id.special_a] = id.special_b;
        id.transposed = reversed % 2 == 1;
        if (id.transposed) flips.push_back(id.special_a);
    }
    if (absA.size() != absB.size()) throw std::logic_error("identify: absent factors do not match");
    for (std::size_t i = 0; i < absA.size(); ++i) id.sphere_perm[absA[i]] = absB[i];
    std::sort(flips.begin(), flips.end());
    id.flips = flips;

    if (mergedKept) {
        // Ids of G_a -> ids of G_b through the quotients; the ends of e go to the ends of f.
        std::vector<int> fromQb(Qb.vertex_count() + 1, 0);
        for (int w = 1; w <= b.vertex_count(); ++w)
            if (w != xb && w != yb) fromQb[qb->vertex_map[w]] = w;
        id.vertex_map.assign(a.vertex_count() + 1, 0);
        for (int v = 1; v <= a.vertex_count(); ++v)
            if (v != xa && v != ya) id.vertex_map[v] = fromQb[phi[qa->vertex_map[v]]];
        id.vertex_map[xa] = id.transposed ? yb : xb;
        id.vertex_map[ya] = id.transposed ? xb : yb;
    }

    if (a.convention == Convention::odd && b.convention == Convention::odd) {
        auto ca = canonical_form(Qa), cb = canonical_form(Qb);
        if (ca->sign * cb->sign != orientation_sign(Qa, Qb, phi))
            throw std::logic_error("identify: isomorphism sign disagrees with the canonical signs");
    }
    return id;
}

namespace {

struct ClassMember {
    FaceRef ref;
    int contribution = 1;
};

bool is_trivalent(const Diagram& d) {
    VertexTable vt(d);
    auto deg = edge_degrees(d);
    for (int v = 1; v <= d.vertex_count(); ++v)
        if (deg[v] != (vt.is_segment(v) ? 1 : 3)) return false;
    return true;
}

// Component index of each vertex in U(G).
std::vector<int> edge_components(const Diagram& d) {
    int n = d.vertex_count();
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : d.edges) parent[find(e.a)] = find(e.b);
    std::vector<int> comp(n + 1);
    for (int v = 1; v <= n; ++v) comp[v] = find(v);
    return comp;
}

std::vector<int> degrees_in(const Diagram& d, const std::set<int>& in) {
    std::vector<int> deg(d.vertex_count() + 1, 0);
    for (const auto& e : d.edges)
        if (in.count(e.a) && in.count(e.b)) {
            ++deg[e.a];
            ++deg[e.b];
        }
    return deg;
}

// Strand neighbours of segment vertex v that lie in S.
std::vector<int> strand_neighbours_in(const Diagram& d, int v, const std::set<int>& in) {
    std::vector<int> out;
    for (const auto& s : d.strands)
        for (std::size_t p = 0; p < s.size(); ++p)
            if (s[p] == v) {
                if (p > 0 && in.count(s[p - 1])) out.push_back(s[p - 1]);
                if (p + 1 < s.size() && in.count(s[p + 1])) out.push_back(s[p + 1]);
            }
    return out;
}

enum class Mode { integral, mod2, chord };

struct Builder {
    GluingPlan plan;
    Mode mode;
    FaceOptions faceOpt;
    std::map<Diagram, std::vector<ClassMember>> classes;

    void classify_hidden(int i, int c, const FaceDescriptor& f) {
        const Diagram& d = plan.spaces[i].diagram;
        VertexTable vt(d);
        std::set<int> in(f.vertices.begin(), f.vertices.end());
        auto deg = degrees_in(d, in);
        FaceRef ref{i, c, f};

        if (mode != Mode::chord)
            for (int v : f.vertices) {
                if (vt.is_segment(v) || deg[v] != 2) continue;
                HiddenFold h;
                h.face = ref;
                h.v = v;
                std::vector<std::pair<int, int>> ends;  // (edge index, other end)
                for (int k = 0; k < d.edge_count(); ++k) {
                    const Edge& e = d.edges[k];
                    if (!in.count(e.a) || !in.count(e.b)) continue;
                    if (e.a == v) ends.emplace_back(k, e.b);
                    else if (e.b == v) ends.emplace_back(k, e.a);
                }
                h.edge_uv = ends[0].first;
                h.u = ends[0].second;
                h.edge_vw = ends[1].first;
                h.w = ends[1].second;
                // x_v - x_u goes to x_w - x_v: an edge into v and an edge out of v swap without
                // a flip; two edges on the same side of v both flip.
                bool inUV = d.edges[h.edge_uv].head() == v, inVW = d.edges[h.edge_vw].head() == v;
                if (inUV == inVW) h.flips = {std::min(h.edge_uv, h.edge_vw), std::max(h.edge_uv, h.edge_vw)};
                plan.hidden_folds.push_back(h);
                return;
            }

        for (int v : f.vertices) {
            if (!vt.is_segment(v) || deg[v] != 0) continue;
            Collapse col;
            col.face = ref;
            col.kind = CollapseKind::c1;
            auto nb = strand_neighbours_in(d, v, in);
            col.forgotten = {v};
            std::ostringstream os;
            os << "forget the relative rate of approach of segment vertex " << v;
            if (nb.size() == 2) os << " between " << nb[0] << " and " << nb[1];
            col.description = os.str();
            plan.collapses.push_back(col);
            return;
        }

        bool c2 = mode == Mode::chord;
        std::vector<int> forgotten;
        if (is_trivalent(d)) {
            auto comp = edge_components(d);
            std::set<int> meets;
            for (int v : f.vertices) meets.insert(comp[v]);
            if (meets.size() > 1) {
                c2 = true;
                // An arc of the face joining two components, with the outer strand neighbours.
                for (const auto& s : d.strands)
                    for (std::size_t p = 0; p + 1 < s.size() && forgotten.empty(); ++p) {
                        int v = s[p], w = s[p + 1];
                        if (!in.count(v) || !in.count(w) || comp[v] == comp[w]) continue;
                        if (p > 0 && in.count(s[p - 1])) forgotten.push_back(s[p - 1]);
                        forgotten.push_back(v);
                        forgotten.push_back(w);
                        if (p + 2 < s.size() && in.count(s[p + 2])) forgotten.push_back(s[p + 2]);
                    }
            }
        }
        if (c2) {
            Collapse col;
            col.face = ref;
            col.kind = CollapseKind::c2;
            col.forgotten = forgotten;
            std::ostringstream os;
            os << "forget the relative rates of approach of segment vertices";
            for (int v : forgotten) os << " " << v;
            if (forgotten.empty()) os << " along the collided segments";
            col.description = os.str();
            plan.collapses.push_back(col);
            return;
        }
        plan.degenerate.push_back({ref, DegenerateReason::rigid_hidden, codim_certificate(f, plan.ambient_dim, d)});
    }

    void classify_principal(int i, int c, const FaceDescriptor& f) {
        const SpaceEntry& sp = plan.spaces[i];
        const Diagram& d = sp.diagram;
        FaceRef ref{i, c, f};
        const Element& label = f.labels.front();

        if (mode == Mode::chord) {
            PrincipalFold pf;
            pf.face = ref;
            pf.label = label;
            pf.transposed = true;
            auto lc = contract_labeled(d, label);
            if (lc) {
                pf.automorphism.resize(lc->diagram.vertex_count() + 1);
                std::iota(pf.automorphism.begin(), pf.automorphism.end(), 0);
            }
            pf.sphere_perm.resize(plan.N);
            std::iota(pf.sphere_perm.begin(), pf.sphere_perm.end(), 0);
            for (const auto& l : f.labels)
                if (l.kind == Element::Kind::edge) pf.flips.push_back(l.index);
            plan.principal_folds.push_back(pf);
            return;
        }

        auto lc = contract_labeled(d, label);
        if (!lc) {
            plan.degenerate.push_back({ref, DegenerateReason::empty, std::nullopt});
            return;
        }
        if (has_multi_edge(lc->diagram)) {
            plan.degenerate.push_back(
                {ref, DegenerateReason::multi_edge_quotient, codim_certificate(f, plan.ambient_dim, d)});
            return;
        }
        auto cf = canonical_form(lc->diagram);
        if (plan.ring == Ring::Z && cf->reversing_automorphism) {
            plan.principal_folds.push_back(make_fold(ref, label, lc->diagram, lc->edge_map));
            return;
        }
        int contribution = 1;
        if (plan.ring == Ring::Z) contribution = sp.orientation * epsilon(d, label) * cf->sign;
        classes[cf->diagram].push_back({ref, contribution});
    }

    PrincipalFold make_fold(const FaceRef& ref, const Element& label, const Diagram& Q,
                            const std::vector<int>& edge_map) {
        const SpaceEntry& sp = plan.spaces[ref.space];
        PrincipalFold pf;
        pf.face = ref;
        pf.label = label;
        for_each_isomorphism(Q, Q, {0, 0}, [&](const std::vector<int>& alpha) {
            if (orientation_sign(Q, Q, alpha) != -1) return true;
            pf.automorphism = alpha;
            return false;
        });
        auto corr = correspond(Q, Q, pf.automorphism);
        auto inv = inverse_edge_map(edge_map, Q.edge_count());
        const int E = sp.diagram.edge_count();
        pf.sphere_perm.resize(plan.N);
        std::iota(pf.sphere_perm.begin(), pf.sphere_perm.end(), 0);
        int reversed = 0;
        for (int i = 0; i < E; ++i) {
            int k = edge_map[i];
            if (k < 0) continue;
            pf.sphere_perm[i] = inv[corr.edge_of[k]];
            if (corr.reversed[k]) {
                ++reversed;
                pf.flips.push_back(i);
            }
        }
        if (label.kind == Element::Kind::edge) pf.special = label.index;
        else if (sp.absent_edges > 0) pf.special = E;
        if (pf.special >= 0 && reversed % 2) {
            pf.transposed = true;
            pf.flips.push_back(pf.special);
        }
        std::sort(pf.flips.begin(), pf.flips.end());
        return pf;
    }

    void pair_classes() {
        std::vector<std::string> problems;
        for (auto& [q, members] : classes) {
            if (plan.ring == Ring::Z) {
                std::vector<FaceRef> plus, minus;
                for (auto& m : members) (m.contribution > 0 ? plus : minus).push_back(m.ref);
                std::sort(plus.begin(), plus.end());
                std::sort(minus.begin(), minus.end());
                for (const auto& [sign, f] : match_even(plus, minus, q))
                    problems.push_back(std::string("unmatched ") + sign + " " + describe_face(plan, f) + " in class " +
                                       to_text(q));
            } else {
                std::vector<FaceRef> all;
                for (auto& m : members) all.push_back(m.ref);
                std::sort(all.begin(), all.end());
                for (std::size_t i = 0; i + 1 < all.size(); i += 2) add_pairing(all[i], all[i + 1], q);
                if (all.size() % 2)
                    problems.push_back("unmatched " + describe_face(plan, all.back()) + " in class " + to_text(q));
            }
        }
        if (!problems.empty())
            throw PlanError(plan.ring == Ring::Z ? "unpairable class" : "odd class multiplicity", problems);
    }

    // Prefers identifications with an even flip set: a maximum matching on those pairs,
    // then the leftovers in order. Arc-to-arc identifications have no transposition to fix
    // the parity, so the choice of partner matters.
    // Returns the faces left over when the class does not balance.
    std::vector<std::pair<char, FaceRef>> match_even(const std::vector<FaceRef>& plus,
                                                     const std::vector<FaceRef>& minus, const Diagram& q) {
        std::vector<std::vector<std::optional<Identification>>> ids(plus.size());
        std::vector<std::vector<int>> good(plus.size());
        bool small = plus.size() * minus.size() <= 4096;
        for (std::size_t i = 0; i < plus.size() && small; ++i) {
            ids[i].resize(minus.size());
            for (std::size_t j = 0; j < minus.size(); ++j) {
                ids[i][j] = identify_refs(plus[i], minus[j]);
                if (ids[i][j]->flips.size() % 2 == 0) good[i].push_back(static_cast<int>(j));
            }
        }
        std::vector<int> owner(minus.size(), -1), partner(plus.size(), -1);
        std::vector<char> visited;
        std::function<bool(int)> augment = [&](int i) {
            for (int j : good[i]) {
                if (visited[j]) continue;
                visited[j] = 1;
                if (owner[j] < 0 || augment(owner[j])) {
                    owner[j] = i;
                    partner[i] = j;
                    return true;
                }
            }
            return false;
        };
        for (std::size_t i = 0; i < plus.size(); ++i) {
            visited.assign(minus.size(), 0);
            augment(static_cast<int>(i));
        }
        std::size_t next = 0;
        for (std::size_t i = 0; i < plus.size(); ++i) {
            if (partner[i] >= 0) continue;
            while (next < minus.size() && owner[next] >= 0) ++next;
            if (next == minus.size()) break;
            owner[next] = static_cast<int>(i);
            partner[i] = static_cast<int>(next);
        }
        std::vector<std::pair<char, FaceRef>> left;
        for (std::size_t i = 0; i < plus.size(); ++i) {
            if (partner[i] < 0) {
                left.emplace_back('+', plus[i]);
                continue;
            }
            auto id = small ? ids[i][partner[i]] : identify_refs(plus[i], minus[partner[i]]);
            plan.pairings.push_back({plus[i], minus[partner[i]], *id, q});
        }
        for (std::size_t j = 0; j < minus.size(); ++j)
            if (owner[j] < 0) left.emplace_back('-', minus[j]);
        return left;
    }

    std::optional<Identification> identify_refs(const FaceRef& a, const FaceRef& b) {
        const SpaceEntry &sa = plan.spaces[a.space], &sb = plan.spaces[b.space];
        auto id = identify(sa.diagram, a.face.labels.front(), sa.absent_edges, sb.diagram, b.face.labels.front(),
                           sb.absent_edges);
        if (!id) throw std::logic_error("pairing of non-isomorphic quotients");
        return id;
    }

    void add_pairing(const FaceRef& a, const FaceRef& b, const Diagram& q) {
        const SpaceEntry &sa = plan.spaces[a.space], &sb = plan.spaces[b.space];
        auto id = identify(sa.diagram, a.face.labels.front(), sa.absent_edges, sb.diagram, b.face.labels.front(),
                           sb.absent_edges);
        if (!id) throw std::logic_error("pairing of non-isomorphic quotients");
        plan.pairings.push_back({a, b, *id, q});
    }

    void run() {
        for (int i = 0; i < static_cast<int>(plan.spaces.size()); ++i) {
            auto faces = enumerate_faces(plan.spaces[i].diagram, faceOpt);
            for (int c = 0; c < plan.spaces[i].copies; ++c)
                for (const auto& f : faces) {
                    switch (f.kind) {
                        case FaceKind::principal: classify_principal(i, c, f); break;
                        case FaceKind::hidden:
                            if (mode == Mode::chord) classify_hidden(i, c, f);
                            else classify_hidden(i, c, f);
                            break;
                        case FaceKind::infinity:
                            plan.degenerate.push_back({{i, c, f},
                                                       DegenerateReason::infinity,
                                                       codim_certificate(f, plan.ambient_dim, plan.spaces[i].diagram)});
                            break;
                    }
                }
        }
        pair_classes();
        plan.verification = verify_fundamental_cycle(plan);
    }
};

void fill_spaces(GluingPlan& plan, const std::vector<std::pair<Diagram, Integer>>& terms) {
    int N = 0;
    for (const auto& [d, c] : terms) N = std::max(N, d.edge_count());
    plan.N = N;
    for (const auto& [d, c] : terms) {
        SpaceEntry s;
        s.diagram = d;
        s.coefficient = c;
        s.orientation = c < 0 ? -1 : 1;
        Integer mag = abs(c);
        if (mag > 10000) throw BudgetError("plan: coefficient too large to expand into copies");
        s.copies = static_cast<int>(mag);
        s.absent_edges = N - d.edge_count();
        plan.spaces.push_back(s);
    }
}

Integer integral(const Rational& r) {
    if (denominator(r) != 1) throw std::invalid_argument("plan: non-integral coefficient");
    return numerator(r);
}

}  // namespace

GluingPlan plan_gluing(const OrientedCocycle& gamma, const PlanOptions& opt) {
    if (opt.ambient_dim % 2 == 0)
        throw PlanError("parity violation",
                        {"even ambient dimension " + std::to_string(opt.ambient_dim) +
                         " admits no orientation-reversing gluing over Z; use the mod-2 plan"});
    if (gamma.ring != Ring::Z) throw std::invalid_argument("plan_gluing: integral cocycle required");
    if (gamma.convention != Convention::odd)
        throw PlanError("parity violation", {"odd ambient dimension needs the odd-convention orientation"});
    Builder b;
    b.mode = Mode::integral;
    b.faceOpt = opt.faces;
    b.plan.parity = Parity::odd;
    b.plan.ring = Ring::Z;
    b.plan.ambient_dim = opt.ambient_dim;
    std::vector<std::pair<Diagram, Integer>> terms;
    for (const auto& t : gamma.terms) terms.emplace_back(t.diagram, integral(t.coefficient));
    fill_spaces(b.plan, terms);
    b.run();
    return b.plan;
}

GluingPlan plan_gluing(const CochainElement& gamma, const PlanOptions& opt) {
    OrientedCocycle x;
    x.ring = gamma.ring();
    x.convention = gamma.convention();
    for (const auto& [d, c] : gamma.terms()) x.terms.push_back({d, c});
    return plan_gluing(x, opt);
}

GluingPlan plan_mod2(const CochainElement& gamma, const PlanOptions& opt) {
    Builder b;
    b.mode = Mode::mod2;
    b.faceOpt = opt.faces;
    b.plan.parity = opt.ambient_dim % 2 ? Parity::odd : Parity::even;
    b.plan.ring = Ring::Z2;
    b.plan.ambient_dim = opt.ambient_dim;
    std::vector<std::pair<Diagram, Integer>> terms;
    for (const auto& [d, c] : gamma.terms()) {
        Integer v = integral(c) % 2;
        if (v != 0) terms.emplace_back(d, Integer(1));
    }
    fill_spaces(b.plan, terms);
    b.run();
    return b.plan;
}

GluingPlan plan_chord_mod2(const Diagram& chord_diagram, const FaceOptions& faces) {
    if (!chord_diagram.is_chord_diagram()) throw PlanError("not a chord diagram", {to_text(chord_diagram)});
    Builder b;
    b.mode = Mode::chord;
    b.faceOpt = faces;
    b.plan.parity = Parity::odd;
    b.plan.ring = Ring::Z2;
    b.plan.ambient_dim = 3;
    fill_spaces(b.plan, {{chord_diagram, Integer(1)}});
    b.run();
    return b.plan;
}

namespace {

void check_identification(const GluingPlan& plan, int index, std::vector<std::string>& problems) {
    const Pairing& p = plan.pairings[index];
    const std::string tag = "pairing " + std::to_string(index);
    const SpaceEntry &sa = plan.spaces[p.a.space], &sb = plan.spaces[p.b.space];
    const Identification& id = p.id;
    auto qa = contract_labeled(sa.diagram, id.label_a), qb = contract_labeled(sb.diagram, id.label_b);
    if (!qa || !qb) {
        problems.push_back(tag + ": contracted label is a pinch");
        return;
    }
    const Diagram &Qa = qa->diagram, &Qb = qb->diagram;
    bool iso = static_cast<int>(id.quotient_map.size()) == Qa.vertex_count() + 1 &&
               Qa.vertex_count() == Qb.vertex_count();
    if (iso) {
        std::vector<int> sorted(id.quotient_map.begin() + 1, id.quotient_map.end());
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < static_cast<int>(sorted.size()); ++i) iso = iso && sorted[i] == i + 1;
    }
    EdgeCorrespondence corr;
    if (iso) {
        auto ma = multiplicities(Qa), mb = multiplicities(Qb);
        auto seg = segment_match(Qa, Qb);
        iso = seg.has_value();
        for (int v = 1; iso && v <= Qa.vertex_count(); ++v) {
            VertexTable va(Qa);
            if (va.is_segment(v) && (*seg)[v] != id.quotient_map[v]) iso = false;
            for (int u = 1; iso && u <= Qa.vertex_count(); ++u)
                if (ma[v][u] != mb[id.quotient_map[v]][id.quotient_map[u]]) iso = false;
        }
        if (iso) corr = correspond(Qa, Qb, id.quotient_map);
    }
    if (!iso) {
        problems.push_back(tag + ": quotient map is not an isomorphism");
        return;
    }
    if (static_cast<int>(id.sphere_perm.size()) != plan.N) {
        problems.push_back(tag + ": sphere permutation has the wrong length");
        return;
    }
    std::set<int> flips(id.flips.begin(), id.flips.end());
    auto invB = inverse_edge_map(qb->edge_map, Qb.edge_count());
    for (int i = 0; i < sa.diagram.edge_count(); ++i) {
        int k = qa->edge_map[i];
        if (k < 0) continue;
        if (id.sphere_perm[i] != invB[corr.edge_of[k]])
            problems.push_back(tag + ": sphere factor " + std::to_string(i + 1) + " not sent along its edge");
        if (static_cast<bool>(corr.reversed[k]) != static_cast<bool>(flips.count(i)))
            problems.push_back(tag + ": flip of factor " + std::to_string(i + 1) +
                               " disagrees with the edge directions");
    }
    bool special = id.special_a >= 0;
    if (special && static_cast<bool>(flips.count(id.special_a)) != id.transposed)
        problems.push_back(tag + ": collision-direction flip disagrees with the endpoint transposition");

    if (plan.ring == Ring::Z) {
        if (flips.size() % 2)
            problems.push_back(tag + ": odd flip set (" + std::to_string(flips.size()) + " antipodal factors)");
        int ea = epsilon(sa.diagram, id.label_a), eb = epsilon(sb.diagram, id.label_b);
        int o = sa.orientation * ea * sb.orientation * eb * permutation_sign(id.quotient_map) *
                (special && id.transposed ? -1 : 1);
        if (o != -1) problems.push_back(tag + ": identification preserves the induced boundary orientations");
    }
}

void check_principal_fold(const GluingPlan& plan, int index, std::vector<std::string>& problems) {
    const PrincipalFold& pf = plan.principal_folds[index];
    const std::string tag = "principal fold " + std::to_string(index);
    if (plan.ring != Ring::Z) return;
    const SpaceEntry& sp = plan.spaces[pf.face.space];
    auto lc = contract_labeled(sp.diagram, pf.label);
    if (!lc || pf.automorphism.empty()) {
        problems.push_back(tag + ": no automorphism recorded");
        return;
    }
    const Diagram& Q = lc->diagram;
    auto corr = correspond(Q, Q, pf.automorphism);
    std::set<int> flips(pf.flips.begin(), pf.flips.end());
    int reversed = 0;
    for (int i = 0; i < sp.diagram.edge_count(); ++i) {
        int k = lc->edge_map[i];
        if (k < 0) continue;
        if (corr.reversed[k]) ++reversed;
        if (static_cast<bool>(corr.reversed[k]) != static_cast<bool>(flips.count(i)))
            problems.push_back(tag + ": flip of factor " + std::to_string(i + 1) + " disagrees with the automorphism");
    }
    if (flips.size() % 2) problems.push_back(tag + ": odd flip set");
    int o = permutation_sign(pf.automorphism) * (pf.special >= 0 && pf.transposed ? -1 : 1);
    if (o != -1) problems.push_back(tag + ": fold is orientation-preserving");
}

void check_hidden_fold(const GluingPlan& plan, int index, std::vector<std::string>& problems) {
    const HiddenFold& h = plan.hidden_folds[index];
    const std::string tag = "hidden fold " + std::to_string(index);
    const Diagram& d = plan.spaces[h.face.space].diagram;
    VertexTable vt(d);
    std::set<int> in(h.face.face.vertices.begin(), h.face.face.vertices.end());
    auto deg = degrees_in(d, in);
    if (vt.is_segment(h.v) || deg[h.v] != 2) problems.push_back(tag + ": vertex is not a bivalent free vertex");
    if (plan.ring == Ring::Z) {
        if (h.flips.size() % 2) problems.push_back(tag + ": odd flip set");
        // The reflection x_v -> x_u + x_w - x_v has determinant (-1)^d.
        if (plan.ambient_dim % 2 == 0) problems.push_back(tag + ": involution preserves orientation");
    }
}

}  // namespace

FundamentalCycleReport verify_fundamental_cycle(const GluingPlan& plan) {
    FundamentalCycleReport r;
    std::vector<std::string>& problems = r.unbalanced;

    // Exactly-once accounting.
    std::map<FaceRef, int> expected, seen;
    for (int i = 0; i < static_cast<int>(plan.spaces.size()); ++i) {
        auto faces = enumerate_faces(plan.spaces[i].diagram);
        for (int c = 0; c < plan.spaces[i].copies; ++c)
            for (const auto& f : faces) ++expected[{i, c, f}];
    }
    for (const auto& p : plan.pairings) {
        ++seen[p.a];
        ++seen[p.b];
    }
    for (const auto& f : plan.principal_folds) ++seen[f.face];
    for (const auto& f : plan.hidden_folds) ++seen[f.face];
    for (const auto& f : plan.collapses) ++seen[f.face];
    for (const auto& f : plan.degenerate) ++seen[f.face];
    for (const auto& [f, k] : expected) {
        r.faces_total += k;
        auto it = seen.find(f);
        int got = it == seen.end() ? 0 : it->second;
        r.faces_accounted += std::min(got, k);
        if (got != k)
            problems.push_back(describe_face(plan, f) + " accounted " + std::to_string(got) + " times");
    }
    for (const auto& [f, k] : seen)
        if (!expected.count(f)) problems.push_back(describe_face(plan, f) + " is not a face of the plan's spaces");

    for (int i = 0; i < static_cast<int>(plan.pairings.size()); ++i) check_identification(plan, i, problems);
    for (int i = 0; i < static_cast<int>(plan.principal_folds.size()); ++i) check_principal_fold(plan, i, problems);
    for (int i = 0; i < static_cast<int>(plan.hidden_folds.size()); ++i) check_hidden_fold(plan, i, problems);

    // Signed boundary sum of the glued faces, class by class.
    if (plan.ring == Ring::Z) {
        std::map<Diagram, long long> sum;
        for (const auto& p : plan.pairings)
            for (const FaceRef* f : {&p.a, &p.b}) {
                const SpaceEntry& sp = plan.spaces[f->space];
                auto lc = contract_labeled(sp.diagram, f->face.labels.front());
                if (!lc) continue;
                auto cf = canonical_form(lc->diagram);
                if (!cf) continue;
                sum[cf->diagram] += sp.orientation * epsilon(sp.diagram, f->face.labels.front()) * cf->sign;
            }
        for (const auto& [q, s] : sum)
            if (s != 0) problems.push_back("class " + to_text(q) + " has boundary sum " + std::to_string(s));
    }
    r.pass = problems.empty();
    return r;
}

std::vector<SphericalSignature> spherical_signatures(const GluingPlan& plan) {
    std::vector<SphericalSignature> out;
    auto one_based = [](const std::vector<int>& v) {
        std::vector<int> w;
        for (int x : v) w.push_back(x + 1);
        return w;
    };
    auto identity = [&] {
        std::vector<int> p(plan.N);
        std::iota(p.begin(), p.end(), 1);
        return p;
    };
    for (std::size_t i = 0; i < plan.pairings.size(); ++i)
        out.push_back({"pairing " + std::to_string(i), one_based(plan.pairings[i].id.sphere_perm),
                       one_based(plan.pairings[i].id.flips)});
    for (std::size_t i = 0; i < plan.principal_folds.size(); ++i)
        out.push_back({"principal fold " + std::to_string(i), one_based(plan.principal_folds[i].sphere_perm),
                       one_based(plan.principal_folds[i].flips)});
    for (std::size_t i = 0; i < plan.hidden_folds.size(); ++i) {
        const auto& h = plan.hidden_folds[i];
        auto p = identity();
        std::swap(p[h.edge_uv], p[h.edge_vw]);
        out.push_back({"hidden fold " + std::to_string(i), p, one_based(h.flips)});
    }
    for (std::size_t i = 0; i < plan.collapses.size(); ++i)
        out.push_back({"collapse " + std::to_string(i), identity(), {}});
    return out;
}

bool in_symmetry_group(const SphericalSignature& s, Parity parity, Ring ring) {
    std::vector<int> sorted = s.perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1) return false;
    for (int f : s.flips)
        if (f < 1 || f > static_cast<int>(s.perm.size())) return false;
    if (parity == Parity::odd && ring == Ring::Z) return s.flips.size() % 2 == 0;
    return true;
}

namespace {

// Adjacency pairs of T(G) restricted to a vertex set, optionally without the pair {x, y}.
GraphView induced_total(const Diagram& d, const std::vector<int>& S, int x = 0, int y = 0) {
    GraphView g = induced(total_graph(d), S);
    if (x) {
        std::vector<std::pair<int, int>> kept;
        for (auto [u, v] : g.edges)
            if (!((u == x && v == y) || (u == y && v == x))) kept.push_back({u, v});
        g.edges = kept;
    }
    return g;
}

std::vector<std::vector<int>> components(const GraphView& g) {
    std::map<int, int> parent;
    for (int v : g.vertices) parent[v] = v;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [u, v] : g.edges) parent[find(u)] = find(v);
    std::map<int, std::vector<int>> by;
    for (int v : g.vertices) by[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [r, vs] : by) out.push_back(vs);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SplitRecord> splits_for_side(const Diagram& src, const Element& e, const Diagram& dst, const Element& f,
                                         const std::vector<int>& map) {
    auto [x, y] = endpoints(src, e);
    auto [fx, fy] = endpoints(dst, f);
    std::vector<int> others;
    for (int v = 1; v <= src.vertex_count(); ++v)
        if (v != x && v != y) others.push_back(v);
    if (others.size() > 24) throw BudgetError("corner analysis: too many vertices");
    GraphView t = total_graph(src);
    std::vector<SplitRecord> out;
    for (unsigned long mask = 1; mask < (1UL << others.size()); ++mask) {
        std::vector<int> S{x, y};
        for (std::size_t i = 0; i < others.size(); ++i)
            if (mask >> i & 1UL) S.push_back(others[i]);
        std::sort(S.begin(), S.end());
        if (!is_biconnected(induced(t, S))) continue;
        SplitRecord r;
        r.set = S;
        for (int v : S) r.transported.push_back(map[v]);
        std::sort(r.transported.begin(), r.transported.end());
        r.biconnected = is_biconnected(induced_total(dst, r.transported));
        if (!r.biconnected) {
            r.parts = components(induced_total(dst, r.transported, fx, fy));
            if (r.parts.size() == 2 && r.parts[0].size() > 1 && r.parts[1].size() > 1) r.increase = 1;
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const SplitRecord& a, const SplitRecord& b) {
        return a.set.size() != b.set.size() ? a.set.size() < b.set.size() : a.set < b.set;
    });
    return out;
}

}  // namespace

CornerAnalysis corner_collapse_analysis(const Diagram& a, const Element& e, const Diagram& b, const Element& f,
                                        const Identification& id, const CornerAnalysisOptions& opt) {
    if (id.vertex_map.empty())
        throw std::invalid_argument("corner analysis: identification does not match the merged vertices");
    std::vector<int> inverse(b.vertex_count() + 1, 0);
    for (int v = 1; v <= a.vertex_count(); ++v) inverse[id.vertex_map[v]] = v;

    CornerAnalysis out;
    out.splits[0] = splits_for_side(a, e, b, f, id.vertex_map);
    out.splits[1] = splits_for_side(b, f, a, e, inverse);

    for (int side = 0; side < 2; ++side) {
        const auto& sp = out.splits[side];
        auto [x, y] = side == 0 ? endpoints(a, e) : endpoints(b, f);
        std::vector<int> pair{std::min(x, y), std::max(x, y)};
        // Sets containing the contracted pair pairwise share two vertices, so corners are chains.
        std::vector<int> chain;
        std::function<void(int)> extend = [&](int from) {
            for (int i = from; i < static_cast<int>(sp.size()); ++i) {
                if (!chain.empty()) {
                    const auto& last = sp[chain.back()].set;
                    if (sp[i].set.size() <= last.size() ||
                        !std::includes(sp[i].set.begin(), sp[i].set.end(), last.begin(), last.end()))
                        continue;
                }
                chain.push_back(i);
                CornerChange c;
                c.side = side;
                c.family.push_back(pair);
                int inc = 0;
                for (int j : chain) {
                    c.family.push_back(sp[j].set);
                    inc += sp[j].increase;
                }
                c.codim_before = static_cast<int>(c.family.size());
                c.codim_after = c.codim_before + inc;
                if (static_cast<long long>(out.corners.size()) >= opt.max_corners)
                    throw BudgetError("corner analysis: more than " + std::to_string(opt.max_corners) + " corners");
                out.corners.push_back(c);
                if (static_cast<int>(chain.size()) + 1 < opt.max_size) extend(i + 1);
                chain.pop_back();
            }
        };
        extend(0);
    }
    return out;
}

CornerAnalysis corner_collapse_analysis(const GluingPlan& plan, int pairing, const CornerAnalysisOptions& opt) {
    if (pairing < 0 || pairing >= static_cast<int>(plan.pairings.size()))
        throw std::out_of_range("corner analysis: no pairing " + std::to_string(pairing));
    const Pairing& p = plan.pairings[pairing];
    return corner_collapse_analysis(plan.spaces[p.a.space].diagram, p.id.label_a, plan.spaces[p.b.space].diagram,
                                    p.id.label_b, p.id, opt);
}

}  // namespace gcx
