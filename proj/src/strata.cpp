#include "gcx/strata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/biconnected_components.hpp>

namespace gcx {

GraphView total_graph(const Diagram& d) {
    GraphView g;
    for (int v = 1; v <= d.vertex_count(); ++v) g.vertices.push_back(v);
    for (const auto& s : d.strands)
        for (std::size_t p = 1; p < s.size(); ++p) g.edges.emplace_back(s[p - 1], s[p]);
    for (const auto& e : d.edges)
        if (!e.is_loop()) g.edges.emplace_back(e.a, e.b);
    return g;
}

GraphView edge_graph(const Diagram& d) {
    GraphView g;
    for (int v = 1; v <= d.vertex_count(); ++v) g.vertices.push_back(v);
    for (const auto& e : d.edges)
        if (!e.is_loop()) g.edges.emplace_back(e.a, e.b);
    return g;
}

GraphView induced(const GraphView& g, const std::vector<int>& subset) {
    std::set<int> in(subset.begin(), subset.end());
    GraphView h;
    h.vertices.assign(in.begin(), in.end());
    for (auto [u, v] : g.edges)
        if (u != v && in.count(u) && in.count(v)) h.edges.emplace_back(u, v);
    return h;
}

BlockDecomposition blocks_and_tree(const GraphView& g) {
    using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                         boost::property<boost::edge_index_t, std::size_t>>;
    std::map<int, std::size_t> index;
    for (int v : g.vertices) index.emplace(v, index.size());
    BGraph bg(index.size());
    std::size_t ei = 0;
    for (auto [u, v] : g.edges) {
        if (u == v) continue;
        boost::add_edge(index.at(u), index.at(v), ei++, bg);
    }

    std::vector<std::size_t> component(ei);
    auto emap = boost::make_iterator_property_map(component.begin(), boost::get(boost::edge_index, bg));
    std::vector<std::size_t> arts;
    auto [count, out] = boost::biconnected_components(bg, emap, std::back_inserter(arts));
    (void)out;

    std::vector<int> name(index.size());
    for (auto [v, i] : index) name[i] = v;

    std::vector<std::set<int>> blocks(count);
    std::vector<char> touched(index.size(), 0);
    for (auto [it, end] = boost::edges(bg); it != end; ++it) {
        auto c = component[boost::get(boost::edge_index, bg, *it)];
        auto s = boost::source(*it, bg), t = boost::target(*it, bg);
        blocks[c].insert(name[s]);
        blocks[c].insert(name[t]);
        touched[s] = touched[t] = 1;
    }
    BlockDecomposition out_;
    for (auto& b : blocks) out_.blocks.emplace_back(b.begin(), b.end());
    for (std::size_t i = 0; i < touched.size(); ++i)
        if (!touched[i]) out_.blocks.push_back({name[i]});
    std::sort(out_.blocks.begin(), out_.blocks.end());

    for (auto a : arts) out_.cut_vertices.push_back(name[a]);
    std::sort(out_.cut_vertices.begin(), out_.cut_vertices.end());
    out_.cut_vertices.erase(std::unique(out_.cut_vertices.begin(), out_.cut_vertices.end()),
                            out_.cut_vertices.end());

    for (std::size_t b = 0; b < out_.blocks.size(); ++b)
        for (int c : out_.cut_vertices)
            if (std::binary_search(out_.blocks[b].begin(), out_.blocks[b].end(), c))
                out_.tree_edges.emplace_back(static_cast<int>(b), c);

    long long total = 0;
    for (const auto& b : out_.blocks) total += static_cast<long long>(b.size());
    long long nv = static_cast<long long>(g.vertices.size());
    long long ne = static_cast<long long>(out_.tree_edges.size());
    long long nc = static_cast<long long>(out_.cut_vertices.size());
    out_.counting_identity_holds = total == nv + ne - nc;
    out_.literal_identity_holds = total == nv + ne;
    return out_;
}

bool is_connected(const GraphView& g) {
    std::map<int, int> parent;
    for (int v : g.vertices) parent[v] = v;
    if (parent.empty()) return true;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [u, v] : g.edges) {
        if (!parent.count(u) || !parent.count(v)) continue;
        parent[find(u)] = find(v);
    }
    int root = find(parent.begin()->first);
    for (auto& [v, p] : parent)
        if (find(v) != root) return false;
    return true;
}

bool is_biconnected(const GraphView& g) {
    if (g.vertices.size() < 2) return false;
    if (g.vertices.size() == 2) {
        for (auto [u, v] : g.edges)
            if (u != v) return true;
        return false;
    }
    auto b = blocks_and_tree(g);
    return b.blocks.size() == 1 && b.blocks[0].size() == g.vertices.size();
}

std::string to_string(FaceKind k) {
    switch (k) {
        case FaceKind::principal: return "principal";
        case FaceKind::hidden: return "hidden";
        case FaceKind::infinity: return "infinity";
    }
    return "?";
}

namespace {

std::vector<int> subset_of(const std::vector<int>& ids, unsigned long mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (mask >> i & 1UL) s.push_back(ids[i]);
    return s;
}

void check_budget(const Diagram& d, const FaceOptions& opt) {
    if (d.vertex_count() > opt.max_vertices || d.vertex_count() > 30)
        throw BudgetError("face enumeration: " + std::to_string(d.vertex_count()) + " vertices exceeds budget " +
                          std::to_string(opt.max_vertices));
}

// Edges of U(G) with both ends in S, with loops; and edges with at least one end in S.
std::pair<int, int> edge_counts(const Diagram& d, const std::vector<int>& S) {
    std::set<int> in(S.begin(), S.end());
    int inside = 0, touching = 0;
    for (const auto& e : d.edges) {
        bool a = in.count(e.a), b = in.count(e.b);
        if (a && b) ++inside;
        if (a || b) ++touching;
    }
    return {inside, touching};
}

std::vector<int> degrees_inside(const Diagram& d, const std::vector<int>& S) {
    std::set<int> in(S.begin(), S.end());
    std::vector<int> deg(d.vertex_count() + 1, 0);
    for (const auto& e : d.edges)
        if (in.count(e.a) && in.count(e.b)) {
            ++deg[e.a];
            ++deg[e.b];
        }
    return deg;
}

bool quotient_has_multi_edge(const Diagram& d, const FaceDescriptor& f) {
    if (f.labels.empty()) return false;
    auto q = contract_labeled(d, f.labels.front());
    return q && has_multi_edge(q->diagram);
}

}  // namespace

std::vector<FaceDescriptor> enumerate_faces(const Diagram& d, const FaceOptions& opt) {
    check_budget(d, opt);
    std::vector<FaceDescriptor> out;

    std::map<std::pair<int, int>, std::vector<Element>> pairs;
    for (const auto& e : contractible_elements(d)) {
        auto [x, y] = endpoints(d, e);
        pairs[{std::min(x, y), std::max(x, y)}].push_back(e);
    }
    for (auto& [p, labels] : pairs) {
        std::sort(labels.begin(), labels.end(), [](const Element& a, const Element& b) {
            if (a.kind != b.kind) return a.kind == Element::Kind::arc;
            return a.index < b.index;
        });
        out.push_back({FaceKind::principal, {p.first, p.second}, labels});
    }

    GraphView t = total_graph(d);
    int n = d.vertex_count();
    std::vector<std::vector<int>> sets;
    for (unsigned long mask = 1; mask < (1UL << n); ++mask) sets.push_back(subset_of(t.vertices, mask));
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::vector<FaceDescriptor> hidden, infinity;
    for (const auto& S : sets) {
        GraphView h = induced(t, S);
        if (!is_connected(h)) continue;
        infinity.push_back({FaceKind::infinity, S, {}});
        if (S.size() >= 3 && is_biconnected(h)) hidden.push_back({FaceKind::hidden, S, {}});
    }
    out.insert(out.end(), hidden.begin(), hidden.end());
    out.insert(out.end(), infinity.begin(), infinity.end());
    return out;
}

bool in_degenerate_locus(const Diagram& d, const FaceDescriptor& f) {
    switch (f.kind) {
        case FaceKind::principal: return quotient_has_multi_edge(d, f);
        case FaceKind::infinity: return true;
        case FaceKind::hidden: {
            VertexTable vt(d);
            auto deg = degrees_inside(d, f.vertices);
            for (int v : f.vertices) {
                if (vt.is_segment(v) && deg[v] == 0) return false;
                if (!vt.is_segment(v) && deg[v] == 2) return false;
            }
            return true;
        }
    }
    return false;
}

std::vector<FaceDescriptor> degenerate_faces(const Diagram& d, const FaceOptions& opt) {
    std::vector<FaceDescriptor> out;
    for (auto& f : enumerate_faces(d, opt))
        if (in_degenerate_locus(d, f)) out.push_back(std::move(f));
    return out;
}

std::string to_string(CertificateCase c) {
    switch (c) {
        case CertificateCase::I: return "I";
        case CertificateCase::II: return "II";
        case CertificateCase::III: return "III";
        case CertificateCase::IV: return "IV";
        case CertificateCase::principal_multiedge: return "principal-multiedge";
    }
    return "?";
}

CodimCertificate codim_certificate(const FaceDescriptor& f, int ambient_dim, const Diagram& d) {
    VertexTable vt(d);
    CodimCertificate c;
    for (int v : f.vertices) (vt.is_segment(v) ? c.r : c.s) += 1;
    const Rational D = ambient_dim, r = c.r, s = c.s;

    if (f.kind == FaceKind::principal) {
        if (!quotient_has_multi_edge(d, f))
            throw std::invalid_argument("principal face without a multiple-edge quotient is glued, not degenerate");
        // Two edges of the quotient share a direction: one diagonal of the sphere product.
        c.kind = CertificateCase::principal_multiedge;
        c.edge_count = 2;
        c.bound = D - 1;
        c.valence_bound = D - 1;
        return c;
    }

    auto [inside, touching] = edge_counts(d, f.vertices);
    Rational screen;
    if (f.kind == FaceKind::hidden) {
        c.edge_count = inside;
        if (c.r == 0) {
            c.kind = CertificateCase::I;
            screen = D * s - D - 1;
            c.valence_bound = Rational(1, 2) * (D - 3) * (s + 2) + 4;
        } else {
            c.kind = CertificateCase::III;
            screen = D + r + D * s - 3;
            c.valence_bound = Rational(1, 2) * (D - 3) * (r + s - 2);
        }
    } else {
        c.edge_count = touching;
        if (c.r == 0) {
            c.kind = CertificateCase::II;
            screen = D * s - 1;
            c.valence_bound = Rational(1, 2) * (D - 3) * s + 1;
        } else {
            c.kind = CertificateCase::IV;
            screen = r + D * s - 1;
            c.valence_bound = Rational(1, 2) * (D - 3) * (r + s) + 1;
        }
    }
    c.bound = (D - 1) * c.edge_count - screen;
    c.anomalous = c.kind == CertificateCase::III && c.bound <= 0;
    return c;
}

std::vector<FaceDescriptor> anomalous_faces(const Diagram& d, const FaceOptions& opt) {
    VertexTable vt(d);
    GraphView u = edge_graph(d);
    std::vector<FaceDescriptor> out;
    for (const auto& f : enumerate_faces(d, opt)) {
        if (f.kind != FaceKind::hidden) continue;
        auto deg = degrees_inside(d, f.vertices);
        bool valences = std::all_of(f.vertices.begin(), f.vertices.end(),
                                    [&](int v) { return deg[v] == (vt.is_segment(v) ? 1 : 3); });
        if (!valences) continue;

        // A whole component of U(G): connected there, and no edge leaves it.
        std::set<int> in(f.vertices.begin(), f.vertices.end());
        if (!is_connected(induced(u, f.vertices))) continue;
        bool closed = std::all_of(d.edges.begin(), d.edges.end(),
                                  [&](const Edge& e) { return in.count(e.a) == in.count(e.b); });
        if (!closed) continue;

        bool crossed = false;
        for (const auto& strand : d.strands) {
            int lo = -1, hi = -1;
            for (int p = 0; p < static_cast<int>(strand.size()); ++p)
                if (in.count(strand[p])) {
                    if (lo < 0) lo = p;
                    hi = p;
                }
            for (int p = lo + 1; lo >= 0 && p < hi; ++p)
                if (!in.count(strand[p])) crossed = true;
        }
        if (!crossed) out.push_back(f);
    }
    return out;
}

bool compatible(const FaceDescriptor& a, const FaceDescriptor& b) {
    std::vector<int> common;
    std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                          std::back_inserter(common));
    std::size_t shared = common.size();
    std::size_t na = a.vertices.size(), nb = b.vertices.size();
    // The point at infinity is one more shared or unshared vertex.
    bool ia = a.kind == FaceKind::infinity, ib = b.kind == FaceKind::infinity;
    if (ia) ++na;
    if (ib) ++nb;
    if (ia && ib) ++shared;
    return shared == 0 || shared == 1 || shared == na || shared == nb;
}

CornerPoset corner_poset(const Diagram& d, const CornerOptions& opt) {
    CornerPoset out;
    for (auto& f : enumerate_faces(d))
        if (f.kind != FaceKind::infinity || opt.include_infinity) out.faces.push_back(std::move(f));
    const int n = static_cast<int>(out.faces.size());
    std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ok[i][j] = i != j && compatible(out.faces[i], out.faces[j]);

    std::vector<int> current;
    std::function<void(int)> extend = [&](int from) {
        for (int i = from; i < n; ++i) {
            if (!std::all_of(current.begin(), current.end(), [&](int j) { return ok[i][j]; })) continue;
            current.push_back(i);
            if (static_cast<long long>(out.families.size()) >= opt.max_families)
                throw BudgetError("corner_poset: more than " + std::to_string(opt.max_families) + " families");
            out.families.push_back(current);
            if (static_cast<int>(current.size()) < opt.max_size) extend(i + 1);
            current.pop_back();
        }
    };
    extend(0);
    std::stable_sort(out.families.begin(), out.families.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

std::string to_string(const Polynomial& p) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0 || p[k] != 1) os << p[k];
        if (k > 0) os << "t" << (k > 1 ? "^" + std::to_string(k) : "");
    }
    if (first) os << "0";
    return os.str();
}

namespace {

Polynomial multiply_factor(const Polynomial& p, int e, int degree) {
    Polynomial q(p.size() + degree, Integer(0));
    for (std::size_t k = 0; k < p.size(); ++k) {
        q[k] += p[k];
        q[k + degree] += p[k] * e;
    }
    while (q.size() > 1 && q.back() == 0) q.pop_back();
    return q;
}

using Adjacency = std::map<int, std::set<int>>;

Adjacency adjacency(const GraphView& g) {
    Adjacency adj;
    for (int v : g.vertices) adj[v];
    for (auto [u, v] : g.edges) {
        if (u == v) continue;
        adj[u].insert(v);
        adj[v].insert(u);
    }
    return adj;
}

// `counted` supplies the neighbours; `distinct` the pairs that can never collide.
Polynomial ordered_product(const Adjacency& counted, const Adjacency& distinct, const std::vector<int>& order,
                           const std::set<int>& contributing, int ambient_dim) {
    std::set<int> seen(order.begin(), order.end());
    if (seen.size() != order.size() || seen.size() != counted.size() ||
        !std::all_of(order.begin(), order.end(), [&](int v) { return counted.count(v); }))
        throw OrderingError("ordering is not a permutation of the vertices");
    Polynomial p{Integer(1)};
    std::vector<int> earlier;
    for (int v : order) {
        std::vector<int> nb;
        for (int w : earlier)
            if (counted.at(v).count(w)) nb.push_back(w);
        if (contributing.count(v)) {
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    if (!distinct.at(nb[i]).count(nb[j]))
                        throw OrderingError("ordering not admissible: earlier neighbours " + std::to_string(nb[i]) +
                                            " and " + std::to_string(nb[j]) + " of " + std::to_string(v) +
                                            " are not adjacent");
            p = multiply_factor(p, static_cast<int>(nb.size()), ambient_dim - 1);
        }
        earlier.push_back(v);
    }
    return p;
}

}  // namespace

Polynomial poincare_polynomial(const GraphView& g, int ambient_dim, const std::vector<int>& order) {
    auto adj = adjacency(g);
    std::set<int> all(g.vertices.begin(), g.vertices.end());
    return ordered_product(adj, adj, order, all, ambient_dim);
}

Polynomial poincare_polynomial(const Diagram& d, int ambient_dim, PoincareMode mode, std::vector<int> order) {
    if (order.empty()) {
        order.resize(d.vertex_count());
        std::iota(order.begin(), order.end(), 1);
    }
    if (mode == PoincareMode::ambient) return poincare_polynomial(total_graph(d), ambient_dim, order);

    VertexTable vt(d);
    const int q = d.segment_count();
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
        if (order[i] >= 1 && order[i] <= d.vertex_count() && vt.is_segment(order[i]) != (i < q))
            throw OrderingError("fiber mode: segment vertices must come first");
    auto counted = adjacency(edge_graph(d));
    auto distinct = counted;
    for (int u = 1; u <= d.vertex_count(); ++u)
        for (int v = 1; v <= d.vertex_count(); ++v)
            if (u != v && vt.is_segment(u) && vt.is_segment(v)) distinct[u].insert(v);
    std::set<int> free(d.free.begin(), d.free.end());
    return ordered_product(counted, distinct, order, free, ambient_dim);
}

Dimensions dimensions(const Diagram& d, int ambient_dim) {
    Grading g = grading(d);
    int N = d.edge_count();
    return {(3 - ambient_dim) * g.order - g.defect + N * (ambient_dim - 1), g.order * (ambient_dim - 3) + g.defect,
            N * (ambient_dim - 1)};
}

Dimensions dimensions(const CochainElement& x, int ambient_dim) {
    if (x.empty()) return {};
    std::set<Grading> gs;
    int N = 0;
    for (const auto& [d, c] : x.terms()) {
        gs.insert(grading(d));
        N = std::max(N, d.edge_count());
    }
    if (gs.size() != 1) throw std::invalid_argument("dimensions: input mixes gradings");
    Grading g = *gs.begin();
    return {(3 - ambient_dim) * g.order - g.defect + N * (ambient_dim - 1), g.order * (ambient_dim - 3) + g.defect,
            N * (ambient_dim - 1)};
}

int fiber_dim_by_count(const Diagram& d, int max_edges, int ambient_dim) {
    return d.segment_count() + ambient_dim * d.free_count() + (ambient_dim - 1) * (max_edges - d.edge_count());
}

}  // namespace gcx
