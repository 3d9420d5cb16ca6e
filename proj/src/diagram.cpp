#include "gcx/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gcx {

std::string to_string(Convention c) { return c == Convention::odd ? "odd" : "even"; }

Convention convention_from_string(const std::string& s) {
    if (s == "odd") return Convention::odd;
    if (s == "even") return Convention::even;
    throw std::invalid_argument("unknown convention '" + s + "'");
}

int Diagram::segment_count() const {
    int q = 0;
    for (const auto& s : strands) q += static_cast<int>(s.size());
    return q;
}

VertexTable::VertexTable(const Diagram& d) {
    int n = d.vertex_count();
    int top = n;
    for (const auto& s : d.strands)
        for (int v : s) top = std::max(top, v);
    for (int v : d.free) top = std::max(top, v);
    strand.assign(top + 1, -1);
    position.assign(top + 1, -1);
    listing.assign(top + 1, 0);
    int next = 1;
    for (int s = 0; s < d.strand_count(); ++s)
        for (int p = 0; p < static_cast<int>(d.strands[s].size()); ++p) {
            int v = d.strands[s][p];
            strand[v] = s;
            position[v] = p;
            listing[v] = next++;
        }
}

namespace {

std::string join_problems(const std::vector<std::string>& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += "; ";
        out += p[i];
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

Diagram validate(const Diagram& raw) {
    std::vector<std::string> problems;

    std::vector<int> ids;
    for (const auto& s : raw.strands) ids.insert(ids.end(), s.begin(), s.end());
    ids.insert(ids.end(), raw.free.begin(), raw.free.end());
    std::map<int, int> count;
    for (int v : ids) ++count[v];
    for (auto [v, c] : count)
        if (c > 1) problems.push_back("duplicate id " + std::to_string(v));
    if (raw.strands.empty()) problems.push_back("strand count must be positive");

    std::map<int, int> renumber;
    int next = 1;
    for (auto [v, c] : count) renumber[v] = next++;

    Diagram d;
    d.convention = raw.convention;
    for (const auto& s : raw.strands) {
        std::vector<int> t;
        for (int v : s) t.push_back(renumber[v]);
        d.strands.push_back(t);
    }
    for (int v : raw.free) d.free.push_back(renumber[v]);
    std::sort(d.free.begin(), d.free.end());
    for (const auto& e : raw.edges) {
        auto ia = renumber.find(e.a), ib = renumber.find(e.b);
        if (ia == renumber.end() || ib == renumber.end()) {
            problems.push_back("edge references unknown id " +
                               std::to_string(ia == renumber.end() ? e.a : e.b));
            continue;
        }
        Edge f = e;
        f.a = ia->second;
        f.b = ib->second;
        // End order of a loop carries no sign in the even convention.
        if (f.is_loop() && d.convention == Convention::even) f.loop_lr = true;
        d.edges.push_back(f);
    }
    if (!problems.empty()) throw ValidationError(problems);

    VertexTable vt(d);
    int n = d.vertex_count();
    for (const auto& e : d.edges)
        if (e.is_loop() && !vt.is_segment(e.a))
            problems.push_back("free self-loop at " + std::to_string(e.a));

    auto deg = edge_degrees(d);
    for (int v = 1; v <= n; ++v) {
        int val = deg[v] + (vt.is_segment(v) ? 2 : 0);
        if (val < 3) problems.push_back("valence < 3 at " + std::to_string(v));
    }

    // Components of edges + arcs must each meet a strand.
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
    for (const auto& s : d.strands)
        for (std::size_t p = 1; p < s.size(); ++p) unite(s[p - 1], s[p]);
    for (const auto& e : d.edges) unite(e.a, e.b);
    std::set<int> anchored;
    for (int v = 1; v <= n; ++v)
        if (vt.is_segment(v)) anchored.insert(find(v));
    std::set<int> reported;
    for (int v = 1; v <= n; ++v) {
        int r = find(v);
        if (!anchored.count(r) && reported.insert(r).second)
            problems.push_back("component not connected to L (contains " + std::to_string(v) + ")");
    }

    if (!problems.empty()) throw ValidationError(problems);
    return d;
}

std::vector<Element> contractible_elements(const Diagram& d) {
    std::vector<Element> out;
    for (const auto& s : d.strands)
        for (std::size_t p = 0; p + 1 < s.size(); ++p) out.push_back({Element::Kind::arc, s[p]});
    for (int i = 0; i < d.edge_count(); ++i)
        if (!d.edges[i].is_loop()) out.push_back({Element::Kind::edge, i});
    return out;
}

std::pair<int, int> endpoints(const Diagram& d, const Element& e) {
    if (e.kind == Element::Kind::edge) {
        if (e.index < 0 || e.index >= d.edge_count()) throw std::out_of_range("edge index");
        return {d.edges[e.index].a, d.edges[e.index].b};
    }
    for (const auto& s : d.strands)
        for (std::size_t p = 0; p + 1 < s.size(); ++p)
            if (s[p] == e.index) return {s[p], s[p + 1]};
    throw std::out_of_range("no arc starts at vertex " + std::to_string(e.index));
}

std::string describe(const Diagram& d, const Element& e) {
    auto [x, y] = endpoints(d, e);
    std::ostringstream os;
    if (e.kind == Element::Kind::arc)
        os << "arc " << x << "-" << y;
    else
        os << "edge " << d.edges[e.index].tail() << ">" << d.edges[e.index].head();
    return os.str();
}

std::vector<std::vector<int>> total_adjacency(const Diagram& d) {
    int n = d.vertex_count();
    std::vector<std::vector<int>> adj(n + 1);
    auto add = [&](int u, int v) {
        if (u == v) return;
        adj[u].push_back(v);
        adj[v].push_back(u);
    };
    for (const auto& s : d.strands)
        for (std::size_t p = 1; p < s.size(); ++p) add(s[p - 1], s[p]);
    for (const auto& e : d.edges) add(e.a, e.b);
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

std::vector<std::vector<int>> edge_adjacency(const Diagram& d) {
    int n = d.vertex_count();
    std::vector<std::vector<int>> adj(n + 1);
    for (const auto& e : d.edges) {
        if (e.is_loop()) continue;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

std::vector<int> edge_degrees(const Diagram& d) {
    std::vector<int> deg(d.vertex_count() + 1, 0);
    for (const auto& e : d.edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return deg;
}

bool has_multi_edge(const Diagram& d) {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : d.edges)
        if (!seen.insert({e.lo(), e.hi()}).second) return true;
    return false;
}

std::string to_text(const Diagram& d) {
    std::ostringstream os;
    os << "[";
    for (int s = 0; s < d.strand_count(); ++s) {
        if (s) os << " /";
        for (int v : d.strands[s]) os << " " << v;
    }
    os << " |";
    for (int v : d.free) os << " " << v;
    os << " ]";
    for (const auto& e : d.edges) {
        if (e.is_loop()) {
            os << " " << e.a << "o" << (e.forward == e.loop_lr ? "+" : "-");
        } else if (d.convention == Convention::odd) {
            os << " " << e.tail() << ">" << e.head();
        } else {
            os << " " << e.lo() << "-" << e.hi();
        }
    }
    return os.str();
}

}  // namespace gcx
