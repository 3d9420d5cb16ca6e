#include "gcx/complex.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <numeric>
#include <set>

namespace gcx {

Grading grading(const Diagram& d) {
    int e = d.edge_count(), q = d.segment_count(), t = d.free_count();
    return {e - t, 2 * e - q - 3 * t};
}

void CochainElement::add_canonical(const Diagram& d, const Rational& c) {
    Rational v = normalize_coefficient(c, ring_);
    if (v == 0) return;
    auto it = terms_.find(d);
    if (it == terms_.end()) {
        terms_.emplace(d, v);
        return;
    }
    it->second = normalize_coefficient(it->second + v, ring_);
    if (it->second == 0) terms_.erase(it);
}

void CochainElement::add(const Diagram& d, const Rational& c) {
    auto r = canonicalize(d, ring_);
    if (auto* s = std::get_if<SignedDiagram>(&r)) add_canonical(s->diagram, c * s->sign);
}

Rational CochainElement::coefficient(const Diagram& canonical) const {
    auto it = terms_.find(canonical);
    return it == terms_.end() ? Rational(0) : it->second;
}

CochainElement& CochainElement::operator+=(const CochainElement& o) {
    for (const auto& [d, c] : o.terms_) add_canonical(d, c);
    return *this;
}

CochainElement CochainElement::operator*(const Rational& c) const {
    CochainElement out(ring_, convention_);
    for (const auto& [d, v] : terms_) out.add_canonical(d, v * c);
    return out;
}

namespace {

bool connected_to_strands(int q, int t, const std::vector<std::pair<int, int>>& edges,
                          const std::vector<int>& strandSizes) {
    int n = q + t;
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    int base = 1;
    for (int s : strandSizes) {
        for (int p = 1; p < s; ++p) parent[find(base + p)] = find(base + p - 1);
        base += s;
    }
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    std::set<int> anchored;
    for (int v = 1; v <= q; ++v) anchored.insert(find(v));
    for (int v = q + 1; v <= n; ++v)
        if (!anchored.count(find(v))) return false;
    return true;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Diagram> generate_basis(int m, int n, int k, Convention convention, Ring ring,
                                    const BasisOptions& opt) {
    if (m < 1 || n < 0 || k < 0) throw std::invalid_argument("generate_basis: need m >= 1, n >= 0, k >= 0");
    std::set<Diagram> found;
    for (int t = 0;; ++t) {
        int q = 2 * n - t - k;
        if (q < 0) break;
        int E = n + t;
        if (q == 0 && t > 0) continue;
        if (q + t > opt.max_vertices)
            throw BudgetError("generate_basis: " + std::to_string(q + t) + " vertices exceed the budget of " +
                              std::to_string(opt.max_vertices));
        std::vector<std::vector<int>> comps;
        std::vector<int> cur;
        compositions(q, m, cur, comps);
        int N = q + t;
        std::vector<int> base(N + 1);
        for (int v = 1; v <= N; ++v) base[v] = v <= q ? 1 : 3;

        for (const auto& comp : comps) {
            std::vector<int> deg(N + 1, 0);
            std::vector<std::pair<int, int>> edges;
            int excess = 0;  // sum over finished vertices of deg - base
            // Vertex-by-vertex: when vertex v is processed, choose its loop and its edges
            // to later vertices; its degree is final afterwards.
            std::function<void(int)> visit_vertex;
            std::function<void(int, int)> choose_later;
            auto emit = [&]() {
                if (static_cast<int>(edges.size()) != E) return;
                if (!connected_to_strands(q, t, edges, comp)) return;
                Diagram d;
                d.convention = convention;
                int next = 1;
                for (int s : comp) {
                    std::vector<int> st;
                    for (int p = 0; p < s; ++p) st.push_back(next++);
                    d.strands.push_back(st);
                }
                for (int v = q + 1; v <= N; ++v) d.free.push_back(v);
                for (auto [a, b] : edges) d.edges.push_back(Edge{a, b, true, true});
                auto r = canonicalize(d, ring);
                if (auto* s = std::get_if<SignedDiagram>(&r)) found.insert(std::move(s->diagram));
            };
            auto finish_vertex = [&](int v) {
                if (deg[v] < base[v]) return;
                int add = deg[v] - base[v];
                if (excess + add > k) return;
                excess += add;
                visit_vertex(v + 1);
                excess -= add;
            };
            choose_later = [&](int v, int w) {
                if (static_cast<int>(edges.size()) > E) return;
                if (w > N) {
                    finish_vertex(v);
                    return;
                }
                // Skip w.
                choose_later(v, w + 1);
                // Take edge v-w if w still has room.
                if (deg[w] + 1 <= base[w] + k && deg[v] + 1 <= base[v] + k) {
                    ++deg[v];
                    ++deg[w];
                    edges.emplace_back(v, w);
                    choose_later(v, w + 1);
                    edges.pop_back();
                    --deg[v];
                    --deg[w];
                }
            };
            visit_vertex = [&](int v) {
                if (v > N) {
                    if (excess == k) emit();
                    return;
                }
                choose_later(v, v + 1);
                if (v <= q && deg[v] + 2 <= base[v] + k) {
                    deg[v] += 2;
                    edges.emplace_back(v, v);
                    choose_later(v, v + 1);
                    edges.pop_back();
                    deg[v] -= 2;
                }
            };
            visit_vertex(1);
        }
    }
    return {found.begin(), found.end()};
}

CochainElement coboundary(const Diagram& d, Ring ring, CombinedFace policy) {
    CochainElement out(ring, d.convention);
    for (const auto& e : contractible_elements(d)) {
        if (policy == CombinedFace::single && parallels_arc(d, e)) continue;
        auto r = contract(d, e, ring);
        if (!r.nonzero()) continue;
        out.add_canonical(r.diagram, Rational(epsilon(d, e) * r.sign));
    }
    return out;
}

CochainElement coboundary(const CochainElement& x, CombinedFace policy) {
    CochainElement out(x.ring(), x.convention());
    std::set<Grading> gradings;
    std::set<int> strands;
    for (const auto& [d, c] : x.terms()) {
        gradings.insert(grading(d));
        strands.insert(d.strand_count());
    }
    if (gradings.size() > 1 || strands.size() > 1)
        throw std::invalid_argument("coboundary: input mixes gradings");
    for (const auto& [d, c] : x.terms()) out += coboundary(d, x.ring(), policy) * c;
    return out;
}

IntMatrix SparseMatrix::dense() const {
    IntMatrix A = IntMatrix::Zero(rows, cols);
    for (const auto& [i, j, v] : entries) A(i, j) = v;
    return A;
}

namespace {
std::atomic<int> worker_count{1};
}

void set_jobs(int jobs) { worker_count = std::max(1, jobs); }
int jobs() { return worker_count; }

SparseMatrix coboundary_matrix(const std::vector<Diagram>& source, const std::vector<Diagram>& target,
                               Ring ring, CombinedFace policy) {
    SparseMatrix M;
    M.rows = static_cast<int>(target.size());
    M.cols = static_cast<int>(source.size());
    std::map<Diagram, int> row;
    for (int i = 0; i < M.rows; ++i) row[target[i]] = i;
    std::vector<CochainElement> images(M.cols);
    const int workers = std::min(jobs(), std::max(1, M.cols));
    std::vector<std::future<void>> pending;
    for (int w = 0; w < workers; ++w)
        pending.push_back(std::async(std::launch::async, [&, w] {
            for (int j = w; j < M.cols; j += workers) images[j] = coboundary(source[j], ring, policy);
        }));
    for (auto& f : pending) f.get();
    for (int j = 0; j < M.cols; ++j) {
        for (const auto& [d, c] : images[j].terms()) {
            auto it = row.find(d);
            if (it == row.end())
                throw std::logic_error("coboundary lands outside the target basis: " + to_text(d));
            M.entries.emplace_back(it->second, j, numerator(c));
        }
    }
    std::sort(M.entries.begin(), M.entries.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
              });
    return M;
}

SparseMatrix coboundary_matrix(int m, int n, int k, Convention convention, Ring ring, CombinedFace policy) {
    auto src = generate_basis(m, n, k, convention, ring);
    auto dst = generate_basis(m, n, k + 1, convention, ring);
    return coboundary_matrix(src, dst, ring, policy);
}

std::vector<Rational> coordinates(const CochainElement& x, const std::vector<Diagram>& basis) {
    std::map<Diagram, int> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
    std::vector<Rational> v(basis.size(), Rational(0));
    for (const auto& [d, c] : x.terms()) {
        auto it = index.find(d);
        if (it == index.end()) throw std::invalid_argument("term outside basis: " + to_text(d));
        v[it->second] = c;
    }
    return v;
}

CochainElement from_coordinates(const std::vector<Rational>& v, const std::vector<Diagram>& basis, Ring ring,
                                Convention convention) {
    CochainElement out(ring, convention);
    for (std::size_t i = 0; i < v.size(); ++i) out.add_canonical(basis[i], v[i]);
    return out;
}

}  // namespace gcx
