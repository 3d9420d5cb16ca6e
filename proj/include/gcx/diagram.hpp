#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcx {

enum class Convention { odd, even };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

// An edge runs a -> b when `forward`, b -> a otherwise. For a self-loop (a == b),
// `loop_lr` says whether the end recorded as `a` comes first along the strand.
struct Edge {
    int a = 0;
    int b = 0;
    bool forward = true;
    bool loop_lr = true;

    bool is_loop() const { return a == b; }
    int tail() const { return forward ? a : b; }
    int head() const { return forward ? b : a; }
    int lo() const { return a < b ? a : b; }
    int hi() const { return a < b ? b : a; }

    auto operator<=>(const Edge&) const = default;
};

struct Diagram {
    Convention convention = Convention::odd;
    std::vector<std::vector<int>> strands;
    std::vector<int> free;
    std::vector<Edge> edges;

    int strand_count() const { return static_cast<int>(strands.size()); }
    int segment_count() const;
    int free_count() const { return static_cast<int>(free.size()); }
    int vertex_count() const { return segment_count() + free_count(); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool is_chord_diagram() const { return free.empty(); }

    auto operator<=>(const Diagram&) const = default;
};

// Id-indexed lookup tables (index 0 unused).
struct VertexTable {
    std::vector<int> strand;    // -1 for free vertices
    std::vector<int> position;  // position on the strand
    std::vector<int> listing;   // 1-based strand-major index of a segment vertex, 0 for free

    explicit VertexTable(const Diagram& d);

    bool is_segment(int v) const { return strand[v] >= 0; }
    bool adjacent_on_strand(int u, int v) const {
        return is_segment(u) && is_segment(v) && strand[u] == strand[v] &&
               std::abs(position[u] - position[v]) == 1;
    }
    // True when u precedes v on their common strand.
    bool precedes(int u, int v) const {
        return strand[u] == strand[v] && position[u] < position[v];
    }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Checks every diagram invariant and renumbers ids to 1..n preserving their order.
Diagram validate(const Diagram& raw);

// A contractible element: a non-loop edge (by index into `edges`), or the arc that
// starts at segment vertex `index` and ends at its successor on the strand.
struct Element {
    enum class Kind { edge, arc };
    Kind kind = Kind::edge;
    int index = 0;

    auto operator<=>(const Element&) const = default;
};

std::vector<Element> contractible_elements(const Diagram& d);
std::pair<int, int> endpoints(const Diagram& d, const Element& e);
std::string describe(const Diagram& d, const Element& e);

// Adjacency of T(G): edges plus arcs, loops dropped, as id-indexed neighbour lists.
std::vector<std::vector<int>> total_adjacency(const Diagram& d);
// Adjacency of U(G): edges only.
std::vector<std::vector<int>> edge_adjacency(const Diagram& d);

// Edge-end count at each vertex (loops count twice), id-indexed.
std::vector<int> edge_degrees(const Diagram& d);

bool has_multi_edge(const Diagram& d);

// Short human-readable rendering, e.g. "[1 2 3 | 4] 1>4 2>4 3>4".
std::string to_text(const Diagram& d);

}  // namespace gcx
