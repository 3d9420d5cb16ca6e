#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcx/complex.hpp"
#include "gcx/diagram.hpp"
#include "gcx/scalar.hpp"

namespace gcx {

// Undirected multigraph on arbitrary integer vertex names. Self-loops are ignored.
struct GraphView {
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> edges;
};

// T(G): edges plus arcs. U(G): edges only.
GraphView total_graph(const Diagram& d);
GraphView edge_graph(const Diagram& d);
GraphView induced(const GraphView& g, const std::vector<int>& subset);

struct BlockDecomposition {
    std::vector<std::vector<int>> blocks;         // sorted vertex sets; isolated vertices are singleton blocks
    std::vector<int> cut_vertices;                // sorted
    std::vector<std::pair<int, int>> tree_edges;  // (block index, cut vertex)

    // sum |V(block)| == |V| + |tree_edges| - |cut_vertices|
    bool counting_identity_holds = false;
    // The uncorrected form sum |V(block)| == |V| + |tree_edges|.
    bool literal_identity_holds = false;
};

BlockDecomposition blocks_and_tree(const GraphView& g);

bool is_connected(const GraphView& g);
// At least three vertices and no cut vertex, or exactly two vertices joined by an edge.
bool is_biconnected(const GraphView& g);

enum class FaceKind { principal, hidden, infinity };
std::string to_string(FaceKind k);

struct FaceDescriptor {
    FaceKind kind = FaceKind::principal;
    std::vector<int> vertices;    // sorted ids; a pair for principal faces
    std::vector<Element> labels;  // principal only: arcs and non-loop edges joining the pair

    auto operator<=>(const FaceDescriptor&) const = default;
};

struct FaceOptions {
    int max_vertices = 20;
};

// Principal faces first (by pair), then hidden, then infinity, each in subset order.
std::vector<FaceDescriptor> enumerate_faces(const Diagram& d, const FaceOptions& opt = {});

// The faces left in the degenerate locus: principal faces whose quotient has a multiple
// edge, hidden faces with no bivalent free vertex and no edgeless segment vertex, and
// every face at infinity.
bool in_degenerate_locus(const Diagram& d, const FaceDescriptor& f);
std::vector<FaceDescriptor> degenerate_faces(const Diagram& d, const FaceOptions& opt = {});

enum class CertificateCase { I, II, III, IV, principal_multiedge };
std::string to_string(CertificateCase c);

struct CodimCertificate {
    CertificateCase kind = CertificateCase::I;
    int r = 0;           // segment vertices in the face
    int s = 0;           // free vertices in the face
    int edge_count = 0;  // edges whose directions the screen determines
    Rational bound;        // (d-1) * edge_count - screen dimension
    Rational valence_bound;  // simplified bound from the valence inequalities
    bool anomalous = false;
};

// Throws std::invalid_argument for principal faces whose quotient has no multiple edge.
CodimCertificate codim_certificate(const FaceDescriptor& f, int ambient_dim, const Diagram& d);

// Hidden faces with no codimension argument in dimension 3: the face is a whole
// component of U(G), trivalent at free vertices, univalent at segment vertices, and no
// other component has a segment vertex between its segment vertices.
std::vector<FaceDescriptor> anomalous_faces(const Diagram& d, const FaceOptions& opt = {});

struct CornerOptions {
    int max_size = 2;
    bool include_infinity = false;
    long long max_families = 1'000'000;
};

// Families are lists of indices into `faces`.
struct CornerPoset {
    std::vector<FaceDescriptor> faces;
    std::vector<std::vector<int>> families;
};

// Two face sets are compatible when disjoint, nested, or sharing exactly one vertex.
// Faces at infinity are compared as S + {infinity}.
bool compatible(const FaceDescriptor& a, const FaceDescriptor& b);
CornerPoset corner_poset(const Diagram& d, const CornerOptions& opt = {});

// Coefficients by degree.
using Polynomial = std::vector<Integer>;
std::string to_string(const Polynomial& p);

class OrderingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// prod_k (1 + e_k t^(dim-1)), e_k = distinct earlier neighbours of the k-th vertex.
// Throws OrderingError unless every earlier neighbourhood is a clique.
Polynomial poincare_polynomial(const GraphView& g, int ambient_dim, const std::vector<int>& order);

enum class PoincareMode { ambient, fiber };

// ambient: configuration space of T(G). fiber: the link fixed; only free vertices
// contribute, neighbours counted in U(G), and segment vertices (which never collide)
// must come first. An empty order means the default: ids in increasing order.
Polynomial poincare_polynomial(const Diagram& d, int ambient_dim, PoincareMode mode,
                               std::vector<int> order = {});

struct Dimensions {
    int fiber_dim = 0;
    int class_degree = 0;
    int sphere_dim = 0;
};

Dimensions dimensions(const Diagram& d, int ambient_dim);
// Throws std::invalid_argument on mixed gradings.
Dimensions dimensions(const CochainElement& x, int ambient_dim);
// q + d t + (d-1)(N - E) for one support diagram with N the maximal edge count.
int fiber_dim_by_count(const Diagram& d, int max_edges, int ambient_dim);

}  // namespace gcx
