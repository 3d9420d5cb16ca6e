#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "gcx/diagram.hpp"
#include "gcx/scalar.hpp"

namespace gcx {

enum class ZeroReason { pinch, multi_edge, automorphism };
std::string to_string(ZeroReason r);

struct SignedDiagram {
    Diagram diagram;
    int sign = 1;
};

// Full result of the canonical labeling search.
struct CanonicalForm {
    Diagram diagram;                  // canonical representative
    int sign = 1;                     // input = sign * diagram
    bool reversing_automorphism = false;
    std::vector<int> relabel;         // input id -> canonical id
    std::vector<int> edge_position;   // input edge index -> canonical edge index
};

// Returns nullopt when the diagram has a multiple edge.
std::optional<CanonicalForm> canonical_form(const Diagram& d);

using CanonResult = std::variant<SignedDiagram, ZeroReason>;

// `ring` decides whether an orientation-reversing automorphism makes the diagram vanish.
CanonResult canonicalize(const Diagram& d, Ring ring = Ring::Z);

std::optional<int> iso_sign(const Diagram& a, const Diagram& b);

// Exhaustive over every bijection of free vertices; segment vertices are rigid.
std::set<int> automorphism_signs(const Diagram& d);

// Sign relating `d` to the diagram obtained by renaming ids through `relabel`
// (odd convention: permutation sign; even convention: +1 since segment order is fixed).
int relabel_sign(const Diagram& d, const std::vector<int>& relabel);
Diagram apply_relabel(const Diagram& d, const std::vector<int>& relabel);

// Orientation sign of a self-loop relative to the normalized loop.
inline int loop_sign(const Edge& e) { return (e.forward ? 1 : -1) * (e.loop_lr ? 1 : -1); }

// Contraction before canonicalization. `vertex_map` sends old ids to new ids,
// `edge_map` old edge indices to new ones (-1 when the edge disappears).
struct LabeledContraction {
    Diagram diagram;
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
};

// nullopt for a pinch. Throws on loops.
std::optional<LabeledContraction> contract_labeled(const Diagram& d, const Element& e);

// Boundary sign of the element in d.
int epsilon(const Diagram& d, const Element& e);

struct ContractionOutcome {
    enum class Kind { nonzero, zero_pinch, zero_multi_edge, zero_automorphism };
    Kind kind = Kind::nonzero;
    Diagram diagram;
    int sign = 1;

    bool nonzero() const { return kind == Kind::nonzero; }
};

ContractionOutcome contract(const Diagram& d, const Element& e, Ring ring = Ring::Z);

// True when the element is a chord joining L-adjacent segment vertices (it shares its
// diagonal with the arc between them).
bool parallels_arc(const Diagram& d, const Element& e);

}  // namespace gcx
