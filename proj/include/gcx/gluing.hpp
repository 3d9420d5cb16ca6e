#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcx/homology.hpp"
#include "gcx/strata.hpp"

namespace gcx {

enum class Parity { odd, even };
std::string to_string(Parity p);

struct SpaceEntry {
    Diagram diagram;
    Integer coefficient;
    int copies = 1;
    int orientation = 1;  // sign of the coefficient
    int absent_edges = 0;
};

// One face of one copy of one space.
struct FaceRef {
    int space = 0;
    int copy = 0;
    FaceDescriptor face;

    auto operator<=>(const FaceRef&) const = default;
};

// Sphere factors of a space with E edges: 0..E-1 are the edges in order, E..N-1 the
// absent factors.
struct Identification {
    Element label_a, label_b;
    std::vector<int> quotient_map;  // ids of G_a/label_a -> ids of G_b/label_b (index 0 unused)
    std::vector<int> vertex_map;    // ids of G_a -> ids of G_b (index 0 unused)
    std::vector<int> sphere_perm;   // factor of a -> factor of b
    std::vector<int> flips;         // factors of a whose direction is reversed, sorted
    bool transposed = false;        // endpoints of label_a sent to the endpoints of label_b crosswise
    // The factor carrying the collision direction (or the absent factor standing in for it).
    int special_a = -1;
    int special_b = -1;
};

struct Pairing {
    FaceRef a, b;
    Identification id;
    Diagram class_diagram;
};

struct PrincipalFold {
    FaceRef face;
    Element label;
    std::vector<int> automorphism;  // on ids of the quotient
    std::vector<int> sphere_perm;
    std::vector<int> flips;
    bool transposed = false;
    int special = -1;
};

struct HiddenFold {
    FaceRef face;
    int v = 0, u = 0, w = 0;  // x_v -> x_u + x_w - x_v
    int edge_uv = -1, edge_vw = -1;
    std::vector<int> flips;
};

enum class CollapseKind { c1, c2 };
std::string to_string(CollapseKind k);

struct Collapse {
    FaceRef face;
    CollapseKind kind = CollapseKind::c1;
    std::vector<int> forgotten;  // vertices whose relative rates of approach are dropped
    std::string description;
};

enum class DegenerateReason { multi_edge_quotient, rigid_hidden, infinity, empty };
std::string to_string(DegenerateReason r);

struct DegenerateFace {
    FaceRef face;
    DegenerateReason reason = DegenerateReason::infinity;
    std::optional<CodimCertificate> certificate;  // none for empty faces
};

struct FundamentalCycleReport {
    bool pass = true;
    int faces_total = 0;
    int faces_accounted = 0;
    std::vector<std::string> unbalanced;
};

struct GluingPlan {
    Parity parity = Parity::odd;
    Ring ring = Ring::Z;
    int ambient_dim = 3;
    int N = 0;
    std::vector<SpaceEntry> spaces;
    std::vector<Pairing> pairings;
    std::vector<PrincipalFold> principal_folds;
    std::vector<HiddenFold> hidden_folds;
    std::vector<Collapse> collapses;
    std::vector<DegenerateFace> degenerate;
    FundamentalCycleReport verification;
};

class PlanError : public std::runtime_error {
public:
    PlanError(const std::string& kind, std::vector<std::string> details);
    const std::string& kind() const { return kind_; }
    const std::vector<std::string>& details() const { return details_; }

private:
    std::string kind_;
    std::vector<std::string> details_;
};

struct PlanOptions {
    int ambient_dim = 3;
    FaceOptions faces;
};

// Odd ambient dimension over Z. Faces are paired by their signed contributions to d,
// so the input need not be consistently oriented.
GluingPlan plan_gluing(const OrientedCocycle& gamma, const PlanOptions& opt = {});
GluingPlan plan_gluing(const CochainElement& gamma, const PlanOptions& opt = {});

GluingPlan plan_mod2(const CochainElement& gamma, const PlanOptions& opt = {});
GluingPlan plan_chord_mod2(const Diagram& chord_diagram, const FaceOptions& faces = {});

FundamentalCycleReport verify_fundamental_cycle(const GluingPlan& plan);

// Isomorphism-induced identification of the faces G_a/e and G_b/f; `transposed`
// chosen so the flip set is even when a collision-direction factor exists.
std::optional<Identification> identify(const Diagram& a, const Element& e, int absent_a, const Diagram& b,
                                       const Element& f, int absent_b);

struct SphericalSignature {
    std::string source;        // "pairing 0", "principal fold 2", ...
    std::vector<int> perm;     // 1-based images of factors 1..N
    std::vector<int> flips;    // 1-based
};

std::vector<SphericalSignature> spherical_signatures(const GluingPlan& plan);

// Membership of a signature in the symmetry group used for the plan.
bool in_symmetry_group(const SphericalSignature& s, Parity parity, Ring ring);

struct SplitRecord {
    std::vector<int> set;          // face set on the source side
    std::vector<int> transported;  // its image on the other side
    bool biconnected = true;
    std::vector<std::vector<int>> parts;  // components after removing the contracted pair
    int increase = 0;
};

struct CornerChange {
    int side = 0;  // 0: corners of G_a transported to G_b; 1: the reverse
    std::vector<std::vector<int>> family;  // the contracted pair first, then nested sets
    int codim_before = 0;
    int codim_after = 0;
};

struct CornerAnalysis {
    std::vector<SplitRecord> splits[2];
    std::vector<CornerChange> corners;
};

struct CornerAnalysisOptions {
    int max_size = 3;
    long long max_corners = 200'000;
};

CornerAnalysis corner_collapse_analysis(const Diagram& a, const Element& e, const Diagram& b, const Element& f,
                                        const Identification& id, const CornerAnalysisOptions& opt = {});
CornerAnalysis corner_collapse_analysis(const GluingPlan& plan, int pairing,
                                        const CornerAnalysisOptions& opt = {});

}  // namespace gcx
