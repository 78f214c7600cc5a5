#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uplan/switches.hpp"

namespace uplan {

// Decomposition tree of a biconnected series-parallel (multi)graph, rooted at a
// reference edge incident to the designated pole. The root is always a parallel
// node having the reference edge as one of its leaves.

enum class SpKind { edge, series, parallel };

struct SpNode {
    SpKind kind = SpKind::edge;
    int edge = -1;              // edge leaves: edge index in the dag
    std::vector<int> children;  // series: in chain order; parallel: discovery order
    int pole_a = -1;            // component endpoints; series chains run pole_a -> pole_b
    int pole_b = -1;
};

struct DecompTree {
    std::vector<SpNode> nodes;
    int root = -1;
    int ref_edge = -1;
    int ref_leaf = -1;  // node index of the reference edge leaf under the root
};

// Rooted decomposition with the reference edge chosen as the smallest edge index
// incident to the given pole. Fails with NotBiconnected / NotSeriesParallel.
Expected<DecompTree> decompose(const Dag& g, int pole);
Expected<DecompTree> decompose_at_edge(const Dag& g, int ref_edge);

// Edge indices covered by the subtree of a node, in no particular order.
std::vector<int> subtree_edges(const DecompTree& t, int node);

// All combinatorial embeddings of a biconnected series-parallel dag: every
// rotation system reachable by permuting parallel children, times every choice
// of outer face, deduplicated. Fails with TooLarge beyond the limit.
Expected<std::vector<PlaneDag>> enumerate_embeddings_sp(const Dag& g, std::size_t limit = 1000000);

// Boundary path classification of a pole-to-pole component. Letters are stored
// positionally in the single-source naming; in single-sink mode the same slots
// carry the mirrored alphabet (far: Ec, Wc, L, R, Ecc, Wcc; near: W, E) and only
// printing and measurement differ. The far order below is the left-to-right
// order at the pole; near order is L < R.

enum class FarLetter : std::uint8_t { Rcc = 0, Lcc, W, E, Rc, Lc };
enum class NearLetter : std::uint8_t { L = 0, R };

struct PathType {
    FarLetter far = FarLetter::W;
    NearLetter near = NearLetter::L;

    friend bool operator==(const PathType&, const PathType&) = default;
};

// Component type: left and right boundary path types, the four free flags, the
// single-edge marker, and which tree pole plays the near role (south pole in
// single-source mode, north pole in single-sink mode).
//
// Flag semantics: near_lfree is "the left path's near edge is free on the left
// at the near pole", near_rfree is the right path's freedom on the right, and
// the far flags likewise at the far pole. An edge is free on the side it turns
// toward (walking near to far); on the other side it is free iff its bend is
// not contained in an edge not incident to the pole.
struct CompType {
    PathType left;
    PathType right;
    bool near_lfree = true;
    bool near_rfree = true;
    bool far_lfree = true;
    bool far_rfree = true;
    bool single_edge = false;  // the whole component is one edge
    bool left_single = false;  // the left boundary path is one edge
    bool right_single = false;
    bool near_is_a = true;

    friend bool operator==(const CompType&, const CompType&) = default;
};

// Dense key; also the sort order used for deterministic output.
std::uint32_t comp_type_key(const CompType& t);

// True when the path's far letter turns left (toward the west) at the far pole
// walking near to far: Rcc, E, Rc. The remaining letters turn right.
bool far_auto_left(FarLetter f);

const char* far_letter_name(FarLetter f, Mode mode);
const char* near_letter_name(NearLetter n, Mode mode);
std::string comp_type_name(const CompType& t, Mode mode);

// Adjacency predicate: can a component of type a sit immediately left of one of
// type b in a parallel composition? Encodes the ordering of letters, the
// equal-letter free-flag requirements and the mixed wrap requirement at both
// poles. The global single-edge placement rule is checked separately.
bool p_adjacent(const CompType& a, const CompType& b);

// A letter may repeat consecutively iff both boundary paths have the same type
// and all four flags are positive.
bool starrable(const CompType& t);

// Simple regular expression: a sequence of letters, some starred; no leading
// star and no two consecutive stars. A letter value may occur more than once;
// a value must be selected at least as often as it occurs unstarred, and may
// exceed that count only if some occurrence is starred.
struct SimpleRegex {
    std::vector<CompType> letters;
    std::vector<bool> starred;
};

// Selection per the constant-alphabet matching lemma: avail[i] lists the letter
// indices of rho available to child i; returns one letter index per child such
// that the selected multiset can be ordered to match rho, or nullopt.
std::optional<std::vector<int>> regex_select(const SimpleRegex& rho,
                                             const std::vector<std::vector<int>>& avail);

// Provenance of a type entry, enough to replay the embedding choices.
struct ParProv {
    std::vector<int> order;  // child positions west to east
    std::vector<int> pick;   // entry index per ordered child
};

enum class SeriesCase : std::uint8_t {
    chain = 0,      // far pole of the first part is the near pole of the second
    hat_first_west, // shared far poles; first part embedded west of the second
    hat_second_west,
};

struct SerProv {
    int first = -1;   // entry index in the first operand set
    int second = -1;  // entry index in the second operand set
    SeriesCase merge_case = SeriesCase::chain;
    std::uint8_t variant = 0;  // bit 0: left far flag degraded, bit 1: right
};

struct TypeEntry {
    CompType type;
    ParProv par;
    SerProv ser;
};

struct TypeSet {
    std::vector<TypeEntry> entries;

    bool contains(const CompType& t) const;
};

// Achievable types of a single edge. In single-source mode the near pole is the
// tail; in single-sink mode it is the head. near_is_a tells whether that vertex
// is pole_a of the Q-node.
TypeSet edge_types(Mode mode, bool near_is_a);

// Types of a parallel composition of the children, left to right orders chosen
// freely. All children share both poles; entries whose near pole disagrees with
// the requested orientation are ignored by the caller's filtering.
TypeSet parallel_types(const std::vector<const TypeSet*>& children);

enum class SeriesMerge { chain, hat };

// Types of a series merge of two parts. For chain, the far pole of first is
// identified with the near pole of second and the result runs from first's near
// pole to second's far pole. For hat, the far poles are identified and the
// result runs from first's near pole to second's near pole; both embedding
// orders are produced. Entries' near_is_a fields are ignored here; the caller
// assigns pole roles on the result.
TypeSet series_types(const TypeSet& first, const TypeSet& second, SeriesMerge merge);

// Full bottom-up DP state over a decomposition tree. For series nodes, steps
// holds the fold prefixes: steps[n][0] mirrors the first child's set and
// steps[n][j] the types of the chain prefix through child j. Stored provenance
// always indexes first = the previous prefix set, second = the child set; which
// operand sat below in a chain merge is recovered from the entries' poles.
struct SpTypesResult {
    DecompTree tree;
    std::vector<TypeSet> types;               // per node
    std::vector<std::vector<TypeSet>> steps;  // series nodes: fold prefixes
};

Expected<SpTypesResult> sp_compute_types(const Dag& g, Mode mode);

// Replayable embedding certificate: per parallel node the west-to-east order of
// its children (indices into SpNode::children), per series node one SeriesCase
// per fold step (second child onward). Other nodes have empty vectors.
struct SpCertificate {
    Mode mode = Mode::SingleSource;
    std::vector<std::vector<int>> choices;
    CompType root_type;
};

struct VariableDecision {
    bool yes = false;
    std::vector<CompType> root_types;  // achievable types with the mode pole near
    std::optional<SpCertificate> cert;
};

// Variable-embedding test for biconnected series-parallel dags with a single
// source (or sink). Errors: WrongSourceCount, NotBiconnected, NotSeriesParallel.
Expected<VariableDecision> test_variable(const Dag& g, Mode mode);

// Materializes the embedding chosen by a certificate; the result passes
// test_fixed in the certificate's mode. Errors: InconsistentCertificate.
Expected<PlaneDag> certificate_to_plane_dag(const Dag& g, const SpCertificate& cert);

}  // namespace uplan
