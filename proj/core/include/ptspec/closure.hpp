// Context-free transitive closure of the points-to graph under the grammar
//
//   Transfer    -> eps | Transfer Assign | Transfer Store[f] Alias Load[f]
//   TransferBar -> eps | AssignBar TransferBar
//                      | LoadBar[f] Alias StoreBar[f] TransferBar
//   Alias       -> TransferBar NewBar New Transfer
//   FlowsTo     -> New Transfer
//
// optionally extended with specification rules (premise edges imply a
// conclusion edge). Long productions are binarized through internal
// nonterminals; results expose only the four public nonterminals.
#ifndef PTSPEC_CLOSURE_HPP
#define PTSPEC_CLOSURE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ptspec/graph.hpp"

namespace ptspec {

enum class Nonterminal { Transfer, TransferBar, Alias, FlowsTo };

std::string to_string(Nonterminal nt);

using DerivedEdge = std::tuple<int, Nonterminal, int>;

/// A specification rule compiled to graph vertices: when every premise edge is
/// derived, the conclusion edge (and its reversal) is added.
struct CompiledRule {
    std::vector<DerivedEdge> premises;
    DerivedEdge conclusion;
};

struct ClosureResult {
    std::vector<DerivedEdge> derived;  // sorted, deduplicated
    // Optional provenance for debugging: edge -> (production, left, right).
    std::map<DerivedEdge, std::tuple<std::string, DerivedEdge, DerivedEdge>> provenance;

    bool contains(int src, Nonterminal nt, int dst) const;
    std::vector<DerivedEdge> by_nonterminal(Nonterminal nt) const;
};

struct ClosureOptions {
    bool record_provenance = false;
};

/// Least fixpoint of the grammar plus spec rules. `seeds` pre-populates
/// derived edges (used to check idempotence).
ClosureResult closure(const PTGraph& g, const std::vector<CompiledRule>& rules = {},
                      const std::vector<DerivedEdge>& seeds = {},
                      const ClosureOptions& opts = {});

/// Points-to pairs (variable vertex, allocation-site vertex): x points to o
/// whenever o -FlowsTo-> x was derived.
std::vector<std::pair<int, int>> points_to(const ClosureResult& c);

/// Deterministic sorted dump, one `src NONTERMINAL dst` line per derived edge.
std::string dump_closure(const ClosureResult& c, const VertexTable& vt);

/// Independent oracle: every derivation witnessed by a path of at most
/// max_path_len edges, computed by a length-indexed dynamic program directly
/// over the un-binarized productions. Intended for small graphs and
/// cross-checks against closure().
ClosureResult brute_force_closure(const PTGraph& g, int max_path_len);

/// Literal oracle for tiny graphs: enumerates every path up to max_path_len
/// and CYK-parses its label string against the un-binarized grammar.
ClosureResult enumerated_paths_closure(const PTGraph& g, int max_path_len);

}  // namespace ptspec

#endif
