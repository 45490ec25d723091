#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/snapshot.hpp"

namespace mtsc {

/// Node sets are sorted, duplicate-free vectors of dense ids.
using NodeSet = std::vector<NodeId>;

inline NodeSet make_node_set(std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

inline std::size_t intersection_size(const NodeSet& a, const NodeSet& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

/// Jaccard index |a∩b| / |a∪b|. Undefined when both sets are empty.
inline double jaccard(const NodeSet& a, const NodeSet& b) {
    if (a.empty() && b.empty())
        throw UndefinedQuantityError("jaccard of two empty sets is undefined");
    const std::size_t inter = intersection_size(a, b);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

/// Conductance of a node set: boundary edges divided by the set's volume
/// (sum of member degrees), or by the complement's volume when that side is
/// smaller. 0 is best (no boundary), 1 is worst. Members absent from the
/// window contribute zero volume. Undefined for a zero-volume set; a set
/// covering the entire positive-degree vertex set has conductance 0 (no
/// boundary exists).
inline double conductance(const NodeSet& nodes, const Snapshot& graph) {
    if (nodes.empty()) throw UndefinedQuantityError("conductance of an empty set is undefined");
    std::vector<char> member(graph.node_count(), 0);
    for (NodeId u : nodes) member[static_cast<std::size_t>(u)] = 1;
    std::int64_t volume = 0;
    std::int64_t cut = 0;
    for (NodeId u : nodes) {
        volume += static_cast<std::int64_t>(graph.degree(u));
        for (NodeId v : graph.neighbors(u))
            if (!member[static_cast<std::size_t>(v)]) ++cut;
    }
    if (volume == 0)
        throw UndefinedQuantityError("conductance of a zero-volume set is undefined");
    if (cut == 0) return 0.0;
    const std::int64_t rest = 2 * static_cast<std::int64_t>(graph.edge_count()) - volume;
    return static_cast<double>(cut) / static_cast<double>(std::min(volume, rest));
}

/// Community quality QC = 1 - conductance, in [0,1] with 1 best. A set with
/// no presence in the window (all members isolated or absent) scores 0, the
/// worst value, so temporal expansion terminates there.
inline double qc(const NodeSet& nodes, const Snapshot& graph) {
    if (nodes.empty()) throw UndefinedQuantityError("qc of an empty set is undefined");
    bool any_present = false;
    for (NodeId u : nodes)
        if (graph.degree(u) > 0) { any_present = true; break; }
    if (!any_present) return 0.0;
    return 1.0 - conductance(nodes, graph);
}

}  // namespace mtsc
