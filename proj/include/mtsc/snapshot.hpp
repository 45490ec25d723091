#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/linkstream.hpp"
#include "mtsc/parallel.hpp"

namespace mtsc {

/// Static simple graph aggregated over one window of width gamma.
/// An edge exists iff at least one interaction occurred between the pair
/// inside the window; no self-loops, no parallel edges. The node universe is
/// the full stream node table, so isolated nodes are allowed. Immutable.
class Snapshot {
  public:
    /// Builds from a unique, canonicalized (u < v) sorted edge list.
    static Snapshot from_sorted_edges(std::size_t node_count,
                                      std::vector<std::pair<NodeId, NodeId>> edges,
                                      std::vector<std::int32_t> multiplicities,
                                      TimeInterval window, Timestamp gamma) {
        Snapshot s;
        s.window_ = window;
        s.gamma_ = gamma;
        s.edge_count_ = edges.size();
        s.offsets_.assign(node_count + 1, 0);
        for (const auto& [u, v] : edges) {
            ++s.offsets_[static_cast<std::size_t>(u) + 1];
            ++s.offsets_[static_cast<std::size_t>(v) + 1];
        }
        for (std::size_t i = 1; i < s.offsets_.size(); ++i) s.offsets_[i] += s.offsets_[i - 1];
        s.neighbors_.resize(2 * edges.size());
        s.edge_multiplicity_.resize(2 * edges.size());
        std::vector<std::size_t> cursor(s.offsets_.begin(), s.offsets_.end() - 1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto [u, v] = edges[i];
            const std::int32_t m = multiplicities.empty() ? 1 : multiplicities[i];
            s.neighbors_[cursor[static_cast<std::size_t>(u)]] = v;
            s.edge_multiplicity_[cursor[static_cast<std::size_t>(u)]++] = m;
            s.neighbors_[cursor[static_cast<std::size_t>(v)]] = u;
            s.edge_multiplicity_[cursor[static_cast<std::size_t>(v)]++] = m;
        }
        return s;
    }

    /// Convenience builder for tests and fixtures (deduplicates and sorts).
    static Snapshot from_edges(std::size_t node_count,
                               std::vector<std::pair<NodeId, NodeId>> edges,
                               TimeInterval window = {0, 1}, Timestamp gamma = 1) {
        for (auto& [u, v] : edges)
            if (v < u) std::swap(u, v);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return from_sorted_edges(node_count, std::move(edges), {}, window, gamma);
    }

    std::size_t node_count() const { return offsets_.size() - 1; }
    std::size_t edge_count() const { return edge_count_; }
    const TimeInterval& window() const { return window_; }
    Timestamp gamma() const { return gamma_; }

    std::size_t degree(NodeId u) const {
        return offsets_[static_cast<std::size_t>(u) + 1] - offsets_[static_cast<std::size_t>(u)];
    }
    std::span<const NodeId> neighbors(NodeId u) const {
        return {neighbors_.data() + offsets_[static_cast<std::size_t>(u)], degree(u)};
    }
    /// Interaction counts per incident edge, aligned with neighbors(u).
    /// Retained as an attribute only; detection ignores it.
    std::span<const std::int32_t> multiplicities(NodeId u) const {
        return {edge_multiplicity_.data() + offsets_[static_cast<std::size_t>(u)], degree(u)};
    }

    /// Unique edges as (u, v) with u < v, sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < static_cast<NodeId>(node_count()); ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }

  private:
    TimeInterval window_{0, 1};
    Timestamp gamma_ = 1;
    std::size_t edge_count_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<std::int32_t> edge_multiplicity_;
};

/// Aggregates all interactions with t0 <= t < t0+gamma into a snapshot.
/// A window beyond the stream bounds yields an empty-edge snapshot.
inline Snapshot aggregate(const LinkStream& stream, Timestamp t0, Timestamp gamma) {
    if (gamma < 1) throw Error("aggregate requires gamma >= 1 tick");
    const auto [lo, hi] = stream.event_range(t0, t0 + gamma);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i)
        pairs.emplace_back(stream.events()[i].u, stream.events()[i].v);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::int32_t> mult;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        edges.push_back(pairs[i]);
        mult.push_back(static_cast<std::int32_t>(j - i));
        i = j;
    }
    return Snapshot::from_sorted_edges(stream.node_count(), std::move(edges), std::move(mult),
                                       {t0, t0 + gamma}, gamma);
}

/// Number of windows of width gamma anchored at t0 needed to cover the
/// stream: the last window is the first whose end reaches stream.t_end().
inline std::size_t window_count(const LinkStream& stream, Timestamp gamma, Timestamp t0) {
    const Timestamp span = stream.t_end() - t0;
    if (span <= 0) throw Error("window origin t0 lies at or after the end of the stream");
    return static_cast<std::size_t>((span + gamma - 1) / gamma);
}

/// Builds the ordered snapshot sequence [t0, t0+g), [t0+g, t0+2g), ... with
/// every event of the stream falling in exactly one window (for t0 at or
/// before the first event). t0 defaults to the first observed interaction.
/// Windows are built in parallel.
inline std::vector<Snapshot> snapshot_sequence(const LinkStream& stream, Timestamp gamma,
                                               std::optional<Timestamp> t0 = std::nullopt,
                                               unsigned threads = 1) {
    if (gamma < 1) throw Error("snapshot_sequence requires gamma >= 1 tick");
    const Timestamp origin = t0.value_or(stream.t_start());
    const std::size_t count = window_count(stream, gamma, origin);
    std::vector<Snapshot> out(count);
    parallel_for(count, threads, [&](std::size_t i) {
        out[i] = aggregate(stream, origin + static_cast<Timestamp>(i) * gamma, gamma);
    });
    return out;
}

}  // namespace mtsc
