#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/quality.hpp"
#include "mtsc/rng.hpp"
#include "mtsc/snapshot.hpp"

namespace mtsc {

/// Disjoint community assignment over the positive-degree nodes of a graph.
/// Community ids are dense integers 0..k-1; degree-0 nodes carry -1 and do
/// not appear in any community.
struct Partition {
    std::vector<std::int32_t> assignment;
    std::vector<NodeSet> communities;
};

/// Newman modularity Q = (1/2m) sum_ij (A_ij - d_i d_j / 2m) delta(c_i, c_j)
/// over undirected edges. Requires at least one edge and a partition that
/// covers every positive-degree node.
inline double modularity(const Snapshot& graph, const Partition& partition) {
    const std::int64_t m = static_cast<std::int64_t>(graph.edge_count());
    if (m == 0) throw UndefinedQuantityError("modularity of an edgeless graph is undefined");
    const std::size_t k = partition.communities.size();
    std::vector<std::int64_t> internal2(k, 0);  // ordered internal pair count
    std::vector<std::int64_t> total(k, 0);      // community degree sum
    for (NodeId u = 0; u < static_cast<NodeId>(graph.node_count()); ++u) {
        const std::int32_t cu = partition.assignment[static_cast<std::size_t>(u)];
        if (cu < 0) {
            if (graph.degree(u) > 0)
                throw Error("partition does not cover all positive-degree nodes");
            continue;
        }
        total[static_cast<std::size_t>(cu)] += static_cast<std::int64_t>(graph.degree(u));
        for (NodeId v : graph.neighbors(u))
            if (partition.assignment[static_cast<std::size_t>(v)] == cu)
                ++internal2[static_cast<std::size_t>(cu)];
    }
    const double S = 2.0 * static_cast<double>(m);
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double frac = static_cast<double>(total[c]) / S;
        q += static_cast<double>(internal2[c]) / S - frac * frac;
    }
    return q;
}

namespace detail {

// Weighted multigraph for one Louvain level. Self-loop weight is stored
// doubled (loop2), so node strength k = sum of incident weights + loop2 and
// the total strength S is preserved exactly across contractions.
struct LevelGraph {
    std::vector<std::size_t> offsets;
    std::vector<std::int32_t> nbr;
    std::vector<std::int64_t> weight;
    std::vector<std::int64_t> loop2;
    std::vector<std::int64_t> strength;
    std::int64_t total = 0;

    std::size_t size() const { return loop2.size(); }
};

// Exact modularity numerator scaled by S^2:  Q * S^2 = S * sum_c in2(c) -
// res * sum_c tot(c)^2. Integer for resolution 1, which makes the per-pass
// monotonicity check immune to floating-point noise.
inline long double scaled_modularity(const LevelGraph& g, const std::vector<std::int32_t>& comm,
                                     double resolution) {
    std::int64_t max_comm = 0;
    for (std::int32_t c : comm) max_comm = std::max<std::int64_t>(max_comm, c);
    std::vector<std::int64_t> in2(static_cast<std::size_t>(max_comm) + 1, 0);
    std::vector<std::int64_t> tot(static_cast<std::size_t>(max_comm) + 1, 0);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const auto cu = static_cast<std::size_t>(comm[u]);
        tot[cu] += g.strength[u];
        in2[cu] += g.loop2[u];
        for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
            if (comm[static_cast<std::size_t>(g.nbr[e])] == comm[u]) in2[cu] += g.weight[e];
    }
    long double q = 0.0L;
    for (std::size_t c = 0; c < in2.size(); ++c) {
        q += static_cast<long double>(g.total) * static_cast<long double>(in2[c]);
        q -= static_cast<long double>(resolution) * static_cast<long double>(tot[c]) *
             static_cast<long double>(tot[c]);
    }
    return q;
}

// One local-moving phase: repeated passes over the nodes in a fixed shuffled
// order, moving each node to the neighboring community with the best
// positive modularity gain, until a full pass makes no move. Ties keep the
// current community, otherwise the lowest community id wins, which pins the
// result for a given seed. Returns whether any move happened.
inline bool local_moving(const LevelGraph& g, std::vector<std::int32_t>& comm, Rng& rng,
                         double resolution, long double& q_floor) {
    const std::size_t n = g.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<std::int64_t> comm_tot(n, 0);
    for (std::size_t u = 0; u < n; ++u) comm_tot[static_cast<std::size_t>(comm[u])] += g.strength[u];

    std::vector<std::int64_t> weight_to(n, 0);
    std::vector<std::int32_t> touched;
    touched.reserve(64);
    const bool integer_gains = resolution == 1.0;

    bool any_move = false;
    for (bool moved = true; moved;) {
        moved = false;
        for (const std::size_t u : order) {
            const std::int32_t cu = comm[u];
            touched.clear();
            for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
                const std::int32_t c = comm[static_cast<std::size_t>(g.nbr[e])];
                if (weight_to[static_cast<std::size_t>(c)] == 0) touched.push_back(c);
                weight_to[static_cast<std::size_t>(c)] += g.weight[e];
            }
            comm_tot[static_cast<std::size_t>(cu)] -= g.strength[u];

            // Gain of joining community c, relative constant terms dropped:
            //   g(c) = w_u(c) - res * k_u * tot(c) / S
            // compared in exact integers when res == 1.
            const auto gain_int = [&](std::int32_t c) {
                return weight_to[static_cast<std::size_t>(c)] * g.total -
                       g.strength[u] * comm_tot[static_cast<std::size_t>(c)];
            };
            const auto gain_fp = [&](std::int32_t c) {
                return static_cast<long double>(weight_to[static_cast<std::size_t>(c)]) *
                           static_cast<long double>(g.total) -
                       static_cast<long double>(resolution) *
                           static_cast<long double>(g.strength[u]) *
                           static_cast<long double>(comm_tot[static_cast<std::size_t>(c)]);
            };

            std::int32_t best = cu;
            std::int64_t best_i = integer_gains ? gain_int(cu) : 0;
            long double best_f = integer_gains ? 0.0L : gain_fp(cu);
            for (const std::int32_t c : touched) {
                if (c == cu) continue;
                if (integer_gains) {
                    const std::int64_t gi = gain_int(c);
                    if (gi > best_i || (gi == best_i && best != cu && c < best)) {
                        best = c;
                        best_i = gi;
                    }
                } else {
                    const long double gf = gain_fp(c);
                    if (gf > best_f || (gf == best_f && best != cu && c < best)) {
                        best = c;
                        best_f = gf;
                    }
                }
            }

            comm_tot[static_cast<std::size_t>(best)] += g.strength[u];
            if (best != cu) {
                comm[u] = best;
                moved = true;
                any_move = true;
            }
            for (const std::int32_t c : touched) weight_to[static_cast<std::size_t>(c)] = 0;
        }
        // Every accepted move has strictly positive gain, so the working
        // modularity can never drop between passes.
        const long double q_now = scaled_modularity(g, comm, resolution);
        if (q_now < q_floor)
            throw Error("louvain invariant violated: modularity decreased across a pass");
        q_floor = q_now;
    }
    return any_move;
}

// Renumbers community labels densely in order of first appearance.
inline std::int32_t compact_labels(std::vector<std::int32_t>& comm) {
    std::vector<std::int32_t> remap(comm.size(), -1);
    std::int32_t next = 0;
    for (auto& c : comm) {
        if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
        c = remap[static_cast<std::size_t>(c)];
    }
    return next;
}

// Contracts communities into super-nodes; edge weights between communities
// accumulate, internal weight becomes the super-node self-loop.
inline LevelGraph contract(const LevelGraph& g, const std::vector<std::int32_t>& comm,
                           std::int32_t n_comms) {
    LevelGraph out;
    const auto nc = static_cast<std::size_t>(n_comms);
    out.loop2.assign(nc, 0);
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> acc(nc);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const std::int32_t cu = comm[u];
        out.loop2[static_cast<std::size_t>(cu)] += g.loop2[u];
        for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            const std::int32_t cv = comm[static_cast<std::size_t>(g.nbr[e])];
            if (cu == cv)
                out.loop2[static_cast<std::size_t>(cu)] += g.weight[e];
            else
                acc[static_cast<std::size_t>(cu)].emplace_back(cv, g.weight[e]);
        }
    }
    out.offsets.assign(nc + 1, 0);
    for (std::size_t c = 0; c < nc; ++c) {
        auto& row = acc[c];
        std::sort(row.begin(), row.end());
        std::size_t unique_count = 0;
        for (std::size_t i = 0; i < row.size();) {
            std::size_t j = i;
            std::int64_t w = 0;
            while (j < row.size() && row[j].first == row[i].first) w += row[j++].second;
            row[unique_count++] = {row[i].first, w};
            i = j;
        }
        row.resize(unique_count);
        out.offsets[c + 1] = out.offsets[c] + unique_count;
    }
    out.nbr.resize(out.offsets.back());
    out.weight.resize(out.offsets.back());
    for (std::size_t c = 0; c < nc; ++c) {
        std::size_t pos = out.offsets[c];
        for (const auto& [v, w] : acc[c]) {
            out.nbr[pos] = v;
            out.weight[pos] = w;
            ++pos;
        }
    }
    out.strength.assign(nc, 0);
    for (std::size_t c = 0; c < nc; ++c) {
        out.strength[c] = out.loop2[c];
        for (std::size_t e = out.offsets[c]; e < out.offsets[c + 1]; ++e)
            out.strength[c] += out.weight[e];
    }
    out.total = g.total;
    return out;
}

}  // namespace detail

/// Louvain modularity maximization: greedy local moves followed by community
/// contraction, repeated to a fixed point. Deterministic for a given
/// rng_seed (the seed drives the node visit order). The resolution parameter
/// scales the null-model term; the default 1 is plain Louvain.
inline Partition louvain(const Snapshot& graph, std::uint64_t rng_seed, double resolution = 1.0) {
    if (graph.edge_count() == 0)
        throw NoStructureError("louvain requires a graph with at least one edge");

    // Level 0 works on the compacted positive-degree subgraph; isolated
    // nodes never enter communities.
    const std::size_t n_all = graph.node_count();
    std::vector<std::int32_t> compact(n_all, -1);
    std::vector<NodeId> active;
    for (NodeId u = 0; u < static_cast<NodeId>(n_all); ++u)
        if (graph.degree(u) > 0) {
            compact[static_cast<std::size_t>(u)] = static_cast<std::int32_t>(active.size());
            active.push_back(u);
        }

    detail::LevelGraph level;
    level.offsets.assign(active.size() + 1, 0);
    for (std::size_t i = 0; i < active.size(); ++i)
        level.offsets[i + 1] = level.offsets[i] + graph.degree(active[i]);
    level.nbr.resize(level.offsets.back());
    level.weight.assign(level.offsets.back(), 1);
    level.loop2.assign(active.size(), 0);
    level.strength.assign(active.size(), 0);
    for (std::size_t i = 0; i < active.size(); ++i) {
        std::size_t pos = level.offsets[i];
        for (NodeId v : graph.neighbors(active[i]))
            level.nbr[pos++] = compact[static_cast<std::size_t>(v)];
        level.strength[i] = static_cast<std::int64_t>(graph.degree(active[i]));
    }
    level.total = static_cast<std::int64_t>(2 * graph.edge_count());

    Rng rng(rng_seed);
    std::vector<std::int32_t> node_to_comm(active.size());
    std::iota(node_to_comm.begin(), node_to_comm.end(), 0);
    std::vector<std::int32_t> comm(active.size());
    std::iota(comm.begin(), comm.end(), 0);
    long double q_floor = detail::scaled_modularity(level, comm, resolution);

    for (;;) {
        const bool moved = detail::local_moving(level, comm, rng, resolution, q_floor);
        if (!moved) break;
        const std::int32_t n_comms = detail::compact_labels(comm);
        for (auto& c : node_to_comm)
            c = comm[static_cast<std::size_t>(c)];
        if (static_cast<std::size_t>(n_comms) == level.size()) break;
        level = detail::contract(level, comm, n_comms);
        comm.assign(static_cast<std::size_t>(n_comms), 0);
        std::iota(comm.begin(), comm.end(), 0);
    }

    // Dense final ids in order of first appearance over original node ids.
    Partition result;
    result.assignment.assign(n_all, -1);
    std::vector<std::int32_t> remap(active.size(), -1);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const auto c = static_cast<std::size_t>(node_to_comm[i]);
        if (remap[c] < 0) remap[c] = next++;
        result.assignment[static_cast<std::size_t>(active[i])] = remap[c];
    }
    result.communities.assign(static_cast<std::size_t>(next), {});
    for (std::size_t i = 0; i < active.size(); ++i)
        result.communities[static_cast<std::size_t>(
                               result.assignment[static_cast<std::size_t>(active[i])])]
            .push_back(active[i]);
    return result;
}

/// The CD contract: any static detector mapping a snapshot to a list of node
/// sets. Overlapping detectors fit too; the engine treats each returned set
/// as an independent seed candidate.
using CommunityDetector =
    std::function<std::vector<NodeSet>(const Snapshot&, std::uint64_t rng_seed)>;

inline CommunityDetector louvain_detector(double resolution = 1.0) {
    return [resolution](const Snapshot& graph, std::uint64_t seed) {
        return louvain(graph, seed, resolution).communities;
    };
}

}  // namespace mtsc
