#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/generator.hpp"
#include "mtsc/louvain.hpp"
#include "mtsc/multiscale.hpp"
#include "mtsc/parallel.hpp"
#include "mtsc/quality.hpp"
#include "mtsc/snapshot.hpp"

namespace mtsc {

/// A node set living over one time interval; the common currency between
/// stable communities, planted communities and baseline chains when scoring.
struct TimedNodeSet {
    NodeSet nodes;
    TimeInterval period{0, 1};
};

/// A cover: node sets that may overlap; a node may sit in several or none.
using Cover = std::vector<NodeSet>;

inline std::vector<TimedNodeSet> timed(std::span<const StableCommunity> communities) {
    std::vector<TimedNodeSet> out;
    out.reserve(communities.size());
    for (const auto& c : communities) out.push_back({c.nodes, c.period});
    return out;
}

/// Planted communities carry generator node indices; scoring them against
/// detections on the generated stream needs the index -> label -> dense-id
/// mapping (dense ids follow label order, not numeric order).
inline std::vector<TimedNodeSet> timed(std::span<const PlantedCommunity> communities,
                                       const LinkStream& stream) {
    std::vector<TimedNodeSet> out;
    out.reserve(communities.size());
    for (const auto& c : communities) {
        NodeSet mapped;
        mapped.reserve(c.nodes.size());
        for (NodeId u : c.nodes) {
            const NodeId id = stream.id_of(std::to_string(u));
            if (id >= 0) mapped.push_back(id);
        }
        out.push_back({make_node_set(std::move(mapped)), c.period});
    }
    return out;
}

/// Node sets of all communities whose period contains t (right-open test).
inline Cover cover_at(std::span<const TimedNodeSet> communities, Timestamp t) {
    Cover cover;
    for (const auto& c : communities)
        if (c.period.contains(t)) cover.push_back(c.nodes);
    return cover;
}

struct OnmiScore {
    double value = 0.0;
    bool both_empty = false;  ///< warning flag: score 1.0 came from two empty covers
};

namespace detail {

inline double plogp(double p) { return p <= 0.0 ? 0.0 : -p * std::log(p); }

// Average over the communities of X of the normalized conditional entropy
// H(X_i|Y)/H(X_i), where H(X_i|Y) is the best match over Y subject to the
// complemented-match guard h(p11)+h(p00) >= h(p01)+h(p10); without an
// admissible match the community keeps its full entropy. A community equal
// to the whole universe carries zero entropy; its term is 0 exactly when Y
// contains the identical set, else 1 (the limit of a community growing to
// the universe).
inline double normalized_conditional_entropy(const Cover& x, const Cover& y, double n) {
    double total = 0.0;
    for (const auto& xi : x) {
        const double a = static_cast<double>(xi.size());
        const double h_xi = plogp(a / n) + plogp(1.0 - a / n);
        if (h_xi == 0.0) {
            const bool exact = std::any_of(y.begin(), y.end(),
                                           [&](const NodeSet& yj) { return yj == xi; });
            total += exact ? 0.0 : 1.0;
            continue;
        }
        double best = h_xi;
        for (const auto& yj : y) {
            const double inter = static_cast<double>(intersection_size(xi, yj));
            const double b = static_cast<double>(yj.size());
            const double p11 = inter / n;
            const double p10 = (a - inter) / n;
            const double p01 = (b - inter) / n;
            const double p00 = 1.0 - p11 - p10 - p01;
            if (plogp(p11) + plogp(p00) < plogp(p01) + plogp(p10)) continue;
            const double h_yj = plogp(b / n) + plogp(1.0 - b / n);
            const double joint = plogp(p11) + plogp(p10) + plogp(p01) + plogp(p00);
            best = std::min(best, joint - h_yj);
        }
        total += std::max(0.0, best) / h_xi;
    }
    return total / static_cast<double>(x.size());
}

}  // namespace detail

/// Overlapping normalized mutual information between two covers over a
/// universe of `universe` nodes, after Lancichinetti, Fortunato and Kertesz:
/// each community is a binary per-node membership variable; the score is one
/// minus the mean normalized lack of information, averaged over both
/// directions. Symmetric, 1 for identical covers. Two empty covers count as
/// identical (flagged); a single empty cover scores 0.
inline OnmiScore onmi(const Cover& a, const Cover& b, std::size_t universe) {
    if (universe < 1) throw EvaluationError("onmi requires a non-empty node universe");
    if (a.empty() && b.empty()) return {1.0, true};
    if (a.empty() || b.empty()) return {0.0, false};
    const double n = static_cast<double>(universe);
    const double lack_a = detail::normalized_conditional_entropy(a, b, n);
    const double lack_b = detail::normalized_conditional_entropy(b, a, n);
    double value = 1.0 - 0.5 * (lack_a + lack_b);
    value = std::min(1.0, std::max(0.0, value));
    return {value, false};
}

/// One matched chain of the detect-&-match baseline: per-window communities
/// linked across consecutive windows by jaccard >= the match threshold.
struct DynCommunity {
    std::size_t id = 0;
    std::vector<TimedNodeSet> steps;
};

/// Detect-&-match baseline at a single scale: run the static detector on
/// every window, then greedily chain communities of consecutive windows by
/// best jaccard first, each community matched at most once per step.
/// Unmatched communities start their own chain.
inline std::vector<DynCommunity> baseline_detect_match(const LinkStream& stream, Timestamp gamma,
                                                       double match_threshold,
                                                       const CommunityDetector& detector,
                                                       const Params& params) {
    if (gamma < 1) throw ConfigError("baseline requires gamma >= 1 tick");
    const Timestamp t0 = params.t0.value_or(stream.t_start());
    const std::vector<Snapshot> snapshots = snapshot_sequence(stream, gamma, t0, params.threads);

    std::vector<std::vector<NodeSet>> per_window(snapshots.size());
    parallel_for(snapshots.size(), params.threads, [&](std::size_t wi) {
        try {
            auto communities = detector(
                snapshots[wi],
                derive_seed(params.rng_seed, static_cast<std::uint64_t>(gamma), wi));
            for (auto& c : communities) std::sort(c.begin(), c.end());
            per_window[wi] = std::move(communities);
        } catch (const NoStructureError&) {
            // window without structure: chains simply break here
        }
    });

    std::vector<DynCommunity> chains;
    // chain index owning each community of the previous window
    std::vector<std::size_t> prev_chain;
    for (std::size_t wi = 0; wi < snapshots.size(); ++wi) {
        const auto& current = per_window[wi];
        const TimeInterval window = snapshots[wi].window();
        std::vector<std::size_t> chain_of(current.size(), SIZE_MAX);

        if (wi > 0 && !current.empty() && !per_window[wi - 1].empty()) {
            const auto& previous = per_window[wi - 1];
            struct Candidate {
                double sim;
                std::size_t prev, cur;
            };
            std::vector<Candidate> candidates;
            for (std::size_t i = 0; i < previous.size(); ++i)
                for (std::size_t j = 0; j < current.size(); ++j) {
                    const double sim = jaccard(previous[i], current[j]);
                    if (sim >= match_threshold) candidates.push_back({sim, i, j});
                }
            std::sort(candidates.begin(), candidates.end(),
                      [](const Candidate& x, const Candidate& y) {
                          if (x.sim != y.sim) return x.sim > y.sim;
                          if (x.prev != y.prev) return x.prev < y.prev;
                          return x.cur < y.cur;
                      });
            std::vector<char> prev_used(previous.size(), 0), cur_used(current.size(), 0);
            for (const auto& cand : candidates) {
                if (prev_used[cand.prev] || cur_used[cand.cur]) continue;
                prev_used[cand.prev] = cur_used[cand.cur] = 1;
                chain_of[cand.cur] = prev_chain[cand.prev];
            }
        }

        for (std::size_t j = 0; j < current.size(); ++j) {
            if (chain_of[j] == SIZE_MAX) {
                chain_of[j] = chains.size();
                chains.push_back({chains.size(), {}});
            }
            chains[chain_of[j]].steps.push_back({current[j], window});
        }
        prev_chain = std::move(chain_of);
    }
    return chains;
}

/// Flattened view of baseline chains for scoring: each chain step keeps its
/// own window and node set.
inline std::vector<TimedNodeSet> timed(std::span<const DynCommunity> chains) {
    std::vector<TimedNodeSet> out;
    for (const auto& chain : chains)
        for (const auto& step : chain.steps) out.push_back(step);
    return out;
}

struct StepScore {
    Timestamp t = 0;
    double nmi = 0.0;
    bool flagged = false;  ///< both covers empty at this step
};

struct ScoreRun {
    std::vector<StepScore> series;
    double mean = 0.0;
    std::optional<double> active_mean;  ///< over non-flagged steps only
    std::size_t n_steps = 0;
};

/// Scores detected against ground-truth communities with onmi at every
/// sampled step of [t_begin, t_end). Steps where both covers are empty score
/// 1.0 and are flagged; the secondary active-steps mean excludes them.
inline ScoreRun score_run(std::span<const TimedNodeSet> detected,
                          std::span<const TimedNodeSet> truth, Timestamp t_begin, Timestamp t_end,
                          std::size_t universe, Timestamp stride = 1, unsigned threads = 1) {
    if (stride < 1) throw EvaluationError("stride must be >= 1");
    if (t_end <= t_begin) throw EvaluationError("empty scoring range");
    ScoreRun run;
    const auto count = static_cast<std::size_t>((t_end - t_begin + stride - 1) / stride);
    run.series.resize(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const Timestamp t = t_begin + static_cast<Timestamp>(i) * stride;
        const OnmiScore score = onmi(cover_at(detected, t), cover_at(truth, t), universe);
        run.series[i] = {t, score.value, score.both_empty};
    });
    double total = 0.0, active_total = 0.0;
    std::size_t active = 0;
    for (const auto& s : run.series) {
        total += s.nmi;
        if (!s.flagged) {
            active_total += s.nmi;
            ++active;
        }
    }
    run.n_steps = run.series.size();
    run.mean = total / static_cast<double>(run.n_steps);
    if (active > 0) run.active_mean = active_total / static_cast<double>(active);
    return run;
}

}  // namespace mtsc
