#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/linkstream.hpp"
#include "mtsc/louvain.hpp"
#include "mtsc/parallel.hpp"
#include "mtsc/quality.hpp"
#include "mtsc/rng.hpp"
#include "mtsc/snapshot.hpp"

namespace mtsc {

/// Detection thresholds. Defaults follow the reference parameterization:
/// quality floor 0.7, redundancy/expansion threshold 0.3, minimum
/// persistence of 3 windows.
struct Params {
    Timestamp theta_gamma = 1;  ///< finest temporal scale to evaluate, >= 1 tick
    double theta_q = 0.7;       ///< minimum seed quality (strict)
    double theta_s = 0.3;       ///< similarity threshold for pruning
    std::int32_t theta_p = 3;   ///< minimum persistence, in windows
    std::optional<Timestamp> t0;  ///< window-grid origin; default first event

    /// Quality level an expansion window must exceed. The reference method
    /// reuses theta_s here; a distinct value is an extension knob.
    std::optional<double> expansion_threshold;

    std::uint64_t rng_seed = 42;
    unsigned threads = 1;

    double expansion_floor() const { return expansion_threshold.value_or(theta_s); }

    void validate() const {
        if (theta_gamma < 1) throw ConfigError("theta-gamma must be >= 1 tick");
        if (!(theta_q > 0.0 && theta_q < 1.0)) throw ConfigError("theta-q must lie in (0,1)");
        if (!(theta_s > 0.0 && theta_s < 1.0)) throw ConfigError("theta-s must lie in (0,1)");
        if (theta_p < 2) throw ConfigError("theta-p must be >= 2 windows");
    }
};

/// Candidate community found in one snapshot.
struct Seed {
    NodeSet nodes;
    TimeInterval origin;  ///< the discovery window, width == gamma
    Timestamp gamma = 1;
    double quality = 0.0;  ///< qc in the discovery window, > theta_q
};

/// Quality record for one window of a stable community's period.
struct WindowQuality {
    TimeInterval window;
    double qc = 0.0;
};

/// A stable community: node set N holding quality above the expansion floor
/// in every gamma-window of one contiguous period of at least theta_p
/// windows. id is the acceptance order, which pruning semantics depend on.
struct StableCommunity {
    std::size_t id = 0;
    NodeSet nodes;
    TimeInterval period{0, 1};
    Timestamp gamma = 1;
    TimeInterval origin{0, 1};
    double quality = 0.0;
    std::vector<WindowQuality> provenance;
};

/// Descending ladder of temporal scales.
struct ScaleLadder {
    std::vector<Timestamp> scales;
};

/// Builds the scale ladder: gamma_max = duration / theta_p (the coarsest
/// scale at which theta_p windows fit), halved repeatedly while the value
/// stays at or above theta_gamma.
inline ScaleLadder scale_ladder(Timestamp duration, const Params& params) {
    params.validate();
    const Timestamp gamma_max = duration / params.theta_p;
    if (gamma_max < params.theta_gamma)
        throw NoValidScaleError("stream of duration " + std::to_string(duration) +
                                " is too short for theta_p=" + std::to_string(params.theta_p) +
                                " windows of at least " + std::to_string(params.theta_gamma) +
                                " ticks");
    ScaleLadder ladder;
    for (Timestamp g = gamma_max; g >= params.theta_gamma; g /= 2) ladder.scales.push_back(g);
    return ladder;
}

/// Outcome of seed discovery over one snapshot sequence.
struct DiscoveryResult {
    std::vector<Seed> seeds;                  ///< descending quality order
    std::vector<std::size_t> skipped_windows;  ///< windows the detector rejected
};

/// Runs the detector on every snapshot and keeps communities whose quality
/// exceeds theta_q as seeds. Detection is parallel across windows with
/// per-window derived seeds, so the outcome is independent of the thread
/// count. Windows without structure (e.g. edgeless) are recorded and
/// skipped.
inline DiscoveryResult seed_discovery(std::span<const Snapshot> snapshots,
                                      const CommunityDetector& detector, const Params& params) {
    struct WindowOutcome {
        std::vector<Seed> seeds;
        bool skipped = false;
    };
    std::vector<WindowOutcome> per_window(snapshots.size());
    const Timestamp gamma = snapshots.empty() ? 1 : snapshots.front().gamma();
    parallel_for(snapshots.size(), params.threads, [&](std::size_t wi) {
        const Snapshot& snap = snapshots[wi];
        std::vector<NodeSet> communities;
        try {
            communities = detector(snap, derive_seed(params.rng_seed,
                                                     static_cast<std::uint64_t>(gamma), wi));
        } catch (const NoStructureError&) {
            per_window[wi].skipped = true;
            return;
        }
        for (auto& nodes : communities) {
            if (nodes.size() < 2) continue;
            std::sort(nodes.begin(), nodes.end());
            const double quality = qc(nodes, snap);
            if (quality > params.theta_q)
                per_window[wi].seeds.push_back(
                    {std::move(nodes), snap.window(), snap.gamma(), quality});
        }
    });

    DiscoveryResult result;
    for (std::size_t wi = 0; wi < per_window.size(); ++wi) {
        if (per_window[wi].skipped) result.skipped_windows.push_back(wi);
        for (auto& s : per_window[wi].seeds) result.seeds.push_back(std::move(s));
    }
    std::stable_sort(result.seeds.begin(), result.seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.quality != b.quality) return a.quality > b.quality;
        if (a.origin.start != b.origin.start) return a.origin.start < b.origin.start;
        return a.nodes < b.nodes;
    });
    return result;
}

/// A seed survives pruning iff, for every stable community already in the
/// result set, it is structurally dissimilar (jaccard <= theta_s) or its
/// discovery window does not intersect that community's period.
inline bool passes_pruning(const Seed& seed, std::span<const StableCommunity> stable,
                           double theta_s) {
    for (const auto& c : stable) {
        if (!seed.origin.intersects(c.period)) continue;
        if (jaccard(seed.nodes, c.nodes) > theta_s) return false;
    }
    return true;
}

/// Filters a seed batch against the current result set, preserving the
/// descending-quality order.
inline std::vector<Seed> seed_pruning(std::vector<Seed> seeds,
                                      std::span<const StableCommunity> stable,
                                      const Params& params) {
    std::vector<Seed> kept;
    kept.reserve(seeds.size());
    for (auto& s : seeds)
        if (passes_pruning(s, stable, params.theta_s)) kept.push_back(std::move(s));
    return kept;
}

/// Result of expanding one seed: either a stable community or a rejection
/// reason (a normal outcome, not an error).
struct ExpansionResult {
    std::optional<StableCommunity> community;
    std::string rejection;
};

/// Expands a seed window-by-window, forward then backward, while the frozen
/// node set keeps quality above the expansion floor. Expansion halts at the
/// bounds of the snapshot sequence, whose last window is the first one
/// reaching the end of the stream. Accepts when the final period spans at
/// least theta_p windows.
inline ExpansionResult seed_expansion(const Seed& seed, std::span<const Snapshot> snapshots,
                                      const Params& params) {
    const Timestamp gamma = seed.gamma;
    const Timestamp grid_origin = snapshots.front().window().start;
    const auto origin_index =
        static_cast<std::size_t>((seed.origin.start - grid_origin) / gamma);
    const std::size_t last_expandable = snapshots.size() - 1;

    const double floor = params.expansion_floor();
    const double origin_qc = qc(seed.nodes, snapshots[origin_index]);
    if (!(origin_qc > floor))
        return {std::nullopt, "origin window quality " + std::to_string(origin_qc) +
                                  " not above expansion floor"};

    std::size_t lo = origin_index;
    std::size_t hi = origin_index;
    std::vector<WindowQuality> forward{{seed.origin, origin_qc}};
    for (std::size_t j = origin_index + 1; j <= last_expandable; ++j) {
        const double q = qc(seed.nodes, snapshots[j]);
        if (!(q > floor)) break;
        forward.push_back({snapshots[j].window(), q});
        hi = j;
    }
    std::vector<WindowQuality> backward;
    for (std::size_t j = origin_index; j-- > 0;) {
        const double q = qc(seed.nodes, snapshots[j]);
        if (!(q > floor)) break;
        backward.push_back({snapshots[j].window(), q});
        lo = j;
    }

    const auto window_span = hi - lo + 1;
    if (window_span < static_cast<std::size_t>(params.theta_p))
        return {std::nullopt, "persists over " + std::to_string(window_span) + " windows, below " +
                                  std::to_string(params.theta_p)};

    StableCommunity c;
    c.nodes = seed.nodes;
    c.gamma = gamma;
    c.origin = seed.origin;
    c.quality = seed.quality;
    c.period = {snapshots[lo].window().start, snapshots[hi].window().end};
    c.provenance.reserve(window_span);
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) c.provenance.push_back(*it);
    for (auto& wq : forward) c.provenance.push_back(wq);
    return {std::move(c), {}};
}

/// Per-scale bookkeeping of a detection run.
struct ScaleReport {
    Timestamp gamma = 0;
    std::size_t windows = 0;
    std::size_t skipped_windows = 0;
    std::size_t seeds = 0;
    std::size_t pruned = 0;
    std::size_t rejected = 0;
    std::size_t accepted = 0;
};

struct DetectResult {
    std::vector<StableCommunity> communities;  ///< sorted for presentation; id = acceptance order
    std::vector<ScaleReport> reports;
};

/// The multi-temporal-scale driver. Scales are processed coarse to fine;
/// per scale: discover seeds, prune against the communities accepted so far,
/// then walk the surviving seeds in descending quality, re-checking the
/// pruning predicate against the live result set before each expansion (a
/// lower-quality seed can be pruned by a higher-quality acceptance of the
/// same scale). The returned list is sorted by (gamma desc, period start,
/// quality desc); ids preserve acceptance order.
inline DetectResult detect(const LinkStream& stream, const CommunityDetector& detector,
                           const Params& params) {
    params.validate();
    const Timestamp t0 = params.t0.value_or(stream.t_start());
    const ScaleLadder ladder = scale_ladder(stream.t_end() - t0, params);

    DetectResult result;
    std::vector<StableCommunity>& accepted = result.communities;
    for (const Timestamp gamma : ladder.scales) {
        ScaleReport report;
        report.gamma = gamma;
        const std::vector<Snapshot> snapshots =
            snapshot_sequence(stream, gamma, t0, params.threads);
        report.windows = snapshots.size();

        DiscoveryResult discovery = seed_discovery(snapshots, detector, params);
        report.skipped_windows = discovery.skipped_windows.size();
        report.seeds = discovery.seeds.size();

        std::vector<Seed> batch = seed_pruning(std::move(discovery.seeds), accepted, params);
        report.pruned = report.seeds - batch.size();

        for (const Seed& seed : batch) {
            if (!passes_pruning(seed, accepted, params.theta_s)) {
                ++report.pruned;
                continue;
            }
            ExpansionResult expansion = seed_expansion(seed, snapshots, params);
            if (!expansion.community) {
                ++report.rejected;
                continue;
            }
            expansion.community->id = accepted.size();
            accepted.push_back(std::move(*expansion.community));
            ++report.accepted;
        }
        result.reports.push_back(report);
    }

    std::sort(accepted.begin(), accepted.end(), [](const StableCommunity& a,
                                                   const StableCommunity& b) {
        if (a.gamma != b.gamma) return a.gamma > b.gamma;
        if (a.period.start != b.period.start) return a.period.start < b.period.start;
        if (a.quality != b.quality) return a.quality > b.quality;
        return a.id < b.id;
    });
    return result;
}

}  // namespace mtsc
