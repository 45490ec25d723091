#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/linkstream.hpp"
#include "mtsc/quality.hpp"
#include "mtsc/rng.hpp"

namespace mtsc {

/// One planted stable community of the synthetic benchmark. Its temporal
/// scale is expressed by the per-step probability of an internal pair
/// interacting, fixed at 10/duration: a community living 10 steps is a full
/// clique at every step, one living 100 steps fires each pair every 10 steps
/// on average.
struct PlantedCommunity {
    NodeSet nodes;
    TimeInterval period{0, 1};
    double edge_prob = 0.0;
};

struct GeneratorConfig {
    std::int64_t T = 5000;   ///< stream length in steps
    std::int32_t N = 100;    ///< node count
    double p = -1.0;         ///< per-pair per-step noise probability; <0 means 10/N
    std::int32_t SC = 10;    ///< planted community count
    std::uint64_t rng_seed = 42;

    double noise_probability() const { return p < 0 ? 10.0 / static_cast<double>(N) : p; }

    void validate() const {
        if (T < 1) throw ConfigError("T must be >= 1");
        if (N < 2) throw ConfigError("N must be >= 2");
        const double noise = noise_probability();
        if (noise < 0.0 || noise > 1.0) throw ConfigError("p must lie in [0,1]");
        if (SC < 0) throw ConfigError("SC must be >= 0");
        if (SC > 0) {
            if (N / 4 < 4)
                throw ConfigError("community size range [4, N/4] is empty; need N >= 16");
            if (T / 4 < 10)
                throw ConfigError("community duration range [10, T/4] is empty; need T >= 40");
        }
    }
};

/// Integer draw whose logarithm is uniform over [ln lo, ln hi]: the median
/// of many draws sits near sqrt(lo*hi), spreading values across magnitudes.
inline std::int64_t log_uniform(std::int64_t lo, std::int64_t hi, Rng& rng) {
    if (lo < 1 || lo > hi) throw ConfigError("log_uniform requires 1 <= lo <= hi");
    if (lo == hi) return lo;
    const double u = rng.next_double();
    const double x = std::exp(std::log(static_cast<double>(lo)) +
                              u * (std::log(static_cast<double>(hi)) -
                                   std::log(static_cast<double>(lo))));
    const auto rounded = static_cast<std::int64_t>(std::llround(x));
    return std::max(lo, std::min(hi, rounded));
}

/// Emits the internal interactions of one planted community: every internal
/// pair, at every step of the period, independently with edge_prob.
inline void sample_community_events(const PlantedCommunity& community, Rng& rng,
                                    std::vector<std::tuple<NodeId, NodeId, Timestamp>>& out) {
    for (Timestamp t = community.period.start; t < community.period.end; ++t)
        for (std::size_t i = 0; i < community.nodes.size(); ++i)
            for (std::size_t j = i + 1; j < community.nodes.size(); ++j)
                if (rng.next_double() < community.edge_prob)
                    out.emplace_back(community.nodes[i], community.nodes[j], t);
}

struct GeneratedStream {
    LinkStream stream;
    std::vector<PlantedCommunity> truth;
};

/// Synthetic link-stream benchmark: per-step Erdos-Renyi noise over all
/// pairs plus SC planted communities with log-uniform sizes in [4, N/4] and
/// durations in [10, T/4], uniform start dates, and internal rate 10/d.
/// Noise and community events may coincide; duplicates collapse when the
/// stream is assembled. Deterministic for a given config.
inline GeneratedStream generate(const GeneratorConfig& config) {
    config.validate();
    Rng rng(config.rng_seed);

    // Draw order is fixed: all community parameters first, then noise by
    // step, then each community's internal events.
    std::vector<PlantedCommunity> truth;
    truth.reserve(static_cast<std::size_t>(config.SC));
    for (std::int32_t i = 0; i < config.SC; ++i) {
        PlantedCommunity c;
        const std::int64_t n = log_uniform(4, config.N / 4, rng);
        const std::int64_t d = log_uniform(10, config.T / 4, rng);
        const std::int64_t s = rng.next_int(0, config.T - d);
        c.nodes = rng.sample_without_replacement(config.N, static_cast<std::int32_t>(n));
        c.period = {s, s + d};
        c.edge_prob = 10.0 / static_cast<double>(d);
        truth.push_back(std::move(c));
    }

    std::vector<std::tuple<NodeId, NodeId, Timestamp>> events;
    const double noise = config.noise_probability();
    if (noise > 0.0) {
        for (Timestamp t = 0; t < config.T; ++t)
            for (NodeId u = 0; u < config.N; ++u)
                for (NodeId v = u + 1; v < config.N; ++v)
                    if (rng.next_double() < noise) events.emplace_back(u, v, t);
    }
    for (const auto& c : truth) sample_community_events(c, rng, events);

    std::vector<std::tuple<std::string, std::string, Timestamp>> labeled;
    labeled.reserve(events.size());
    for (const auto& [u, v, t] : events)
        labeled.emplace_back(std::to_string(u), std::to_string(v), t);
    return {LinkStream::from_labeled_events(std::move(labeled)), std::move(truth)};
}

}  // namespace mtsc
