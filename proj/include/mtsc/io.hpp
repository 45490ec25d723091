#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtsc/errors.hpp"
#include "mtsc/eval.hpp"
#include "mtsc/generator.hpp"
#include "mtsc/linkstream.hpp"
#include "mtsc/multiscale.hpp"

namespace mtsc {

using json = nlohmann::json;

inline json interval_to_json(const TimeInterval& iv) {
    return json{{"start", iv.start}, {"end", iv.end}};
}

/// Stable communities as a JSON array of records with node labels.
inline json communities_to_json(const std::vector<StableCommunity>& communities,
                                const LinkStream& stream) {
    json out = json::array();
    for (const auto& c : communities) {
        json nodes = json::array();
        for (NodeId u : c.nodes) nodes.push_back(stream.label(u));
        json provenance = json::array();
        for (const auto& wq : c.provenance)
            provenance.push_back(
                {{"start", wq.window.start}, {"end", wq.window.end}, {"qc", wq.qc}});
        out.push_back({{"id", c.id},
                       {"nodes", nodes},
                       {"start", c.period.start},
                       {"end", c.period.end},
                       {"gamma", c.gamma},
                       {"origin_window", interval_to_json(c.origin)},
                       {"quality", c.quality},
                       {"provenance", provenance}});
    }
    return out;
}

/// Baseline chains flattened to the same record shape: every chain step is
/// one record carrying the chain id; optional detection fields are omitted.
inline json chains_to_json(const std::vector<DynCommunity>& chains, Timestamp gamma,
                           const LinkStream& stream) {
    json out = json::array();
    for (const auto& chain : chains)
        for (const auto& step : chain.steps) {
            json nodes = json::array();
            for (NodeId u : step.nodes) nodes.push_back(stream.label(u));
            out.push_back({{"id", chain.id},
                           {"nodes", nodes},
                           {"start", step.period.start},
                           {"end", step.period.end},
                           {"gamma", gamma}});
        }
    return out;
}

/// Ground truth as a JSON array of {nodes, start, end, edge_prob}. Generator
/// node indices double as labels.
inline json truth_to_json(const std::vector<PlantedCommunity>& truth) {
    json out = json::array();
    for (const auto& c : truth) {
        json nodes = json::array();
        for (NodeId u : c.nodes) nodes.push_back(std::to_string(u));
        out.push_back({{"nodes", nodes},
                       {"start", c.period.start},
                       {"end", c.period.end},
                       {"edge_prob", c.edge_prob}});
    }
    return out;
}

/// A communities-like file reduced to what scoring needs.
struct LoadedCommunities {
    std::vector<std::vector<std::string>> label_sets;
    std::vector<TimeInterval> periods;
};

inline LoadedCommunities load_communities(const json& doc, const std::string& origin) {
    if (!doc.is_array()) throw EvaluationError(origin + ": expected a JSON array of communities");
    LoadedCommunities out;
    for (const auto& rec : doc) {
        if (!rec.contains("nodes") || !rec.contains("start") || !rec.contains("end"))
            throw EvaluationError(origin + ": community record needs nodes, start and end");
        std::vector<std::string> labels;
        for (const auto& n : rec["nodes"]) labels.push_back(n.get<std::string>());
        out.label_sets.push_back(std::move(labels));
        out.periods.emplace_back(rec["start"].get<Timestamp>(), rec["end"].get<Timestamp>());
    }
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw UserError(path + ": " + e.what());
    }
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UserError("cannot open " + path + " for writing");
    out << content;
}

/// Timeline CSV for plotting: one row per (community, node) membership.
inline std::string timeline_csv(const std::vector<StableCommunity>& communities,
                                const LinkStream& stream) {
    std::string out = "community_id,node,start,end,gamma\n";
    for (const auto& c : communities)
        for (NodeId u : c.nodes) {
            out += std::to_string(c.id);
            out += ',';
            out += stream.label(u);
            out += ',';
            out += std::to_string(c.period.start);
            out += ',';
            out += std::to_string(c.period.end);
            out += ',';
            out += std::to_string(c.gamma);
            out += '\n';
        }
    return out;
}

inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

inline std::string scores_csv(const ScoreRun& run) {
    std::string out = "t,nmi,flagged\n";
    for (const auto& s : run.series) {
        out += std::to_string(s.t);
        out += ',';
        out += format_double(s.nmi);
        out += ',';
        out += s.flagged ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline json summary_json(const ScoreRun& run) {
    json out{{"mean", run.mean}, {"n_steps", run.n_steps}};
    if (run.active_mean)
        out["active_mean"] = *run.active_mean;
    else
        out["active_mean"] = nullptr;
    return out;
}

}  // namespace mtsc
