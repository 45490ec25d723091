#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mtsc/errors.hpp"
#include "mtsc/interval.hpp"

namespace mtsc {

/// Dense node identifier inside one stream. The mapping to the original
/// string labels lives in the owning LinkStream.
using NodeId = std::int32_t;

/// One timestamped undirected interaction. Always canonicalized so that
/// label(u) < label(v).
struct InteractionEvent {
    NodeId u = 0;
    NodeId v = 0;
    Timestamp t = 0;

    friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

enum class StreamFormat { plain, sociopatterns };

/// An ordered stream of timestamped interactions over a fixed node universe.
/// Immutable after construction; safe to share across threads.
class LinkStream {
  public:
    /// Builds a stream from raw labeled triples. Self-interactions are
    /// dropped (counted), duplicate (u,v,t) triples are collapsed (counted),
    /// events are sorted by time with ties broken by (u,v) label order.
    static LinkStream from_labeled_events(
        std::vector<std::tuple<std::string, std::string, Timestamp>> raw) {
        LinkStream s;
        std::vector<std::tuple<std::string, std::string, Timestamp>> kept;
        kept.reserve(raw.size());
        for (auto& [a, b, t] : raw) {
            if (a == b) {
                ++s.dropped_self_loops_;
                continue;
            }
            if (b < a) std::swap(a, b);
            kept.emplace_back(std::move(a), std::move(b), t);
        }
        if (kept.empty()) throw EmptyStreamError("stream contains no interactions");

        // Dense ids are assigned in sorted label order, so id order and
        // label order agree everywhere downstream.
        std::vector<std::string> labels;
        labels.reserve(kept.size() * 2);
        for (const auto& [a, b, t] : kept) {
            labels.push_back(a);
            labels.push_back(b);
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        s.labels_ = std::move(labels);
        std::unordered_map<std::string_view, NodeId> index;
        index.reserve(s.labels_.size());
        for (NodeId i = 0; i < static_cast<NodeId>(s.labels_.size()); ++i)
            index.emplace(s.labels_[static_cast<std::size_t>(i)], i);

        s.events_.reserve(kept.size());
        for (const auto& [a, b, t] : kept)
            s.events_.push_back({index.at(a), index.at(b), t});
        std::sort(s.events_.begin(), s.events_.end(),
                  [](const InteractionEvent& x, const InteractionEvent& y) {
                      return std::tie(x.t, x.u, x.v) < std::tie(y.t, y.u, y.v);
                  });
        const auto dup_begin = std::unique(s.events_.begin(), s.events_.end());
        s.duplicate_events_ =
            static_cast<std::size_t>(std::distance(dup_begin, s.events_.end()));
        s.events_.erase(dup_begin, s.events_.end());

        s.t_start_ = s.events_.front().t;
        s.t_end_ = s.events_.back().t + 1;  // every event lies in [t_start, t_end)
        return s;
    }

    const std::vector<InteractionEvent>& events() const { return events_; }
    std::size_t node_count() const { return labels_.size(); }
    const std::string& label(NodeId id) const { return labels_[static_cast<std::size_t>(id)]; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Dense id for a label, or -1 if the label is unknown to this stream.
    NodeId id_of(std::string_view label) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label) return -1;
        return static_cast<NodeId>(std::distance(labels_.begin(), it));
    }

    Timestamp t_start() const { return t_start_; }
    Timestamp t_end() const { return t_end_; }
    Timestamp duration() const { return t_end_ - t_start_; }

    std::size_t dropped_self_loops() const { return dropped_self_loops_; }
    std::size_t duplicate_events() const { return duplicate_events_; }

    /// Events with t in [from, to), as a subrange of the sorted event list.
    std::pair<std::size_t, std::size_t> event_range(Timestamp from, Timestamp to) const {
        const auto lo = std::lower_bound(
            events_.begin(), events_.end(), from,
            [](const InteractionEvent& e, Timestamp t) { return e.t < t; });
        const auto hi = std::lower_bound(
            lo, events_.end(), to,
            [](const InteractionEvent& e, Timestamp t) { return e.t < t; });
        return {static_cast<std::size_t>(lo - events_.begin()),
                static_cast<std::size_t>(hi - events_.begin())};
    }

  private:
    std::vector<InteractionEvent> events_;
    std::vector<std::string> labels_;
    Timestamp t_start_ = 0;
    Timestamp t_end_ = 0;
    std::size_t dropped_self_loops_ = 0;
    std::size_t duplicate_events_ = 0;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline Timestamp parse_timestamp(std::string_view field, std::size_t line_number) {
    Timestamp value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError(line_number, "invalid timestamp '" + std::string(field) + "'");
    if (value < 0)
        throw ParseError(line_number, "negative timestamp '" + std::string(field) + "'");
    return value;
}

}  // namespace detail

/// Parses a stream of interaction lines.
///
/// plain:          "t u v", whitespace separated, '#' comment lines skipped.
/// sociopatterns:  "t i j [meta...]", columns beyond the third ignored.
///
/// Blank lines are skipped. Malformed lines raise ParseError with the
/// 1-based line number.
inline LinkStream parse_stream(std::istream& in, StreamFormat format) {
    std::vector<std::tuple<std::string, std::string, Timestamp>> raw;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (fields[0].front() == '#') continue;
        if (format == StreamFormat::plain && fields.size() != 3)
            throw ParseError(line_number, "expected 3 fields, got " + std::to_string(fields.size()));
        if (format == StreamFormat::sociopatterns && fields.size() < 3)
            throw ParseError(line_number,
                             "expected at least 3 fields, got " + std::to_string(fields.size()));
        const Timestamp t = detail::parse_timestamp(fields[0], line_number);
        raw.emplace_back(std::string(fields[1]), std::string(fields[2]), t);
    }
    if (raw.empty()) throw EmptyStreamError("input contains no interaction lines");
    return LinkStream::from_labeled_events(std::move(raw));
}

/// Writes the stream in "plain" format: one "t u v" line per event in sorted
/// order, single spaces, trailing newline. Byte-stable: re-parsing yields an
/// identical event list.
inline void serialize_plain(const LinkStream& stream, std::ostream& out) {
    for (const auto& e : stream.events())
        out << e.t << ' ' << stream.label(e.u) << ' ' << stream.label(e.v) << '\n';
}

}  // namespace mtsc
