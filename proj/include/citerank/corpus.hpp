#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citerank/date.hpp"

namespace citerank {

using NodeIndex = std::uint32_t;

/// Directed citation: `citing` references `cited`.
struct Edge {
    NodeIndex citing;
    NodeIndex cited;
    auto operator<=>(const Edge &) const = default;
};

struct IngestionReport {
    std::size_t nodes_loaded = 0;
    std::size_t edges_read = 0;
    std::size_t edges_kept = 0;
    std::size_t dropped_unknown_endpoint = 0;
    std::size_t dropped_self_citation = 0;
    std::size_t dropped_duplicate = 0;
    std::size_t dropped_citing_before_cited = 0;

    std::size_t edges_dropped() const {
        return dropped_unknown_endpoint + dropped_self_citation + dropped_duplicate +
               dropped_citing_before_cited;
    }
};

/**
 * Immutable timestamped citation graph.
 *
 * Node indices are chronological ranks: index i < j iff (date_i, id_i) < (date_j, id_j),
 * ids comparing numerically when every id is an integer and lexicographically otherwise.
 * The chronological order is therefore the identity permutation, and every snapshot
 * is an index prefix. Adjacency is held in two CSR arrays (references and citers),
 * each neighbor list sorted by index.
 */
class CitationNetwork {
public:
    CitationNetwork() = default;

    /**
     * Validates and freezes a network. `edges` index into `ids`/`dates` as given.
     * Edges with an out-of-range endpoint, self-citations, citations to a node issued
     * after the citing node and duplicates are dropped and tallied in `report`.
     * Throws Error on duplicate node ids or mismatched input lengths.
     */
    static CitationNetwork build(std::vector<std::string> ids, std::vector<Date> dates,
                                 std::vector<Edge> edges, IngestionReport *report = nullptr);

    std::size_t node_count() const { return dates_.size(); }
    std::size_t edge_count() const { return ref_targets_.size(); }
    bool empty() const { return dates_.empty(); }

    const std::string &id(NodeIndex i) const { return ids_[i]; }
    Date date(NodeIndex i) const { return dates_[i]; }
    std::span<const Date> dates() const { return dates_; }
    std::span<const std::string> ids() const { return ids_; }
    bool numeric_ids() const { return numeric_ids_; }

    Date first_date() const { return dates_.front(); }
    Date last_date() const { return dates_.back(); }

    /// Nodes cited by `i`, ascending.
    std::span<const NodeIndex> references(NodeIndex i) const {
        return {ref_targets_.data() + ref_offsets_[i], ref_targets_.data() + ref_offsets_[i + 1]};
    }
    /// Nodes citing `i`, ascending (hence in citing-date order).
    std::span<const NodeIndex> citers(NodeIndex i) const {
        return {cit_sources_.data() + cit_offsets_[i], cit_sources_.data() + cit_offsets_[i + 1]};
    }
    std::size_t out_degree(NodeIndex i) const { return ref_offsets_[i + 1] - ref_offsets_[i]; }
    std::size_t in_degree(NodeIndex i) const { return cit_offsets_[i + 1] - cit_offsets_[i]; }

    /// Number of edges whose citing node has index < n.
    std::size_t edges_from_prefix(std::size_t n) const { return ref_offsets_[n]; }

    /// Number of nodes issued strictly before `cutoff`.
    std::size_t count_before(Date cutoff) const;

    std::optional<NodeIndex> find(std::string_view id) const;

    /// All edges, sorted by (citing, cited).
    std::vector<Edge> edges() const;

    void write_nodes(const std::filesystem::path &path) const;
    void write_edges(const std::filesystem::path &path) const;

private:
    std::vector<std::string> ids_;
    std::vector<Date> dates_;
    bool numeric_ids_ = false;
    std::vector<std::size_t> ref_offsets_{0};
    std::vector<NodeIndex> ref_targets_;
    std::vector<std::size_t> cit_offsets_{0};
    std::vector<NodeIndex> cit_sources_;
    std::unordered_map<std::string, NodeIndex> lookup_;
};

/**
 * Sub-network of the nodes issued strictly before `cutoff()`, with induced edges.
 * Borrows the parent network, which must outlive the view.
 */
class NetworkView {
public:
    NetworkView(const CitationNetwork &network, Date cutoff);

    /// The whole network (cutoff one day past the last issue date).
    static NetworkView full(const CitationNetwork &network);

    const CitationNetwork &network() const { return *network_; }
    Date cutoff() const { return cutoff_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool contains(NodeIndex i) const { return i < size_; }
    std::size_t edge_count() const { return network_->edges_from_prefix(size_); }

    /// Every reference of a node in the view points inside the view.
    std::span<const NodeIndex> references(NodeIndex i) const { return network_->references(i); }
    std::span<const NodeIndex> citers(NodeIndex i) const;
    std::size_t out_degree(NodeIndex i) const { return network_->out_degree(i); }
    std::size_t in_degree(NodeIndex i) const { return citers(i).size(); }

private:
    const CitationNetwork *network_;
    Date cutoff_;
    std::size_t size_;
};

NetworkView snapshot(const CitationNetwork &network, Date cutoff);

struct LoadedCorpus {
    CitationNetwork network;
    IngestionReport report;
};

/**
 * Reads `node_id<TAB>YYYY-MM-DD` and `citing_id<TAB>cited_id` TSV files.
 * A first node line whose date field does not parse is treated as a header.
 * Throws ParseError on malformed lines; edges naming unknown ids are dropped and counted.
 */
LoadedCorpus load_corpus(const std::filesystem::path &nodes_path,
                         const std::filesystem::path &edges_path);

/// One node id per line; blank lines and a leading '#' comment are ignored.
std::vector<std::string> load_id_list(const std::filesystem::path &path);

/// Maps ids onto node indices. Unknown ids are skipped and counted in `missing`.
std::vector<NodeIndex> resolve_ids(const CitationNetwork &network, std::span<const std::string> ids,
                                   std::size_t *missing = nullptr);

} // namespace citerank
