#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace scimap {

// Square matrix of SC-to-SC citation counts; rows cite, columns are cited.
struct CitationMatrix {
    std::vector<std::string> sc_names;
    std::vector<std::vector<double>> counts;

    // square, names unique and non-empty, entries finite and >= 0
    void validate() const;
};

CitationMatrix load_citation_matrix(const std::string& path);

struct BasemapEdge {
    int u = 0;
    int v = 0;              // canonical u < v
    double similarity = 0;  // in (0, 1]

    double distance() const { return 1.0 - similarity; }
};

// Weighted undirected similarity network of subject categories. Immutable
// after construction; safe to share read-only.
class Basemap {
public:
    Basemap() = default;
    Basemap(std::vector<std::string> nodes, std::vector<BasemapEdge> edges, double threshold);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::string& node_name(std::size_t i) const { return nodes_[i]; }

    // -1 when the name is unknown
    int node_index(const std::string& name) const;
    bool has_node(const std::string& name) const { return node_index(name) >= 0; }

    const std::vector<BasemapEdge>& edges() const { return edges_; }
    // (neighbor index, similarity) pairs, sorted by neighbor index
    const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_[i]; }

    bool has_edge(int u, int v) const;
    // 0.0 for non-adjacent pairs (absent or thresholded away)
    double similarity(int u, int v) const;

    double threshold() const { return threshold_; }

private:
    std::vector<std::string> nodes_;
    std::unordered_map<std::string, int> index_;
    std::vector<BasemapEdge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    double threshold_ = 0.0;
};

// Cosine of two non-negative count vectors; in [0,1]. Throws on zero vectors,
// naming them via the optional labels.
double cosine_similarity(std::span<const double> u, std::span<const double> v,
                         const std::string& u_label = {}, const std::string& v_label = {});

// Keeps every unordered pair with cosine >= threshold (and > 0); all SCs stay
// as nodes even when isolated. `zero_diagonal` clears self-citations before
// the cosine pass.
Basemap build_basemap(const CitationMatrix& cm, double threshold, bool zero_diagonal = false);

enum class MapFormat { EdgeCsv, GraphML };

MapFormat map_format_from_string(const std::string& s);
// csv -> EdgeCsv, graphml -> GraphML; falls back to EdgeCsv
MapFormat map_format_from_path(const std::string& path);

Basemap load_basemap(const std::string& path, MapFormat format);
void save_basemap(const Basemap& bm, const std::string& path, MapFormat format);

}  // namespace scimap
