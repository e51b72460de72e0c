#include "scimap/basemap.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"

namespace scimap {

void CitationMatrix::validate() const {
    if (sc_names.empty()) {
        throw Error("citation matrix has no subject categories");
    }
    if (counts.size() != sc_names.size()) {
        throw Error("citation matrix is not square: " + std::to_string(counts.size()) +
                    " rows for " + std::to_string(sc_names.size()) + " subject categories");
    }
    std::set<std::string> seen;
    for (const auto& name : sc_names) {
        if (name.empty()) {
            throw Error("citation matrix has an empty subject-category name");
        }
        if (!seen.insert(name).second) {
            throw Error("duplicate subject category: " + name);
        }
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i].size() != sc_names.size()) {
            throw Error("citation matrix row '" + sc_names[i] + "' has " +
                        std::to_string(counts[i].size()) + " columns, expected " +
                        std::to_string(sc_names.size()));
        }
        for (double c : counts[i]) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw Error("citation matrix row '" + sc_names[i] +
                            "' contains a negative or non-finite count");
            }
        }
    }
}

CitationMatrix load_citation_matrix(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) {
        throw ParseError(path, 1, "citation matrix needs a header row and at least one SC row");
    }
    const auto& header = rows[0];
    CitationMatrix cm;
    // header: corner cell, then the cited SC names
    cm.sc_names.assign(header.fields.begin() + 1, header.fields.end());
    const std::size_t n = cm.sc_names.size();
    if (rows.size() - 1 != n) {
        throw ParseError(path, rows[0].line,
                         "citation matrix is not square: " + std::to_string(rows.size() - 1) +
                             " data rows for " + std::to_string(n) + " header columns");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != n + 1) {
            throw ParseError(path, row.line,
                             "expected " + std::to_string(n + 1) + " fields, got " +
                                 std::to_string(row.fields.size()));
        }
        if (trim(row.fields[0]) != trim(cm.sc_names[r - 1])) {
            throw ParseError(path, row.line,
                             "row label '" + row.fields[0] + "' does not match header order ('" +
                                 cm.sc_names[r - 1] + "' expected)");
        }
        std::vector<double> counts(n);
        for (std::size_t c = 0; c < n; ++c) {
            counts[c] = parse_double(row.fields[c + 1], path, row.line,
                                     "citation count for '" + row.fields[0] + "'");
            if (counts[c] < 0.0) {
                throw ParseError(path, row.line,
                                 "negative citation count for '" + row.fields[0] + "'");
            }
        }
        cm.counts.push_back(std::move(counts));
    }
    cm.validate();
    return cm;
}

Basemap::Basemap(std::vector<std::string> nodes, std::vector<BasemapEdge> edges, double threshold)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), threshold_(threshold) {
    if (!(threshold_ >= 0.0 && threshold_ <= 1.0)) {
        throw Error("basemap threshold must lie in [0,1]");
    }
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].empty()) {
            throw Error("basemap has an empty node name");
        }
        if (!index_.emplace(nodes_[i], static_cast<int>(i)).second) {
            throw Error("duplicate basemap node: " + nodes_[i]);
        }
    }
    const int n = static_cast<int>(nodes_.size());
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
            throw InternalError("basemap edge references an unknown node index");
        }
        if (e.u == e.v) {
            throw Error("basemap edge is a self-loop on '" + nodes_[e.u] + "'");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.insert({e.u, e.v}).second) {
            throw Error("duplicate basemap edge: " + nodes_[e.u] + " -- " + nodes_[e.v]);
        }
        if (!(e.similarity > 0.0 && e.similarity <= 1.0)) {
            throw Error("edge " + nodes_[e.u] + " -- " + nodes_[e.v] +
                        " has similarity outside (0,1]: " + format_exact(e.similarity));
        }
        if (e.similarity < threshold_) {
            throw Error("edge " + nodes_[e.u] + " -- " + nodes_[e.v] +
                        " falls below the declared threshold");
        }
    }
    std::sort(edges_.begin(), edges_.end(), [](const BasemapEdge& a, const BasemapEdge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    adj_.assign(nodes_.size(), {});
    for (const auto& e : edges_) {
        adj_[e.u].emplace_back(e.v, e.similarity);
        adj_[e.v].emplace_back(e.u, e.similarity);
    }
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
    }
}

int Basemap::node_index(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

bool Basemap::has_edge(int u, int v) const {
    return similarity(u, v) > 0.0;
}

double Basemap::similarity(int u, int v) const {
    if (u == v) return 0.0;
    const auto& nb = adj_[u];
    auto it = std::lower_bound(nb.begin(), nb.end(), std::pair(v, 0.0));
    if (it != nb.end() && it->first == v) return it->second;
    return 0.0;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v,
                         const std::string& u_label, const std::string& v_label) {
    if (u.size() != v.size()) {
        throw Error("cosine similarity needs vectors of equal length");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        const std::string& which = nu == 0.0 ? u_label : v_label;
        throw Error("cosine similarity undefined for all-zero citation vector" +
                    (which.empty() ? std::string() : " of '" + which + "'"));
    }
    const double s = dot / std::sqrt(nu * nv);
    return std::clamp(s, 0.0, 1.0);
}

Basemap build_basemap(const CitationMatrix& cm, double threshold, bool zero_diagonal) {
    cm.validate();
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error("threshold must lie in [0,1]");
    }
    std::vector<std::vector<double>> rows = cm.counts;
    if (zero_diagonal) {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i][i] = 0.0;
    }
    std::string zero_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool all_zero =
            std::all_of(rows[i].begin(), rows[i].end(), [](double c) { return c == 0.0; });
        if (all_zero) {
            if (!zero_rows.empty()) zero_rows += ", ";
            zero_rows += cm.sc_names[i];
        }
    }
    if (!zero_rows.empty()) {
        throw Error("all-zero citing row(s), cosine similarity undefined: " + zero_rows);
    }
    const int n = static_cast<int>(rows.size());
    std::vector<BasemapEdge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s =
                cosine_similarity(rows[i], rows[j], cm.sc_names[i], cm.sc_names[j]);
            if (s > 0.0 && s >= threshold) {
                edges.push_back({i, j, s});
            }
        }
    }
    return Basemap(cm.sc_names, std::move(edges), threshold);
}

}  // namespace scimap
