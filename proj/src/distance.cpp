#include "scimap/distance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"

namespace scimap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DistanceVariant distance_variant_from_string(const std::string& s) {
    if (s == "cosine") return DistanceVariant::Cosine;
    if (s == "path") return DistanceVariant::Path;
    if (s == "wpath") return DistanceVariant::Wpath;
    throw Error("unknown distance variant: " + s + " (expected cosine, path or wpath)");
}

std::string to_string(DistanceVariant v) {
    switch (v) {
        case DistanceVariant::Cosine: return "cosine";
        case DistanceVariant::Path: return "path";
        case DistanceVariant::Wpath: return "wpath";
    }
    return "?";
}

DistanceMatrix::DistanceMatrix(DistanceVariant variant, std::vector<std::string> sc_index)
    : variant_(variant), names_(std::move(sc_index)) {
    values_.assign(names_.size() * names_.size(), 0.0);
    unreachable_.assign(names_.size() * names_.size(), 0);
    sorted_.resize(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) sorted_[i] = static_cast<int>(i);
    std::sort(sorted_.begin(), sorted_.end(),
              [this](int a, int b) { return names_[a] < names_[b]; });
    for (std::size_t i = 1; i < sorted_.size(); ++i) {
        if (names_[sorted_[i - 1]] == names_[sorted_[i]]) {
            throw Error("duplicate SC in distance matrix index: " + names_[sorted_[i]]);
        }
    }
}

int DistanceMatrix::index_of(const std::string& sc) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), sc,
                               [this](int a, const std::string& s) { return names_[a] < s; });
    if (it != sorted_.end() && names_[*it] == sc) return *it;
    return -1;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
    values_[i * size() + j] = value;
    values_[j * size() + i] = value;
}

void DistanceMatrix::mark_unreachable(std::size_t i, std::size_t j) {
    unreachable_[i * size() + j] = 1;
    unreachable_[j * size() + i] = 1;
}

void DistanceMatrix::validate() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) {
            throw InternalError("distance matrix diagonal is not zero at " + names_[i]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = at(i, j);
            if (!std::isfinite(d) || d < 0.0 || d != at(j, i)) {
                throw InternalError("distance matrix entry invalid for (" + names_[i] + ", " +
                                    names_[j] + ")");
            }
            if (variant_ == DistanceVariant::Cosine && d > 1.0) {
                throw InternalError("cosine distance above 1 for (" + names_[i] + ", " +
                                    names_[j] + ")");
            }
        }
    }
}

namespace {

// Single-source shortest paths with non-negative weights (binary-heap
// Dijkstra). `hop_metric` prices every edge at 1 instead of 1 - s.
std::vector<double> dijkstra(const Basemap& bm, int source, bool hop_metric) {
    const std::size_t n = bm.node_count();
    std::vector<double> dist(n, kInf);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const auto& [v, s] : bm.neighbors(u)) {
            const double w = hop_metric ? 1.0 : 1.0 - s;
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                heap.push({dist[v], v});
            }
        }
    }
    return dist;
}

std::vector<int> component_labels(const Basemap& bm) {
    const std::size_t n = bm.node_count();
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (label[start] >= 0) continue;
        std::vector<int> stack = {static_cast<int>(start)};
        label[start] = next;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (const auto& [v, s] : bm.neighbors(u)) {
                if (label[v] < 0) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

// All-pairs shortest paths plus the disconnection fill. The fill value is the
// diameter of the largest component (node count, ties to the lowest label)
// under the same metric, unless an override is given.
DistanceMatrix path_matrix(const Basemap& bm, bool hop_metric,
                           std::optional<double> disconnected_fill) {
    if (disconnected_fill && !(*disconnected_fill >= 0.0) ) {
        throw Error("disconnected fill must be non-negative");
    }
    const std::size_t n = bm.node_count();
    DistanceMatrix dm(hop_metric ? DistanceVariant::Path : DistanceVariant::Wpath,
                      bm.nodes());
    std::vector<std::vector<double>> dist(n);
    for (std::size_t src = 0; src < n; ++src) {
        dist[src] = dijkstra(bm, static_cast<int>(src), hop_metric);
    }

    const auto label = component_labels(bm);
    std::map<int, std::size_t> component_size;
    for (int l : label) ++component_size[l];
    int largest = -1;
    std::size_t largest_size = 0;
    for (const auto& [l, sz] : component_size) {
        if (sz > largest_size) {
            largest = l;
            largest_size = sz;
        }
    }
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != largest) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (label[j] == largest) diameter = std::max(diameter, dist[i][j]);
        }
    }

    DisconnectedPolicy policy;
    policy.fill = disconnected_fill.value_or(diameter);
    policy.overridden = disconnected_fill.has_value();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::isinf(dist[i][j])) {
                dm.set(i, j, policy.fill);
                dm.mark_unreachable(i, j);
                ++policy.unreachable_pairs;
            } else {
                dm.set(i, j, dist[i][j]);
            }
        }
    }
    dm.set_disconnected(policy);
    dm.validate();
    return dm;
}

}  // namespace

DistanceMatrix cosine_distance_matrix(const Basemap& bm) {
    DistanceMatrix dm(DistanceVariant::Cosine, bm.nodes());
    const std::size_t n = bm.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dm.set(i, j, 1.0);
        }
    }
    for (const auto& e : bm.edges()) {
        dm.set(e.u, e.v, e.distance());
    }
    DisconnectedPolicy policy;
    policy.fill = 1.0;  // non-adjacency means full cosine distance, not a fill
    dm.set_disconnected(policy);
    dm.validate();
    return dm;
}

DistanceMatrix unweighted_path_matrix(const Basemap& bm,
                                      std::optional<double> disconnected_fill) {
    return path_matrix(bm, true, disconnected_fill);
}

DistanceMatrix weighted_path_matrix(const Basemap& bm,
                                    std::optional<double> disconnected_fill) {
    return path_matrix(bm, false, disconnected_fill);
}

Histogram path_length_distribution(const DistanceMatrix& dm, double bin_width) {
    const bool hop_bins = dm.variant() == DistanceVariant::Path;
    if (!hop_bins && !(bin_width > 0.0)) {
        throw Error("bin width must be positive");
    }
    Histogram h;
    h.variant = dm.variant();
    h.bin_width = hop_bins ? 1.0 : bin_width;
    std::map<long long, std::size_t> counts;
    const std::size_t n = dm.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dm.unreachable(i, j)) {
                ++h.unreachable_pairs;
                continue;
            }
            const double d = dm.at(i, j);
            const long long bin =
                hop_bins ? std::llround(d) : static_cast<long long>(std::floor(d / bin_width));
            ++counts[bin];
        }
    }
    for (const auto& [bin, count] : counts) {
        const double edge = hop_bins ? static_cast<double>(bin)
                                     : static_cast<double>(bin) * bin_width;
        h.bins.emplace_back(edge, count);
    }
    return h;
}

void save_histogram_csv(const Histogram& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << "bin,count\n";
    for (const auto& [edge, count] : h.bins) {
        out << format_compact(edge) << "," << count << "\n";
    }
    out << "unreachable," << h.unreachable_pairs << "\n";
}

void save_distance_csv(const DistanceMatrix& dm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << "sc";
    for (const auto& name : dm.sc_index()) out << "," << csv_quote(name);
    out << "\n";
    for (std::size_t i = 0; i < dm.size(); ++i) {
        out << csv_quote(dm.sc_index()[i]);
        for (std::size_t j = 0; j < dm.size(); ++j) {
            out << "," << format_exact(dm.at(i, j));
        }
        out << "\n";
    }
}

}  // namespace scimap
