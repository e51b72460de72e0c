#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scimap/basemap.hpp"

namespace scimap {

enum class DistanceVariant { Cosine, Path, Wpath };

DistanceVariant distance_variant_from_string(const std::string& s);
std::string to_string(DistanceVariant v);

// How pairs with no connecting path were filled.
struct DisconnectedPolicy {
    double fill = 0.0;
    bool overridden = false;  // fill came from --disconnected instead of the diameter
    std::size_t unreachable_pairs = 0;  // unordered
};

// Symmetric all-pairs SC distances under one variant. Also usable as a plain
// symmetric matrix container (tests, pass-through data).
class DistanceMatrix {
public:
    DistanceMatrix(DistanceVariant variant, std::vector<std::string> sc_index);

    std::size_t size() const { return names_.size(); }
    DistanceVariant variant() const { return variant_; }
    const std::vector<std::string>& sc_index() const { return names_; }
    int index_of(const std::string& sc) const;

    double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    void set(std::size_t i, std::size_t j, double value);

    bool unreachable(std::size_t i, std::size_t j) const {
        return unreachable_[i * size() + j] != 0;
    }
    void mark_unreachable(std::size_t i, std::size_t j);

    const DisconnectedPolicy& disconnected() const { return policy_; }
    void set_disconnected(const DisconnectedPolicy& p) { policy_ = p; }

    // diagonal zero, symmetric, finite, non-negative; cosine entries <= 1
    void validate() const;

private:
    DistanceVariant variant_;
    std::vector<std::string> names_;
    std::vector<int> sorted_;  // name-sorted index permutation for lookups
    std::vector<double> values_;
    std::vector<unsigned char> unreachable_;
    DisconnectedPolicy policy_;
};

// d = 1 - s for post-threshold edges, 1 for every other distinct pair.
DistanceMatrix cosine_distance_matrix(const Basemap& bm);

// Minimum hop count over post-threshold edges; unreachable pairs filled with
// the hop diameter of the largest component unless overridden.
DistanceMatrix unweighted_path_matrix(const Basemap& bm,
                                      std::optional<double> disconnected_fill = {});

// Minimum over paths of the summed edge distances (1 - s); unreachable pairs
// filled with the weighted diameter of the largest component unless
// overridden.
DistanceMatrix weighted_path_matrix(const Basemap& bm,
                                    std::optional<double> disconnected_fill = {});

struct Histogram {
    DistanceVariant variant;
    double bin_width = 0.0;  // 1 for hop counts
    // (bin lower edge, count) sorted by edge; hop bins use the hop count itself
    std::vector<std::pair<double, std::size_t>> bins;
    std::size_t unreachable_pairs = 0;
};

// Distribution over unordered pairs i < j of the distances that correspond to
// real paths; filled (unreachable) pairs are counted separately.
Histogram path_length_distribution(const DistanceMatrix& dm, double bin_width = 0.1);

void save_histogram_csv(const Histogram& h, const std::string& path);

// Square CSV (header row/column = SC names) for audit.
void save_distance_csv(const DistanceMatrix& dm, const std::string& path);

}  // namespace scimap
