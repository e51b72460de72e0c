#include "scimap/synth.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "scimap/distance.hpp"
#include "scimap/errors.hpp"

namespace scimap {

PortfolioKind portfolio_kind_from_string(const std::string& s) {
    if (s == "polarized") return PortfolioKind::Polarized;
    if (s == "spread") return PortfolioKind::Spread;
    if (s == "concentrated") return PortfolioKind::Concentrated;
    throw Error("unknown portfolio kind: " + s +
                " (expected polarized, spread or concentrated)");
}

std::string to_string(PortfolioKind k) {
    switch (k) {
        case PortfolioKind::Polarized: return "polarized";
        case PortfolioKind::Spread: return "spread";
        case PortfolioKind::Concentrated: return "concentrated";
    }
    return "?";
}

void SynthSpec::validate() const {
    if (n_active < 1) {
        throw Error("n_active must be at least 1");
    }
    if (kind == PortfolioKind::Polarized && poles < 2) {
        throw Error("a polarized portfolio needs at least 2 poles");
    }
}

Basemap gen_basemap_path(int n, double edge_w) {
    if (n < 2) {
        throw Error("path basemap needs at least 2 nodes");
    }
    if (!(edge_w > 0.0 && edge_w < 1.0)) {
        throw Error("edge weight must lie in (0,1)");
    }
    std::vector<std::string> nodes;
    nodes.reserve(n);
    for (int i = 1; i <= n; ++i) nodes.push_back("SC" + std::to_string(i));
    std::vector<BasemapEdge> edges;
    edges.reserve(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1, 1.0 - edge_w});
    }
    return Basemap(std::move(nodes), std::move(edges), 0.0);
}

namespace {

std::vector<int> place_polarized(const DistanceMatrix& dm, int poles) {
    const int n = static_cast<int>(dm.size());
    // start from the farthest pair, then grow by maximin distance
    int best_i = 0, best_j = 1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dm.at(i, j) > best) {
                best = dm.at(i, j);
                best_i = i;
                best_j = j;
            }
        }
    }
    std::vector<int> chosen = {best_i, best_j};
    std::vector<char> used(n, 0);
    used[best_i] = used[best_j] = 1;
    while (static_cast<int>(chosen.size()) < poles) {
        int pick = -1;
        double pick_score = -1.0;
        for (int c = 0; c < n; ++c) {
            if (used[c]) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (int s : chosen) nearest = std::min(nearest, dm.at(c, s));
            if (nearest > pick_score) {
                pick_score = nearest;
                pick = c;
            }
        }
        chosen.push_back(pick);
        used[pick] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

std::vector<int> place_spread(const DistanceMatrix& dm, int k) {
    const int n = static_cast<int>(dm.size());
    // candidate per center: its k nearest nodes (center included); keep the
    // candidate with the smallest max pairwise distance, ties to the
    // lexicographically smallest index set
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int center = 0; center < n; ++center) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = a == center ? 0.0 : dm.at(center, a);
            const double db = b == center ? 0.0 : dm.at(center, b);
            if (da != db) return da < db;
            return a < b;
        });
        std::vector<int> candidate(order.begin(), order.begin() + k);
        std::sort(candidate.begin(), candidate.end());
        double cost = 0.0;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) {
                cost = std::max(cost, dm.at(candidate[a], candidate[b]));
            }
        }
        if (cost < best_cost || (cost == best_cost && candidate < best)) {
            best_cost = cost;
            best = candidate;
        }
    }
    return best;
}

}  // namespace

ResearchProfile gen_profile(const SynthSpec& spec, const Basemap& bm) {
    spec.validate();
    const int n = static_cast<int>(bm.node_count());
    ResearchProfile profile;
    profile.org_id = to_string(spec.kind);

    std::vector<int> chosen;
    switch (spec.kind) {
        case PortfolioKind::Concentrated: {
            std::mt19937_64 rng(spec.seed);
            chosen = {static_cast<int>(rng() % static_cast<std::uint64_t>(n))};
            break;
        }
        case PortfolioKind::Polarized: {
            if (spec.poles > n) {
                throw Error("cannot place " + std::to_string(spec.poles) + " poles on " +
                            std::to_string(n) + " nodes");
            }
            chosen = place_polarized(weighted_path_matrix(bm), spec.poles);
            break;
        }
        case PortfolioKind::Spread: {
            if (spec.n_active > n) {
                throw Error("cannot place " + std::to_string(spec.n_active) +
                            " active SCs on " + std::to_string(n) + " nodes");
            }
            chosen = place_spread(weighted_path_matrix(bm), spec.n_active);
            break;
        }
    }
    for (int idx : chosen) {
        profile.counts[bm.node_name(idx)] = 1.0;
    }
    for (const auto& [sc, c] : profile.counts) {
        profile.shares[sc] = c / static_cast<double>(chosen.size());
    }
    profile.paper_count = chosen.size();
    return profile;
}

}  // namespace scimap
