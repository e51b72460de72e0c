#pragma once

#include <cstdint>
#include <string>

#include "scimap/basemap.hpp"
#include "scimap/profile.hpp"

namespace scimap {

// Portfolio archetypes: activity at mutually distant poles, an evenly covered
// contiguous region, or a single SC.
enum class PortfolioKind { Polarized, Spread, Concentrated };

PortfolioKind portfolio_kind_from_string(const std::string& s);
std::string to_string(PortfolioKind k);

struct SynthSpec {
    PortfolioKind kind = PortfolioKind::Spread;
    int n_active = 1;       // active SCs (spread)
    int poles = 2;          // distant regions (polarized)
    std::uint64_t seed = 0;

    void validate() const;
};

// Path graph SC_1 - ... - SC_n, every edge with similarity 1 - edge_w.
Basemap gen_basemap_path(int n, double edge_w);

// Places equal mass according to the requested kind:
//   polarized    on `poles` nodes picked for maximal mutual wpath distance
//                (exact pair for two poles, farthest-point greedy beyond);
//   spread       on `n_active` nodes minimizing the max pairwise wpath
//                distance (best nearest-neighborhood over all centers);
//   concentrated on one seeded node.
// Identical spec and basemap give identical output. Profile org_id is the
// kind name.
ResearchProfile gen_profile(const SynthSpec& spec, const Basemap& bm);

}  // namespace scimap
