#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scimap/distance.hpp"
#include "scimap/profile.hpp"

namespace scimap {

// Score variants as reported (div_sim is the cosine-distance version).
enum class DiversityVariant { Sim, Path, Wpath };

DiversityVariant diversity_variant_from_string(const std::string& s);
std::string to_string(DiversityVariant v);
DistanceVariant distance_variant_for(DiversityVariant v);
// canonical column order: sim, path, wpath
const std::vector<DiversityVariant>& all_diversity_variants();

// Generalized Stirling index: sum over ordered pairs i != j of
// d_ij * p_i * p_j. Shares may sum to less than 1 (drop-keep overlays) but
// never more.
double stirling(const std::map<std::string, double>& shares, const DistanceMatrix& dm);

// Share-free reduction: sum over ordered pairs i != j in `active` of d_ij.
double stirling_uniform(const std::set<std::string>& active, const DistanceMatrix& dm);

struct DiversityRow {
    std::string org_id;
    std::map<DiversityVariant, double> scores;
    std::string error;  // per-org failure, empty when scoring succeeded
};

struct ReportOptions {
    std::vector<DiversityVariant> variants = all_diversity_variants();
    OverlayPolicy policy = OverlayPolicy::DropRenormalize;
    std::optional<double> disconnected_fill;
};

// One row per profile, in input order. Distance matrices are computed once
// per requested variant and shared; a failing organization is reported in its
// row instead of aborting the batch.
std::vector<DiversityRow> diversity_report(const std::vector<ResearchProfile>& profiles,
                                           const Basemap& bm, const ReportOptions& options = {});

// Header org_id,div_<variant>,...,error; scores printed with 6 decimals.
void save_report_csv(const std::vector<DiversityRow>& rows,
                     const std::vector<DiversityVariant>& variants, const std::string& path);

}  // namespace scimap
