#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scimap/basemap.hpp"

namespace scimap {

// One paper's SC assignments for one organization.
struct PaperRecord {
    std::string org_id;
    std::string paper_id;
    std::vector<std::string> sc_list;

    // non-empty org/paper ids, non-empty sc_list, no duplicate SCs
    void validate() const;
};

enum class Counting { Full, Fractional };

Counting counting_from_string(const std::string& s);
std::string to_string(Counting c);

// Frequency distribution and normalized shares of an organization over SCs.
struct ResearchProfile {
    std::string org_id;
    std::map<std::string, double> counts;
    std::map<std::string, double> shares;
    // distinct papers behind the counts; 0 when loaded pre-aggregated
    std::size_t paper_count = 0;

    std::vector<std::string> active_scs() const;
};

// One profile per distinct org_id, sorted by org_id. Full counting adds 1 per
// (paper, SC) assignment; fractional splits each paper evenly over its SCs.
std::vector<ResearchProfile> aggregate_profiles(const std::vector<PaperRecord>& records,
                                                Counting counting = Counting::Full);

// Keeps organizations with at least `min_papers` distinct papers.
std::vector<ResearchProfile> filter_orgs(const std::vector<ResearchProfile>& profiles,
                                         std::size_t min_papers);

enum class OverlayPolicy { Error, DropRenormalize, DropKeep };

OverlayPolicy overlay_policy_from_string(const std::string& s);
std::string to_string(OverlayPolicy p);

// A profile projected onto the basemap. `unmapped` holds the profile SCs
// missing from the basemap together with their original shares; under
// drop-renormalize their mass has been redistributed, under drop-keep it is
// simply absent from node_weights.
struct CompetenceMap {
    const Basemap* basemap = nullptr;
    std::string org_id;
    std::map<std::string, double> node_weights;
    std::map<std::string, double> unmapped;
    OverlayPolicy policy = OverlayPolicy::DropRenormalize;

    double mapped_mass() const;
    double unmapped_mass() const;
};

CompetenceMap overlay(const ResearchProfile& profile, const Basemap& bm,
                      OverlayPolicy policy = OverlayPolicy::DropRenormalize);

// CSV with header org_id,paper_id,subject_categories ('; '-separated SCs).
std::vector<PaperRecord> load_paper_records(const std::string& path);

// Pre-aggregated CSV with header org_id,subject_category,count.
std::vector<ResearchProfile> load_profiles_csv(const std::string& path);
void save_profiles_csv(const std::vector<ResearchProfile>& profiles, const std::string& path);

// Accepts either of the two profile CSV layouts, sniffing the header.
std::vector<ResearchProfile> load_any_profiles(const std::string& path, Counting counting);

}  // namespace scimap
