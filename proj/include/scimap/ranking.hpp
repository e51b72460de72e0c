#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scimap/diversity.hpp"

namespace scimap {

// Ascending scores map to ascending ranks, 1 = least diverse; ties get the
// average of their positions. Output is aligned with the input order.
std::vector<std::pair<std::string, double>> assign_ranks(
    const std::vector<std::pair<std::string, double>>& scores);

// Rank correlation as Pearson over the (possibly fractional) rank vectors,
// which stays valid under ties.
double spearman(std::span<const double> x_ranks, std::span<const double> y_ranks);

// Per-organization scores and ranks for a set of score columns ("variants").
struct RankTable {
    std::vector<std::string> org_ids;
    std::vector<std::string> variants;  // column order
    // variant -> per-org values aligned with org_ids
    std::map<std::string, std::vector<double>> scores;
    std::map<std::string, std::vector<double>> ranks;

    const std::vector<double>& ranks_of(const std::string& variant) const;
    const std::vector<double>& scores_of(const std::string& variant) const;
};

RankTable make_rank_table(const std::vector<std::string>& org_ids,
                          const std::vector<std::string>& variants,
                          const std::map<std::string, std::vector<double>>& scores);

// From diversity_report rows; organizations with errors are excluded.
RankTable make_rank_table(const std::vector<DiversityRow>& rows,
                          const std::vector<DiversityVariant>& variants);

// delta = rank(to) - rank(from) per org; positive means the `to` variant
// upgrades the organization. Sorted by delta descending (org_id breaks ties).
std::vector<std::pair<std::string, double>> rank_deltas(const RankTable& rt,
                                                        const std::string& from_variant,
                                                        const std::string& to_variant);

// CSV with header org_id,div_<variant>,... (e.g. a published score table).
RankTable load_scores_csv(const std::string& path);

// org_id,score_<v>,rank_<v>,...,delta_<from>_<to>,...
void save_rank_table_csv(const RankTable& rt,
                         const std::vector<std::pair<std::string, std::string>>& delta_pairs,
                         const std::string& path);

}  // namespace scimap
