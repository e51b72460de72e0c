#include "scimap/diversity.hpp"

#include <cmath>
#include <fstream>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"

namespace scimap {

DiversityVariant diversity_variant_from_string(const std::string& s) {
    if (s == "sim") return DiversityVariant::Sim;
    if (s == "path") return DiversityVariant::Path;
    if (s == "wpath") return DiversityVariant::Wpath;
    throw Error("unknown diversity variant: " + s + " (expected sim, path or wpath)");
}

std::string to_string(DiversityVariant v) {
    switch (v) {
        case DiversityVariant::Sim: return "sim";
        case DiversityVariant::Path: return "path";
        case DiversityVariant::Wpath: return "wpath";
    }
    return "?";
}

DistanceVariant distance_variant_for(DiversityVariant v) {
    switch (v) {
        case DiversityVariant::Sim: return DistanceVariant::Cosine;
        case DiversityVariant::Path: return DistanceVariant::Path;
        case DiversityVariant::Wpath: return DistanceVariant::Wpath;
    }
    return DistanceVariant::Cosine;
}

const std::vector<DiversityVariant>& all_diversity_variants() {
    static const std::vector<DiversityVariant> all = {
        DiversityVariant::Sim, DiversityVariant::Path, DiversityVariant::Wpath};
    return all;
}

double stirling(const std::map<std::string, double>& shares, const DistanceMatrix& dm) {
    double total_share = 0.0;
    std::vector<std::pair<int, double>> active;  // (matrix index, share), name-sorted
    active.reserve(shares.size());
    for (const auto& [sc, p] : shares) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw Error("share for '" + sc + "' is negative or not finite");
        }
        const int idx = dm.index_of(sc);
        if (idx < 0) {
            throw Error("subject category '" + sc + "' is missing from the distance matrix");
        }
        total_share += p;
        if (p > 0.0) active.emplace_back(idx, p);
    }
    if (total_share > 1.0 + 1e-9) {
        throw Error("shares sum to " + format_exact(total_share) + ", above 1");
    }
    // ordered-pair convention: each unordered pair enters twice
    double sum = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
            sum += dm.at(active[a].first, active[b].first) * active[a].second * active[b].second;
        }
    }
    return 2.0 * sum;
}

double stirling_uniform(const std::set<std::string>& active, const DistanceMatrix& dm) {
    if (active.empty()) {
        throw Error("stirling_uniform needs at least one active SC");
    }
    std::vector<int> idx;
    idx.reserve(active.size());
    for (const auto& sc : active) {
        const int i = dm.index_of(sc);
        if (i < 0) {
            throw Error("subject category '" + sc + "' is missing from the distance matrix");
        }
        idx.push_back(i);
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            sum += dm.at(idx[a], idx[b]);
        }
    }
    return 2.0 * sum;
}

std::vector<DiversityRow> diversity_report(const std::vector<ResearchProfile>& profiles,
                                           const Basemap& bm, const ReportOptions& options) {
    std::map<DistanceVariant, DistanceMatrix> matrices;
    for (const auto v : options.variants) {
        const auto dv = distance_variant_for(v);
        if (matrices.count(dv)) continue;
        switch (dv) {
            case DistanceVariant::Cosine:
                matrices.emplace(dv, cosine_distance_matrix(bm));
                break;
            case DistanceVariant::Path:
                matrices.emplace(dv, unweighted_path_matrix(bm, options.disconnected_fill));
                break;
            case DistanceVariant::Wpath:
                matrices.emplace(dv, weighted_path_matrix(bm, options.disconnected_fill));
                break;
        }
    }
    std::vector<DiversityRow> rows;
    if (options.variants.empty()) return rows;
    rows.reserve(profiles.size());
    for (const auto& profile : profiles) {
        DiversityRow row;
        row.org_id = profile.org_id;
        try {
            const CompetenceMap cm = overlay(profile, bm, options.policy);
            for (const auto v : options.variants) {
                row.scores[v] = stirling(cm.node_weights, matrices.at(distance_variant_for(v)));
            }
        } catch (const Error& e) {
            row.scores.clear();
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_report_csv(const std::vector<DiversityRow>& rows,
                     const std::vector<DiversityVariant>& variants, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << "org_id";
    for (const auto v : variants) out << ",div_" << to_string(v);
    out << ",error\n";
    for (const auto& row : rows) {
        out << csv_quote(row.org_id);
        for (const auto v : variants) {
            auto it = row.scores.find(v);
            out << "," << (it == row.scores.end() ? std::string() : format_fixed(it->second, 6));
        }
        out << "," << csv_quote(row.error) << "\n";
    }
}

}  // namespace scimap
