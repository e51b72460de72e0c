#include "scimap/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"

namespace scimap {

std::vector<std::pair<std::string, double>> assign_ranks(
    const std::vector<std::pair<std::string, double>>& scores) {
    if (scores.empty()) {
        throw Error("cannot rank an empty score list");
    }
    for (const auto& [org, value] : scores) {
        if (!std::isfinite(value)) {
            throw Error("non-finite score for organization '" + org + "'");
        }
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].second < scores[b].second;
    });
    std::vector<std::pair<std::string, double>> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]].second == scores[order[i]].second) ++j;
        // positions i+1 .. j+1 share the averaged rank
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            out[order[k]] = {scores[order[k]].first, rank};
        }
        i = j + 1;
    }
    return out;
}

double spearman(std::span<const double> x_ranks, std::span<const double> y_ranks) {
    if (x_ranks.size() != y_ranks.size()) {
        throw Error("rank vectors differ in length");
    }
    const std::size_t n = x_ranks.size();
    if (n < 2) {
        throw Error("rank correlation needs at least two observations");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x_ranks[i];
        my += y_ranks[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x_ranks[i] - mx;
        const double dy = y_ranks[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error("rank correlation undefined: a rank vector has zero variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

const std::vector<double>& RankTable::ranks_of(const std::string& variant) const {
    auto it = ranks.find(variant);
    if (it == ranks.end()) {
        throw Error("variant '" + variant + "' is not present in the rank table");
    }
    return it->second;
}

const std::vector<double>& RankTable::scores_of(const std::string& variant) const {
    auto it = scores.find(variant);
    if (it == scores.end()) {
        throw Error("variant '" + variant + "' is not present in the rank table");
    }
    return it->second;
}

RankTable make_rank_table(const std::vector<std::string>& org_ids,
                          const std::vector<std::string>& variants,
                          const std::map<std::string, std::vector<double>>& scores) {
    RankTable rt;
    rt.org_ids = org_ids;
    rt.variants = variants;
    for (const auto& variant : variants) {
        auto it = scores.find(variant);
        if (it == scores.end() || it->second.size() != org_ids.size()) {
            throw Error("score column missing or misaligned for variant '" + variant + "'");
        }
        std::vector<std::pair<std::string, double>> column(org_ids.size());
        for (std::size_t i = 0; i < org_ids.size(); ++i) {
            column[i] = {org_ids[i], it->second[i]};
        }
        const auto ranked = assign_ranks(column);
        std::vector<double> ranks(org_ids.size());
        for (std::size_t i = 0; i < org_ids.size(); ++i) ranks[i] = ranked[i].second;
        rt.scores[variant] = it->second;
        rt.ranks[variant] = std::move(ranks);
    }
    return rt;
}

RankTable make_rank_table(const std::vector<DiversityRow>& rows,
                          const std::vector<DiversityVariant>& variants) {
    std::vector<std::string> org_ids;
    std::map<std::string, std::vector<double>> scores;
    for (const auto& row : rows) {
        if (!row.error.empty()) continue;
        org_ids.push_back(row.org_id);
        for (const auto v : variants) {
            scores[to_string(v)].push_back(row.scores.at(v));
        }
    }
    std::vector<std::string> names;
    names.reserve(variants.size());
    for (const auto v : variants) names.push_back(to_string(v));
    return make_rank_table(org_ids, names, scores);
}

std::vector<std::pair<std::string, double>> rank_deltas(const RankTable& rt,
                                                        const std::string& from_variant,
                                                        const std::string& to_variant) {
    const auto& from = rt.ranks_of(from_variant);
    const auto& to = rt.ranks_of(to_variant);
    std::vector<std::pair<std::string, double>> deltas(rt.org_ids.size());
    for (std::size_t i = 0; i < rt.org_ids.size(); ++i) {
        deltas[i] = {rt.org_ids[i], to[i] - from[i]};
    }
    std::sort(deltas.begin(), deltas.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return deltas;
}

RankTable load_scores_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) {
        throw ParseError(path, 1, "scores file needs a header and at least one row");
    }
    const auto& header = rows[0];
    if (header.fields.empty() || header.fields[0] != "org_id") {
        throw ParseError(path, header.line, "expected first column 'org_id'");
    }
    std::vector<std::string> variants;
    for (std::size_t c = 1; c < header.fields.size(); ++c) {
        const std::string& col = header.fields[c];
        if (!col.starts_with("div_") || col.size() == 4) {
            throw ParseError(path, header.line,
                             "score columns must be named div_<variant>, got '" + col + "'");
        }
        const std::string variant = col.substr(4);
        if (std::find(variants.begin(), variants.end(), variant) != variants.end()) {
            throw ParseError(path, header.line, "duplicate score column: " + col);
        }
        variants.push_back(variant);
    }
    if (variants.empty()) {
        throw ParseError(path, header.line, "no score columns");
    }
    std::vector<std::string> org_ids;
    std::map<std::string, std::vector<double>> scores;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.fields.size()) {
            throw ParseError(path, row.line,
                             "expected " + std::to_string(header.fields.size()) +
                                 " fields, got " + std::to_string(row.fields.size()));
        }
        const std::string org = trim(row.fields[0]);
        if (org.empty()) {
            throw ParseError(path, row.line, "empty org_id");
        }
        if (!seen.insert(org).second) {
            throw ParseError(path, row.line, "duplicate org_id: " + org);
        }
        org_ids.push_back(org);
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            scores[variants[c - 1]].push_back(
                parse_double(row.fields[c], path, row.line, "score for '" + org + "'"));
        }
    }
    return make_rank_table(org_ids, variants, scores);
}

void save_rank_table_csv(const RankTable& rt,
                         const std::vector<std::pair<std::string, std::string>>& delta_pairs,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << "org_id";
    for (const auto& v : rt.variants) {
        out << ",score_" << v << ",rank_" << v;
    }
    for (const auto& [from, to] : delta_pairs) {
        out << ",delta_" << from << "_" << to;
    }
    out << "\n";
    for (std::size_t i = 0; i < rt.org_ids.size(); ++i) {
        out << csv_quote(rt.org_ids[i]);
        for (const auto& v : rt.variants) {
            out << "," << format_fixed(rt.scores_of(v)[i], 6) << ","
                << format_compact(rt.ranks_of(v)[i]);
        }
        for (const auto& [from, to] : delta_pairs) {
            out << "," << format_compact(rt.ranks_of(to)[i] - rt.ranks_of(from)[i]);
        }
        out << "\n";
    }
}

}  // namespace scimap
