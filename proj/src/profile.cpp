#include "scimap/profile.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"

namespace scimap {

void PaperRecord::validate() const {
    if (org_id.empty()) {
        throw Error("paper record with empty org_id (paper '" + paper_id + "')");
    }
    if (paper_id.empty()) {
        throw Error("paper record with empty paper_id (org '" + org_id + "')");
    }
    if (sc_list.empty()) {
        throw Error("paper '" + paper_id + "' has no subject categories");
    }
    std::set<std::string> seen;
    for (const auto& sc : sc_list) {
        if (sc.empty()) {
            throw Error("paper '" + paper_id + "' has an empty subject category");
        }
        if (!seen.insert(sc).second) {
            throw Error("paper '" + paper_id + "' lists subject category '" + sc + "' twice");
        }
    }
}

Counting counting_from_string(const std::string& s) {
    if (s == "full") return Counting::Full;
    if (s == "fractional") return Counting::Fractional;
    throw Error("unknown counting mode: " + s + " (expected full or fractional)");
}

std::string to_string(Counting c) {
    return c == Counting::Full ? "full" : "fractional";
}

std::vector<std::string> ResearchProfile::active_scs() const {
    std::vector<std::string> out;
    out.reserve(shares.size());
    for (const auto& [sc, share] : shares) {
        if (share > 0.0) out.push_back(sc);
    }
    return out;
}

namespace {

void normalize_shares(ResearchProfile& p) {
    double total = 0.0;
    for (const auto& [sc, c] : p.counts) total += c;
    p.shares.clear();
    if (total <= 0.0) return;
    for (const auto& [sc, c] : p.counts) {
        p.shares[sc] = c / total;
    }
}

}  // namespace

std::vector<ResearchProfile> aggregate_profiles(const std::vector<PaperRecord>& records,
                                                Counting counting) {
    if (records.empty()) {
        throw Error("no paper records to aggregate");
    }
    std::map<std::string, ResearchProfile> by_org;
    std::map<std::string, std::set<std::string>> papers_by_org;
    for (const auto& rec : records) {
        rec.validate();
        auto& profile = by_org[rec.org_id];
        profile.org_id = rec.org_id;
        const double weight =
            counting == Counting::Full ? 1.0 : 1.0 / static_cast<double>(rec.sc_list.size());
        for (const auto& sc : rec.sc_list) {
            profile.counts[sc] += weight;
        }
        papers_by_org[rec.org_id].insert(rec.paper_id);
    }
    std::vector<ResearchProfile> out;
    out.reserve(by_org.size());
    for (auto& [org, profile] : by_org) {
        profile.paper_count = papers_by_org[org].size();
        normalize_shares(profile);
        out.push_back(std::move(profile));
    }
    return out;
}

std::vector<ResearchProfile> filter_orgs(const std::vector<ResearchProfile>& profiles,
                                         std::size_t min_papers) {
    if (min_papers < 1) {
        throw Error("min_papers must be at least 1");
    }
    std::vector<ResearchProfile> out;
    for (const auto& p : profiles) {
        if (p.paper_count >= min_papers) out.push_back(p);
    }
    return out;
}

OverlayPolicy overlay_policy_from_string(const std::string& s) {
    if (s == "error") return OverlayPolicy::Error;
    if (s == "drop-renormalize") return OverlayPolicy::DropRenormalize;
    if (s == "drop-keep") return OverlayPolicy::DropKeep;
    throw Error("unknown overlay policy: " + s +
                " (expected error, drop-renormalize or drop-keep)");
}

std::string to_string(OverlayPolicy p) {
    switch (p) {
        case OverlayPolicy::Error: return "error";
        case OverlayPolicy::DropRenormalize: return "drop-renormalize";
        case OverlayPolicy::DropKeep: return "drop-keep";
    }
    return "?";
}

double CompetenceMap::mapped_mass() const {
    double total = 0.0;
    for (const auto& [sc, w] : node_weights) total += w;
    return total;
}

double CompetenceMap::unmapped_mass() const {
    double total = 0.0;
    for (const auto& [sc, w] : unmapped) total += w;
    return total;
}

CompetenceMap overlay(const ResearchProfile& profile, const Basemap& bm, OverlayPolicy policy) {
    CompetenceMap cm;
    cm.basemap = &bm;
    cm.org_id = profile.org_id;
    cm.policy = policy;
    for (const auto& [sc, share] : profile.shares) {
        if (bm.has_node(sc)) {
            cm.node_weights[sc] = share;
        } else {
            cm.unmapped[sc] = share;
        }
    }
    if (!cm.unmapped.empty()) {
        if (policy == OverlayPolicy::Error) {
            std::string names;
            for (const auto& [sc, share] : cm.unmapped) {
                if (!names.empty()) names += ", ";
                names += sc;
            }
            throw Error("profile '" + profile.org_id +
                        "' has subject categories missing from the basemap: " + names);
        }
        if (policy == OverlayPolicy::DropRenormalize) {
            const double mapped = cm.mapped_mass();
            if (mapped <= 0.0) {
                throw Error("profile '" + profile.org_id +
                            "' has no subject category on the basemap");
            }
            for (auto& [sc, w] : cm.node_weights) {
                w /= mapped;
            }
        }
    }
    return cm;
}

std::vector<PaperRecord> load_paper_records(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) {
        throw ParseError(path, 1, "empty records file");
    }
    if (rows[0].fields != std::vector<std::string>{"org_id", "paper_id", "subject_categories"}) {
        throw ParseError(path, rows[0].line,
                         "expected header 'org_id,paper_id,subject_categories'");
    }
    std::vector<PaperRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3) {
            throw ParseError(path, row.line,
                             "expected 3 fields, got " + std::to_string(row.fields.size()));
        }
        PaperRecord rec;
        rec.org_id = trim(row.fields[0]);
        rec.paper_id = trim(row.fields[1]);
        std::string sc;
        for (char c : row.fields[2] + ";") {
            if (c == ';') {
                const std::string t = trim(sc);
                if (!t.empty()) rec.sc_list.push_back(t);
                sc.clear();
            } else {
                sc.push_back(c);
            }
        }
        try {
            rec.validate();
        } catch (const Error& e) {
            throw ParseError(path, row.line, e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ResearchProfile> load_profiles_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) {
        throw ParseError(path, 1, "empty profiles file");
    }
    if (rows[0].fields != std::vector<std::string>{"org_id", "subject_category", "count"}) {
        throw ParseError(path, rows[0].line, "expected header 'org_id,subject_category,count'");
    }
    std::map<std::string, ResearchProfile> by_org;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3) {
            throw ParseError(path, row.line,
                             "expected 3 fields, got " + std::to_string(row.fields.size()));
        }
        const std::string org = trim(row.fields[0]);
        const std::string sc = trim(row.fields[1]);
        if (org.empty() || sc.empty()) {
            throw ParseError(path, row.line, "empty org_id or subject_category");
        }
        const double count = parse_double(row.fields[2], path, row.line, "count");
        if (!(count >= 0.0)) {
            throw ParseError(path, row.line, "negative count for '" + sc + "'");
        }
        auto& profile = by_org[org];
        profile.org_id = org;
        if (profile.counts.count(sc)) {
            throw ParseError(path, row.line,
                             "duplicate (org_id, subject_category) row: " + org + ", " + sc);
        }
        profile.counts[sc] = count;
    }
    std::vector<ResearchProfile> out;
    out.reserve(by_org.size());
    for (auto& [org, profile] : by_org) {
        normalize_shares(profile);
        out.push_back(std::move(profile));
    }
    return out;
}

void save_profiles_csv(const std::vector<ResearchProfile>& profiles, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << "org_id,subject_category,count\n";
    for (const auto& p : profiles) {
        for (const auto& [sc, count] : p.counts) {
            out << csv_join({p.org_id, sc, format_exact(count)}) << "\n";
        }
    }
}

std::vector<ResearchProfile> load_any_profiles(const std::string& path, Counting counting) {
    const auto rows = read_csv(path);
    if (rows.empty()) {
        throw ParseError(path, 1, "empty profiles file");
    }
    const auto& h = rows[0].fields;
    if (h == std::vector<std::string>{"org_id", "paper_id", "subject_categories"}) {
        return aggregate_profiles(load_paper_records(path), counting);
    }
    if (h == std::vector<std::string>{"org_id", "subject_category", "count"}) {
        return load_profiles_csv(path);
    }
    throw ParseError(path, rows[0].line,
                     "unrecognized profiles header; expected "
                     "'org_id,paper_id,subject_categories' or "
                     "'org_id,subject_category,count'");
}

}  // namespace scimap
