#include "scimap/cli_app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "scimap/basemap.hpp"
#include "scimap/csv.hpp"
#include "scimap/distance.hpp"
#include "scimap/diversity.hpp"
#include "scimap/errors.hpp"
#include "scimap/profile.hpp"
#include "scimap/ranking.hpp"
#include "scimap/render.hpp"
#include "scimap/synth.hpp"

namespace scimap {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void write_run_config(const fs::path& out_dir, const json& config) {
    std::ofstream out(out_dir / "run_config.json", std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + (out_dir / "run_config.json").string());
    }
    out << config.dump(2) << "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) {
        throw Error("cannot create output directory: " + dir + " (" + ec.message() + ")");
    }
    return p;
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "org" : out;
}

void print_basemap_summary(const Basemap& bm) {
    std::size_t min_deg = bm.node_count() ? bm.neighbors(0).size() : 0;
    std::size_t max_deg = 0, total_deg = 0, isolated = 0;
    for (std::size_t i = 0; i < bm.node_count(); ++i) {
        const std::size_t d = bm.neighbors(i).size();
        min_deg = std::min(min_deg, d);
        max_deg = std::max(max_deg, d);
        total_deg += d;
        if (d == 0) ++isolated;
    }
    const double mean = bm.node_count()
                            ? static_cast<double>(total_deg) / static_cast<double>(bm.node_count())
                            : 0.0;
    std::cout << "nodes: " << bm.node_count() << "\n"
              << "edges: " << bm.edge_count() << "\n"
              << "isolated nodes: " << isolated << "\n"
              << "degree min/mean/max: " << min_deg << "/" << format_fixed(mean, 2) << "/"
              << max_deg << "\n";
}

std::vector<DiversityVariant> parse_variants(const std::vector<std::string>& names) {
    std::vector<DiversityVariant> out;
    for (const auto& n : names) {
        const auto v = diversity_variant_from_string(n);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    if (out.empty()) {
        throw Error("no diversity variants requested");
    }
    return out;
}

void warn_unmapped(const std::vector<ResearchProfile>& profiles, const Basemap& bm) {
    for (const auto& p : profiles) {
        std::string missing;
        std::size_t count = 0;
        for (const auto& [sc, share] : p.shares) {
            if (!bm.has_node(sc)) {
                if (!missing.empty()) missing += ", ";
                missing += sc;
                ++count;
            }
        }
        if (count > 0) {
            std::cerr << "warning: '" << p.org_id << "' has " << count
                      << " subject categories off the basemap: " << missing << "\n";
        }
    }
}

// ---- basemap ----------------------------------------------------------

struct BasemapBuildArgs {
    std::string citations;
    double threshold = 0.15;
    bool zero_diagonal = false;
    std::string format = "csv";
    std::string out_dir;
};

void cmd_basemap_build(const BasemapBuildArgs& a) {
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(out_dir, json{{"command", "basemap build"},
                                   {"citations", a.citations},
                                   {"threshold", a.threshold},
                                   {"zero_diagonal", a.zero_diagonal},
                                   {"format", a.format},
                                   {"out", a.out_dir}});
    const auto cm = load_citation_matrix(a.citations);
    const auto bm = build_basemap(cm, a.threshold, a.zero_diagonal);
    const auto format = map_format_from_string(a.format);
    const fs::path path =
        out_dir / (format == MapFormat::EdgeCsv ? "basemap.csv" : "basemap.graphml");
    save_basemap(bm, path.string(), format);
    std::cout << "threshold: " << format_compact(a.threshold) << "\n";
    print_basemap_summary(bm);
    std::cout << "wrote " << path.string() << "\n";
}

struct BasemapImportArgs {
    std::string edges;
    std::string format;  // empty = infer from extension
    std::string out_dir;
};

void cmd_basemap_import(const BasemapImportArgs& a) {
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(out_dir, json{{"command", "basemap import"},
                                   {"edges", a.edges},
                                   {"format", a.format.empty() ? "auto" : a.format},
                                   {"out", a.out_dir}});
    const MapFormat format =
        a.format.empty() ? map_format_from_path(a.edges) : map_format_from_string(a.format);
    const auto bm = load_basemap(a.edges, format);
    if (bm.node_count() == 0) {
        throw Error("basemap '" + a.edges + "' has no nodes");
    }
    const fs::path path = out_dir / "basemap.csv";
    save_basemap(bm, path.string(), MapFormat::EdgeCsv);
    print_basemap_summary(bm);
    std::cout << "wrote " << path.string() << "\n";
}

// ---- analyze -----------------------------------------------------------

struct AnalyzeArgs {
    std::string basemap;
    std::string profiles;
    std::string scores;  // pass-through mode
    std::vector<std::string> variants = {"sim", "path", "wpath"};
    std::string counting = "full";
    std::string policy = "drop-renormalize";
    std::size_t min_papers = 0;
    double disconnected = -1.0;  // <0 = diameter default
    std::string out_dir;
};

void print_comparisons(const RankTable& rt,
                       std::vector<std::pair<std::string, std::string>>& delta_pairs) {
    for (std::size_t i = 0; i < rt.variants.size(); ++i) {
        for (std::size_t j = i + 1; j < rt.variants.size(); ++j) {
            delta_pairs.emplace_back(rt.variants[i], rt.variants[j]);
        }
    }
    if (rt.org_ids.size() < 2) {
        std::cout << "no rank comparison (needs >= 2 organizations)\n";
        return;
    }
    for (const auto& [from, to] : delta_pairs) {
        const double rho = spearman(rt.ranks_of(from), rt.ranks_of(to));
        std::cout << "spearman(" << from << ", " << to << ") = " << format_fixed(rho, 4)
                  << "\n";
    }
}

void print_discrimination(const RankTable& rt) {
    const auto has = [&](const std::string& v) { return rt.scores.count(v) > 0; };
    if (!has("sim") || !has("wpath")) return;
    int pol = -1, spread = -1;
    for (std::size_t i = 0; i < rt.org_ids.size(); ++i) {
        if (rt.org_ids[i] == "polarized") pol = static_cast<int>(i);
        if (rt.org_ids[i] == "spread") spread = static_cast<int>(i);
    }
    if (pol < 0 || spread < 0) return;
    const auto& sim = rt.scores_of("sim");
    const auto& wpath = rt.scores_of("wpath");
    if (sim[spread] <= 0.0 || wpath[spread] <= 0.0) return;
    std::cout << "discrimination ratio polarized/spread: wpath "
              << format_fixed(wpath[pol] / wpath[spread], 4) << " vs sim "
              << format_fixed(sim[pol] / sim[spread], 4) << "\n";
}

void cmd_analyze(const AnalyzeArgs& a) {
    if (a.scores.empty() == a.profiles.empty()) {
        throw Error("analyze needs exactly one of --profiles or --scores");
    }
    if (a.scores.empty() && a.basemap.empty()) {
        throw Error("analyze needs --basemap with --profiles");
    }
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(
        out_dir,
        json{{"command", "analyze"},
             {"basemap", a.basemap},
             {"profiles", a.profiles},
             {"scores", a.scores},
             {"variants", a.variants},
             {"counting", a.counting},
             {"policy", a.policy},
             {"min_papers", a.min_papers},
             {"disconnected", a.disconnected < 0.0 ? json(nullptr) : json(a.disconnected)},
             {"out", a.out_dir}});

    RankTable rt;
    if (!a.scores.empty()) {
        rt = load_scores_csv(a.scores);
        // echo the scores through the report so both outputs always exist
        std::ofstream report(out_dir / "report.csv", std::ios::binary);
        if (!report) throw Error("cannot write report.csv");
        report << "org_id";
        for (const auto& v : rt.variants) report << ",div_" << v;
        report << ",error\n";
        for (std::size_t i = 0; i < rt.org_ids.size(); ++i) {
            report << csv_quote(rt.org_ids[i]);
            for (const auto& v : rt.variants) report << "," << format_fixed(rt.scores_of(v)[i], 6);
            report << ",\n";
        }
    } else {
        const auto bm = load_basemap(a.basemap, map_format_from_path(a.basemap));
        auto profiles = load_any_profiles(a.profiles, counting_from_string(a.counting));
        if (a.min_papers > 0) {
            const std::size_t total = profiles.size();
            for (const auto& p : profiles) {
                if (p.paper_count == 0) {
                    throw Error("--min-papers needs per-paper records, not pre-aggregated "
                                "profiles (org '" + p.org_id + "' has no paper count)");
                }
            }
            profiles = filter_orgs(profiles, a.min_papers);
            std::cout << "organizations retained: " << profiles.size() << "/" << total << "\n";
        }
        warn_unmapped(profiles, bm);
        ReportOptions options;
        options.variants = parse_variants(a.variants);
        options.policy = overlay_policy_from_string(a.policy);
        if (a.disconnected >= 0.0) options.disconnected_fill = a.disconnected;
        const auto rows = diversity_report(profiles, bm, options);
        save_report_csv(rows, options.variants, (out_dir / "report.csv").string());
        for (const auto& row : rows) {
            if (!row.error.empty()) {
                std::cerr << "warning: skipped '" << row.org_id << "': " << row.error << "\n";
            }
        }
        const bool any_scored = std::any_of(rows.begin(), rows.end(),
                                            [](const DiversityRow& r) { return r.error.empty(); });
        if (!any_scored) {
            throw Error("no organization could be scored");
        }
        rt = make_rank_table(rows, options.variants);
    }

    std::vector<std::pair<std::string, std::string>> delta_pairs;
    print_comparisons(rt, delta_pairs);
    print_discrimination(rt);
    save_rank_table_csv(rt, delta_pairs, (out_dir / "ranks.csv").string());
    std::cout << "wrote " << (out_dir / "report.csv").string() << "\n"
              << "wrote " << (out_dir / "ranks.csv").string() << "\n";
}

// ---- map ----------------------------------------------------------------

struct MapArgs {
    std::string basemap;
    std::string profiles;
    std::vector<std::string> formats = {"svg", "csv"};
    std::string counting = "full";
    std::string policy = "drop-renormalize";
    std::uint64_t seed = 42;
    int iterations = 300;
    std::string out_dir;
};

void cmd_map(const MapArgs& a) {
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(out_dir, json{{"command", "map"},
                                   {"basemap", a.basemap},
                                   {"profiles", a.profiles},
                                   {"formats", a.formats},
                                   {"counting", a.counting},
                                   {"policy", a.policy},
                                   {"seed", a.seed},
                                   {"iterations", a.iterations},
                                   {"out", a.out_dir}});
    const auto bm = load_basemap(a.basemap, map_format_from_path(a.basemap));
    const auto profiles = load_any_profiles(a.profiles, counting_from_string(a.counting));
    warn_unmapped(profiles, bm);
    std::vector<ExportFormat> formats;
    for (const auto& f : a.formats) formats.push_back(export_format_from_string(f));
    if (formats.empty()) {
        throw Error("no export formats requested");
    }
    const auto coords = layout_fr(bm, a.seed, a.iterations);
    const auto policy = overlay_policy_from_string(a.policy);
    for (const auto& profile : profiles) {
        const auto cm = overlay(profile, bm, policy);
        for (const auto f : formats) {
            const fs::path path =
                out_dir / (sanitize_filename(profile.org_id) + "_map." + export_extension(f));
            export_map(cm, coords, f, path.string());
            std::cout << "wrote " << path.string() << "\n";
        }
    }
}

// ---- pathstats ------------------------------------------------------------

struct PathstatsArgs {
    std::string basemap;
    std::string variant = "path";
    double bin_width = 0.1;
    double disconnected = -1.0;
    bool export_matrix = false;
    std::string out_dir;
};

void cmd_pathstats(const PathstatsArgs& a) {
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(
        out_dir,
        json{{"command", "pathstats"},
             {"basemap", a.basemap},
             {"variant", a.variant},
             {"bin_width", a.bin_width},
             {"disconnected", a.disconnected < 0.0 ? json(nullptr) : json(a.disconnected)},
             {"export_matrix", a.export_matrix},
             {"out", a.out_dir}});
    const auto bm = load_basemap(a.basemap, map_format_from_path(a.basemap));
    const auto variant = distance_variant_from_string(a.variant);
    std::optional<double> fill;
    if (a.disconnected >= 0.0) fill = a.disconnected;
    DistanceMatrix dm = variant == DistanceVariant::Cosine ? cosine_distance_matrix(bm)
                        : variant == DistanceVariant::Path ? unweighted_path_matrix(bm, fill)
                                                           : weighted_path_matrix(bm, fill);
    const auto hist = path_length_distribution(dm, a.bin_width);
    const fs::path path = out_dir / ("pathstats_" + a.variant + ".csv");
    save_histogram_csv(hist, path.string());
    if (a.export_matrix) {
        const fs::path matrix_path = out_dir / ("distances_" + a.variant + ".csv");
        save_distance_csv(dm, matrix_path.string());
        std::cout << "wrote " << matrix_path.string() << "\n";
    }
    for (const auto& [edge, count] : hist.bins) {
        std::cout << format_compact(edge) << ": " << count << "\n";
    }
    std::cout << "unreachable pairs: " << hist.unreachable_pairs << "\n";
    if (dm.disconnected().unreachable_pairs > 0) {
        std::cout << "disconnected fill: " << format_compact(dm.disconnected().fill)
                  << (dm.disconnected().overridden ? " (override)" : " (component diameter)")
                  << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
    std::vector<std::string> kinds = {"polarized", "spread"};
    int nodes = 5;
    double edge_w = 0.15;
    int poles = 2;
    int n_active = 3;
    std::uint64_t seed = 42;
    std::string out_dir;
};

void cmd_synth(const SynthArgs& a) {
    const auto out_dir = prepare_out_dir(a.out_dir);
    write_run_config(out_dir, json{{"command", "synth"},
                                   {"kinds", a.kinds},
                                   {"nodes", a.nodes},
                                   {"edge_w", a.edge_w},
                                   {"poles", a.poles},
                                   {"n_active", a.n_active},
                                   {"seed", a.seed},
                                   {"out", a.out_dir}});
    const auto bm = gen_basemap_path(a.nodes, a.edge_w);
    save_basemap(bm, (out_dir / "synth_basemap.csv").string(), MapFormat::EdgeCsv);
    std::vector<ResearchProfile> profiles;
    for (const auto& kind : a.kinds) {
        SynthSpec spec;
        spec.kind = portfolio_kind_from_string(kind);
        spec.n_active = a.n_active;
        spec.poles = a.poles;
        spec.seed = a.seed;
        profiles.push_back(gen_profile(spec, bm));
        std::cout << kind << ": {";
        bool first = true;
        for (const auto& [sc, share] : profiles.back().shares) {
            std::cout << (first ? "" : ", ") << sc << ": " << format_compact(share);
            first = false;
        }
        std::cout << "}\n";
    }
    save_profiles_csv(profiles, (out_dir / "synth_profiles.csv").string());
    std::cout << "wrote " << (out_dir / "synth_basemap.csv").string() << "\n"
              << "wrote " << (out_dir / "synth_profiles.csv").string() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"scimap - research-portfolio diversity and polarization toolkit"};
    app.require_subcommand(1);

    // basemap
    auto* basemap_cmd = app.add_subcommand("basemap", "Build or import the science basemap");
    basemap_cmd->require_subcommand(1);

    auto build_args = std::make_shared<BasemapBuildArgs>();
    auto* build_cmd = basemap_cmd->add_subcommand("build", "Build from an SC citation matrix");
    build_cmd->add_option("--citations", build_args->citations, "Citation matrix CSV")
        ->required()
        ->check(CLI::ExistingFile);
    build_cmd->add_option("--threshold", build_args->threshold, "Similarity threshold")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    build_cmd->add_flag("--zero-diagonal", build_args->zero_diagonal,
                        "Clear SC self-citations before computing cosines");
    build_cmd->add_option("--format", build_args->format, "Output format (csv|graphml)")
        ->capture_default_str();
    build_cmd->add_option("--out", build_args->out_dir, "Output directory")->required();
    build_cmd->callback([build_args] { cmd_basemap_build(*build_args); });

    auto import_args = std::make_shared<BasemapImportArgs>();
    auto* import_cmd = basemap_cmd->add_subcommand("import", "Validate a prebuilt basemap");
    import_cmd->add_option("--edges", import_args->edges, "Edge list (CSV or GraphML)")
        ->required()
        ->check(CLI::ExistingFile);
    import_cmd->add_option("--format", import_args->format,
                           "Input format (csv|graphml); inferred from the extension by default");
    import_cmd->add_option("--out", import_args->out_dir, "Output directory")->required();
    import_cmd->callback([import_args] { cmd_basemap_import(*import_args); });

    // analyze
    auto analyze_args = std::make_shared<AnalyzeArgs>();
    auto* analyze_cmd =
        app.add_subcommand("analyze", "Score diversity, rank organizations, compare rankings");
    analyze_cmd->add_option("--basemap", analyze_args->basemap, "Basemap file")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--profiles", analyze_args->profiles,
                            "Paper records or pre-aggregated profile CSV")
        ->check(CLI::ExistingFile);
    analyze_cmd
        ->add_option("--scores", analyze_args->scores,
                     "Precomputed scores CSV (org_id,div_<variant>,...); skips scoring")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--variants", analyze_args->variants, "sim,path,wpath subset")
        ->delimiter(',')
        ->capture_default_str();
    analyze_cmd->add_option("--counting", analyze_args->counting, "full|fractional")
        ->capture_default_str();
    analyze_cmd->add_option("--policy", analyze_args->policy,
                            "Overlay policy (error|drop-renormalize|drop-keep)")
        ->capture_default_str();
    analyze_cmd->add_option("--min-papers", analyze_args->min_papers,
                            "Keep organizations with at least this many papers");
    analyze_cmd->add_option("--disconnected", analyze_args->disconnected,
                            "Distance for unreachable SC pairs (default: component diameter)")
        ->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--out", analyze_args->out_dir, "Output directory")->required();
    analyze_cmd->callback([analyze_args] { cmd_analyze(*analyze_args); });

    // map
    auto map_args = std::make_shared<MapArgs>();
    auto* map_cmd = app.add_subcommand("map", "Render competence maps");
    map_cmd->add_option("--basemap", map_args->basemap, "Basemap file")
        ->required()
        ->check(CLI::ExistingFile);
    map_cmd->add_option("--profiles", map_args->profiles, "Profiles CSV")
        ->required()
        ->check(CLI::ExistingFile);
    map_cmd->add_option("--formats", map_args->formats, "dot,graphml,svg,csv subset")
        ->delimiter(',')
        ->capture_default_str();
    map_cmd->add_option("--counting", map_args->counting, "full|fractional")
        ->capture_default_str();
    map_cmd->add_option("--policy", map_args->policy, "Overlay policy")->capture_default_str();
    map_cmd->add_option("--seed", map_args->seed, "Layout seed")->capture_default_str();
    map_cmd->add_option("--iterations", map_args->iterations, "Layout iterations")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    map_cmd->add_option("--out", map_args->out_dir, "Output directory")->required();
    map_cmd->callback([map_args] { cmd_map(*map_args); });

    // pathstats
    auto pathstats_args = std::make_shared<PathstatsArgs>();
    auto* pathstats_cmd =
        app.add_subcommand("pathstats", "Distribution of SC-to-SC distances on the basemap");
    pathstats_cmd->add_option("--basemap", pathstats_args->basemap, "Basemap file")
        ->required()
        ->check(CLI::ExistingFile);
    pathstats_cmd->add_option("--variant", pathstats_args->variant, "cosine|path|wpath")
        ->capture_default_str();
    pathstats_cmd->add_option("--bin-width", pathstats_args->bin_width,
                              "Bin width for weighted distances")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    pathstats_cmd->add_option("--disconnected", pathstats_args->disconnected,
                              "Distance for unreachable SC pairs")
        ->check(CLI::NonNegativeNumber);
    pathstats_cmd->add_flag("--export-matrix", pathstats_args->export_matrix,
                            "Also write the full distance matrix as square CSV");
    pathstats_cmd->add_option("--out", pathstats_args->out_dir, "Output directory")->required();
    pathstats_cmd->callback([pathstats_args] { cmd_pathstats(*pathstats_args); });

    // synth
    auto synth_args = std::make_shared<SynthArgs>();
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate synthetic basemaps and portfolio archetypes");
    synth_cmd->add_option("--kinds", synth_args->kinds,
                          "polarized,spread,concentrated subset")
        ->delimiter(',')
        ->capture_default_str();
    synth_cmd->add_option("--nodes", synth_args->nodes, "Path-graph node count")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    synth_cmd->add_option("--edge-w", synth_args->edge_w, "Edge distance (1 - similarity)")
        ->capture_default_str();
    synth_cmd->add_option("--poles", synth_args->poles, "Poles for the polarized portfolio")
        ->capture_default_str();
    synth_cmd->add_option("--n-active", synth_args->n_active,
                          "Active SCs for the spread portfolio")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_args->seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_args->out_dir, "Output directory")->required();
    synth_cmd->callback([synth_args] { cmd_synth(*synth_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace scimap
