#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "scimap/basemap.hpp"
#include "scimap/profile.hpp"

namespace scimap {

// Unit-square positions for every basemap node.
struct LayoutCoords {
    std::map<std::string, std::pair<double, double>> positions;
    std::uint64_t seed = 0;
    int iterations = 0;
};

// Fruchterman-Reingold layout over the basemap, edge similarity scaling the
// attraction. Fully deterministic for a given (basemap, seed, iterations);
// coordinates are min-max normalized into the unit square afterwards.
LayoutCoords layout_fr(const Basemap& bm, std::uint64_t seed, int iterations);

enum class ExportFormat { Dot, GraphML, Svg, Csv };

ExportFormat export_format_from_string(const std::string& s);
std::string to_string(ExportFormat f);
std::string export_extension(ExportFormat f);

// Presentation constants: node radius = min_radius + share_scale * share in
// viewport units; inactive SCs stay visible at the floor radius.
struct RenderStyle {
    double min_radius = 2.0;
    double share_scale = 60.0;
    double viewport = 1000.0;
    double margin = 40.0;
};

// Writes one file per call; every format carries the same nodes and edges,
// node size from the share and edge width from the similarity.
void export_map(const CompetenceMap& cm, const LayoutCoords& coords, ExportFormat format,
                const std::string& path, const RenderStyle& style = {});

struct MapCsvRow {
    double x = 0.0;
    double y = 0.0;
    double share = 0.0;
};

// Reads back the csv export (sc,x,y,share).
std::map<std::string, MapCsvRow> read_map_csv(const std::string& path);

}  // namespace scimap
