#include "scimap/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include "scimap/csv.hpp"
#include "scimap/errors.hpp"
#include "xml_util.hpp"

namespace scimap {

namespace {

// mt19937_64 output mapped to [0,1) without std::uniform_real_distribution,
// whose stream is not pinned down by the standard
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LayoutCoords layout_fr(const Basemap& bm, std::uint64_t seed, int iterations) {
    if (iterations < 1) {
        throw Error("layout needs at least one iteration");
    }
    LayoutCoords coords;
    coords.seed = seed;
    coords.iterations = iterations;
    const std::size_t n = bm.node_count();
    if (n == 0) return coords;

    std::mt19937_64 rng(seed);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = unit_draw(rng);
        y[i] = unit_draw(rng);
    }

    const double k = std::sqrt(1.0 / static_cast<double>(n));
    const double t0 = 0.1;
    std::vector<double> dx(n), dy(n);
    for (int it = 0; it < iterations; ++it) {
        const double t = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
        std::fill(dx.begin(), dx.end(), 0.0);
        std::fill(dy.begin(), dy.end(), 0.0);
        // repulsion between every pair
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double ddx = x[i] - x[j];
                double ddy = y[i] - y[j];
                double dist = std::sqrt(ddx * ddx + ddy * ddy);
                if (dist < 1e-12) {
                    ddx = 1.0;  // coincident points part along x, deterministically
                    ddy = 0.0;
                    dist = 1e-12;
                }
                const double force = k * k / dist;
                dx[i] += ddx / dist * force;
                dy[i] += ddy / dist * force;
                dx[j] -= ddx / dist * force;
                dy[j] -= ddy / dist * force;
            }
        }
        // attraction along edges, weighted by similarity
        for (const auto& e : bm.edges()) {
            double ddx = x[e.u] - x[e.v];
            double ddy = y[e.u] - y[e.v];
            double dist = std::sqrt(ddx * ddx + ddy * ddy);
            if (dist < 1e-12) continue;
            const double force = e.similarity * dist * dist / k;
            dx[e.u] -= ddx / dist * force;
            dy[e.u] -= ddy / dist * force;
            dx[e.v] += ddx / dist * force;
            dy[e.v] += ddy / dist * force;
        }
        // displace, capped by the temperature
        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
            if (len < 1e-12) continue;
            const double step = std::min(len, t);
            x[i] += dx[i] / len * step;
            y[i] += dy[i] / len * step;
        }
    }

    // normalize to the unit square; a degenerate axis collapses to its center
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    const double xspan = *xmax_it - *xmin_it;
    const double yspan = *ymax_it - *ymin_it;
    for (std::size_t i = 0; i < n; ++i) {
        const double nx = xspan > 1e-12 ? (x[i] - *xmin_it) / xspan : 0.5;
        const double ny = yspan > 1e-12 ? (y[i] - *ymin_it) / yspan : 0.5;
        coords.positions[bm.node_name(i)] = {nx, ny};
    }
    return coords;
}

ExportFormat export_format_from_string(const std::string& s) {
    if (s == "dot") return ExportFormat::Dot;
    if (s == "graphml") return ExportFormat::GraphML;
    if (s == "svg") return ExportFormat::Svg;
    if (s == "csv") return ExportFormat::Csv;
    throw Error("unknown export format: " + s + " (expected dot, graphml, svg or csv)");
}

std::string to_string(ExportFormat f) {
    switch (f) {
        case ExportFormat::Dot: return "dot";
        case ExportFormat::GraphML: return "graphml";
        case ExportFormat::Svg: return "svg";
        case ExportFormat::Csv: return "csv";
    }
    return "?";
}

std::string export_extension(ExportFormat f) {
    return to_string(f);
}

namespace {

struct NodeGeometry {
    double x = 0.0;      // viewport coordinates
    double y = 0.0;
    double ux = 0.0;     // unit-square coordinates
    double uy = 0.0;
    double share = 0.0;
    double radius = 0.0;
};

std::vector<NodeGeometry> node_geometry(const CompetenceMap& cm, const LayoutCoords& coords,
                                        const RenderStyle& style) {
    const Basemap& bm = *cm.basemap;
    std::vector<NodeGeometry> out(bm.node_count());
    const double inner = style.viewport - 2.0 * style.margin;
    for (std::size_t i = 0; i < bm.node_count(); ++i) {
        const auto& name = bm.node_name(i);
        auto it = coords.positions.find(name);
        if (it == coords.positions.end()) {
            throw Error("layout has no coordinates for '" + name + "'");
        }
        NodeGeometry g;
        g.ux = it->second.first;
        g.uy = it->second.second;
        g.x = style.margin + g.ux * inner;
        g.y = style.margin + g.uy * inner;
        auto w = cm.node_weights.find(name);
        g.share = w == cm.node_weights.end() ? 0.0 : w->second;
        g.radius = style.min_radius + style.share_scale * g.share;
        out[i] = g;
    }
    return out;
}

void export_csv(const CompetenceMap& cm, const std::vector<NodeGeometry>& geo,
                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    const Basemap& bm = *cm.basemap;
    out << "sc,x,y,share\n";
    for (std::size_t i = 0; i < geo.size(); ++i) {
        out << csv_join({bm.node_name(i), format_exact(geo[i].ux), format_exact(geo[i].uy),
                         format_exact(geo[i].share)})
            << "\n";
    }
}

void export_dot(const CompetenceMap& cm, const std::vector<NodeGeometry>& geo,
                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    const Basemap& bm = *cm.basemap;
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q.push_back('\\');
            q.push_back(c);
        }
        q.push_back('"');
        return q;
    };
    out << "graph competence_map {\n"
        << "  layout=neato;\n  node [shape=circle, fixedsize=true, label=\"\"];\n";
    for (std::size_t i = 0; i < geo.size(); ++i) {
        // width in inches at 96 dpi; pos uses neato point units
        out << "  " << quote(bm.node_name(i)) << " [width=" << format_compact(geo[i].radius / 48.0)
            << ", pos=\"" << format_compact(geo[i].x) << "," << format_compact(geo[i].y)
            << "!\", tooltip=" << quote(bm.node_name(i)) << "];\n";
    }
    for (const auto& e : bm.edges()) {
        out << "  " << quote(bm.node_name(e.u)) << " -- " << quote(bm.node_name(e.v))
            << " [penwidth=" << format_compact(2.0 * e.similarity) << "];\n";
    }
    out << "}\n";
}

void export_graphml(const CompetenceMap& cm, const std::vector<NodeGeometry>& geo,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    const Basemap& bm = *cm.basemap;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
        << "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n"
        << "  <key id=\"share\" for=\"node\" attr.name=\"share\" attr.type=\"double\"/>\n"
        << "  <key id=\"similarity\" for=\"edge\" attr.name=\"similarity\""
           " attr.type=\"double\"/>\n"
        << "  <graph id=\"" << xml::escape(cm.org_id) << "\" edgedefault=\"undirected\">\n";
    for (std::size_t i = 0; i < geo.size(); ++i) {
        out << "    <node id=\"" << xml::escape(bm.node_name(i)) << "\">"
            << "<data key=\"x\">" << format_exact(geo[i].ux) << "</data>"
            << "<data key=\"y\">" << format_exact(geo[i].uy) << "</data>"
            << "<data key=\"share\">" << format_exact(geo[i].share) << "</data></node>\n";
    }
    for (const auto& e : bm.edges()) {
        out << "    <edge source=\"" << xml::escape(bm.node_name(e.u)) << "\" target=\""
            << xml::escape(bm.node_name(e.v)) << "\"><data key=\"similarity\">"
            << format_exact(e.similarity) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void export_svg(const CompetenceMap& cm, const std::vector<NodeGeometry>& geo,
                const RenderStyle& style, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    const Basemap& bm = *cm.basemap;
    const std::string vp = format_compact(style.viewport);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << vp << " " << vp
        << "\" width=\"" << vp << "\" height=\"" << vp << "\">\n"
        << "  <rect width=\"" << vp << "\" height=\"" << vp << "\" fill=\"white\"/>\n";
    for (const auto& e : bm.edges()) {
        out << "  <line x1=\"" << format_compact(geo[e.u].x) << "\" y1=\""
            << format_compact(geo[e.u].y) << "\" x2=\"" << format_compact(geo[e.v].x)
            << "\" y2=\"" << format_compact(geo[e.v].y) << "\" stroke=\"#b0b0b0\""
            << " stroke-width=\"" << format_compact(2.0 * e.similarity) << "\"/>\n";
    }
    for (std::size_t i = 0; i < geo.size(); ++i) {
        const bool active = geo[i].share > 0.0;
        out << "  <circle cx=\"" << format_compact(geo[i].x) << "\" cy=\""
            << format_compact(geo[i].y) << "\" r=\"" << format_compact(geo[i].radius)
            << "\" fill=\"" << (active ? "#2166ac" : "#cccccc") << "\" fill-opacity=\""
            << (active ? "0.85" : "0.6") << "\"><title>" << xml::escape(bm.node_name(i))
            << "</title></circle>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void export_map(const CompetenceMap& cm, const LayoutCoords& coords, ExportFormat format,
                const std::string& path, const RenderStyle& style) {
    if (cm.basemap == nullptr) {
        throw Error("competence map has no basemap");
    }
    const auto geo = node_geometry(cm, coords, style);
    switch (format) {
        case ExportFormat::Csv: export_csv(cm, geo, path); break;
        case ExportFormat::Dot: export_dot(cm, geo, path); break;
        case ExportFormat::GraphML: export_graphml(cm, geo, path); break;
        case ExportFormat::Svg: export_svg(cm, geo, style, path); break;
    }
}

std::map<std::string, MapCsvRow> read_map_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].fields != std::vector<std::string>{"sc", "x", "y", "share"}) {
        throw ParseError(path, rows.empty() ? 1 : rows[0].line,
                         "expected header 'sc,x,y,share'");
    }
    std::map<std::string, MapCsvRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 4) {
            throw ParseError(path, row.line,
                             "expected 4 fields, got " + std::to_string(row.fields.size()));
        }
        MapCsvRow rec;
        rec.x = parse_double(row.fields[1], path, row.line, "x");
        rec.y = parse_double(row.fields[2], path, row.line, "y");
        rec.share = parse_double(row.fields[3], path, row.line, "share");
        if (!out.emplace(row.fields[0], rec).second) {
            throw ParseError(path, row.line, "duplicate sc row: " + row.fields[0]);
        }
    }
    return out;
}

}  // namespace scimap
