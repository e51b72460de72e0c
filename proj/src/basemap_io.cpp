#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "scimap/basemap.hpp"
#include "scimap/csv.hpp"
#include "scimap/errors.hpp"
#include "xml_util.hpp"

namespace scimap {

namespace {

void require_writable(std::ofstream& out, const std::string& path) {
    if (!out) {
        throw Error("cannot write file: " + path);
    }
}

// Collects nodes in first-mention order. Explicit declarations (isolated-node
// rows, <node> elements) may appear once; edge endpoints may precede them.
class NodeCollector {
public:
    int intern(const std::string& name, const std::string& path, std::size_t line) {
        if (name.empty()) {
            throw ParseError(path, line, "empty node name");
        }
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    int declare(const std::string& name, const std::string& path, std::size_t line) {
        if (!declared_.insert(name).second) {
            throw ParseError(path, line, "duplicate node: " + name);
        }
        return intern(name, path, line);
    }

    std::vector<std::string> take() { return std::move(names_); }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
    std::set<std::string> declared_;
};

Basemap load_edge_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) {
        throw ParseError(path, 1, "empty basemap file");
    }
    if (rows[0].fields != std::vector<std::string>{"source", "target", "similarity"}) {
        throw ParseError(path, rows[0].line,
                         "expected header 'source,target,similarity', got '" +
                             csv_join(rows[0].fields) + "'");
    }
    NodeCollector nodes;
    std::vector<BasemapEdge> edges;
    std::set<std::pair<int, int>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3) {
            throw ParseError(path, row.line, "expected 3 fields, got " +
                                                 std::to_string(row.fields.size()));
        }
        const std::string source = trim(row.fields[0]);
        const std::string target = trim(row.fields[1]);
        const std::string sim = trim(row.fields[2]);
        if (target.empty() && sim.empty()) {
            // isolated-node row: name with empty target and similarity
            nodes.declare(source, path, row.line);
            continue;
        }
        if (target.empty() || sim.empty()) {
            throw ParseError(path, row.line, "incomplete edge row");
        }
        const int u = nodes.intern(source, path, row.line);
        const int v = nodes.intern(target, path, row.line);
        if (u == v) {
            throw ParseError(path, row.line, "self-loop on '" + source + "'");
        }
        const double s = parse_double(sim, path, row.line, "similarity");
        if (!(s > 0.0 && s <= 1.0)) {
            throw ParseError(path, row.line,
                             "similarity outside (0,1]: " + sim);
        }
        const auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second) {
            throw ParseError(path, row.line,
                             "duplicate edge (undirected): " + source + " -- " + target);
        }
        edges.push_back({key.first, key.second, s});
    }
    return Basemap(nodes.take(), std::move(edges), 0.0);
}

void save_edge_csv(const Basemap& bm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_writable(out, path);
    out << "source,target,similarity\n";
    std::vector<bool> touched(bm.node_count(), false);
    for (const auto& e : bm.edges()) {
        touched[e.u] = touched[e.v] = true;
        out << csv_join({bm.node_name(e.u), bm.node_name(e.v), format_exact(e.similarity)})
            << "\n";
    }
    for (std::size_t i = 0; i < bm.node_count(); ++i) {
        if (!touched[i]) {
            out << csv_join({bm.node_name(i), "", ""}) << "\n";
        }
    }
}

std::size_t line_of(const std::string& text, std::size_t pos) {
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

Basemap load_graphml(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find("<graphml") == std::string::npos) {
        throw ParseError(path, 1, "not a GraphML document (no <graphml> element)");
    }

    // <key> elements may alias the similarity attribute under another id
    std::set<std::string> similarity_keys = {"similarity"};
    NodeCollector nodes;
    std::vector<BasemapEdge> edges;
    std::set<std::pair<int, int>> seen;

    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t close = text.find('>', pos);
        if (close == std::string::npos) {
            throw ParseError(path, line_of(text, pos), "unterminated tag");
        }
        std::string tag = text.substr(pos + 1, close - pos - 1);
        const std::size_t tag_line = line_of(text, pos);
        if (xml::is_tag(tag, "key")) {
            const auto id = xml::attribute(tag, "id");
            const auto attr = xml::attribute(tag, "attr.name");
            if (id && attr && *attr == "similarity") {
                similarity_keys.insert(*id);
            }
            pos = close + 1;
        } else if (xml::is_tag(tag, "node")) {
            const auto id = xml::attribute(tag, "id");
            if (!id) {
                throw ParseError(path, tag_line, "node element without id");
            }
            nodes.declare(*id, path, tag_line);
            // skip to the end of the element if it has content
            if (!tag.ends_with("/")) {
                const auto end = text.find("</node>", close);
                pos = end == std::string::npos ? close + 1 : end + 7;
            } else {
                pos = close + 1;
            }
        } else if (xml::is_tag(tag, "edge")) {
            const auto source = xml::attribute(tag, "source");
            const auto target = xml::attribute(tag, "target");
            if (!source || !target) {
                throw ParseError(path, tag_line, "edge element without source/target");
            }
            std::string body;
            if (tag.ends_with("/")) {
                pos = close + 1;
            } else {
                const auto end = text.find("</edge>", close);
                if (end == std::string::npos) {
                    throw ParseError(path, tag_line, "unterminated edge element");
                }
                body = text.substr(close + 1, end - close - 1);
                pos = end + 7;
            }
            double similarity = -1.0;
            std::size_t dpos = 0;
            while ((dpos = body.find("<data", dpos)) != std::string::npos) {
                const auto dclose = body.find('>', dpos);
                const auto dend = body.find("</data>", dpos);
                if (dclose == std::string::npos || dend == std::string::npos) {
                    throw ParseError(path, tag_line, "malformed data element in edge");
                }
                const auto key = xml::attribute(body.substr(dpos + 1, dclose - dpos - 1), "key");
                if (key && similarity_keys.count(*key)) {
                    similarity = parse_double(trim(body.substr(dclose + 1, dend - dclose - 1)),
                                              path, tag_line, "similarity");
                }
                dpos = dend + 7;
            }
            if (similarity < 0.0) {
                throw ParseError(path, tag_line, "edge without similarity data: " + *source +
                                                     " -- " + *target);
            }
            if (!(similarity > 0.0 && similarity <= 1.0)) {
                throw ParseError(path, tag_line,
                                 "similarity outside (0,1]: " + format_exact(similarity));
            }
            const int u = nodes.intern(*source, path, tag_line);
            const int v = nodes.intern(*target, path, tag_line);
            if (u == v) {
                throw ParseError(path, tag_line, "self-loop on '" + *source + "'");
            }
            const auto key = std::minmax(u, v);
            if (!seen.insert({key.first, key.second}).second) {
                throw ParseError(path, tag_line, "duplicate edge (undirected): " + *source +
                                                     " -- " + *target);
            }
            edges.push_back({key.first, key.second, similarity});
        } else {
            pos = close + 1;
        }
    }
    return Basemap(nodes.take(), std::move(edges), 0.0);
}

void save_graphml(const Basemap& bm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require_writable(out, path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"similarity\" for=\"edge\" attr.name=\"similarity\""
           " attr.type=\"double\"/>\n"
        << "  <graph id=\"basemap\" edgedefault=\"undirected\">\n";
    for (const auto& name : bm.nodes()) {
        out << "    <node id=\"" << xml::escape(name) << "\"/>\n";
    }
    for (const auto& e : bm.edges()) {
        out << "    <edge source=\"" << xml::escape(bm.node_name(e.u)) << "\" target=\""
            << xml::escape(bm.node_name(e.v)) << "\"><data key=\"similarity\">"
            << format_exact(e.similarity) << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

}  // namespace

MapFormat map_format_from_string(const std::string& s) {
    if (s == "csv") return MapFormat::EdgeCsv;
    if (s == "graphml") return MapFormat::GraphML;
    throw Error("unknown basemap format: " + s + " (expected csv or graphml)");
}

MapFormat map_format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".graphml") {
        return MapFormat::GraphML;
    }
    return MapFormat::EdgeCsv;
}

Basemap load_basemap(const std::string& path, MapFormat format) {
    return format == MapFormat::EdgeCsv ? load_edge_csv(path) : load_graphml(path);
}

void save_basemap(const Basemap& bm, const std::string& path, MapFormat format) {
    if (format == MapFormat::EdgeCsv) {
        save_edge_csv(bm, path);
    } else {
        save_graphml(bm, path);
    }
}

}  // namespace scimap
