#pragma once

// Minimal XML helpers for the GraphML subset this project reads and writes.
// Not a general XML parser: elements of interest are located by tag name and
// attributes are pulled out of the start tag.

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>

namespace scimap::xml {

// true when `tag` (text between '<' and '>') is a start tag named `name`
inline bool is_tag(const std::string& tag, const std::string& name) {
    if (!tag.starts_with(name)) return false;
    if (tag.size() == name.size()) return true;
    const char c = tag[name.size()];
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '/';
}

inline std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        const auto semi = s.find(';', i);
        const std::string ent = semi == std::string::npos ? "" : s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else {
            out.push_back('&');
            continue;
        }
        i = semi;
    }
    return out;
}

// Attribute value inside a start tag's text (the part between '<' and '>').
inline std::optional<std::string> attribute(const std::string& tag, const std::string& name) {
    std::size_t pos = 0;
    while ((pos = tag.find(name, pos)) != std::string::npos) {
        // require word boundary then ="..." or ='...'
        const bool at_start = pos == 0 || std::isspace(static_cast<unsigned char>(tag[pos - 1]));
        std::size_t p = pos + name.size();
        while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
        if (!at_start || p >= tag.size() || tag[p] != '=') {
            pos += name.size();
            continue;
        }
        ++p;
        while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
        if (p >= tag.size() || (tag[p] != '"' && tag[p] != '\'')) return std::nullopt;
        const char quote = tag[p];
        const auto end = tag.find(quote, p + 1);
        if (end == std::string::npos) return std::nullopt;
        return unescape(tag.substr(p + 1, end - p - 1));
    }
    return std::nullopt;
}

}  // namespace scimap::xml
