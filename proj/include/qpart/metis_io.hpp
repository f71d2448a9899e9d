// metis_io.hpp - METIS/Chaco graph files and 0/1 partition files
//
// Header line: n_vertices n_edges [fmt [ncon]]. fmt is a 1-3 character flag
// string: last char enables edge weights, second-to-last vertex weights,
// third-to-last vertex sizes (rejected). Indices are 1-based in files and
// 0-based in memory. '%' lines are comments. Weights may be integer or real.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/errors.hpp"
#include "qpart/graph.hpp"

namespace qpart {

namespace detail {

inline bool is_comment(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '%';
    }
    return false;
}

inline bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '%') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

inline double parse_number(const std::string& tok, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ValidationError(std::string("malformed ") + what + ": '" + tok + "'");
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError(std::string("malformed ") + what + ": '" + tok + "'");
    }
}

inline long parse_int(const std::string& tok, const char* what) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ValidationError(std::string("malformed ") + what + ": '" + tok + "'");
    return v;
}

// Shortest representation that round-trips; integral values print bare.
inline std::string format_weight(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    // to_chars may produce "1e+20"-style output; acceptable for stod.
    return s;
}

} // namespace detail

inline WeightedGraph parse_metis_graph(std::istream& in) {
    std::string line;
    // header
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (detail::is_comment_or_blank(line)) continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) header.push_back(tok);
        break;
    }
    if (header.size() < 2 || header.size() > 4)
        throw ValidationError("malformed header: expected 'n m [fmt [ncon]]'");
    const long n = detail::parse_int(header[0], "vertex count");
    const long m = detail::parse_int(header[1], "edge count");
    if (n < 0 || m < 0) throw ValidationError("malformed header: negative counts");
    bool has_vertex_weights = false;
    bool has_edge_weights = false;
    if (header.size() >= 3) {
        const std::string& fmt = header[2];
        if (fmt.empty() || fmt.size() > 3) throw ValidationError("malformed header: bad fmt field '" + fmt + "'");
        for (char c : fmt)
            if (c != '0' && c != '1') throw ValidationError("malformed header: bad fmt field '" + fmt + "'");
        if (fmt.size() == 3 && fmt[0] == '1') throw ValidationError("vertex sizes (fmt 1xx) are not supported");
        has_edge_weights = fmt.back() == '1';
        has_vertex_weights = fmt.size() >= 2 && fmt[fmt.size() - 2] == '1';
    }
    if (header.size() == 4) {
        const long ncon = detail::parse_int(header[3], "ncon");
        if (ncon < 1) throw ValidationError("malformed header: ncon must be >= 1");
        if (ncon > 1) throw ValidationError("multi-constraint vertex weights (ncon > 1) are not supported");
    }

    std::vector<double> vw(static_cast<std::size_t>(n), 1.0);
    struct Listing {
        double w = 1.0;
        bool from_lo = false;
        bool from_hi = false;
    };
    std::map<std::pair<int, int>, Listing> edge_map;

    long vertex = 0;
    while (vertex < n && std::getline(in, line)) {
        if (detail::is_comment(line)) continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) {
            // blank line: isolated vertex
            if (has_vertex_weights)
                throw ValidationError("vertex " + std::to_string(vertex + 1) + ": missing weight");
            ++vertex;
            continue;
        }
        std::size_t pos = 0;
        if (has_vertex_weights) {
            const double w = detail::parse_number(toks[pos++], "vertex weight");
            if (w < 0.0) throw ValidationError("vertex weights must be non-negative");
            vw[static_cast<std::size_t>(vertex)] = w;
        }
        while (pos < toks.size()) {
            const long nbr1 = detail::parse_int(toks[pos++], "neighbor index");
            if (nbr1 < 1 || nbr1 > n)
                throw ValidationError("vertex " + std::to_string(vertex + 1) + ": neighbor index " +
                                      std::to_string(nbr1) + " out of range");
            const int nbr = static_cast<int>(nbr1 - 1);
            if (nbr == vertex) throw ValidationError("self-loop at vertex " + std::to_string(vertex + 1));
            double w = 1.0;
            if (has_edge_weights) {
                if (pos >= toks.size())
                    throw ValidationError("vertex " + std::to_string(vertex + 1) + ": missing edge weight");
                w = detail::parse_number(toks[pos++], "edge weight");
                if (w < 0.0) throw ValidationError("edge weights must be non-negative");
            }
            const bool lo = vertex < nbr;
            const auto key = std::make_pair(std::min<int>(static_cast<int>(vertex), nbr),
                                            std::max<int>(static_cast<int>(vertex), nbr));
            auto [it, inserted] = edge_map.try_emplace(key);
            Listing& l = it->second;
            if (inserted) l.w = w;
            if ((lo && l.from_lo) || (!lo && l.from_hi))
                throw ValidationError("duplicate edge (" + std::to_string(key.first + 1) + "," +
                                      std::to_string(key.second + 1) + ")");
            if (!inserted && l.w != w)
                throw ValidationError("edge (" + std::to_string(key.first + 1) + "," +
                                      std::to_string(key.second + 1) + ") listed with inconsistent weights");
            (lo ? l.from_lo : l.from_hi) = true;
        }
        ++vertex;
    }
    if (vertex < n) throw ValidationError("fewer adjacency lines than the header's vertex count");
    while (std::getline(in, line))
        if (!detail::is_comment_or_blank(line)) throw ValidationError("trailing content after the last vertex line");

    std::vector<Edge> edges;
    edges.reserve(edge_map.size());
    for (const auto& [key, l] : edge_map) {
        if (!l.from_lo || !l.from_hi)
            throw ValidationError("edge (" + std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                                  ") is listed asymmetrically");
        edges.push_back({key.first, key.second, l.w});
    }
    if (static_cast<long>(edges.size()) != m)
        throw ValidationError("edge count mismatch: header says " + std::to_string(m) + ", file lists " +
                              std::to_string(edges.size()));
    return WeightedGraph(static_cast<int>(n), std::move(vw), std::move(edges));
}

inline WeightedGraph parse_metis_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_metis_graph(in);
}

inline WeightedGraph load_metis_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file: " + path);
    return parse_metis_graph(in);
}

inline void write_metis_graph(const WeightedGraph& g, std::ostream& out) {
    bool has_vw = false;
    for (double w : g.vertex_weights())
        if (w != 1.0) has_vw = true;
    bool has_ew = false;
    for (const auto& e : g.edges())
        if (e.w != 1.0) has_ew = true;
    out << g.n_vertices() << ' ' << g.n_edges();
    if (has_vw)
        out << " 1" << (has_ew ? '1' : '0');
    else if (has_ew)
        out << " 1";
    out << '\n';
    for (int u = 0; u < g.n_vertices(); ++u) {
        bool first = true;
        if (has_vw) {
            out << detail::format_weight(g.vertex_weight(u));
            first = false;
        }
        for (const auto& nb : g.neighbors(u)) {
            if (!first) out << ' ';
            first = false;
            out << (nb.v + 1);
            if (has_ew) out << ' ' << detail::format_weight(nb.w);
        }
        out << '\n';
    }
}

inline std::string metis_string(const WeightedGraph& g) {
    std::ostringstream out;
    write_metis_graph(g, out);
    return out.str();
}

// Partition file: one 0/1 per line, line i = part of vertex i.
inline void write_partition(const std::vector<std::uint8_t>& bits, std::ostream& out) {
    for (auto b : bits) out << (b ? 1 : 0) << '\n';
}

inline std::vector<std::uint8_t> read_partition(std::istream& in) {
    std::vector<std::uint8_t> bits;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::is_comment_or_blank(line)) continue;
        const long v = detail::parse_int(line, "partition entry");
        if (v != 0 && v != 1) throw ValidationError("partition entries must be 0 or 1");
        bits.push_back(static_cast<std::uint8_t>(v));
    }
    return bits;
}

} // namespace qpart
