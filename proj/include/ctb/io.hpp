#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctb/graph.hpp"

namespace ctb {

enum class instance_format
{
    canonical,   // header "|V| |E| |C|", edges "u v w", conflicts "i j" (edge indices)
    zhang,       // optional '#' comments and id line; conflicts once per pair
    carrabs,     // conflicts listed in both orders
    auto_detect
};

struct parse_error : std::runtime_error
{
    int line;

    parse_error(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
          line(line_no)
    {
    }
};

namespace detail {

struct input_line
{
    int number = 0;                    // 1-based position in the file
    std::vector<std::string> tokens;
};

inline std::vector<input_line> tokenize_lines(std::string_view text)
{
    std::vector<input_line> lines;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size())
    {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;

        input_line line;
        line.number = line_no;
        size_t i = 0;
        while (i < raw.size())
        {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i])))
                ++i;
            size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
                ++i;
            if (i > start)
                line.tokens.emplace_back(raw.substr(start, i - start));
        }
        if (!line.tokens.empty())
            lines.push_back(std::move(line));
        if (end == text.size())
            break;
    }
    return lines;
}

inline bool numeric_token(const std::string& t)
{
    double value;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    return ec == std::errc() && ptr == t.data() + t.size();
}

inline long parse_int(const input_line& line, size_t idx, const char* what)
{
    const std::string& t = line.tokens.at(idx);
    long value;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw parse_error(line.number, std::string("expected integer for ") + what + ", got '" + t + "'");
    return value;
}

inline double parse_real(const input_line& line, size_t idx, const char* what)
{
    const std::string& t = line.tokens.at(idx);
    double value;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw parse_error(line.number, std::string("expected number for ") + what + ", got '" + t + "'");
    return value;
}

} // namespace detail

/***
 * Parses an MSTCC instance.
 *
 * Both benchmark adapters accept conflicts either as edge-index pairs
 * (2 tokens per line) or as vertex 4-tuples "u1 v1 u2 v2" resolved against
 * the edge list; repeated conflict lines are collapsed, since one of the
 * circulated collections lists every pair in both orders. 1-based files are
 * detected by the presence of index |V| (or |E|) and shifted on read. The
 * canonical format is strict: 0- or 1-based edge-index pairs, no duplicates.
 */
inline instance parse_instance(std::string_view text,
                               instance_format format = instance_format::auto_detect,
                               std::string name = {})
{
    using namespace detail;

    std::vector<input_line> lines = tokenize_lines(text);

    // drop '#' comment lines (and remember whether any were present)
    std::vector<input_line> records;
    records.reserve(lines.size());
    for (auto& l : lines)
        if (l.tokens.front()[0] != '#')
            records.push_back(std::move(l));

    if (records.empty())
        throw parse_error(1, "empty input");

    size_t cursor = 0;

    // an id line (any non-numeric token) may precede the header
    const bool header_is_numeric =
        std::all_of(records[0].tokens.begin(), records[0].tokens.end(), numeric_token);
    std::string file_id;
    if (!header_is_numeric)
    {
        if (format == instance_format::canonical || format == instance_format::carrabs)
            throw parse_error(records[0].number, "malformed header: expected '|V| |E| |C|'");
        for (const auto& t : records[0].tokens)
            file_id += (file_id.empty() ? "" : " ") + t;
        ++cursor;
    }

    // header counts; tolerate the three values spread over up to three lines
    long counts[3];
    {
        size_t have = 0;
        while (have < 3)
        {
            if (cursor >= records.size())
                throw parse_error(records.back().number, "malformed header: expected '|V| |E| |C|'");
            const input_line& line = records[cursor];
            for (size_t i = 0; i < line.tokens.size() && have < 3; ++i)
                counts[have++] = parse_int(line, i, "header count");
            if (have < 3 && line.tokens.size() > 1)
                throw parse_error(line.number, "malformed header: expected '|V| |E| |C|'");
            ++cursor;
        }
    }
    const long n = counts[0];
    const long m = counts[1];
    const long c = counts[2];
    if (n <= 0 || m < 0 || c < 0)
        throw parse_error(records[0].number, "malformed header: non-positive size");

    // edge list
    std::vector<edge_pair> raw_edges;
    std::vector<double> weights;
    raw_edges.reserve(m);
    weights.reserve(m);
    for (long e = 0; e < m; ++e)
    {
        if (cursor >= records.size())
            throw parse_error(records.back().number, "unexpected end of file in edge list");
        const input_line& line = records[cursor++];
        if (line.tokens.size() != 3)
            throw parse_error(line.number, "expected edge line 'u v w'");
        int u = static_cast<int>(parse_int(line, 0, "edge endpoint"));
        int v = static_cast<int>(parse_int(line, 1, "edge endpoint"));
        double w = parse_real(line, 2, "edge weight");
        raw_edges.emplace_back(u, v);
        weights.push_back(w);
    }

    // detect 1-based vertex numbering
    int vmin = n, vmax = -1;
    for (const auto& [u, v] : raw_edges)
    {
        vmin = std::min({vmin, u, v});
        vmax = std::max({vmax, u, v});
    }
    const bool shift_vertices = (vmax == n && vmin >= 1);
    if (shift_vertices)
        for (auto& [u, v] : raw_edges)
        {
            --u;
            --v;
        }

    // edge lookup for conflicts given as vertex tuples
    std::map<edge_pair, int> edge_index;
    for (size_t e = 0; e < raw_edges.size(); ++e)
    {
        auto [u, v] = raw_edges[e];
        edge_index[{std::min(u, v), std::max(u, v)}] = static_cast<int>(e);
    }

    // conflict records: sniff the encoding from the first one
    std::vector<input_line> conflict_records(records.begin() + cursor, records.end());
    const bool strict_pairs = (format == instance_format::canonical);

    if (c > 0 && conflict_records.empty())
        throw parse_error(records.back().number, "unexpected end of file in conflict list");

    std::vector<std::pair<edge_pair, int>> raw_conflicts;   // pair + source line
    bool tuple_encoding = false;
    if (!conflict_records.empty())
    {
        tuple_encoding = conflict_records[0].tokens.size() == 4;
        if (strict_pairs && tuple_encoding)
            throw parse_error(conflict_records[0].number,
                              "canonical format lists conflicts as edge-index pairs 'i j'");
    }

    for (const auto& line : conflict_records)
    {
        if (tuple_encoding)
        {
            if (line.tokens.size() != 4)
                throw parse_error(line.number, "expected conflict line 'u1 v1 u2 v2'");
            int a = static_cast<int>(parse_int(line, 0, "conflict endpoint"));
            int b = static_cast<int>(parse_int(line, 1, "conflict endpoint"));
            int x = static_cast<int>(parse_int(line, 2, "conflict endpoint"));
            int y = static_cast<int>(parse_int(line, 3, "conflict endpoint"));
            if (shift_vertices)
            {
                --a; --b; --x; --y;
            }
            auto find_edge = [&](int p, int q) {
                auto it = edge_index.find({std::min(p, q), std::max(p, q)});
                if (it == edge_index.end())
                    throw parse_error(line.number, "conflict references edge not in the edge list");
                return it->second;
            };
            int e1 = find_edge(a, b);
            int e2 = find_edge(x, y);
            if (e1 == e2)
                throw parse_error(line.number, "conflict references identical edges");
            raw_conflicts.push_back({{std::min(e1, e2), std::max(e1, e2)}, line.number});
        }
        else
        {
            if (line.tokens.size() != 2)
                throw parse_error(line.number, "expected conflict line 'i j'");
            long i = parse_int(line, 0, "conflict edge index");
            long j = parse_int(line, 1, "conflict edge index");
            raw_conflicts.push_back({{static_cast<int>(i), static_cast<int>(j)}, line.number});
        }
    }

    if (!tuple_encoding && !raw_conflicts.empty())
    {
        // detect 1-based edge indices
        int cmin = static_cast<int>(m), cmax = -1;
        for (const auto& [pair, ln] : raw_conflicts)
        {
            cmin = std::min({cmin, pair.first, pair.second});
            cmax = std::max({cmax, pair.first, pair.second});
        }
        if (cmax == m && cmin >= 1)
            for (auto& [pair, ln] : raw_conflicts)
            {
                --pair.first;
                --pair.second;
            }
    }

    std::vector<edge_pair> conflicts;
    conflicts.reserve(raw_conflicts.size());
    std::set<edge_pair> distinct;
    for (const auto& [pair, line_no] : raw_conflicts)
    {
        auto [i, j] = pair;
        if (i == j)
            throw parse_error(line_no, "conflict references identical edges");
        if (i < 0 || j < 0 || i >= m || j >= m)
            throw parse_error(line_no, "conflict references edge index out of range");
        edge_pair norm{std::min(i, j), std::max(i, j)};
        if (!distinct.insert(norm).second)
        {
            if (strict_pairs)
                throw parse_error(line_no, "duplicate conflict pair");
            continue;   // doubled listing in the benchmark adapters
        }
        conflicts.push_back(norm);
    }

    // benchmark copies in circulation occasionally disagree with their own header
    if (strict_pairs && static_cast<long>(conflicts.size()) != c)
        throw parse_error(records.back().number,
                          "conflict count mismatch: header says " + std::to_string(c) + ", found "
                              + std::to_string(conflicts.size()) + " distinct pairs");

    if (name.empty())
        name = file_id;

    try
    {
        return make_instance(static_cast<int>(n), std::move(raw_edges), std::move(weights),
                             std::move(conflicts), std::move(name));
    }
    catch (const std::invalid_argument& err)
    {
        throw parse_error(records[0].number, err.what());
    }
}

/// canonical text form; parse_instance(write_instance(i)) reproduces i
inline std::string write_instance(const instance& inst)
{
    std::ostringstream out;
    out << inst.g.vertex_count << ' ' << inst.g.edge_count() << ' ' << inst.conflicts.size()
        << '\n';
    for (int e = 0; e < inst.g.edge_count(); ++e)
    {
        const auto& [u, v] = inst.g.edges[e];
        out << u << ' ' << v << ' ';
        double w = inst.g.weights[e];
        if (w == std::floor(w) && std::abs(w) < 1e15)
            out << static_cast<long long>(w);
        else
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", w);
            out << buf;
        }
        out << '\n';
    }
    for (const auto& [i, j] : inst.conflicts)
        out << i << ' ' << j << '\n';
    return out.str();
}

/// reads a file, deriving the instance name from the path stem
inline instance load_instance_file(const std::string& path,
                                   instance_format format = instance_format::auto_detect)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();

    size_t slash = path.find_last_of("/\\");
    size_t start = (slash == std::string::npos) ? 0 : slash + 1;
    size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || dot < start)
        dot = path.size();
    std::string stem = path.substr(start, dot - start);

    return parse_instance(buffer.str(), format, stem);
}

} // namespace ctb
