#include "gralp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gralp/errors.hpp"

namespace gralp {

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "file", "cannot open for reading");
    return in;
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool skippable(const std::string& line) { return line.empty() || line[0] == '#'; }

long parse_int(const std::string& path, int line, const std::string& field,
               const std::string& token) {
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(token, &pos);
    } catch (const std::exception&) {
        throw ParseError(path, line, field, "expected an integer, got '" + token + "'");
    }
    if (pos != token.size())
        throw ParseError(path, line, field, "trailing characters in '" + token + "'");
    return value;
}

double parse_real(const std::string& path, int line, const std::string& field,
                  const std::string& token) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw ParseError(path, line, field, "expected a real number, got '" + token + "'");
    }
    if (pos != token.size() || !std::isfinite(value))
        throw ParseError(path, line, field, "malformed real number '" + token + "'");
    return value;
}

} // namespace

Graph load_edge_list(const std::string& path) {
    auto in = open_or_throw(path);
    struct Edge {
        int i, j;
        double w;
    };
    std::vector<Edge> edges;
    int max_index = -1;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (skippable(line)) continue;
        std::istringstream ss(line);
        std::string ti, tj, tw, extra;
        if (!(ss >> ti >> tj >> tw))
            throw ParseError(path, line_no, "edge", "expected 'i j w'");
        if (ss >> extra) throw ParseError(path, line_no, "edge", "unexpected extra tokens");
        const long i = parse_int(path, line_no, "i", ti);
        const long j = parse_int(path, line_no, "j", tj);
        const double w = parse_real(path, line_no, "w", tw);
        if (i < 0 || j < 0) throw ParseError(path, line_no, "edge", "negative node index");
        if (i == j) throw ParseError(path, line_no, "edge", "self-loops are not allowed");
        if (w < 0.0) throw ParseError(path, line_no, "w", "edge weights must be non-negative");
        edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
        max_index = std::max({max_index, static_cast<int>(i), static_cast<int>(j)});
    }
    if (max_index < 1) throw ParseError(path, line_no, "file", "no edges found");

    Mat weights = Mat::Zero(max_index + 1, max_index + 1);
    for (const Edge& e : edges) {
        const double w = std::max({weights(e.i, e.j), weights(e.j, e.i), e.w});
        weights(e.i, e.j) = w;
        weights(e.j, e.i) = w;
    }
    return Graph(std::move(weights));
}

FeatureFile load_feature_csv(const std::string& path, bool label_column) {
    auto in = open_or_throw(path);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string raw;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (skippable(line)) continue;
        std::vector<std::string> tokens;
        std::string token;
        std::istringstream ss(line);
        while (std::getline(ss, token, ',')) tokens.push_back(strip(token));
        if (!line.empty() && line.back() == ',') tokens.emplace_back();
        if (tokens.empty()) continue;
        if (width == 0) {
            width = tokens.size();
            if (label_column && width < 2)
                throw ParseError(path, line_no, "row", "need a feature before the label column");
        } else if (tokens.size() != width) {
            throw ParseError(path, line_no, "row", "inconsistent column count");
        }
        const std::size_t d = label_column ? width - 1 : width;
        std::vector<double> row(d);
        for (std::size_t c = 0; c < d; ++c)
            row[c] = parse_real(path, line_no, "column " + std::to_string(c), tokens[c]);
        rows.push_back(std::move(row));
        if (label_column) {
            const long cls = parse_int(path, line_no, "label", tokens[width - 1]);
            if (cls < -1) throw ParseError(path, line_no, "label", "class ids start at 0");
            labels.push_back(static_cast<int>(cls));
        }
    }
    if (rows.empty()) throw ParseError(path, line_no, "file", "no samples found");

    FeatureFile out;
    out.samples.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < rows[i].size(); ++c)
            out.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    out.labels = std::move(labels);
    out.has_labels = label_column;
    return out;
}

std::vector<std::pair<int, int>> load_match_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<std::pair<int, int>> pairs;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (skippable(line)) continue;
        std::istringstream ss(line);
        std::string tm, tn, extra;
        if (!(ss >> tm >> tn)) throw ParseError(path, line_no, "pair", "expected 'm n'");
        if (ss >> extra) throw ParseError(path, line_no, "pair", "unexpected extra tokens");
        const long m = parse_int(path, line_no, "m", tm);
        const long n = parse_int(path, line_no, "n", tn);
        if (m < 0 || n < 0) throw ParseError(path, line_no, "pair", "negative node index");
        pairs.emplace_back(static_cast<int>(m), static_cast<int>(n));
    }
    if (pairs.empty()) throw ParseError(path, line_no, "file", "no matched pairs found");
    return pairs;
}

std::vector<int> load_label_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<int> labels;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (skippable(line)) continue;
        const long cls = parse_int(path, line_no, "label", line);
        if (cls < -1) throw ParseError(path, line_no, "label", "class ids start at 0 (-1 unknown)");
        labels.push_back(static_cast<int>(cls));
    }
    if (labels.empty()) throw ParseError(path, line_no, "file", "no labels found");
    return labels;
}

std::vector<std::pair<std::string, std::string>> load_key_value_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (skippable(line)) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, line_no, "entry", "expected 'key=value'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ParseError(path, line_no, "key", "empty key");
        entries.emplace_back(key, value);
    }
    return entries;
}

} // namespace gralp
