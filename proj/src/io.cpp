#include "tvscb/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tvscb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    if (*b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    return r.ec == std::errc() && r.ptr == e && std::isfinite(v);
}

}  // namespace

Series parse_csv(const std::string& text, bool log_returns, const std::string& column) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t col = 0;
    bool first = true;
    std::vector<double> vals;
    std::vector<std::size_t> rows;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = split(t, ',');
        if (first) {
            first = false;
            double probe;
            bool numeric = true;
            for (const auto& c : cells) numeric = numeric && parse_number(c, probe);
            if (!numeric) {
                const std::string want = column.empty() ? "x" : column;
                if (cells.size() == 1 && column.empty()) {
                    col = 0;
                } else {
                    bool found = false;
                    for (std::size_t c = 0; c < cells.size(); ++c) {
                        if (cells[c] == want) {
                            col = c;
                            found = true;
                        }
                    }
                    if (!found) throw ParseError("header has no column '" + want + "'", lineno);
                }
                continue;
            }
            if (cells.size() > 1) throw ParseError("multiple columns need a header naming them", lineno);
        }
        if (col >= cells.size()) throw ParseError("missing column", lineno);
        double v;
        if (!parse_number(cells[col], v)) throw ParseError("non-numeric value '" + cells[col] + "'", lineno);
        vals.push_back(v);
        rows.push_back(lineno);
    }
    if (vals.empty()) throw ParseError("no data rows", lineno);
    if (!log_returns) return Series(std::move(vals));
    if (vals.size() < 2) throw ParseError("log returns need at least two prices", lineno);
    std::vector<double> r(vals.size() - 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] > 0.0)) throw ParseError("log returns need positive prices", rows[i]);
    }
    for (std::size_t i = 1; i < vals.size(); ++i) r[i - 1] = std::log(vals[i]) - std::log(vals[i - 1]);
    return Series(std::move(r));
}

Series ingest_csv(const std::string& path, bool log_returns, const std::string& column) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str(), log_returns, column);
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& c : split(s, ',')) {
        double v;
        if (!parse_number(c, v)) throw std::invalid_argument("not a number: '" + c + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& c : split(s, ',')) {
        int v = 0;
        const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
        if (r.ec != std::errc() || r.ptr != c.data() + c.size()) throw std::invalid_argument("not an integer: '" + c + "'");
        out.push_back(v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
    f << content;
}

}  // namespace tvscb
