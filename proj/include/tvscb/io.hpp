#pragma once

#include <string>
#include <vector>

#include "tvscb/model.hpp"

namespace tvscb {

/// Thrown for malformed input files. Carries the 1-based line number.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::invalid_argument(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads one numeric column. A non-numeric first line is a header. With
/// several columns, `column` names the one to use (default "x").
/// log_returns turns prices p into log p_i - log p_{i-1}.
Series ingest_csv(const std::string& path, bool log_returns = false, const std::string& column = "");

/// Same, from text already in memory.
Series parse_csv(const std::string& text, bool log_returns = false, const std::string& column = "");

/// Shortest round-trip decimal form.
std::string format_double(double v);

std::vector<double> parse_double_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

void write_text(const std::string& path, const std::string& content);

}  // namespace tvscb
