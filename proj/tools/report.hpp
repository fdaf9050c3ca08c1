#pragma once

#include "config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cli {

using Cell = std::variant<std::monostate, long long, double, std::string>;

/// One experiment's output: echoed inputs, scalar results, and a single table.
/// CSV carries inputs and results as `# key=value` lines ahead of the header row.
struct Report {
    std::string experiment;
    std::vector<std::pair<std::string, Cell>> inputs;
    std::vector<std::pair<std::string, Cell>> results;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void input(std::string key, Cell v) { inputs.emplace_back(std::move(key), std::move(v)); }
    void result(std::string key, Cell v) { results.emplace_back(std::move(key), std::move(v)); }
};

/// Six significant digits, shortest form, no locale; |v| < 1e-12 and "-0" print as "0".
std::string format_number(double v);

void write_csv(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r);

/// Writes to `out` (binary mode, LF endings) or stdout when empty.
void emit(const Report& r, Format f, const std::optional<std::string>& out);

} // namespace cli
