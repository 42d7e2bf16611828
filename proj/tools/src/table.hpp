#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace vacuum::cli {

// monostate is written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Header row, then one line per row; doubles with 17 significant digits.
void write_csv(const Table& table, std::ostream& os);

// {"command": ..., "metadata": {...}, "columns": [...], "rows": [{...}, ...]}
void write_json(const Table& table, std::ostream& os);

std::string format_double(double v);

}  // namespace vacuum::cli
