#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace hopath::cli {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Fixed-schema record table written as CSV (header row, reals with 17
/// significant digits) or as a JSON array of objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    /// Throws std::logic_error if the row width does not match the header.
    void add_row(std::vector<Cell> row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_real(double v);

}  // namespace hopath::cli
