#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace hopath::cli {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw std::logic_error("row has " + std::to_string(row.size()) + " cells, schema has " +
                               std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
}

namespace {

std::string csv_cell(const Cell& c) {
    struct {
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
    } visitor;
    return std::visit(visitor, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(double v) const {
            if (std::isfinite(v)) return v;
            return format_real(v);  // JSON has no NaN/Inf literals
        }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
    } visitor;
    return std::visit(visitor, c);
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

void Table::write_json(std::ostream& os) const {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = json_cell(row[i]);
        out.push_back(std::move(obj));
    }
    os << out.dump(2) << '\n';
}

}  // namespace hopath::cli
