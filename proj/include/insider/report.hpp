#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace insider {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Tabular result of one experiment. `wall_seconds` is informational and is
/// never serialized, so identical runs serialize to identical bytes.
struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;

    void add_parameter(std::string key, std::string value) {
        parameters.emplace_back(std::move(key), std::move(value));
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("report row width does not match columns");
        rows.push_back(std::move(row));
    }

    [[nodiscard]] std::size_t column_index(const std::string& column) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == column) return i;
        }
        throw std::out_of_range("no report column named " + column);
    }

    [[nodiscard]] bool all_finite() const {
        for (const auto& row : rows) {
            for (const auto& cell : row) {
                if (const auto* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) return false;
            }
        }
        return true;
    }
};

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf, res.ptr};
}

inline std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<V, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<V, std::int64_t>) {
                return std::to_string(v);
            } else {
                return v;
            }
        },
        cell);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline nlohmann::ordered_json cell_json(const Cell& cell) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ExperimentReport& report) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (i) os << ',';
        os << detail::csv_field(report.columns[i]);
    }
    os << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << detail::csv_field(format_cell(row[i]));
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const ExperimentReport& report) {
    nlohmann::ordered_json doc;
    doc["name"] = report.name;
    doc["seed"] = report.seed;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.parameters) params[k] = v;
    doc["parameters"] = std::move(params);
    doc["columns"] = report.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[report.columns[i]] = detail::cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

inline void write_json(std::ostream& os, const ExperimentReport& report) { os << to_json(report).dump(2) << '\n'; }

}  // namespace insider
