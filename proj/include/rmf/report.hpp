#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmf/wide.hpp"

namespace rmf {

// A single table cell. Exact integers keep a decimal-string representation
// (JSON numbers would silently truncate past 2^53); reals carry a
// shortest-round-trip text form so CSV and JSON emit identical values.
struct Value {
    enum class Kind { integer, real, text };

    Kind kind = Kind::text;
    std::string str;       // canonical textual form for every kind
    double num = 0.0;      // meaningful for Kind::real only

    Value() = default;
    Value(u64 v);
    Value(u128 v);
    Value(int v);
    Value(double v);
    Value(std::string v);
    Value(const char *v) : Value(std::string(v)) {}

    bool operator==(const Value &other) const;
};

// Named ratio/diagnostic table with provenance metadata. Reports are the
// unit of CLI output: serializable to CSV (rows only) and JSON (full).
struct RatioReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    nlohmann::json metadata;  // generated_at, tool_version, seeds, budget_ops, ...

    void add_row(std::vector<Value> row);
};

nlohmann::json report_metadata(std::span<const u64> seeds, u64 budget_ops);

std::string to_csv(const RatioReport &report);
nlohmann::json to_json(const RatioReport &report);

RatioReport report_from_json(const nlohmann::json &j);
// Column kinds are not encoded in CSV; callers supply them to recover values.
std::vector<std::vector<Value>> rows_from_csv(const std::string &csv,
                                              std::span<const Value::Kind> kinds);

// Write via temp file + rename so readers never observe a partial report.
void write_text_atomic(const std::filesystem::path &path, const std::string &text);

}  // namespace rmf
