#include "rmf/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rmf/version.hpp"

namespace rmf {

namespace {

std::string double_to_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad real literal: " + std::string(s));
    return v;
}

}  // namespace

Value::Value(u64 v) : kind(Kind::integer), str(std::to_string(v)) {}
Value::Value(u128 v) : kind(Kind::integer), str(u128_to_string(v)) {}
Value::Value(int v) : kind(Kind::integer), str(std::to_string(v)) {}
Value::Value(double v) : kind(Kind::real), str(double_to_shortest(v)), num(v) {}
Value::Value(std::string v) : kind(Kind::text), str(std::move(v)) {}

bool Value::operator==(const Value &other) const {
    if (kind != other.kind) return false;
    if (kind == Kind::real) return num == other.num;
    return str == other.str;
}

void RatioReport::add_row(std::vector<Value> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row width does not match column count");
    rows.push_back(std::move(row));
}

nlohmann::json report_metadata(std::span<const u64> seeds, u64 budget_ops) {
    auto now = std::chrono::system_clock::now();
    auto tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

    nlohmann::json seeds_json = nlohmann::json::array();
    for (u64 s : seeds) seeds_json.push_back(std::to_string(s));

    return nlohmann::json{{"generated_at", stamp},
                          {"tool_version", RMF_VERSION},
                          {"seeds", seeds_json},
                          {"budget_ops", budget_ops}};
}

namespace {

bool needs_quoting(const std::string &s) {
    return s.find_first_of(",\"\n") != std::string::npos;
}

std::string csv_escape(const std::string &s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string to_csv(const RatioReport &report) {
    std::string out;
    for (size_t i = 0; i < report.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(report.columns[i]);
    }
    out += '\n';
    for (const auto &row : report.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i].str);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const RatioReport &report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : report.rows) {
        nlohmann::json rec = nlohmann::json::object();
        for (size_t i = 0; i < row.size(); ++i) {
            const Value &v = row[i];
            switch (v.kind) {
                case Value::Kind::integer: rec[report.columns[i]] = v.str; break;
                case Value::Kind::real: rec[report.columns[i]] = v.num; break;
                case Value::Kind::text: rec[report.columns[i]] = v.str; break;
            }
        }
        rows.push_back(std::move(rec));
    }
    return nlohmann::json{{"name", report.name},
                          {"columns", report.columns},
                          {"metadata", report.metadata},
                          {"rows", rows}};
}

RatioReport report_from_json(const nlohmann::json &j) {
    RatioReport r;
    r.name = j.at("name").get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    r.metadata = j.at("metadata");
    for (const auto &rec : j.at("rows")) {
        std::vector<Value> row;
        row.reserve(r.columns.size());
        for (const auto &col : r.columns) {
            const auto &cell = rec.at(col);
            if (cell.is_number_float()) {
                row.emplace_back(cell.get<double>());
            } else if (cell.is_number()) {
                row.emplace_back(static_cast<u64>(cell.get<u64>()));
            } else {
                // integers travel as decimal strings; recover the kind
                std::string s = cell.get<std::string>();
                bool digits = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
                if (digits) {
                    Value v;
                    v.kind = Value::Kind::integer;
                    v.str = std::move(s);
                    row.push_back(std::move(v));
                } else {
                    row.emplace_back(std::move(s));
                }
            }
        }
        r.rows.push_back(std::move(row));
    }
    return r;
}

std::vector<std::vector<Value>> rows_from_csv(const std::string &csv,
                                              std::span<const Value::Kind> kinds) {
    std::vector<std::vector<Value>> rows;
    size_t pos = 0;
    bool header = true;
    while (pos < csv.size()) {
        size_t eol = csv.find('\n', pos);
        if (eol == std::string::npos) eol = csv.size();
        std::string line = csv.substr(pos, eol - pos);
        pos = eol + 1;
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(std::move(cur));
        if (fields.size() != kinds.size())
            throw std::invalid_argument("csv row width does not match expected kinds");

        std::vector<Value> row;
        row.reserve(fields.size());
        for (size_t i = 0; i < fields.size(); ++i) {
            switch (kinds[i]) {
                case Value::Kind::integer: {
                    Value v;
                    v.kind = Value::Kind::integer;
                    v.str = fields[i];
                    (void)parse_u128(v.str);  // validate
                    row.push_back(std::move(v));
                    break;
                }
                case Value::Kind::real: row.emplace_back(parse_double(fields[i])); break;
                case Value::Kind::text: row.emplace_back(std::move(fields[i])); break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text_atomic(const std::filesystem::path &path, const std::string &text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
        os.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!os) throw std::runtime_error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rmf
