#include "bj/ingest.hpp"

#include "bj/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>

#include <fmt/format.h>

namespace bj {

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, std::string_view name,
                         const std::filesystem::path& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(ErrorKind::SchemaError,
                    fmt::format("{}: missing required column '{}'", path.string(), name));
    }
    return static_cast<std::size_t>(it - header.begin());
}

double parse_rate(std::string_view text, const std::filesystem::path& path, std::size_t line_no) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::SchemaError, fmt::format("{}:{}: invalid positive_rate '{}'",
                                                        path.string(), line_no, text));
    }
    return value;
}

}  // namespace

RawSeries ingest_owid_csv(const std::filesystem::path& path, std::string_view country,
                          Date date_start, Date date_end) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::SchemaError, fmt::format("{}: empty file", path.string()));
    }
    const auto header = split_csv_line(line);
    const auto date_col = column_index(header, "date", path);
    const auto location_col = column_index(header, "location", path);
    const auto rate_col = column_index(header, "positive_rate", path);
    const auto needed = std::max({date_col, location_col, rate_col});

    bool seen_country = false;
    std::vector<std::pair<Date, std::optional<double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() <= needed) {
            throw Error(ErrorKind::SchemaError,
                        fmt::format("{}:{}: expected at least {} fields, got {}", path.string(),
                                    line_no, needed + 1, fields.size()));
        }
        if (fields[location_col] != country) continue;
        seen_country = true;
        const Date date = parse_date(fields[date_col]);
        if (date < date_start || date_end < date) continue;
        const auto& cell = fields[rate_col];
        rows.emplace_back(date, cell.empty() ? std::nullopt
                                             : std::optional<double>(parse_rate(cell, path, line_no)));
    }
    if (!seen_country) {
        throw Error(ErrorKind::UnknownCountry,
                    fmt::format("country '{}' not found in {}", country, path.string()));
    }
    if (rows.empty()) {
        throw Error(ErrorKind::EmptyRange,
                    fmt::format("no rows for '{}' between {} and {}", country,
                                format_date(date_start), format_date(date_end)));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::optional<double> max_observed;
    for (const auto& [date, value] : rows) {
        if (value) max_observed = std::max(max_observed.value_or(*value), *value);
    }
    const double scale = max_observed && *max_observed <= 1.0 ? 100.0 : 1.0;

    RawSeries raw;
    raw.name = std::string(country);
    for (const auto& [date, value] : rows) {
        if (!raw.dates.empty() && raw.dates.back() == date) {
            throw Error(ErrorKind::SchemaError, fmt::format("duplicate date {} for '{}'",
                                                            format_date(date), country));
        }
        raw.dates.push_back(date);
        raw.values.push_back(value ? std::optional<double>(*value * scale) : std::nullopt);
    }
    return raw;
}

}  // namespace bj
