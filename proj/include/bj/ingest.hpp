#pragma once

#include "bj/series.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bj {

/// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

/**
 * Reads one country's positive-rate series from an Our World in Data style
 * CSV (columns `date`, `location`, `positive_rate`; others ignored).
 * Values are returned in percent: when every observed value in range is at
 * most 1.0 the column is taken to be a fraction and scaled by 100.
 * Empty cells become missing values.
 */
[[nodiscard]] RawSeries ingest_owid_csv(const std::filesystem::path& path, std::string_view country,
                                        Date date_start, Date date_end);

}  // namespace bj
