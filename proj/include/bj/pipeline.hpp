#pragma once

#include "bj/arima.hpp"
#include "bj/diagnostics.hpp"
#include "bj/forecast.hpp"
#include "bj/policy.hpp"
#include "bj/series.hpp"
#include "bj/stat_tests.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bj {

enum class BicVariant { Paper, Standard };

struct PipelineConfig {
    std::filesystem::path input_path;
    std::vector<std::string> countries;
    Date date_start{std::chrono::year{2020}, std::chrono::month{4}, std::chrono::day{1}};
    Date date_end{std::chrono::year{2020}, std::chrono::month{9}, std::chrono::day{12}};
    std::size_t horizon = 30;
    double level = 0.80;
    double threshold = 5.0;
    std::size_t window = 14;
    std::optional<ArimaOrder> fixed_order;  ///< unset: automatic identification
    ArimaOrder caps{7, 2, 7};
    bool refine = true;
    BicVariant bic_variant = BicVariant::Paper;
    std::size_t ljung_box_lags = 20;
    std::size_t histogram_bins = kDefaultHistogramBins;
    std::size_t residual_acf_lags = 20;
    double trend_tolerance = kDefaultTrendTolerance;
    bool clamp_percent = false;
    std::size_t jobs = 1;
    std::filesystem::path output_dir;  ///< empty: do not write files

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct ModelSummary {
    std::vector<double> phi;
    std::vector<double> theta;
    std::optional<double> mean;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic_paper = 0.0;
    double bic_standard = 0.0;
    std::size_t n_effective = 0;
    bool converged = true;

    friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

struct ReportError {
    ErrorKind kind = ErrorKind::IoError;
    std::string message;

    friend bool operator==(const ReportError&, const ReportError&) = default;
};

/// One row of the model-building table joined with the fit-metrics table,
/// plus the forecast and the data behind the residual plots.
struct CountryReport {
    std::string country;
    std::optional<ReportError> error;
    AdfResult adf;
    ArimaOrder order;
    bool stationarity_reached = true;
    ModelSummary model;
    LjungBoxResult ljung_box;
    FitMetrics metrics;
    ForecastResult forecast;
    PolicyAdvice policy;
    std::vector<Date> residual_dates;
    std::vector<double> residuals;
    HistogramData histogram;
    CorrelogramResult residual_acf;

    [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }

    friend bool operator==(const CountryReport&, const CountryReport&) = default;
};

/// Builds the report for one country; failures are captured in `error`.
[[nodiscard]] CountryReport analyse_country(const PipelineConfig& config, const std::string& country);

/// Runs every configured country and, when output_dir is set, writes the
/// report files.
[[nodiscard]] std::vector<CountryReport> run_pipeline(const PipelineConfig& config);

/// File-name form of a country label ("South Africa" -> "South_Africa").
[[nodiscard]] std::string file_label(std::string_view country);

/// Writes table1.csv, table2.csv, policy.csv, report.json and, per
/// successful country, forecast_, residuals_, histogram_ and acf_ CSVs.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_reports(const std::vector<CountryReport>& reports,
                                                const std::filesystem::path& output_dir,
                                                BicVariant bic_variant = BicVariant::Paper);

[[nodiscard]] nlohmann::json to_json(const CountryReport& report);
[[nodiscard]] CountryReport country_report_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json reports_to_json(const std::vector<CountryReport>& reports);
[[nodiscard]] std::vector<CountryReport> reports_from_json(const nlohmann::json& j);

/// 0 when every country succeeded, 2 on partial failure.
[[nodiscard]] int exit_code_for(const std::vector<CountryReport>& reports);

}  // namespace bj
