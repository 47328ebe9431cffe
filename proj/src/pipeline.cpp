#include "bj/pipeline.hpp"

#include "bj/error.hpp"
#include "bj/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>

#include <fmt/format.h>

namespace bj {

using nlohmann::json;

void PipelineConfig::validate() const {
    auto fail = [](const std::string& message) { throw Error(ErrorKind::ConfigError, message); };
    if (!(date_start < date_end)) {
        fail(fmt::format("date range {}..{} is empty", format_date(date_start),
                         format_date(date_end)));
    }
    if (!(level > 0.0 && level < 1.0)) fail(fmt::format("level {} outside (0, 1)", level));
    if (!(threshold > 0.0)) fail(fmt::format("threshold {} must be positive", threshold));
    if (horizon == 0) fail("horizon must be positive");
    if (window == 0) fail("window must be positive");
    if (horizon < window) {
        fail(fmt::format("horizon {} is shorter than the {}-day window", horizon, window));
    }
    if (countries.empty()) fail("no countries requested");
    if (histogram_bins == 0) fail("histogram needs at least one bin");
    if (ljung_box_lags == 0) fail("Ljung-Box needs at least one lag");
    const auto& order = fixed_order ? *fixed_order : caps;
    if (order.p > kMaxOrder.p || order.d > kMaxOrder.d || order.q > kMaxOrder.q) {
        fail(fmt::format("order ({},{},{}) exceeds ({},{},{})", order.p, order.d, order.q,
                         kMaxOrder.p, kMaxOrder.d, kMaxOrder.q));
    }
}

CountryReport analyse_country(const PipelineConfig& config, const std::string& country) {
    CountryReport report;
    report.country = country;
    try {
        const auto raw = ingest_owid_csv(config.input_path, country, config.date_start,
                                         config.date_end);
        const auto series = impute_monthly_mean(raw);
        report.adf = adf_test(series);

        if (config.fixed_order) {
            report.order = *config.fixed_order;
        } else {
            SelectOptions select;
            select.refine = config.refine;
            const auto selection = select_order(series, config.caps, select);
            report.order = selection.order;
            report.stationarity_reached = selection.stationarity_reached;
        }

        const auto model = fit(series, report.order);
        report.model = {model.phi,     model.theta,     model.mean,
                        model.sigma2,  model.loglik,    model.aic,
                        model.bic_paper, model.bic_standard, model.n_effective,
                        model.converged};

        const std::size_t fitdf = report.order.p + report.order.q;
        report.ljung_box = ljung_box(model.residuals, config.ljung_box_lags, fitdf);
        report.metrics = residual_metrics(model.residuals);
        report.histogram = histogram(model.residuals, config.histogram_bins);
        report.residual_acf =
            acf(model.residuals, std::min(config.residual_acf_lags, model.residuals.size() - 1));
        const auto dates = series.dates();
        report.residual_dates.assign(dates.end() - static_cast<std::ptrdiff_t>(model.n_effective),
                                     dates.end());
        report.residuals = model.residuals;

        const auto fc = forecast(model, series, config.horizon, config.level);
        report.policy = policy_recommendation(fc, config.threshold, config.window,
                                              config.trend_tolerance);
        report.policy.literature_increase = literature_testing_increase(country);
        report.forecast = config.clamp_percent ? clamp_to_percent(fc) : fc;
    } catch (const Error& e) {
        // Partial results of a failed country are not reported.
        report = CountryReport{};
        report.country = country;
        report.error = ReportError{e.kind(), e.what()};
    }
    return report;
}

std::vector<CountryReport> run_pipeline(const PipelineConfig& config) {
    config.validate();
    if (!std::ifstream(config.input_path)) {
        throw Error(ErrorKind::IoError,
                    fmt::format("cannot read input '{}'", config.input_path.string()));
    }
    std::vector<CountryReport> reports(config.countries.size());
    if (config.jobs <= 1) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            reports[i] = analyse_country(config, config.countries[i]);
        }
    } else {
        for (std::size_t start = 0; start < reports.size(); start += config.jobs) {
            const std::size_t stop = std::min(reports.size(), start + config.jobs);
            std::vector<std::future<CountryReport>> batch;
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(std::async(std::launch::async, analyse_country, std::cref(config),
                                           std::cref(config.countries[i])));
            }
            for (std::size_t i = start; i < stop; ++i) {
                reports[i] = batch[i - start].get();
            }
        }
    }
    if (!config.output_dir.empty()) {
        emit_reports(reports, config.output_dir, config.bic_variant);
    }
    return reports;
}

int exit_code_for(const std::vector<CountryReport>& reports) {
    const bool all_ok =
        std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
    return all_ok ? 0 : 2;
}

std::string file_label(std::string_view country) {
    std::string out;
    out.reserve(country.size());
    for (char c : country) {
        const auto uc = static_cast<unsigned char>(c);
        out.push_back(std::isalnum(uc) || c == '-' ? c : '_');
    }
    return out;
}

namespace {

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path) {
        if (!out_) {
            throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", path.string()));
        }
        line(header);
    }

    void line(std::string_view text) { out_ << text << '\n'; }

    void close() {
        out_.close();
        if (!out_) {
            throw Error(ErrorKind::IoError, fmt::format("failed writing '{}'", path_.string()));
        }
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_reports(const std::vector<CountryReport>& reports,
                                                const std::filesystem::path& output_dir,
                                                BicVariant bic_variant) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) {
        throw Error(ErrorKind::IoError,
                    fmt::format("cannot create '{}': {}", output_dir.string(), ec.message()));
    }
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::string& name, std::string_view header) {
        written.push_back(output_dir / name);
        return CsvFile(written.back(), header);
    };

    auto table1 = open("table1.csv", "Country,P_ADF,p,d,q,AIC,BIC,BoxLjung_p");
    auto table2 = open("table2.csv", "Country,ME,RMSE,MAE,ACF1");
    auto policy = open("policy.csv", "Country,verdict,multiplier");
    for (const auto& r : reports) {
        if (!r.ok()) continue;
        const auto name = csv_field(r.country);
        const double bic =
            bic_variant == BicVariant::Paper ? r.model.bic_paper : r.model.bic_standard;
        table1.line(fmt::format("{},{},{},{},{},{},{},{}", name, fixed4(r.adf.p_value), r.order.p,
                                r.order.d, r.order.q, fixed4(r.model.aic), fixed4(bic),
                                fixed4(r.ljung_box.p_value)));
        table2.line(fmt::format("{},{},{},{},{}", name, fixed4(r.metrics.me),
                                fixed4(r.metrics.rmse), fixed4(r.metrics.mae),
                                fixed4(r.metrics.residual_acf1)));
        policy.line(fmt::format("{},{},{}", name, to_string(r.policy.verdict),
                                fixed4(r.policy.required_test_multiplier)));

        const auto label = file_label(r.country);
        auto fc = open("forecast_" + label + ".csv", "date,point,lower,upper");
        for (std::size_t i = 0; i < r.forecast.point.size(); ++i) {
            fc.line(fmt::format("{},{},{},{}", format_date(r.forecast.dates[i]),
                                fixed4(r.forecast.point[i]), fixed4(r.forecast.lower[i]),
                                fixed4(r.forecast.upper[i])));
        }
        fc.close();

        auto res = open("residuals_" + label + ".csv", "date,residual");
        for (std::size_t i = 0; i < r.residuals.size(); ++i) {
            res.line(fmt::format("{},{}", format_date(r.residual_dates[i]), fixed4(r.residuals[i])));
        }
        res.close();

        auto hist = open("histogram_" + label + ".csv", "bin_left,bin_right,count");
        for (std::size_t i = 0; i < r.histogram.counts.size(); ++i) {
            hist.line(fmt::format("{},{},{}", fixed4(r.histogram.bin_edges[i]),
                                  fixed4(r.histogram.bin_edges[i + 1]), r.histogram.counts[i]));
        }
        hist.close();

        auto correlogram = open("acf_" + label + ".csv", "lag,acf,bound");
        for (std::size_t i = 0; i < r.residual_acf.lags.size(); ++i) {
            correlogram.line(fmt::format("{},{},{}", r.residual_acf.lags[i],
                                         fixed4(r.residual_acf.coefficients[i]),
                                         fixed4(r.residual_acf.confidence_bound)));
        }
        correlogram.close();
    }
    table1.close();
    table2.close();
    policy.close();

    const auto path = output_dir / "report.json";
    std::ofstream out(path);
    out << reports_to_json(reports).dump(2) << '\n';
    out.close();
    if (!out) {
        throw Error(ErrorKind::IoError, fmt::format("failed writing '{}'", path.string()));
    }
    written.push_back(path);
    return written;
}

namespace {

ErrorKind parse_error_kind(std::string_view text) {
    for (int k = 0; k <= static_cast<int>(ErrorKind::ConfigError); ++k) {
        const auto kind = static_cast<ErrorKind>(k);
        if (to_string(kind) == text) return kind;
    }
    throw Error(ErrorKind::SchemaError, fmt::format("unknown error kind '{}'", text));
}

json dates_to_json(const std::vector<Date>& dates) {
    json out = json::array();
    for (const auto& d : dates) out.push_back(format_date(d));
    return out;
}

std::vector<Date> dates_from_json(const json& j) {
    std::vector<Date> out;
    for (const auto& d : j) out.push_back(parse_date(d.get<std::string>()));
    return out;
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace

json to_json(const CountryReport& r) {
    json j;
    j["country"] = r.country;
    if (r.error) {
        j["error"] = {{"kind", to_string(r.error->kind)}, {"message", r.error->message}};
        return j;
    }
    j["error"] = nullptr;
    j["adf"] = {{"statistic", r.adf.statistic},     {"p_value", r.adf.p_value},
                {"lag_order", r.adf.lag_order},     {"n_used", r.adf.n_used},
                {"regression", "constant"},         {"p_value_clamped", r.adf.p_value_clamped}};
    j["order"] = {{"p", r.order.p}, {"d", r.order.d}, {"q", r.order.q}};
    j["stationarity_reached"] = r.stationarity_reached;
    j["model"] = {{"phi", r.model.phi},
                  {"theta", r.model.theta},
                  {"mean", optional_to_json(r.model.mean)},
                  {"sigma2", r.model.sigma2},
                  {"loglik", r.model.loglik},
                  {"aic", r.model.aic},
                  {"bic_paper", r.model.bic_paper},
                  {"bic_standard", r.model.bic_standard},
                  {"n_effective", r.model.n_effective},
                  {"converged", r.model.converged}};
    j["ljung_box"] = {{"statistic", r.ljung_box.statistic}, {"dof", r.ljung_box.dof},
                      {"p_value", r.ljung_box.p_value},     {"lags_used", r.ljung_box.lags_used},
                      {"fitdf", r.ljung_box.fitdf}};
    j["metrics"] = {{"me", r.metrics.me},
                    {"rmse", r.metrics.rmse},
                    {"mae", r.metrics.mae},
                    {"residual_acf1", r.metrics.residual_acf1},
                    {"acf1_degenerate", r.metrics.acf1_degenerate}};
    j["forecast"] = {{"level", r.forecast.level},
                     {"origin_date", format_date(r.forecast.origin_date)},
                     {"horizons", r.forecast.horizons},
                     {"dates", dates_to_json(r.forecast.dates)},
                     {"point", r.forecast.point},
                     {"lower", r.forecast.lower},
                     {"upper", r.forecast.upper}};
    j["policy"] = {{"verdict", to_string(r.policy.verdict)},
                   {"days_below_threshold", r.policy.days_below_threshold},
                   {"window", r.policy.window},
                   {"required_test_multiplier", r.policy.required_test_multiplier},
                   {"trend", to_string(r.policy.trend)},
                   {"terminal_forecast", r.policy.terminal_forecast},
                   {"threshold", r.policy.threshold},
                   {"literature_increase", r.policy.literature_increase
                                               ? json(*r.policy.literature_increase)
                                               : json(nullptr)}};
    j["residuals"] = {{"dates", dates_to_json(r.residual_dates)}, {"values", r.residuals}};
    j["histogram"] = {{"bin_edges", r.histogram.bin_edges},
                      {"counts", r.histogram.counts},
                      {"mean_marker", r.histogram.mean_marker}};
    j["residual_acf"] = {{"lags", r.residual_acf.lags},
                         {"coefficients", r.residual_acf.coefficients},
                         {"confidence_bound", r.residual_acf.confidence_bound}};
    return j;
}

CountryReport country_report_from_json(const json& j) {
    CountryReport r;
    r.country = j.at("country").get<std::string>();
    if (!j.at("error").is_null()) {
        const auto& e = j.at("error");
        r.error = ReportError{parse_error_kind(e.at("kind").get<std::string>()),
                              e.at("message").get<std::string>()};
        return r;
    }
    const auto& adf = j.at("adf");
    r.adf.statistic = adf.at("statistic").get<double>();
    r.adf.p_value = adf.at("p_value").get<double>();
    r.adf.lag_order = adf.at("lag_order").get<std::size_t>();
    r.adf.n_used = adf.at("n_used").get<std::size_t>();
    r.adf.p_value_clamped = adf.at("p_value_clamped").get<bool>();

    const auto& order = j.at("order");
    r.order = {order.at("p").get<std::size_t>(), order.at("d").get<std::size_t>(),
               order.at("q").get<std::size_t>()};
    r.stationarity_reached = j.at("stationarity_reached").get<bool>();

    const auto& m = j.at("model");
    r.model.phi = m.at("phi").get<std::vector<double>>();
    r.model.theta = m.at("theta").get<std::vector<double>>();
    r.model.mean = optional_from_json(m.at("mean"));
    r.model.sigma2 = m.at("sigma2").get<double>();
    r.model.loglik = m.at("loglik").get<double>();
    r.model.aic = m.at("aic").get<double>();
    r.model.bic_paper = m.at("bic_paper").get<double>();
    r.model.bic_standard = m.at("bic_standard").get<double>();
    r.model.n_effective = m.at("n_effective").get<std::size_t>();
    r.model.converged = m.at("converged").get<bool>();

    const auto& lb = j.at("ljung_box");
    r.ljung_box.statistic = lb.at("statistic").get<double>();
    r.ljung_box.dof = lb.at("dof").get<std::size_t>();
    r.ljung_box.p_value = lb.at("p_value").get<double>();
    r.ljung_box.lags_used = lb.at("lags_used").get<std::size_t>();
    r.ljung_box.fitdf = lb.at("fitdf").get<std::size_t>();

    const auto& met = j.at("metrics");
    r.metrics.me = met.at("me").get<double>();
    r.metrics.rmse = met.at("rmse").get<double>();
    r.metrics.mae = met.at("mae").get<double>();
    r.metrics.residual_acf1 = met.at("residual_acf1").get<double>();
    r.metrics.acf1_degenerate = met.at("acf1_degenerate").get<bool>();

    const auto& fc = j.at("forecast");
    r.forecast.level = fc.at("level").get<double>();
    r.forecast.origin_date = parse_date(fc.at("origin_date").get<std::string>());
    r.forecast.horizons = fc.at("horizons").get<std::vector<std::size_t>>();
    r.forecast.dates = dates_from_json(fc.at("dates"));
    r.forecast.point = fc.at("point").get<std::vector<double>>();
    r.forecast.lower = fc.at("lower").get<std::vector<double>>();
    r.forecast.upper = fc.at("upper").get<std::vector<double>>();

    const auto& pol = j.at("policy");
    r.policy.verdict = parse_verdict(pol.at("verdict").get<std::string>());
    r.policy.days_below_threshold = pol.at("days_below_threshold").get<std::size_t>();
    r.policy.window = pol.at("window").get<std::size_t>();
    r.policy.required_test_multiplier = pol.at("required_test_multiplier").get<double>();
    r.policy.trend = parse_trend(pol.at("trend").get<std::string>());
    r.policy.terminal_forecast = pol.at("terminal_forecast").get<double>();
    r.policy.threshold = pol.at("threshold").get<double>();
    if (!pol.at("literature_increase").is_null()) {
        r.policy.literature_increase = pol.at("literature_increase").get<std::string>();
    }

    r.residual_dates = dates_from_json(j.at("residuals").at("dates"));
    r.residuals = j.at("residuals").at("values").get<std::vector<double>>();
    const auto& h = j.at("histogram");
    r.histogram.bin_edges = h.at("bin_edges").get<std::vector<double>>();
    r.histogram.counts = h.at("counts").get<std::vector<std::size_t>>();
    r.histogram.mean_marker = h.at("mean_marker").get<double>();
    const auto& ra = j.at("residual_acf");
    r.residual_acf.lags = ra.at("lags").get<std::vector<std::size_t>>();
    r.residual_acf.coefficients = ra.at("coefficients").get<std::vector<double>>();
    r.residual_acf.confidence_bound = ra.at("confidence_bound").get<double>();
    return r;
}

json reports_to_json(const std::vector<CountryReport>& reports) {
    json out;
    out["countries"] = json::array();
    out["failures"] = json::array();
    for (const auto& r : reports) {
        out["countries"].push_back(to_json(r));
        if (r.error) {
            out["failures"].push_back({{"country", r.country},
                                       {"kind", to_string(r.error->kind)},
                                       {"message", r.error->message}});
        }
    }
    return out;
}

std::vector<CountryReport> reports_from_json(const json& j) {
    std::vector<CountryReport> out;
    for (const auto& c : j.at("countries")) out.push_back(country_report_from_json(c));
    return out;
}

}  // namespace bj
