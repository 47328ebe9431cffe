// bjarima: command-line front end for the Box-Jenkins toolkit.
//
//   bjarima run       --input owid.csv --countries "United States,Spain" --output-dir out
//   bjarima fit       --input owid.csv --country Spain [--order 2,1,1]
//   bjarima adf       --input owid.csv --country Spain
//   bjarima forecast  --input owid.csv --country Spain --horizon 30 --level 0.8
//   bjarima simulate  --order 1,1,0 --phi 0.5 --n 200 --seed 7 --location Sim
//   bjarima selftest  --fixture tests/data/owid_six_countries.csv
//
// Exit status: 0 success, 2 partial failure (some countries failed),
// 1 configuration or I/O error.

#include "bj/arima.hpp"
#include "bj/diagnostics.hpp"
#include "bj/error.hpp"
#include "bj/forecast.hpp"
#include "bj/ingest.hpp"
#include "bj/pipeline.hpp"
#include "bj/selftest.hpp"
#include "bj/stat_tests.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#ifndef BJ_DEFAULT_FIXTURE
#define BJ_DEFAULT_FIXTURE "tests/data/owid_six_countries.csv"
#endif

namespace {

bj::ArimaOrder parse_order(const std::string& text) {
    std::vector<std::size_t> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoul(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            parts.push_back(v);
        } catch (const std::exception&) {
            throw bj::Error(bj::ErrorKind::ConfigError, fmt::format("invalid order '{}'", text));
        }
    }
    if (parts.size() != 3) {
        throw bj::Error(bj::ErrorKind::ConfigError,
                        fmt::format("order '{}' must look like p,d,q", text));
    }
    return {parts[0], parts[1], parts[2]};
}

struct SeriesArgs {
    std::string input;
    std::string country;
    std::string start = "2020-04-01";
    std::string end = "2020-09-12";

    void add_to(CLI::App& app) {
        app.add_option("--input,-i", input, "OWID-schema CSV (date, location, positive_rate)")
            ->required();
        app.add_option("--country,-c", country, "Location name as it appears in the CSV")
            ->required();
        app.add_option("--start", start, "First date (YYYY-MM-DD)")->capture_default_str();
        app.add_option("--end", end, "Last date (YYYY-MM-DD)")->capture_default_str();
    }

    [[nodiscard]] bj::TimeSeries load() const {
        const auto raw = bj::ingest_owid_csv(input, country, bj::parse_date(start),
                                             bj::parse_date(end));
        return bj::impute_monthly_mean(raw);
    }
};

bj::ArimaOrder resolve_order(const bj::TimeSeries& series, const std::string& order_text,
                             const std::string& caps_text, bool refine) {
    if (!order_text.empty()) return parse_order(order_text);
    bj::SelectOptions select;
    select.refine = refine;
    return bj::select_order(series, parse_order(caps_text), select).order;
}

nlohmann::json model_json(const bj::ArimaModel& m) {
    return {{"order", {m.order.p, m.order.d, m.order.q}},
            {"phi", m.phi},
            {"theta", m.theta},
            {"mean", m.mean ? nlohmann::json(*m.mean) : nlohmann::json(nullptr)},
            {"sigma2", m.sigma2},
            {"loglik", m.loglik},
            {"aic", m.aic},
            {"bic_paper", m.bic_paper},
            {"bic_standard", m.bic_standard},
            {"n_effective", m.n_effective},
            {"converged", m.converged}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Box-Jenkins ARIMA toolkit for test-positivity series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file supplying any option");

    // run
    auto* run = app.add_subcommand("run", "Full pipeline over several countries");
    bj::PipelineConfig config;
    std::string input;
    std::string countries;
    std::string start = "2020-04-01";
    std::string end = "2020-09-12";
    std::string fixed_order;
    std::string caps = "7,2,7";
    std::string bic = "paper";
    std::string output_dir = "reports";
    bool no_refine = false;
    run->add_option("--input,-i", input, "OWID-schema CSV")->required();
    run->add_option("--countries", countries, "Comma-separated location names")->required();
    run->add_option("--start", start, "First date (YYYY-MM-DD)")->capture_default_str();
    run->add_option("--end", end, "Last date (YYYY-MM-DD)")->capture_default_str();
    run->add_option("--horizon", config.horizon, "Forecast days")->capture_default_str();
    run->add_option("--level", config.level, "Prediction interval level")->capture_default_str();
    run->add_option("--threshold", config.threshold, "Positive-rate threshold, percent")
        ->capture_default_str();
    run->add_option("--window", config.window, "Days that must stay at or below the threshold")
        ->capture_default_str();
    run->add_option("--order", fixed_order, "Fixed p,d,q (default: automatic identification)");
    run->add_option("--max-order", caps, "Identification caps p,d,q")->capture_default_str();
    run->add_flag("--no-refine", no_refine, "Skip the AIC search around the identified order");
    run->add_option("--bic", bic, "BIC column in table1.csv")
        ->check(CLI::IsMember({"paper", "standard"}))
        ->capture_default_str();
    run->add_option("--lb-lags", config.ljung_box_lags, "Ljung-Box lags")->capture_default_str();
    run->add_option("--bins", config.histogram_bins, "Residual histogram bins")
        ->capture_default_str();
    run->add_option("--trend-tolerance", config.trend_tolerance,
                    "Change (percentage points) below which a forecast counts as flat")
        ->capture_default_str();
    run->add_flag("--clamp", config.clamp_percent, "Clamp emitted forecasts to [0, 100]");
    run->add_option("--jobs,-j", config.jobs, "Countries analysed concurrently")
        ->capture_default_str();
    run->add_option("--output-dir,-o", output_dir, "Report directory")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit one country's model and print it as JSON");
    SeriesArgs fit_args;
    fit_args.add_to(*fit_cmd);
    std::string fit_order;
    std::string fit_caps = "7,2,7";
    bool fit_no_refine = false;
    fit_cmd->add_option("--order", fit_order, "Fixed p,d,q (default: automatic)");
    fit_cmd->add_option("--max-order", fit_caps, "Identification caps p,d,q")
        ->capture_default_str();
    fit_cmd->add_flag("--no-refine", fit_no_refine, "Skip the AIC neighbourhood search");

    // adf
    auto* adf_cmd = app.add_subcommand("adf", "Augmented Dickey-Fuller test");
    SeriesArgs adf_args;
    adf_args.add_to(*adf_cmd);
    std::optional<std::size_t> adf_lags;
    std::size_t adf_d = 0;
    adf_cmd->add_option("--lags", adf_lags, "Augmentation lags (default floor((n-1)^(1/3)))");
    adf_cmd->add_option("--diff", adf_d, "Difference the series this many times first")
        ->capture_default_str();

    // forecast
    auto* fc_cmd = app.add_subcommand("forecast", "Forecast one country; CSV on stdout");
    SeriesArgs fc_args;
    fc_args.add_to(*fc_cmd);
    std::string fc_order;
    std::string fc_caps = "7,2,7";
    std::size_t fc_horizon = 30;
    double fc_level = 0.80;
    bool fc_clamp = false;
    fc_cmd->add_option("--order", fc_order, "Fixed p,d,q (default: automatic)");
    fc_cmd->add_option("--max-order", fc_caps, "Identification caps p,d,q")->capture_default_str();
    fc_cmd->add_option("--horizon", fc_horizon, "Forecast days")->capture_default_str();
    fc_cmd->add_option("--level", fc_level, "Prediction interval level")->capture_default_str();
    fc_cmd->add_flag("--clamp", fc_clamp, "Clamp to [0, 100]");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate an ARIMA path as OWID-schema CSV");
    std::string sim_order = "0,0,0";
    std::vector<double> sim_phi;
    std::vector<double> sim_theta;
    double sim_mean = 0.0;
    double sim_sigma = 1.0;
    std::size_t sim_n = 200;
    std::uint64_t sim_seed = 1;
    std::string sim_location = "Simulated";
    std::string sim_start = "2020-04-01";
    sim_cmd->add_option("--order", sim_order, "p,d,q")->capture_default_str();
    sim_cmd->add_option("--phi", sim_phi, "AR coefficients")->delimiter(',');
    sim_cmd->add_option("--theta", sim_theta, "MA coefficients")->delimiter(',');
    sim_cmd->add_option("--mean", sim_mean, "Mean of the differenced process")
        ->capture_default_str();
    sim_cmd->add_option("--sigma", sim_sigma, "Innovation standard deviation")
        ->capture_default_str();
    sim_cmd->add_option("--n", sim_n, "Observations")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "Generator seed")->capture_default_str();
    sim_cmd->add_option("--location", sim_location, "Value of the location column")
        ->capture_default_str();
    sim_cmd->add_option("--start", sim_start, "First date")->capture_default_str();

    // selftest
    auto* self_cmd = app.add_subcommand("selftest", "Run the Monte Carlo acceptance suite");
    bj::SelftestOptions self;
    std::string fixture = BJ_DEFAULT_FIXTURE;
    std::string scratch =
        (std::filesystem::temp_directory_path() / "bjarima-selftest").string();
    self_cmd->add_option("--fixture", fixture, "Six-country fixture CSV")->capture_default_str();
    self_cmd->add_option("--scratch", scratch, "Directory for pipeline output")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            config.input_path = input;
            std::stringstream ss(countries);
            std::string name;
            while (std::getline(ss, name, ',')) {
                if (!name.empty()) config.countries.push_back(name);
            }
            config.date_start = bj::parse_date(start);
            config.date_end = bj::parse_date(end);
            if (!fixed_order.empty()) config.fixed_order = parse_order(fixed_order);
            config.caps = parse_order(caps);
            config.refine = !no_refine;
            config.bic_variant = bic == "paper" ? bj::BicVariant::Paper : bj::BicVariant::Standard;
            config.output_dir = output_dir;
            const auto reports = bj::run_pipeline(config);
            for (const auto& r : reports) {
                if (r.ok()) {
                    std::cout << fmt::format("{:<16} ARIMA({},{},{})  AIC {:9.3f}  verdict {}  x{:.4f}\n",
                                             r.country, r.order.p, r.order.d, r.order.q,
                                             r.model.aic, bj::to_string(r.policy.verdict),
                                             r.policy.required_test_multiplier);
                } else {
                    std::cerr << fmt::format("{:<16} FAILED {}: {}\n", r.country,
                                             bj::to_string(r.error->kind), r.error->message);
                }
            }
            const auto failed = std::count_if(reports.begin(), reports.end(),
                                              [](const auto& r) { return !r.ok(); });
            std::cout << fmt::format("{} of {} countries succeeded; reports in {}\n",
                                     reports.size() - static_cast<std::size_t>(failed),
                                     reports.size(), output_dir);
            return bj::exit_code_for(reports);
        }
        if (*fit_cmd) {
            const auto series = fit_args.load();
            const auto order = resolve_order(series, fit_order, fit_caps, !fit_no_refine);
            const auto model = bj::fit(series, order);
            std::cout << model_json(model).dump(2) << '\n';
            return 0;
        }
        if (*adf_cmd) {
            const auto series = adf_args.load();
            const auto tested = bj::difference(series, adf_d);
            const auto result = bj::adf_test(tested, adf_lags);
            std::cout << fmt::format(
                "statistic {:.6f}\np_value {:.4f}{}\nlag_order {}\nn_used {}\nstationary_at_5pct {}\n",
                result.statistic, result.p_value, result.p_value_clamped ? " (clamped)" : "",
                result.lag_order, result.n_used, result.p_value < 0.05 ? "yes" : "no");
            return 0;
        }
        if (*fc_cmd) {
            const auto series = fc_args.load();
            const auto order = resolve_order(series, fc_order, fc_caps, true);
            const auto model = bj::fit(series, order);
            auto result = bj::forecast(model, series, fc_horizon, fc_level);
            if (fc_clamp) result = bj::clamp_to_percent(std::move(result));
            std::cout << "date,point,lower,upper\n";
            for (std::size_t i = 0; i < result.point.size(); ++i) {
                std::cout << fmt::format("{},{:.4f},{:.4f},{:.4f}\n",
                                         bj::format_date(result.dates[i]), result.point[i],
                                         result.lower[i], result.upper[i]);
            }
            return 0;
        }
        if (*sim_cmd) {
            const auto order = parse_order(sim_order);
            const auto series = bj::simulate_arima(order, sim_phi, sim_theta, sim_mean, sim_sigma,
                                                   sim_n, sim_seed);
            const auto first = bj::parse_date(sim_start);
            std::cout << "date,location,positive_rate\n";
            for (std::size_t i = 0; i < series.size(); ++i) {
                std::cout << fmt::format("{},{},{:.17g}\n",
                                         bj::format_date(bj::add_days(first, static_cast<int>(i))),
                                         sim_location, series[i]);
            }
            return 0;
        }
        if (*self_cmd) {
            self.fixture = fixture;
            self.scratch_dir = scratch;
            const auto results = bj::run_selftest(self, std::cout);
            const bool ok = std::all_of(results.begin(), results.end(),
                                        [](const auto& r) { return r.passed; });
            return ok ? 0 : 1;
        }
    } catch (const bj::Error& e) {
        std::cerr << fmt::format("error [{}]: {}\n", bj::to_string(e.kind()), e.what());
        return 1;
    }
    return 1;
}
