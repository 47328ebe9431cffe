#include "bj/selftest.hpp"

#include "bj/arima.hpp"
#include "bj/diagnostics.hpp"
#include "bj/error.hpp"
#include "bj/forecast.hpp"
#include "bj/pipeline.hpp"
#include "bj/polynomial.hpp"
#include "bj/stat_tests.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace bj {

std::vector<std::string> fixture_countries() {
    return {"United States", "Russia", "South Africa", "India", "Mexico", "Spain"};
}

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

// Models fitted by the estimator and coverage studies, re-checked for
// stationarity and invertibility at the end.
struct FittedPool {
    std::vector<ArimaModel> models;
};

Outcome round_trip() {
    NormalGenerator normal(20240101);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const std::size_t n = 20 + static_cast<std::size_t>(normal.uniform() * 80.0);
        std::vector<double> x(n);
        for (double& v : x) v = 10.0 * normal();
        for (std::size_t d = 0; d <= 3; ++d) {
            const auto diffs = difference(x, d);
            const auto back = integrate(diffs, d, std::span<const double>(x).subspan(0, d));
            for (std::size_t i = 0; i < back.size(); ++i) {
                worst = std::max(worst, std::abs(back[i] - x[i + d]));
            }
        }
    }
    return {worst < 1e-9, fmt::format("max abs error {:.3e} over 100 series x d=0..3", worst)};
}

Outcome estimator_recovery(FittedPool& pool) {
    auto study = [&](const ArimaOrder& order, std::span<const double> phi,
                     std::span<const double> theta, double truth, std::uint64_t seed0,
                     bool ar) {
        double sum_err = 0.0;
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto x = simulate_arima(order, phi, theta, 0.0, 1.0, 1000, seed0 + s);
            auto model = fit(x, order);
            const double est = ar ? model.phi[0] : model.theta[0];
            sum_err += std::abs(est - truth);
            worst = std::max(worst, std::abs(est - truth));
            pool.models.push_back(std::move(model));
        }
        return std::pair{sum_err / 100.0, worst};
    };
    const std::vector<double> phi{0.7};
    const std::vector<double> theta{0.5};
    const auto [ar_mean, ar_worst] = study({1, 0, 0}, phi, {}, 0.7, 1000, true);
    const auto [ma_mean, ma_worst] = study({0, 0, 1}, {}, theta, 0.5, 2000, false);
    const bool ok = ar_mean < 0.05 && ar_worst <= 0.15 && ma_mean < 0.05 && ma_worst <= 0.15;
    return {ok, fmt::format("AR(1) mean|err| {:.4f} max {:.4f}; MA(1) mean|err| {:.4f} max {:.4f}",
                            ar_mean, ar_worst, ma_mean, ma_worst)};
}

Outcome adf_calibration() {
    std::size_t size_rejections = 0;
    std::size_t power_rejections = 0;
    const std::vector<double> phi{0.5};
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto walk = simulate_arima({0, 1, 0}, {}, {}, 0.0, 1.0, 200, 3000 + s);
        if (adf_test(walk).p_value < 0.05) ++size_rejections;
        const auto ar = simulate_arima({1, 0, 0}, phi, {}, 0.0, 1.0, 200, 4000 + s);
        if (adf_test(ar).p_value < 0.05) ++power_rejections;
    }
    const double size = static_cast<double>(size_rejections) / 500.0;
    const double power = static_cast<double>(power_rejections) / 500.0;
    return {size >= 0.02 && size <= 0.09 && power >= 0.95,
            fmt::format("random-walk rejection rate {:.3f}, AR(0.5) power {:.3f}", size, power)};
}

Outcome ljung_box_uniformity() {
    std::vector<double> pvalues;
    pvalues.reserve(1000);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto x = simulate_arima({0, 0, 0}, {}, {}, 0.0, 1.0, 200, 5000 + s);
        pvalues.push_back(ljung_box(x.values(), 10, 0).p_value);
    }
    std::sort(pvalues.begin(), pvalues.end());
    double ks = 0.0;
    const auto n = static_cast<double>(pvalues.size());
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const auto rank = static_cast<double>(i);
        ks = std::max({ks, (rank + 1.0) / n - pvalues[i], pvalues[i] - rank / n});
    }
    return {ks < 0.08, fmt::format("KS distance {:.4f}", ks)};
}

Outcome interval_calibration(FittedPool& pool) {
    const std::vector<double> phi{0.6};
    std::size_t covered = 0;
    constexpr std::size_t trials = 2000;
    constexpr std::size_t n = 200;
    for (std::size_t s = 0; s < trials; ++s) {
        const auto path = simulate_arima({1, 0, 0}, phi, {}, 0.0, 1.0, n + 1, 6000 + s);
        const auto history = TimeSeries::from_values({path.values().begin(), path.values().end() - 1});
        auto model = fit(history, {1, 0, 0});
        const auto fc = forecast(model, history, 1, 0.80);
        const double actual = path.values().back();
        if (fc.lower[0] <= actual && actual <= fc.upper[0]) ++covered;
        pool.models.push_back(std::move(model));
    }
    const double coverage = static_cast<double>(covered) / static_cast<double>(trials);
    return {coverage >= 0.76 && coverage <= 0.84,
            fmt::format("one-step 80% coverage {:.4f} over {} trials", coverage, trials)};
}

Outcome random_walk_forecast() {
    const double z = norm_quantile(0.9);
    double worst_point = 0.0;
    double worst_width = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto x = simulate_arima({0, 1, 0}, {}, {}, 0.0, 1.0, 120, 7000 + s);
        const auto model = fit(x, {0, 1, 0});
        const auto fc = forecast(model, x, 30, 0.80);
        const double last = x.values().back();
        for (std::size_t i = 0; i < fc.point.size(); ++i) {
            worst_point = std::max(worst_point, std::abs(fc.point[i] - last));
            const double half = 0.5 * (fc.upper[i] - fc.lower[i]);
            const double expected =
                z * std::sqrt(model.sigma2) * std::sqrt(static_cast<double>(i + 1));
            worst_width = std::max(worst_width, std::abs(half - expected));
        }
    }
    return {worst_point == 0.0 && worst_width <= 1e-9,
            fmt::format("max point deviation {:.3e}, max half-width error {:.3e}", worst_point,
                        worst_width)};
}

Outcome special_functions() {
    const double chi = std::abs(chi2_sf(2.0, 2) - std::exp(-1.0));
    // Independent normal CDF from the complementary error function.
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
    double worst = 0.0;
    for (int k = 1; k <= 99; ++k) {
        const double p = k / 100.0;
        worst = std::max(worst, std::abs(phi(norm_quantile(p)) - p));
    }
    return {chi <= 1e-12 && worst <= 1e-8,
            fmt::format("|chi2_sf(2,2) - e^-1| = {:.2e}; max |Phi(q(p)) - p| = {:.2e}", chi, worst)};
}

Outcome criteria_arithmetic() {
    const auto a = information_criteria(-10.0, 3, std::exp(2.0));
    const auto b = information_criteria(-10.0, 3, 100.0);
    const double e1 = std::abs(a.aic - 26.0);
    const double e2 = std::abs(a.bic_paper - 32.0);
    const double e3 = std::abs(b.bic_standard - 33.81551055796427);
    bool monotone = true;
    for (std::size_t k = 1; k < 30; ++k) {
        const auto lo = information_criteria(-10.0, k, 100.0);
        const auto hi = information_criteria(-10.0, k + 1, 100.0);
        monotone = monotone && hi.aic > lo.aic && hi.bic_paper > lo.bic_paper &&
                   hi.bic_standard > lo.bic_standard;
    }
    return {e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9 && monotone,
            fmt::format("AIC err {:.1e}, BIC(paper) err {:.1e}, BIC(standard) err {:.1e}, "
                        "monotone in k: {}",
                        e1, e2, e3, monotone)};
}

Outcome metric_inequality() {
    NormalGenerator normal(8000);
    std::size_t violations = 0;
    for (int s = 0; s < 1000; ++s) {
        const std::size_t n = 2 + static_cast<std::size_t>(normal.uniform() * 200.0);
        const double shift = 3.0 * normal();
        const double scale = std::exp(normal());
        std::vector<double> e(n);
        for (double& v : e) v = shift + scale * normal();
        const auto m = residual_metrics(e);
        if (m.rmse < m.mae) ++violations;
    }
    return {violations == 0, fmt::format("{} violations in 1000 vectors", violations)};
}

Outcome psi_checks() {
    ArimaModel ar;
    ar.order = {1, 0, 0};
    ar.phi = {0.5};
    const auto psi = psi_weights(ar, 50);
    double worst = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        worst = std::max(worst, std::abs(psi[j] - std::pow(0.5, static_cast<double>(j))));
    }
    ArimaModel arma;
    arma.order = {1, 0, 1};
    arma.phi = {0.5};
    arma.theta = {0.3};
    const auto mixed = psi_weights(arma, 4);
    const std::vector<double> expected{1.0, 0.8, 0.4, 0.2};
    double worst_mixed = 0.0;
    for (std::size_t j = 0; j < expected.size(); ++j) {
        worst_mixed = std::max(worst_mixed, std::abs(mixed[j] - expected[j]));
    }
    return {worst <= 1e-12 && worst_mixed <= 1e-12,
            fmt::format("AR(1) max err {:.1e}; ARMA(1,1) max err {:.1e}", worst, worst_mixed)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

Outcome end_to_end(const SelftestOptions& options, double& seconds_first_run) {
    if (!std::filesystem::exists(options.fixture)) {
        return {false, fmt::format("fixture '{}' not found", options.fixture.string())};
    }
    PipelineConfig config;
    config.input_path = options.fixture;
    config.countries = fixture_countries();
    const auto dir_a = options.scratch_dir / "run_a";
    const auto dir_b = options.scratch_dir / "run_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    const auto start = std::chrono::steady_clock::now();
    config.output_dir = dir_a;
    const auto reports = run_pipeline(config);
    seconds_first_run =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    config.output_dir = dir_b;
    (void)run_pipeline(config);

    std::vector<std::string> problems;
    for (const auto& r : reports) {
        if (!r.ok()) problems.push_back(fmt::format("{} failed: {}", r.country, r.error->message));
    }

    std::map<std::string, std::string> expected{
        {"table1.csv", "Country,P_ADF,p,d,q,AIC,BIC,BoxLjung_p"},
        {"table2.csv", "Country,ME,RMSE,MAE,ACF1"},
        {"policy.csv", "Country,verdict,multiplier"},
        {"report.json", "{"},
    };
    for (const auto& country : config.countries) {
        const auto label = file_label(country);
        expected["forecast_" + label + ".csv"] = "date,point,lower,upper";
        expected["residuals_" + label + ".csv"] = "date,residual";
        expected["histogram_" + label + ".csv"] = "bin_left,bin_right,count";
        expected["acf_" + label + ".csv"] = "lag,acf,bound";
    }
    std::set<std::string> present;
    for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
        present.insert(entry.path().filename().string());
    }
    for (const auto& [name, header] : expected) {
        if (!present.count(name)) {
            problems.push_back("missing " + name);
            continue;
        }
        if (first_line(dir_a / name) != header) problems.push_back("bad header in " + name);
        if (read_file(dir_a / name) != read_file(dir_b / name)) {
            problems.push_back(name + " differs between runs");
        }
    }
    if (present.size() != expected.size()) {
        problems.push_back(fmt::format("{} files written, expected {}", present.size(),
                                       expected.size()));
    }

    const auto mexico = std::find_if(reports.begin(), reports.end(),
                                     [](const auto& r) { return r.country == "Mexico"; });
    std::string mexico_detail = "Mexico missing";
    if (mexico != reports.end() && mexico->ok()) {
        const auto& advice = mexico->policy;
        mexico_detail = fmt::format("Mexico {} x{:.6f}", to_string(advice.verdict),
                                    advice.required_test_multiplier);
        if (advice.verdict != Verdict::Tighten ||
            std::abs(advice.required_test_multiplier - 10.0) > 1e-6) {
            problems.push_back(mexico_detail);
        }
    }
    if (exit_code_for(reports) != 0) problems.push_back("non-zero exit status");

    std::ostringstream detail;
    detail << present.size() << " files, deterministic, " << mexico_detail;
    for (const auto& p : problems) detail << "; " << p;
    return {problems.empty(), detail.str()};
}

Outcome roots_outside(const FittedPool& pool) {
    std::size_t violations = 0;
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& m : pool.models) {
        const double ar = ar_min_root_modulus(m.phi);
        const double ma = ma_min_root_modulus(m.theta);
        closest = std::min({closest, ar, ma});
        if (!(ar > 1.0 + 1e-8) || !(ma > 1.0 + 1e-8)) ++violations;
    }
    return {violations == 0, fmt::format("{} models, {} violations, smallest root modulus {:.4f}",
                                         pool.models.size(), violations, closest)};
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& options, std::ostream& log) {
    std::vector<CriterionResult> results;
    FittedPool pool;

    auto record = [&](int id, std::string title, double limit, const std::function<Outcome()>& body) {
        CriterionResult r;
        r.id = id;
        r.title = std::move(title);
        r.time_limit = limit;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = body();
        } catch (const std::exception& e) {
            outcome = {false, fmt::format("exception: {}", e.what())};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.passed = outcome.passed && (limit <= 0.0 || r.seconds < limit);
        r.detail = outcome.detail;
        if (limit > 0.0 && r.seconds >= limit) {
            r.detail += fmt::format("; exceeded {:.0f} s limit", limit);
        }
        log << fmt::format("[{}] {:>2} {:<34} {} ({:.2f} s)\n", r.passed ? "PASS" : "FAIL", r.id,
                           r.title, r.detail, r.seconds);
        log.flush();
        results.push_back(std::move(r));
    };

    record(1, "difference/integrate round trip", 1.0, round_trip);
    record(2, "estimator recovery AR(1)/MA(1)", 60.0, [&] { return estimator_recovery(pool); });
    record(3, "ADF size and power", 60.0, adf_calibration);
    record(4, "Ljung-Box null uniformity", 30.0, ljung_box_uniformity);
    record(5, "80% interval coverage", 300.0, [&] { return interval_calibration(pool); });
    record(6, "random-walk forecast", 0.0, random_walk_forecast);
    record(7, "special functions", 0.0, special_functions);
    record(8, "information criteria", 0.0, criteria_arithmetic);
    record(9, "rmse >= mae", 0.0, metric_inequality);
    record(10, "psi weights", 0.0, psi_checks);

    double pipeline_seconds = 0.0;
    record(11, "end-to-end pipeline", 0.0, [&] {
        auto outcome = end_to_end(options, pipeline_seconds);
        if (pipeline_seconds >= 30.0) {
            outcome.passed = false;
            outcome.detail += fmt::format("; first run took {:.1f} s (limit 30 s)", pipeline_seconds);
        }
        return outcome;
    });
    record(12, "stationarity/invertibility", 0.0, [&] { return roots_outside(pool); });

    const auto passed = std::count_if(results.begin(), results.end(),
                                      [](const auto& r) { return r.passed; });
    log << fmt::format("{}/{} criteria passed\n", passed, results.size());
    return results;
}

}  // namespace bj
