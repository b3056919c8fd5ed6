#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "chancomp/harness.hpp"
#include "chancomp/serde.hpp"

using namespace chancomp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.function = "sum";
    config.K = 2;
    config.q = 4;
    config.inputModel = InputModel::DiscreteUniform;
    config.snrGridDb = {5.0, 15.0};
    config.trials = 40;
    config.masterSeed = 9;
    config.runs = {SchemeRun{"channelcomp", "channelcomp", 0, "solve"},
                   SchemeRun{"aircomp", "aircomp", 0, "solve"},
                   SchemeRun{"ofdma", "ofdma", 0, "solve"}};
    return config;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("nmse examples") {
    const std::vector<double> t1{1, 2, 3};
    CHECK(nmse(t1, t1) == 0.0);
    const std::vector<double> t2{2};
    const std::vector<double> e2{1};
    CHECK(nmse(t2, e2) == doctest::Approx(0.25));
    const std::vector<double> zeros{0, 0};
    CHECK(nmse(zeros, zeros) == 0.0);
    const std::vector<double> off{1, 0};
    CHECK(nmse(zeros, off) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(nmse(t1, t2), std::invalid_argument);
}

TEST_CASE("paper-literal nmse variant") {
    const std::vector<double> t{2, 4, 0};
    const std::vector<double> e{1, 4, 1};
    // Trials with zero truth are skipped: (1/2 + 0/4) / 2.
    CHECK(nmse_paper_variant(t, e) == doctest::Approx(0.25));
}

TEST_CASE("noiseless grid gives zero NMSE for the digital schemes") {
    ExperimentConfig config = small_config();
    config.snrGridDb = {std::numeric_limits<double>::infinity()};
    config.runs = {SchemeRun{"channelcomp", "channelcomp", 0, "solve"},
                   SchemeRun{"ofdma", "ofdma", 0, "solve"}};
    const NmseReport report = run_monte_carlo(config);
    REQUIRE(report.rows.size() == 2);
    for (const NmseRow& row : report.rows) CHECK(row.nmse == 0.0);
}

TEST_CASE("report covers the full scheme x SNR grid exactly once") {
    const NmseReport report = run_monte_carlo(small_config());
    CHECK(report.rows.size() == 6);
    std::set<std::pair<std::string, double>> cells;
    for (const NmseRow& row : report.rows) cells.insert({row.scheme, row.snrDb});
    CHECK(cells.size() == 6);
    for (const NmseRow& row : report.rows) {
        CHECK(row.nmse >= 0.0);
        CHECK(row.trials == 40);
        if (row.scheme == "ofdma") CHECK(row.channelUses == 2);
        else CHECK(row.channelUses == 1);
    }
}

TEST_CASE("runs are deterministic under the master seed") {
    const ExperimentConfig config = small_config();
    const NmseReport a = run_monte_carlo(config);
    const NmseReport b = run_monte_carlo(config);
    const std::string csvA = report_to_csv(a);
    const std::string csvB = report_to_csv(b);
    CHECK(csvA == csvB);
    const std::string jsonA = report_to_json(a, &config).dump();
    const std::string jsonB = report_to_json(b, &config).dump();
    CHECK(jsonA == jsonB);
}

TEST_CASE("different seeds change the noise draws") {
    ExperimentConfig config = small_config();
    const NmseReport a = run_monte_carlo(config);
    config.masterSeed = 10;
    const NmseReport b = run_monte_carlo(config);
    bool anyDifferent = false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (a.rows[i].nmse != b.rows[i].nmse) anyDifferent = true;
    CHECK(anyDifferent);
}

TEST_CASE("monotone NMSE trend for the digital scheme") {
    ExperimentConfig config = small_config();
    config.snrGridDb = {0.0, 4.0, 8.0, 12.0, 16.0, 20.0};
    config.trials = 1000;
    config.runs = {SchemeRun{"channelcomp", "channelcomp", 0, "solve"}};
    const NmseReport report = run_monte_carlo(config);
    // Allow small violations within Monte-Carlo noise; at these trial counts
    // the trend over a 4 dB gap must be clearly downward.
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i)
        CHECK(report.rows[i + 1].nmse <= report.rows[i].nmse * 1.5 + 1e-12);
}

TEST_CASE("noiseless continuous floor matches the channel-free quantization oracle") {
    ExperimentConfig config;
    config.function = "sum";
    config.K = 2;
    config.q = 4;
    config.inputModel = InputModel::ContinuousUniform;
    config.lo = 0;
    config.hi = 7;
    config.snrGridDb = {std::numeric_limits<double>::infinity()};
    config.trials = 4000;
    config.masterSeed = 21;
    config.runs = {SchemeRun{"channelcomp", "channelcomp", 0, "solve"}};
    const NmseReport report = run_monte_carlo(config);
    const double floorOracle =
        quantization_floor_nmse("sum", 2, Quantizer(0, 7, 4), 200000, 77);
    CHECK(report.rows[0].nmse == doctest::Approx(floorOracle).epsilon(0.15));
    CHECK(report.rows[0].nmse > 0.0);
}

TEST_CASE("dequantized preset evaluates f on reconstruction points") {
    const Quantizer quant(0, 7, 4);
    const FunctionSpec spec = make_dequantized_preset("sum", 2, quant);
    CHECK(spec.evaluator({1, 3}) == doctest::Approx(7.0 / 3.0 + 7.0));
    CHECK(verify_symmetry(spec));
}

TEST_CASE("presets") {
    const PresetBundle fig5 = preset("fig5");
    REQUIRE(fig5.experiments.size() == 2);
    CHECK(fig5.experiments[0].function == "sum");
    CHECK(fig5.experiments[1].function == "product");
    for (const auto& config : fig5.experiments) {
        CHECK(config.K == 4);
        CHECK(config.q == 8);
        CHECK(config.trials == 100);
        CHECK(config.snrGridDb.front() == -5.0);
        CHECK(config.snrGridDb.back() == 27.0);
        CHECK(config.snrGridDb.size() == 9);  // step 4
        CHECK(config.runs.size() == 3);
    }

    const PresetBundle fig6 = preset("fig6");
    REQUIRE(fig6.experiments.size() == 1);
    const auto& config = fig6.experiments[0];
    CHECK(config.inputModel == InputModel::ContinuousUniform);
    CHECK(config.lo == 0.0);
    CHECK(config.hi == 7.0);
    CHECK(config.runs.size() == 5);

    const PresetBundle fig4 = preset("fig4");
    CHECK(fig4.designFunctions ==
          std::vector<std::string>{"sum", "product", "max", "quadratic"});
    CHECK(fig4.designK == 2);
    CHECK(fig4.designQ == 8);

    CHECK_THROWS_AS(preset("fig7"), std::invalid_argument);
}

TEST_CASE("config validation errors") {
    ExperimentConfig config = small_config();
    config.trials = 0;
    CHECK_THROWS_AS(run_monte_carlo(config), std::invalid_argument);
    config = small_config();
    config.snrGridDb.clear();
    CHECK_THROWS_AS(run_monte_carlo(config), std::invalid_argument);
    config = small_config();
    config.runs[0].scheme = "smoke-signals";
    CHECK_THROWS_AS(run_monte_carlo(config), std::invalid_argument);
}

TEST_CASE("paper-literal variant is selectable") {
    ExperimentConfig config = small_config();
    config.nmseVariant = NmseVariant::PaperLiteral;
    config.runs = {SchemeRun{"channelcomp", "channelcomp", 0, "solve"}};
    const NmseReport report = run_monte_carlo(config);
    for (const NmseRow& row : report.rows) CHECK(row.nmse >= 0.0);
}

}  // TEST_SUITE
