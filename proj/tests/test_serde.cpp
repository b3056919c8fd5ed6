#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "chancomp/serde.hpp"

using namespace chancomp;

TEST_SUITE("serde") {

TEST_CASE("design JSON round trip with the pinned schema") {
    ModulationDesign design;
    design.x.resize(3);
    design.x << cxd(1, -2), cxd(0.5, 0), cxd(-0.25, 0.125);
    design.P = 3.0;
    design.gamma = 0.01;
    design.margin = 0.375;
    design.exactFeasible = true;
    design.provenance = Provenance::Randomized;

    const nlohmann::json j = design_to_json(design);
    CHECK(j.at("q") == 3);
    CHECK(j.contains("P"));
    CHECK(j.contains("gamma"));
    CHECK(j.contains("x_re"));
    CHECK(j.contains("x_im"));
    CHECK(j.contains("margin"));
    CHECK(j.contains("exact_feasible"));
    CHECK(j.at("provenance") == "randomized");

    const ModulationDesign back = design_from_json(j);
    CHECK(back.x == design.x);
    CHECK(back.P == design.P);
    CHECK(back.gamma == design.gamma);
    CHECK(back.margin == design.margin);
    CHECK(back.exactFeasible == design.exactFeasible);
    CHECK(back.provenance == design.provenance);
}

TEST_CASE("decoder table JSON round trip") {
    DecoderTable table;
    table.points = {cxd(-2, 0), cxd(0, 1), cxd(2, -1)};
    table.values = {0, 0.5, 2};
    table.epsilon = 1e-6;
    const nlohmann::json j = table_to_json(table);
    CHECK(j.contains("points_re"));
    CHECK(j.contains("points_im"));
    CHECK(j.contains("values"));
    CHECK(j.contains("epsilon"));
    const DecoderTable back = table_from_json(j);
    CHECK(back.points == table.points);
    CHECK(back.values == table.values);
    CHECK(back.epsilon == table.epsilon);
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig config;
    config.function = "product";
    config.K = 4;
    config.q = 8;
    config.inputModel = InputModel::ContinuousUniform;
    config.lo = 0;
    config.hi = 7;
    config.snrGridDb = {-5, -1, 3};
    config.trials = 250;
    config.masterSeed = 31415;
    config.runs = {SchemeRun{"channelcomp", "cc", 8, "solve"},
                   SchemeRun{"aircomp", "ac", 0, "solve"}};
    config.aircomp.delta = 5e-4;
    config.designParams.P = 9.0;
    config.designParams.nRand = 64;
    config.nmseVariant = NmseVariant::PaperLiteral;

    const ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(back.function == config.function);
    CHECK(back.K == config.K);
    CHECK(back.q == config.q);
    CHECK(back.inputModel == config.inputModel);
    CHECK(back.lo == config.lo);
    CHECK(back.hi == config.hi);
    CHECK(back.snrGridDb == config.snrGridDb);
    CHECK(back.trials == config.trials);
    CHECK(back.masterSeed == config.masterSeed);
    REQUIRE(back.runs.size() == 2);
    CHECK(back.runs[0].label == "cc");
    CHECK(back.runs[1].scheme == "aircomp");
    CHECK(back.aircomp.delta == config.aircomp.delta);
    REQUIRE(back.designParams.P.has_value());
    CHECK(*back.designParams.P == 9.0);
    CHECK(back.designParams.nRand == 64);
    CHECK(back.nmseVariant == NmseVariant::PaperLiteral);
}

TEST_CASE("CSV column order is pinned") {
    NmseReport report;
    report.rows = {NmseRow{"channelcomp", -5.0, 0.25, 100, 0, 1},
                   NmseRow{"aircomp", -5.0, 1.5, 100, 3, 1}};
    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("scheme,snr_db,nmse,trials,clamp_count\n", 0) == 0);
    CHECK(csv.find("channelcomp,-5,0.25,100,0\n") != std::string::npos);
    CHECK(csv.find("aircomp,-5,1.5,100,3\n") != std::string::npos);
}

TEST_CASE("value table file loads into a function") {
    const char* path = "serde_table.json";
    {
        std::ofstream out(path);
        out << R"({"K":2, "q":2, "values":[0, 1, 1, 4]})";
    }
    const FunctionSpec spec = load_table_function(path);
    CHECK(spec.K == 2);
    CHECK(spec.q == 2);
    CHECK(spec.evaluator({1, 1}) == 4.0);
    CHECK(verify_symmetry(spec));
    std::remove(path);

    CHECK_THROWS(load_table_function("missing_file.json"));
}

}  // TEST_SUITE
