#include "chancomp/serde.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace chancomp {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

std::vector<double> real_parts(const Eigen::VectorXcd& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i).real();
    return out;
}

std::vector<double> imag_parts(const Eigen::VectorXcd& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i).imag();
    return out;
}

}  // namespace

json design_to_json(const ModulationDesign& design) {
    return json{{"q", design.x.size()},
                {"P", design.P},
                {"gamma", design.gamma},
                {"x_re", real_parts(design.x)},
                {"x_im", imag_parts(design.x)},
                {"margin", design.margin},
                {"exact_feasible", design.exactFeasible},
                {"provenance", provenance_name(design.provenance)}};
}

ModulationDesign design_from_json(const json& j) {
    ModulationDesign design;
    const auto re = j.at("x_re").get<std::vector<double>>();
    const auto im = j.at("x_im").get<std::vector<double>>();
    if (re.size() != im.size()) throw std::invalid_argument("x_re / x_im length mismatch");
    const auto q = j.at("q").get<std::size_t>();
    if (q != re.size()) throw std::invalid_argument("design q disagrees with vector length");
    design.x.resize(static_cast<Eigen::Index>(q));
    for (std::size_t i = 0; i < q; ++i)
        design.x(static_cast<Eigen::Index>(i)) = cxd(re[i], im[i]);
    design.P = j.at("P").get<double>();
    design.gamma = j.at("gamma").get<double>();
    design.margin = j.at("margin").get<double>();
    design.exactFeasible = j.at("exact_feasible").get<bool>();
    design.provenance = provenance_from_name(j.at("provenance").get<std::string>());
    return design;
}

json table_to_json(const DecoderTable& table) {
    std::vector<double> re(table.points.size());
    std::vector<double> im(table.points.size());
    for (std::size_t i = 0; i < table.points.size(); ++i) {
        re[i] = table.points[i].real();
        im[i] = table.points[i].imag();
    }
    return json{{"points_re", re}, {"points_im", im}, {"values", table.values},
                {"epsilon", table.epsilon}};
}

DecoderTable table_from_json(const json& j) {
    DecoderTable table;
    const auto re = j.at("points_re").get<std::vector<double>>();
    const auto im = j.at("points_im").get<std::vector<double>>();
    table.values = j.at("values").get<std::vector<double>>();
    if (re.size() != im.size() || re.size() != table.values.size())
        throw std::invalid_argument("decoder table arrays disagree in length");
    table.points.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) table.points[i] = cxd(re[i], im[i]);
    table.epsilon = j.at("epsilon").get<double>();
    return table;
}

json config_to_json(const ExperimentConfig& config) {
    json input;
    if (config.inputModel == InputModel::DiscreteUniform) {
        input = json{{"model", "discrete-uniform"}};
    } else {
        input = json{{"model", "continuous-uniform"}, {"lo", config.lo}, {"hi", config.hi}};
    }
    json runs = json::array();
    for (const SchemeRun& run : config.runs)
        runs.push_back(json{{"scheme", run.scheme},
                            {"label", run.label},
                            {"q", run.q},
                            {"design", run.design}});
    json designParams = json{{"nrand", config.designParams.nRand},
                             {"seed", config.designParams.seed},
                             {"epsilon", config.designParams.epsilon}};
    if (config.designParams.P) designParams["P"] = *config.designParams.P;
    if (config.designParams.gamma) designParams["gamma"] = *config.designParams.gamma;
    json j{{"function", config.function},
           {"K", config.K},
           {"q", config.q},
           {"input", input},
           {"snr_grid_db", config.snrGridDb},
           {"trials", config.trials},
           {"master_seed", config.masterSeed},
           {"schemes", runs},
           {"aircomp", json{{"delta", config.aircomp.delta}, {"temp_scale", config.aircomp.tempScale}}},
           {"design", designParams},
           {"nmse_variant",
            config.nmseVariant == NmseVariant::Standard ? "standard" : "paper"}};
    if (config.tablePath) j["table"] = *config.tablePath;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    config.function = j.at("function").get<std::string>();
    if (j.contains("table")) config.tablePath = j.at("table").get<std::string>();
    config.K = j.at("K").get<int>();
    config.q = j.at("q").get<int>();
    if (j.contains("input")) {
        const json& input = j.at("input");
        const auto model = input.at("model").get<std::string>();
        if (model == "discrete-uniform") {
            config.inputModel = InputModel::DiscreteUniform;
        } else if (model == "continuous-uniform") {
            config.inputModel = InputModel::ContinuousUniform;
            config.lo = input.at("lo").get<double>();
            config.hi = input.at("hi").get<double>();
        } else {
            throw std::invalid_argument("unknown input model: " + model);
        }
    }
    config.snrGridDb = j.at("snr_grid_db").get<std::vector<double>>();
    config.trials = j.at("trials").get<int>();
    config.masterSeed = j.value("master_seed", std::uint64_t{1});
    for (const json& rj : j.at("schemes")) {
        SchemeRun run;
        run.scheme = rj.at("scheme").get<std::string>();
        run.label = rj.value("label", run.scheme);
        run.q = rj.value("q", 0);
        run.design = rj.value("design", std::string("solve"));
        config.runs.push_back(std::move(run));
    }
    if (j.contains("aircomp")) {
        config.aircomp.delta = j.at("aircomp").value("delta", 1e-3);
        config.aircomp.tempScale = j.at("aircomp").value("temp_scale", 10.0);
    }
    if (j.contains("design")) {
        const json& d = j.at("design");
        if (d.contains("P")) config.designParams.P = d.at("P").get<double>();
        if (d.contains("gamma")) config.designParams.gamma = d.at("gamma").get<double>();
        config.designParams.nRand = d.value("nrand", 1000);
        config.designParams.seed = d.value("seed", std::uint64_t{1});
        config.designParams.epsilon = d.value("epsilon", 1e-6);
    }
    const auto variant = j.value("nmse_variant", std::string("standard"));
    if (variant == "standard") {
        config.nmseVariant = NmseVariant::Standard;
    } else if (variant == "paper") {
        config.nmseVariant = NmseVariant::PaperLiteral;
    } else {
        throw std::invalid_argument("unknown nmse variant: " + variant);
    }
    return config;
}

json report_to_json(const NmseReport& report, const ExperimentConfig* configEcho) {
    json rows = json::array();
    for (const NmseRow& row : report.rows)
        rows.push_back(json{{"scheme", row.scheme},
                            {"snr_db", row.snrDb},
                            {"nmse", row.nmse},
                            {"trials", row.trials},
                            {"clamp_count", row.clampCount},
                            {"channel_uses", row.channelUses}});
    json runs = json::array();
    for (const RunInfo& info : report.runs)
        runs.push_back(json{{"label", info.label},
                            {"scheme", info.scheme},
                            {"q", info.q},
                            {"channel_uses", info.channelUses},
                            {"design_margin", info.designMargin},
                            {"exact_feasible", info.exactFeasible},
                            {"x_norm", info.xNorm}});
    json j{{"master_seed", report.masterSeed}, {"rows", rows}, {"runs", runs}};
    if (configEcho) j["config"] = config_to_json(*configEcho);
    return j;
}

std::string report_to_csv(const NmseReport& report) {
    std::ostringstream out;
    out << "scheme,snr_db,nmse,trials,clamp_count\n";
    out.precision(12);
    for (const NmseRow& row : report.rows)
        out << row.scheme << ',' << row.snrDb << ',' << row.nmse << ',' << row.trials << ','
            << row.clampCount << '\n';
    return out.str();
}

FunctionSpec load_table_function(const std::string& path) {
    const json j = read_json_file(path);
    return make_table_function(j.at("K").get<int>(), j.at("q").get<int>(),
                               j.at("values").get<std::vector<double>>());
}

ModulationDesign load_design(const std::string& path) {
    return design_from_json(read_json_file(path));
}

void save_design(const ModulationDesign& design, const std::string& path) {
    write_text_file(path, design_to_json(design).dump(2) + "\n");
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_json_file(path));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

}  // namespace chancomp
