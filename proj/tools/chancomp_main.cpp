// Command-line front end: design modulation vectors, verify them, run
// simulations and benchmark presets, export constellations.
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chancomp/design.hpp"
#include "chancomp/harness.hpp"
#include "chancomp/serde.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfigError = 3;

bool is_preset_function(const std::string& name) {
    return name == "sum" || name == "product" || name == "max" || name == "quadratic";
}

chancomp::FunctionSpec resolve_function(const std::string& name, int K, int q) {
    if (is_preset_function(name)) return chancomp::make_preset(name, K, q);
    chancomp::FunctionSpec spec = chancomp::load_table_function(name);
    if ((K > 0 && spec.K != K) || (q > 0 && spec.q != q))
        throw std::invalid_argument("table dimensions disagree with --K/--q");
    return spec;
}

std::string constellation_csv(const Eigen::VectorXcd& x) {
    std::ostringstream out;
    out.precision(12);
    out << "level,re,im\n";
    for (Eigen::Index l = 0; l < x.size(); ++l)
        out << l << ',' << x(l).real() << ',' << x(l).imag() << '\n';
    return out.str();
}

int cmd_design(const std::string& function, int K, int q, const std::string& outPath,
               std::optional<double> P, std::optional<double> gamma, int nRand,
               std::uint64_t seed) {
    const chancomp::FunctionSpec spec = resolve_function(function, K, q);
    chancomp::DesignOptions options;
    options.P = P;
    options.gamma = gamma;
    options.nRand = nRand;
    options.seed = seed;
    const chancomp::DesignResult result = chancomp::design_modulation(spec, options);
    if (result.lifted.status != chancomp::SolveStatus::Feasible) {
        std::cerr << "design infeasible (relaxation status "
                  << (result.lifted.status == chancomp::SolveStatus::Infeasible ? "infeasible"
                                                                                : "numerical-failure")
                  << ", gamma halvings " << result.gammaHalvings << ")\n";
        return kExitInfeasible;
    }
    chancomp::save_design(result.design, outPath);
    std::cout << "design " << spec.name << " K=" << spec.K << " q=" << spec.q
              << " margin=" << result.design.margin
              << " exact_feasible=" << (result.design.exactFeasible ? "true" : "false")
              << " provenance=" << chancomp::provenance_name(result.design.provenance) << "\n";
    return result.design.exactFeasible ? kExitOk : kExitInfeasible;
}

int cmd_verify(const std::string& designPath, const std::string& function, int K, double epsilon,
               const std::string& tableOut) {
    const chancomp::ModulationDesign design = chancomp::load_design(designPath);
    const int q = static_cast<int>(design.x.size());
    const chancomp::FunctionSpec spec = resolve_function(function, K, q);
    const auto classes = chancomp::enumerate_multiset_classes(spec);
    const chancomp::FeasibilityReport report =
        chancomp::verify_exact_feasibility(design.x, classes, epsilon);
    if (!tableOut.empty()) {
        const chancomp::DecoderTable table = chancomp::DecoderTable::build(design.x, classes, epsilon);
        chancomp::write_text_file(tableOut, chancomp::table_to_json(table).dump(2) + "\n");
    }
    if (report.pass) {
        std::cout << "verify: pass (" << classes.size() << " classes, epsilon=" << epsilon << ")\n";
        return kExitOk;
    }
    std::cout << "verify: FAIL, " << report.violations.size() << " colliding pair(s)\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
        if (shown++ >= 10) {
            std::cout << "  ...\n";
            break;
        }
        std::cout << "  classes " << v.i << " and " << v.j << " (|ds|=" << v.distance << "): counts";
        for (int c : classes[static_cast<std::size_t>(v.i)].counts) std::cout << ' ' << c;
        std::cout << " vs";
        for (int c : classes[static_cast<std::size_t>(v.j)].counts) std::cout << ' ' << c;
        std::cout << ", values " << classes[static_cast<std::size_t>(v.i)].value << " vs "
                  << classes[static_cast<std::size_t>(v.j)].value << "\n";
    }
    return kExitInfeasible;
}

int cmd_simulate(const std::string& configPath, const std::string& outPath,
                 const std::string& reportPath) {
    const chancomp::ExperimentConfig config = chancomp::load_config(configPath);
    const chancomp::NmseReport report = chancomp::run_monte_carlo(config);
    chancomp::write_text_file(outPath, chancomp::report_to_csv(report));
    if (!reportPath.empty())
        chancomp::write_text_file(reportPath,
                                  chancomp::report_to_json(report, &config).dump(2) + "\n");
    std::cout << "simulate: " << report.rows.size() << " cells -> " << outPath << "\n";
    return kExitOk;
}

int cmd_bench(const std::string& presetName, std::uint64_t seed, int trials,
              const std::string& outPath, const std::string& reportPath) {
    chancomp::PresetBundle bundle = chancomp::preset(presetName);

    if (!bundle.designFunctions.empty()) {
        // Design-batch preset: emit one design + constellation export per function.
        bool allExact = true;
        for (const std::string& fn : bundle.designFunctions) {
            const chancomp::FunctionSpec spec =
                chancomp::make_preset(fn, bundle.designK, bundle.designQ);
            chancomp::DesignOptions options;
            options.seed = seed;
            options.nRand = bundle.designNRand;
            const chancomp::DesignResult result = chancomp::design_modulation(spec, options);
            if (result.lifted.status != chancomp::SolveStatus::Feasible) {
                std::cerr << "design for " << fn << " infeasible\n";
                allExact = false;
                continue;
            }
            chancomp::save_design(result.design, outPath + fn + "_design.json");
            chancomp::write_text_file(outPath + fn + "_points.csv",
                                      constellation_csv(result.design.x));
            std::cout << "bench " << presetName << ": " << fn
                      << " margin=" << result.design.margin << " exact_feasible="
                      << (result.design.exactFeasible ? "true" : "false") << "\n";
            allExact = allExact && result.design.exactFeasible;
        }
        return allExact ? kExitOk : kExitInfeasible;
    }

    for (chancomp::ExperimentConfig& config : bundle.experiments) {
        config.masterSeed = seed;
        if (trials > 0) config.trials = trials;
    }
    const chancomp::NmseReport report = chancomp::run_batch(bundle.experiments);
    chancomp::write_text_file(outPath, chancomp::report_to_csv(report));
    if (!reportPath.empty())
        chancomp::write_text_file(reportPath, chancomp::report_to_json(report).dump(2) + "\n");
    std::cout << "bench " << presetName << ": " << report.rows.size() << " cells -> " << outPath
              << "\n";
    return kExitOk;
}

int cmd_export(const std::string& designPath, const std::string& outPath) {
    const chancomp::ModulationDesign design = chancomp::load_design(designPath);
    chancomp::write_text_file(outPath, constellation_csv(design.x));
    std::cout << "export-constellation: " << design.x.size() << " points -> " << outPath << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Digital constellation design and NMSE benchmarking for computing "
                 "symmetric functions over a multiple-access channel"};
    app.require_subcommand(1);

    // design
    auto* design = app.add_subcommand("design", "Solve for a modulation vector");
    std::string designFunction = "sum";
    int designK = 2;
    int designQ = 8;
    std::string designOut = "design.json";
    double designP = -1;
    double designGamma = -1;
    int designNRand = 1000;
    std::uint64_t designSeed = 1;
    design->add_option("--function", designFunction, "Preset name or value-table JSON path");
    design->add_option("--K", designK, "Node count");
    design->add_option("--q", designQ, "Quantization levels");
    design->add_option("--out", designOut, "Output design JSON");
    design->add_option("--P", designP, "Power budget (default q)");
    design->add_option("--gamma", designGamma, "Normalization factor (default policy)");
    design->add_option("--nrand", designNRand, "Randomization candidates");
    design->add_option("--seed", designSeed, "Randomization seed");

    // verify
    auto* verify = app.add_subcommand("verify", "Check a design against a function");
    std::string verifyDesign;
    std::string verifyFunction = "sum";
    int verifyK = 2;
    double verifyEpsilon = 1e-6;
    std::string verifyTableOut;
    verify->add_option("--design", verifyDesign, "Design JSON path")->required();
    verify->add_option("--function", verifyFunction, "Preset name or value-table JSON path");
    verify->add_option("--K", verifyK, "Node count");
    verify->add_option("--epsilon", verifyEpsilon, "Separation tolerance");
    verify->add_option("--export-table", verifyTableOut, "Also write the decoder table JSON");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo experiment config");
    std::string simConfig;
    std::string simOut = "results.csv";
    std::string simReport;
    simulate->add_option("--config", simConfig, "Experiment config JSON")->required();
    simulate->add_option("--out", simOut, "Output CSV");
    simulate->add_option("--report", simReport, "Optional JSON report path");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a named experiment preset");
    std::string benchPreset;
    std::uint64_t benchSeed = 42;
    int benchTrials = 0;
    std::string benchOut = "bench.csv";
    std::string benchReport;
    bench->add_option("--preset", benchPreset, "fig4 | fig5 | fig6")->required();
    bench->add_option("--seed", benchSeed, "Master seed");
    bench->add_option("--trials", benchTrials, "Override trials per SNR point");
    bench->add_option("--out", benchOut, "Output CSV (fig4: filename prefix)");
    bench->add_option("--report", benchReport, "Optional JSON report path");

    // export-constellation
    auto* exportCmd = app.add_subcommand("export-constellation", "Write design points as CSV");
    std::string exportDesign;
    std::string exportOut = "points.csv";
    exportCmd->add_option("--design", exportDesign, "Design JSON path")->required();
    exportCmd->add_option("--out", exportOut, "Output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed())
            return cmd_design(designFunction, designK, designQ, designOut,
                              designP > 0 ? std::optional<double>(designP) : std::nullopt,
                              designGamma > 0 ? std::optional<double>(designGamma) : std::nullopt,
                              designNRand, designSeed);
        if (verify->parsed())
            return cmd_verify(verifyDesign, verifyFunction, verifyK, verifyEpsilon, verifyTableOut);
        if (simulate->parsed()) return cmd_simulate(simConfig, simOut, simReport);
        if (bench->parsed()) return cmd_bench(benchPreset, benchSeed, benchTrials, benchOut, benchReport);
        if (exportCmd->parsed()) return cmd_export(exportDesign, exportOut);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
