// Monte-Carlo NMSE benchmarking across SNR sweeps for the digital
// superposition scheme and the AirComp / OFDMA baselines, plus the
// experiment presets.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chancomp/baselines.hpp"
#include "chancomp/design.hpp"

namespace chancomp {

enum class InputModel { DiscreteUniform, ContinuousUniform };
enum class NmseVariant { Standard, PaperLiteral };

struct SchemeRun {
    std::string scheme;        // channelcomp | aircomp | ofdma
    std::string label;         // row label; defaults to the scheme name
    int q = 0;                 // digital quantizer levels; 0 -> config default
    std::string design = "solve";  // "solve" or a design JSON path
};

struct DesignParams {
    std::optional<double> P;
    std::optional<double> gamma;
    int nRand = 1000;
    std::uint64_t seed = 1;
    double epsilon = 1e-6;
};

struct ExperimentConfig {
    std::string function = "sum";  // preset name, or "custom" with tablePath
    std::optional<std::string> tablePath;
    int K = 2;
    int q = 8;  // default quantizer levels
    InputModel inputModel = InputModel::DiscreteUniform;
    double lo = 0.0;  // continuous input interval
    double hi = 7.0;
    std::vector<double> snrGridDb;
    int trials = 100;
    std::uint64_t masterSeed = 1;
    std::vector<SchemeRun> runs;
    AircompParams aircomp;
    DesignParams designParams;
    NmseVariant nmseVariant = NmseVariant::Standard;
};

struct NmseRow {
    std::string scheme;  // run label
    double snrDb = 0.0;
    double nmse = 0.0;
    int trials = 0;
    long clampCount = 0;
    int channelUses = 1;  // per computation: K for ofdma, 1 otherwise
};

struct RunInfo {
    std::string label;
    std::string scheme;
    int q = 0;
    int channelUses = 1;
    double designMargin = 0.0;
    bool exactFeasible = false;
    double xNorm = 0.0;
};

struct NmseReport {
    std::vector<NmseRow> rows;
    std::vector<RunInfo> runs;
    std::uint64_t masterSeed = 0;
};

// Standard normalized MSE sum((f - fhat)^2) / sum(f^2); 0/0 -> 0 and a
// +inf sentinel when only the numerator is nonzero.
double nmse(std::span<const double> truths, std::span<const double> estimates);

// Literal per-trial variant |f - fhat|^2 / |f| averaged over trials with a
// nonzero truth, kept for comparison behind the config flag.
double nmse_paper_variant(std::span<const double> truths, std::span<const double> estimates);

// Evaluator of the preset function on real (unquantized) arguments.
std::function<double(std::span<const double>)> real_evaluator(const std::string& name);

// Level-domain function with the evaluator composed with dequantization,
// used when the experiment's ground truth is continuous.
FunctionSpec make_dequantized_preset(const std::string& name, int K, const Quantizer& quant);

NmseReport run_monte_carlo(const ExperimentConfig& config);

// Concatenates the reports of a preset batch into one.
NmseReport run_batch(std::span<const ExperimentConfig> configs);

// Channel-free quantization-noise NMSE: f(v) against f(dequantize(quantize(v)))
// for continuous uniform v. The saturation floor of the digital schemes.
double quantization_floor_nmse(const std::string& functionName, int K, const Quantizer& quant,
                               int trials, std::uint64_t seed);

struct PresetBundle {
    std::vector<ExperimentConfig> experiments;
    // Design-batch presets: functions to design for, at designK / designQ.
    std::vector<std::string> designFunctions;
    int designK = 0;
    int designQ = 0;
    int designNRand = 1000;
};

// fig4: design batch (sum, product, max, quadratic at q=8, K=2).
// fig5: discrete-input sweep, sum and product, K=4, q=8, all three schemes.
// fig6: continuous-input sweep of the sum, K=4, digital q in {4,16}.
PresetBundle preset(const std::string& name);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace chancomp
