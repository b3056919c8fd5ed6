#include "chancomp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chancomp/serde.hpp"

namespace chancomp {

double nmse(std::span<const double> truths, std::span<const double> estimates) {
    if (truths.size() != estimates.size() || truths.empty())
        throw std::invalid_argument("nmse needs equal non-empty truth/estimate lists");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const double e = truths[i] - estimates[i];
        num += e * e;
        den += truths[i] * truths[i];
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

double nmse_paper_variant(std::span<const double> truths, std::span<const double> estimates) {
    if (truths.size() != estimates.size() || truths.empty())
        throw std::invalid_argument("nmse needs equal non-empty truth/estimate lists");
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] == 0.0) continue;  // the per-trial normalizer
        const double e = truths[i] - estimates[i];
        acc += e * e / std::abs(truths[i]);
        used++;
    }
    return used == 0 ? 0.0 : acc / static_cast<double>(used);
}

std::function<double(std::span<const double>)> real_evaluator(const std::string& name) {
    if (name == "sum")
        return [](std::span<const double> v) {
            double acc = 0;
            for (double x : v) acc += x;
            return acc;
        };
    if (name == "product")
        return [](std::span<const double> v) {
            double acc = 1;
            for (double x : v) acc *= x;
            return acc;
        };
    if (name == "max")
        return [](std::span<const double> v) { return *std::max_element(v.begin(), v.end()); };
    if (name == "quadratic")
        return [](std::span<const double> v) {
            double acc = 0;
            for (double x : v) acc += x * x;
            return acc;
        };
    throw std::invalid_argument("no real-domain evaluator for function: " + name);
}

FunctionSpec make_dequantized_preset(const std::string& name, int K, const Quantizer& quant) {
    FunctionSpec spec;
    spec.K = K;
    spec.q = quant.q;
    spec.name = name;
    auto f = real_evaluator(name);
    spec.evaluator = [f, quant](const std::vector<int>& levels) {
        std::vector<double> v(levels.size());
        for (std::size_t k = 0; k < levels.size(); ++k) v[k] = quant.dequantize(levels[k]);
        return f(v);
    };
    return spec;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

namespace {

// Everything a scheme needs per trial, resolved once per run.
struct PreparedRun {
    SchemeRun run;
    int q = 0;
    int channelUses = 1;
    // Digital schemes.
    std::optional<Encoder> encoder;
    std::optional<DecoderTable> table;     // channelcomp only
    std::optional<Quantizer> quantizer;    // continuous model only
    std::optional<FunctionSpec> decodeSpec;  // ofdma decode-then-compute
    double designMargin = 0.0;
    bool exactFeasible = false;
    double xNorm = 0.0;
    // Aircomp.
    std::optional<NomographicMap> map;
    double aircompScale = 1.0;
    double snrRefNorm = 1.0;  // norm in the SNR -> sigma mapping
};

FunctionSpec effective_spec(const ExperimentConfig& config, int q) {
    if (config.inputModel == InputModel::ContinuousUniform) {
        if (config.function == "custom")
            throw std::invalid_argument("custom table functions require the discrete input model");
        return make_dequantized_preset(config.function, config.K, Quantizer(config.lo, config.hi, q));
    }
    if (config.function == "custom") {
        if (!config.tablePath) throw std::invalid_argument("custom function needs a table path");
        FunctionSpec spec = load_table_function(*config.tablePath);
        if (spec.K != config.K || spec.q != q)
            throw std::invalid_argument("value table dimensions disagree with the experiment");
        return spec;
    }
    return make_preset(config.function, config.K, q);
}

struct DesignCacheEntry {
    ModulationDesign design;
    std::vector<MultisetClass> classes;
};

// Solve or load the modulation design for a run; cached per (q, source).
const DesignCacheEntry& design_for(const ExperimentConfig& config, const SchemeRun& run, int q,
                                   std::map<std::string, DesignCacheEntry>& cache) {
    const std::string key = std::to_string(q) + "|" + run.design;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    DesignCacheEntry entry;
    const FunctionSpec spec = effective_spec(config, q);
    entry.classes = enumerate_multiset_classes(spec);
    if (run.design == "solve") {
        DesignOptions opts;
        opts.P = config.designParams.P;
        opts.gamma = config.designParams.gamma;
        opts.nRand = config.designParams.nRand;
        opts.seed = config.designParams.seed;
        opts.epsilon = config.designParams.epsilon;
        DesignResult result = design_modulation(spec, opts);
        if (result.lifted.status != SolveStatus::Feasible)
            throw std::runtime_error("design infeasible for scheme run '" + run.label + "'");
        entry.design = std::move(result.design);
    } else {
        entry.design = load_design(run.design);
        if (entry.design.x.size() != q)
            throw std::invalid_argument("loaded design has wrong modulation order");
    }
    return cache.emplace(key, std::move(entry)).first->second;
}

}  // namespace

NmseReport run_monte_carlo(const ExperimentConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (config.snrGridDb.empty()) throw std::invalid_argument("SNR grid must be non-empty");
    if (config.runs.empty()) throw std::invalid_argument("scheme set must be non-empty");
    if (config.inputModel == InputModel::ContinuousUniform && !(config.lo < config.hi))
        throw std::invalid_argument("continuous input model needs lo < hi");

    std::map<std::string, DesignCacheEntry> designCache;
    std::vector<PreparedRun> prepared;
    prepared.reserve(config.runs.size());

    for (const SchemeRun& run : config.runs) {
        PreparedRun pr;
        pr.run = run;
        if (pr.run.label.empty()) pr.run.label = run.scheme;
        pr.q = run.q > 0 ? run.q : config.q;
        if (config.inputModel == InputModel::DiscreteUniform && pr.q != config.q &&
            run.scheme != "aircomp")
            throw std::invalid_argument(
                "discrete input model requires every digital scheme to use the config q");

        if (run.scheme == "channelcomp" || run.scheme == "ofdma") {
            const DesignCacheEntry& entry = design_for(config, run, pr.q, designCache);
            pr.encoder.emplace(entry.design.x);
            pr.designMargin = entry.design.margin;
            pr.exactFeasible = entry.design.exactFeasible;
            pr.xNorm = entry.design.x.norm();
            pr.snrRefNorm = pr.xNorm;
            if (run.scheme == "channelcomp")
                pr.table = DecoderTable::build(entry.design.x, entry.classes, config.designParams.epsilon);
            if (run.scheme == "ofdma") pr.decodeSpec = effective_spec(config, pr.q);
            pr.channelUses = run.scheme == "ofdma" ? config.K : 1;
            if (config.inputModel == InputModel::ContinuousUniform)
                pr.quantizer.emplace(config.lo, config.hi, pr.q);
        } else if (run.scheme == "aircomp") {
            const double lo = config.inputModel == InputModel::ContinuousUniform ? config.lo : 0.0;
            const double hi = config.inputModel == InputModel::ContinuousUniform
                                  ? config.hi
                                  : static_cast<double>(config.q - 1);
            pr.map = make_nomographic(config.function, lo, hi, config.aircomp);
            pr.channelUses = 1;
        } else {
            throw std::invalid_argument("unknown scheme: " + run.scheme);
        }
        prepared.push_back(std::move(pr));
    }

    // AirComp transmits at the same peak magnitude as the first digital
    // design, and shares that design's norm in the SNR mapping.
    {
        const PreparedRun* digital = nullptr;
        for (const PreparedRun& pr : prepared)
            if (pr.encoder) {
                digital = &pr;
                break;
            }
        for (PreparedRun& pr : prepared) {
            if (!pr.map) continue;
            if (digital) {
                const double peak = digital->encoder->x.cwiseAbs().maxCoeff();
                pr.aircompScale = peak / pr.map->peakMagnitude;
                pr.snrRefNorm = digital->xNorm;
            } else {
                const double P = config.designParams.P.value_or(static_cast<double>(config.q));
                pr.aircompScale = std::sqrt(P / config.q) / pr.map->peakMagnitude;
                pr.snrRefNorm = std::sqrt(P);
            }
        }
    }

    // Ground truth on the raw inputs.
    const bool continuous = config.inputModel == InputModel::ContinuousUniform;
    std::function<double(std::span<const double>)> truthOnReals;
    FunctionSpec discreteTruth;
    if (continuous) {
        truthOnReals = real_evaluator(config.function);
    } else {
        discreteTruth = effective_spec(config, config.q);
    }

    NmseReport report;
    report.masterSeed = config.masterSeed;
    for (const PreparedRun& pr : prepared)
        report.runs.push_back(RunInfo{pr.run.label, pr.run.scheme, pr.q, pr.channelUses,
                                      pr.designMargin, pr.exactFeasible, pr.xNorm});

    std::vector<double> truths(static_cast<std::size_t>(config.trials));
    std::vector<double> estimates(static_cast<std::size_t>(config.trials));
    std::vector<int> levels(static_cast<std::size_t>(config.K));
    std::vector<double> values(static_cast<std::size_t>(config.K));
    std::vector<cxd> symbols(static_cast<std::size_t>(config.K));
    const std::vector<cxd> unitGains(static_cast<std::size_t>(config.K), cxd(1, 0));

    for (const PreparedRun& pr : prepared) {
        const std::uint64_t runId = fnv1a64(pr.run.label);
        for (std::size_t snrIdx = 0; snrIdx < config.snrGridDb.size(); ++snrIdx) {
            const double snrDb = config.snrGridDb[snrIdx];
            const double sigma = std::isinf(snrDb) && snrDb > 0
                                     ? 0.0
                                     : sigma_from_snr(snrDb, pr.snrRefNorm);
            long clampCount = 0;

            for (int trial = 0; trial < config.trials; ++trial) {
                Rng rng(mix_seed(config.masterSeed, runId, snrIdx, static_cast<std::uint64_t>(trial)));

                // Inputs and their ground truth.
                if (continuous) {
                    for (int k = 0; k < config.K; ++k)
                        values[static_cast<std::size_t>(k)] =
                            config.lo + (config.hi - config.lo) * rng.uniform();
                    truths[static_cast<std::size_t>(trial)] = truthOnReals(values);
                } else {
                    for (int k = 0; k < config.K; ++k) {
                        levels[static_cast<std::size_t>(k)] = rng.uniform_int(0, config.q - 1);
                        values[static_cast<std::size_t>(k)] =
                            static_cast<double>(levels[static_cast<std::size_t>(k)]);
                    }
                    truths[static_cast<std::size_t>(trial)] = discreteTruth.evaluator(levels);
                }

                double estimate = 0.0;
                if (pr.run.scheme == "aircomp") {
                    const AircompResult res =
                        aircomp_estimate(values, *pr.map, sigma, pr.aircompScale, rng);
                    estimate = res.value;
                    if (res.clamped) clampCount++;
                } else {
                    if (continuous)
                        for (int k = 0; k < config.K; ++k)
                            levels[static_cast<std::size_t>(k)] =
                                pr.quantizer->quantize(values[static_cast<std::size_t>(k)]);
                    if (pr.run.scheme == "channelcomp") {
                        for (int k = 0; k < config.K; ++k)
                            symbols[static_cast<std::size_t>(k)] =
                                pr.encoder->encode(levels[static_cast<std::size_t>(k)]);
                        const cxd y = mac_transmit(symbols, unitGains, unitGains, sigma, rng);
                        estimate = decode(y, *pr.table).value;
                    } else {  // ofdma
                        estimate = ofdma_estimate(levels, *pr.encoder, *pr.decodeSpec, sigma, rng);
                    }
                }
                estimates[static_cast<std::size_t>(trial)] = estimate;
            }

            NmseRow row;
            row.scheme = pr.run.label;
            row.snrDb = snrDb;
            row.nmse = config.nmseVariant == NmseVariant::Standard
                           ? nmse(truths, estimates)
                           : nmse_paper_variant(truths, estimates);
            row.trials = config.trials;
            row.clampCount = clampCount;
            row.channelUses = pr.channelUses;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

NmseReport run_batch(std::span<const ExperimentConfig> configs) {
    NmseReport merged;
    for (const ExperimentConfig& config : configs) {
        NmseReport part = run_monte_carlo(config);
        merged.masterSeed = part.masterSeed;
        merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
        merged.runs.insert(merged.runs.end(), part.runs.begin(), part.runs.end());
    }
    return merged;
}

double quantization_floor_nmse(const std::string& functionName, int K, const Quantizer& quant,
                               int trials, std::uint64_t seed) {
    auto f = real_evaluator(functionName);
    Rng rng(seed);
    std::vector<double> truths(static_cast<std::size_t>(trials));
    std::vector<double> estimates(static_cast<std::size_t>(trials));
    std::vector<double> v(static_cast<std::size_t>(K));
    std::vector<double> vq(static_cast<std::size_t>(K));
    for (int trial = 0; trial < trials; ++trial) {
        for (int k = 0; k < K; ++k) {
            v[static_cast<std::size_t>(k)] = quant.lo + (quant.hi - quant.lo) * rng.uniform();
            vq[static_cast<std::size_t>(k)] =
                quant.dequantize(quant.quantize(v[static_cast<std::size_t>(k)]));
        }
        truths[static_cast<std::size_t>(trial)] = f(v);
        estimates[static_cast<std::size_t>(trial)] = f(vq);
    }
    return nmse(truths, estimates);
}

PresetBundle preset(const std::string& name) {
    PresetBundle bundle;
    const std::vector<double> snrGrid = [] {
        std::vector<double> grid;
        for (double s = -5.0; s <= 27.0 + 1e-9; s += 4.0) grid.push_back(s);
        return grid;
    }();

    if (name == "fig4") {
        bundle.designFunctions = {"sum", "product", "max", "quadratic"};
        bundle.designK = 2;
        bundle.designQ = 8;
        bundle.designNRand = 8000;  // the max function needs a deeper draw
        return bundle;
    }
    if (name == "fig5") {
        for (const std::string& fn : {std::string("sum"), std::string("product")}) {
            ExperimentConfig config;
            config.function = fn;
            config.K = 4;
            config.q = 8;
            config.inputModel = InputModel::DiscreteUniform;
            config.snrGridDb = snrGrid;
            config.trials = 100;
            config.runs = {SchemeRun{"channelcomp", "channelcomp_" + fn, 0, "solve"},
                           SchemeRun{"aircomp", "aircomp_" + fn, 0, "solve"},
                           SchemeRun{"ofdma", "ofdma_" + fn, 0, "solve"}};
            bundle.experiments.push_back(std::move(config));
        }
        return bundle;
    }
    if (name == "fig6") {
        ExperimentConfig config;
        config.function = "sum";
        config.K = 4;
        config.q = 4;
        config.inputModel = InputModel::ContinuousUniform;
        config.lo = 0.0;
        config.hi = 7.0;
        config.snrGridDb = snrGrid;
        config.trials = 100;
        config.runs = {SchemeRun{"channelcomp", "channelcomp_q4", 4, "solve"},
                       SchemeRun{"channelcomp", "channelcomp_q16", 16, "solve"},
                       SchemeRun{"aircomp", "aircomp", 0, "solve"},
                       SchemeRun{"ofdma", "ofdma_q4", 4, "solve"},
                       SchemeRun{"ofdma", "ofdma_q16", 16, "solve"}};
        bundle.experiments.push_back(std::move(config));
        return bundle;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace chancomp
