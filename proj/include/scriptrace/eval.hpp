#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scriptrace/augment.hpp"
#include "scriptrace/identify.hpp"
#include "scriptrace/patches.hpp"
#include "scriptrace/synth.hpp"

namespace scriptrace {

// Family feature vector for one binary raster (page half or patch).
FeatureVector extractFamily(const BinaryImage& image, FeatureFamily family);

struct EvalSample {
    std::string id;
    std::string writerId;
    Style style = Style::Medium;
    std::string split = "train";  // train | val | test
    BinaryImage image;
};

struct Corpus {
    std::vector<std::string> writerIds;  // sorted, unique
    std::vector<EvalSample> samples;
};

// Expands every page (22 samples each) and applies the 2-1-1 split per
// writer and style: page 0 trains, page 1 splits into validation/test
// halves. Requires at least 2 pages per writer per style.
Corpus buildCorpus(const std::vector<SynthPage>& pages,
                   const AugmentConfig& acfg);

enum class Strategy { Major, Mean };
Strategy strategyFromName(const std::string& name);
std::string strategyName(Strategy s);

struct EvalPipeline {
    FeatureFamily family = FeatureFamily::FDH;
    ClassifierConfig classifier;
    Strategy strategy = Strategy::Major;
    int patchesPerSample = 16;
    PatchConfig patch{.nChar = 96};
    PatchSource patchSource = PatchSource::Characters;
    std::uint64_t seed = 0;
};

struct SetupResult {
    double accuracyPct = 0.0;  // Top-1 page accuracy
    double top2Pct = 0.0;
    double top5Pct = 0.0;
    int testPages = 0;
};

// Trains on the train split of the given styles and scores the test split of
// testStyle. Throws when the test set is empty.
SetupResult runSetup(const Corpus& corpus,
                     const std::vector<Style>& trainStyles, Style testStyle,
                     const EvalPipeline& pipeline);

// Metric order: AE_ss, AE_mm, AE_ff, AE_smv, AE_sfv, AE_mfv,
// AE_smf/s, AE_smf/m, AE_smf/f.
struct NineTuple {
    std::array<double, 9> top1{};
    std::array<double, 9> top2{};
    std::array<double, 9> top5{};

    static constexpr int kSs = 0, kMm = 1, kFf = 2, kSmv = 3, kSfv = 4,
                         kMfv = 5, kSmfS = 6, kSmfM = 7, kSmfF = 8;
    static const std::array<std::string, 9>& metricNames();
    double crossStyleSum() const {
        return top1[kSmv] + top1[kSfv] + top1[kMfv];
    }
};

// Runs the nine experimental setups. The cross-style entries average the two
// directed runs; the three all-train entries share one model trained on the
// combined train split of all styles.
NineTuple nineTuple(const Corpus& corpus, const EvalPipeline& pipeline);

struct BordaRanking {
    std::vector<std::string> modelIds;             // input order
    std::vector<std::vector<int>> perMetricRanks;  // [metric][model], 1-based
    std::vector<int> aggregatePoints;              // max-rule Borda points
    std::vector<int> aggregateRank;                // 1-based final rank
    std::vector<std::string> ordering;             // model ids, best first
};

// Per-metric competition ranks over the nine accuracies; Borda points
// (models − rank) aggregated by the max rule. Draws break on the cross-style
// accuracy sum AE_smv + AE_sfv + AE_mfv, then on model id.
BordaRanking bordaRank(
    const std::vector<std::pair<std::string, NineTuple>>& models);

// Union roster; writer and sample ids from the second corpus are remapped
// when they collide with the first.
Corpus mergeCorpora(const Corpus& a, const Corpus& b);

}  // namespace scriptrace
