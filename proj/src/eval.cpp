#include "scriptrace/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "scriptrace/features.hpp"
#include "scriptrace/image_io.hpp"

namespace scriptrace {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

FeatureVector extractFamily(const BinaryImage& patch, FeatureFamily family) {
    switch (family) {
        case FeatureFamily::FDH: {
            if (patch.inkCount() == 0)
                return {"", family, std::vector<double>(kDimFdh, 0.0)};
            const auto sk = thin(patch);
            const auto stats = strokeWidthStats(patch, sk);
            auto fv = extractFDH(traceContours(patch), stats);
            return fv;
        }
        case FeatureFamily::FDC: {
            if (patch.inkCount() == 0)
                return {"", family, std::vector<double>(kDimFdc, 0.0)};
            const auto sk = thin(patch);
            const auto kps = detectKeypoints(sk);
            return keypointDirectionCurvature(buildStrokeGraph(sk, kps));
        }
        case FeatureFamily::FMM: {
            const GrayImage gray = toGray(patch);
            const auto bin = binarize(gray);
            const auto contours = traceContours(patch);
            const auto seg = segmentPage(patch);
            PageArtifacts art;
            art.gray = &gray;
            art.binary = &patch;
            art.otsuThreshold = bin.threshold;
            art.contours = &contours;
            art.segmentation = &seg;
            return extractFMM(art);
        }
        case FeatureFamily::Ingested:
            break;
    }
    throw std::invalid_argument(
        "extractFamily: ingested features come from a feature file, not images");
}

namespace {

using FeatureCache = std::map<std::string, std::vector<FeatureVector>>;

const std::vector<FeatureVector>& sampleFeatures(FeatureCache& cache,
                                                 const EvalSample& s,
                                                 const EvalPipeline& p) {
    auto it = cache.find(s.id);
    if (it != cache.end()) return it->second;
    const auto seg = segmentPage(s.image);
    const auto patches =
        samplePatches(s.image, seg, p.patchesPerSample,
                      p.seed ^ fnv1a(s.id), p.patch, p.patchSource);
    std::vector<FeatureVector> feats;
    feats.reserve(patches.size());
    for (const auto& patch : patches) {
        auto fv = extractFamily(patch.pixels, p.family);
        fv.id = s.id;
        feats.push_back(std::move(fv));
    }
    return cache.emplace(s.id, std::move(feats)).first->second;
}

bool styleIn(Style s, const std::vector<Style>& set) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

ClassifierModel fitOn(const Corpus& corpus, FeatureCache& cache,
                      const std::vector<Style>& trainStyles,
                      const EvalPipeline& p) {
    std::vector<FeatureVector> vectors;
    std::vector<std::string> labels;
    for (const auto& s : corpus.samples) {
        if (s.split != "train" || !styleIn(s.style, trainStyles)) continue;
        const auto& feats = sampleFeatures(cache, s, p);
        if (p.strategy == Strategy::Major) {
            for (const auto& f : feats) {
                vectors.push_back(f);
                labels.push_back(s.writerId);
            }
        } else {
            vectors.push_back({s.id, p.family, meanVector(feats)});
            labels.push_back(s.writerId);
        }
    }
    if (vectors.empty()) throw std::invalid_argument("runSetup: EmptyTrainSet");
    return fit(p.classifier, vectors, labels);
}

SetupResult evaluate(const ClassifierModel& model, const Corpus& corpus,
                     FeatureCache& cache, Style testStyle,
                     const EvalPipeline& p) {
    std::vector<std::vector<double>> scores;
    std::vector<int> truth;
    int correct = 0, total = 0;
    for (const auto& s : corpus.samples) {
        if (s.split != "test" || s.style != testStyle) continue;
        const auto& feats = sampleFeatures(cache, s, p);
        const PageDecision d =
            p.strategy == Strategy::Major
                ? strategyMajor(model, feats)
                : strategyMean(model, feats, p.patchesPerSample);
        ++total;
        if (d.finalWriter == s.writerId) ++correct;
        const auto it = std::find(model.writerIds.begin(),
                                  model.writerIds.end(), s.writerId);
        if (it != model.writerIds.end()) {
            scores.push_back(d.scoreVector);
            truth.push_back(
                static_cast<int>(it - model.writerIds.begin()));
        }
    }
    if (total == 0) throw std::invalid_argument("runSetup: EmptyTestSet");
    SetupResult r;
    r.testPages = total;
    r.accuracyPct = 100.0 * correct / total;
    r.top2Pct = 100.0 * topNAccuracy(scores, truth, 2) * scores.size() / total;
    r.top5Pct = 100.0 * topNAccuracy(scores, truth, 5) * scores.size() / total;
    return r;
}

SetupResult average(const SetupResult& a, const SetupResult& b) {
    return {(a.accuracyPct + b.accuracyPct) / 2.0,
            (a.top2Pct + b.top2Pct) / 2.0, (a.top5Pct + b.top5Pct) / 2.0,
            a.testPages + b.testPages};
}

}  // namespace

Strategy strategyFromName(const std::string& name) {
    if (name == "major") return Strategy::Major;
    if (name == "mean") return Strategy::Mean;
    throw std::invalid_argument("unknown strategy: " + name);
}

std::string strategyName(Strategy s) {
    return s == Strategy::Major ? "major" : "mean";
}

Corpus buildCorpus(const std::vector<SynthPage>& pages,
                   const AugmentConfig& acfg) {
    std::map<std::pair<std::string, int>, std::vector<const SynthPage*>> groups;
    for (const auto& p : pages)
        groups[{p.writerId, static_cast<int>(p.style)}].push_back(&p);

    Corpus corpus;
    std::set<std::string> writers;
    for (auto& [gk, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const SynthPage* a, const SynthPage* b) {
                      return a->pageIndex < b->pageIndex;
                  });
        if (group.size() < 2)
            throw std::invalid_argument(
                "buildCorpus: need at least 2 pages per writer per style");
        writers.insert(gk.first);

        auto expand = [&](const SynthPage& page) {
            AugmentConfig cfg = acfg;
            cfg.seed = acfg.seed ^ fnv1a(page.pageId);
            return expandPage(binarize(page.image).mask, page.pageId, cfg);
        };
        const auto split = split211(expand(*group[0]), expand(*group[1]));
        auto push = [&](const std::vector<ExpandedSample>& set,
                        const char* splitName) {
            for (const auto& e : set) {
                EvalSample s;
                s.id = e.id();
                s.writerId = gk.first;
                s.style = static_cast<Style>(gk.second);
                s.split = splitName;
                s.image = e.image;
                corpus.samples.push_back(std::move(s));
            }
        };
        push(split.train, "train");
        push(split.validation, "val");
        push(split.test, "test");
    }
    corpus.writerIds.assign(writers.begin(), writers.end());
    return corpus;
}

SetupResult runSetup(const Corpus& corpus,
                     const std::vector<Style>& trainStyles, Style testStyle,
                     const EvalPipeline& pipeline) {
    FeatureCache cache;
    const auto model = fitOn(corpus, cache, trainStyles, pipeline);
    return evaluate(model, corpus, cache, testStyle, pipeline);
}

const std::array<std::string, 9>& NineTuple::metricNames() {
    static const std::array<std::string, 9> names{
        "AE_ss",    "AE_mm",    "AE_ff",    "AE_smv",  "AE_sfv",
        "AE_mfv",   "AE_smf/s", "AE_smf/m", "AE_smf/f"};
    return names;
}

NineTuple nineTuple(const Corpus& corpus, const EvalPipeline& pipeline) {
    FeatureCache cache;
    const auto mS = fitOn(corpus, cache, {Style::Slow}, pipeline);
    const auto mM = fitOn(corpus, cache, {Style::Medium}, pipeline);
    const auto mF = fitOn(corpus, cache, {Style::Fast}, pipeline);
    // the three all-train entries share this one combined model
    const auto mAll = fitOn(
        corpus, cache, {Style::Slow, Style::Medium, Style::Fast}, pipeline);

    auto ev = [&](const ClassifierModel& m, Style t) {
        return evaluate(m, corpus, cache, t, pipeline);
    };
    const std::array<SetupResult, 9> results{
        ev(mS, Style::Slow),
        ev(mM, Style::Medium),
        ev(mF, Style::Fast),
        average(ev(mS, Style::Medium), ev(mM, Style::Slow)),
        average(ev(mS, Style::Fast), ev(mF, Style::Slow)),
        average(ev(mM, Style::Fast), ev(mF, Style::Medium)),
        ev(mAll, Style::Slow),
        ev(mAll, Style::Medium),
        ev(mAll, Style::Fast)};

    NineTuple t;
    for (int i = 0; i < 9; ++i) {
        t.top1[i] = results[i].accuracyPct;
        t.top2[i] = results[i].top2Pct;
        t.top5[i] = results[i].top5Pct;
    }
    return t;
}

BordaRanking bordaRank(
    const std::vector<std::pair<std::string, NineTuple>>& models) {
    const int n = static_cast<int>(models.size());
    if (n < 2) throw std::invalid_argument("bordaRank: need >= 2 models");

    BordaRanking r;
    r.perMetricRanks.assign(9, std::vector<int>(n, 0));
    r.aggregatePoints.assign(n, 0);
    for (const auto& [id, t] : models) r.modelIds.push_back(id);

    for (int m = 0; m < 9; ++m)
        for (int i = 0; i < n; ++i) {
            int better = 0;
            for (int j = 0; j < n; ++j)
                if (models[j].second.top1[m] > models[i].second.top1[m])
                    ++better;
            r.perMetricRanks[m][i] = 1 + better;  // competition ranking
            r.aggregatePoints[i] =
                std::max(r.aggregatePoints[i], n - r.perMetricRanks[m][i]);
        }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (r.aggregatePoints[a] != r.aggregatePoints[b])
            return r.aggregatePoints[a] > r.aggregatePoints[b];
        const double ca = models[a].second.crossStyleSum();
        const double cb = models[b].second.crossStyleSum();
        if (ca != cb) return ca > cb;
        return models[a].first < models[b].first;
    });
    r.aggregateRank.assign(n, 0);
    for (int pos = 0; pos < n; ++pos) {
        r.aggregateRank[order[pos]] = pos + 1;
        r.ordering.push_back(models[order[pos]].first);
    }
    return r;
}

Corpus mergeCorpora(const Corpus& a, const Corpus& b) {
    Corpus out = a;
    std::set<std::string> writers(a.writerIds.begin(), a.writerIds.end());
    std::set<std::string> sampleIds;
    for (const auto& s : a.samples) sampleIds.insert(s.id);

    auto unique = [](std::set<std::string>& used, const std::string& id) {
        std::string candidate = id;
        for (int k = 2; !used.insert(candidate).second; ++k)
            candidate = id + "#" + std::to_string(k);
        return candidate;
    };

    std::map<std::string, std::string> writerMap;
    for (const auto& w : b.writerIds) writerMap[w] = unique(writers, w);
    for (const auto& s : b.samples) {
        EvalSample copy = s;
        copy.writerId = writerMap.at(s.writerId);
        copy.id = unique(sampleIds, s.id);
        out.samples.push_back(std::move(copy));
    }
    out.writerIds.assign(writers.begin(), writers.end());
    return out;
}

}  // namespace scriptrace
