#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scriptrace/augment.hpp"
#include "scriptrace/cluster.hpp"
#include "scriptrace/eval.hpp"
#include "scriptrace/image_io.hpp"
#include "scriptrace/io.hpp"
#include "scriptrace/synth.hpp"
#include "scriptrace/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scriptrace;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::optional<std::uint64_t> envSeed() {
    const char* s = std::getenv("SCRIPTRACE_SEED");
    if (!s || !*s) return std::nullopt;
    return std::strtoull(s, nullptr, 10);
}

std::string sanitize(std::string id) {
    std::replace(id.begin(), id.end(), '/', '_');
    return id;
}

std::string writerOf(const std::string& sampleId) {
    return sampleId.substr(0, sampleId.find('-'));
}

// Loads the pages of a corpus directory produced by `synth` (or `merge`).
std::vector<SynthPage> loadPages(const std::string& dir) {
    const auto manifest = readManifest((fs::path(dir) / "manifest.jsonl").string());
    std::vector<SynthPage> pages;
    for (const auto& r : manifest) {
        SynthPage p;
        p.pageId = r.sampleId;
        p.writerId = r.writerId;
        p.style = r.style;
        const auto pos = r.sampleId.rfind("-p");
        p.pageIndex =
            pos == std::string::npos ? 0 : std::atoi(r.sampleId.c_str() + pos + 2);
        const fs::path img = fs::path(r.imagePath).is_absolute()
                                 ? fs::path(r.imagePath)
                                 : fs::path(dir) / r.imagePath;
        p.image = readGray(img.string());
        p.elapsedSeconds = r.elapsedSeconds;
        pages.push_back(std::move(p));
    }
    return pages;
}

void writeJson(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

json tupleToJson(const NineTuple& t) {
    json j;
    for (int i = 0; i < 9; ++i) {
        const auto& name = NineTuple::metricNames()[i];
        j[name] = {{"top1", t.top1[i]}, {"top2", t.top2[i]}, {"top5", t.top5[i]}};
    }
    return j;
}

NineTuple tupleFromJson(const json& j) {
    NineTuple t;
    for (int i = 0; i < 9; ++i) {
        const auto& e = j.at(NineTuple::metricNames()[i]);
        t.top1[i] = e.at("top1").get<double>();
        t.top2[i] = e.value("top2", 0.0);
        t.top5[i] = e.value("top5", 0.0);
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scriptrace: offline writer identification pipeline"};
    app.require_subcommand(1);
    app.set_config("--config")->description(
        "TOML config mirroring every flag (sections per subcommand)");

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synthOut = "corpus";
    SynthConfig synthCfg;
    synth->add_option("--out", synthOut, "output directory");
    synth->add_option("--writers", synthCfg.writerCount);
    synth->add_option("--pages-per-style", synthCfg.pagesPerStyle);
    synth->add_option("--severity", synthCfg.styleSeverity);
    synth->add_option("--seed", synthCfg.seed);
    synth->add_option("--glyphs-per-line", synthCfg.glyphsPerLine);
    synth->add_option("--lines-per-page", synthCfg.linesPerPage);

    // ---- preprocess ----
    auto* pre = app.add_subcommand("preprocess", "binarize, thin, prune a page");
    std::string preIn, preOut = ".";
    pre->add_option("--in", preIn, "input PNG/PGM page")->required();
    pre->add_option("--out-dir", preOut);

    // ---- features ----
    auto* feat = app.add_subcommand("features", "extract page-level features");
    std::vector<std::string> featIn;
    std::string featFamily = "fdh", featOut = "features.jsonl";
    feat->add_option("--in", featIn, "input pages")->required();
    feat->add_option("--family", featFamily, "fmm | fdh | fdc");
    feat->add_option("--out", featOut);

    // ---- augment ----
    auto* aug = app.add_subcommand("augment", "expand a page into 22 samples");
    std::string augIn, augOut = "augmented", augPageId;
    AugmentConfig augCfg;
    aug->add_option("--in", augIn)->required();
    aug->add_option("--out-dir", augOut);
    aug->add_option("--page-id", augPageId, "defaults to the input stem");
    aug->add_option("--alpha-d", augCfg.alphaD);
    aug->add_option("--seed", augCfg.seed);

    // ---- identify / eval shared pipeline flags ----
    auto addPipelineFlags = [](CLI::App* cmd, std::string& family,
                               std::string& backend, std::string& strategy,
                               EvalPipeline& p) {
        cmd->add_option("--family", family, "fmm | fdh | fdc");
        cmd->add_option("--backend", backend,
                        "nearest-centroid | knn | linear");
        cmd->add_option("--strategy", strategy, "major | mean");
        cmd->add_option("--patches", p.patchesPerSample);
        cmd->add_option("--patch-size", p.patch.nChar);
        cmd->add_option("--seed", p.seed);
    };

    auto* ident = app.add_subcommand("identify", "per-style identification report");
    std::string identCorpus, identOut = "identify";
    std::string identFamily = "fdh", identBackend = "nearest-centroid",
                identStrategy = "major";
    int identTopN = 1;
    double identAlphaD = 0.1;
    EvalPipeline identPipe;
    ident->add_option("--corpus", identCorpus)->required();
    ident->add_option("--out", identOut, "report path prefix");
    ident->add_option("--top-n", identTopN);
    ident->add_option("--alpha-d", identAlphaD);
    addPipelineFlags(ident, identFamily, identBackend, identStrategy, identPipe);

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "same/different-writer evaluation");
    std::string verFeatures, verMeasure = "euclidean", verMode = "eer",
                verOut = "verify";
    ver->add_option("--features", verFeatures, "feature JSON-lines file")
        ->required();
    ver->add_option("--measure", verMeasure);
    ver->add_option("--mode", verMode, "eer | sweep");
    ver->add_option("--out", verOut, "report path prefix");

    // ---- cluster ----
    auto* clu = app.add_subcommand("cluster", "cluster feature vectors");
    std::string cluFeatures, cluMethod = "kmeans", cluOut = "assignments.csv";
    int cluK = 3;
    std::uint64_t cluSeed = 0;
    clu->add_option("--features", cluFeatures)->required();
    clu->add_option("--method", cluMethod,
                    "kmeans | minibatch-kmeans | fuzzy-cmeans | agglomerative");
    clu->add_option("--k", cluK);
    clu->add_option("--seed", cluSeed);
    clu->add_option("--out", cluOut);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "experimental setups and ranking");
    std::string evalCorpus, evalOut = "eval", evalModelId = "model";
    std::string evalFamily = "fdh", evalBackend = "nearest-centroid",
                evalStrategy = "major";
    bool evalNine = false;
    std::vector<std::string> evalBorda;
    double evalAlphaD = 0.1;
    EvalPipeline evalPipe;
    eval->add_option("--corpus", evalCorpus);
    eval->add_flag("--nine-tuple", evalNine, "run the nine setups");
    eval->add_option("--borda", evalBorda,
                     "nine-tuple JSON reports to rank");
    eval->add_option("--out", evalOut, "report path prefix");
    eval->add_option("--model-id", evalModelId);
    eval->add_option("--alpha-d", evalAlphaD);
    addPipelineFlags(eval, evalFamily, evalBackend, evalStrategy, evalPipe);

    // ---- merge ----
    auto* mer = app.add_subcommand("merge", "merge two corpus directories");
    std::string merA, merB, merOut = "merged";
    mer->add_option("--corpus", merA)->required();
    mer->add_option("--corpus2", merB)->required();
    mer->add_option("--out", merOut);

    CLI11_PARSE(app, argc, argv);

    if (const auto seed = envSeed()) {
        synthCfg.seed = *seed;
        augCfg.seed = *seed;
        identPipe.seed = *seed;
        evalPipe.seed = *seed;
        cluSeed = *seed;
    }

    try {
        if (*synth) {
            const auto manifest = synthCorpusToDisk(synthCfg, synthOut);
            std::cout << "wrote " << manifest.size() << " pages to " << synthOut
                      << '\n';
        }

        if (*pre) {
            fs::create_directories(preOut);
            const auto gray = readGray(preIn);
            const auto bin = binarize(gray);
            const auto sk = thin(bin.mask);
            const auto stats = strokeWidthStats(bin.mask, sk);
            const auto pruned = pruneSpurs(sk, stats);
            writePng((fs::path(preOut) / "mask.png").string(), toGray(bin.mask));
            writePng((fs::path(preOut) / "skeleton.png").string(),
                     toGray(pruned.image));
            writeJson((fs::path(preOut) / "stats.json").string(),
                      {{"otsuThreshold", bin.threshold},
                       {"meanStrokeWidth", stats.meanWidth},
                       {"stdStrokeWidth", stats.stdWidth},
                       {"componentCount", componentCount(bin.mask)},
                       {"strokeLengthPx", pruned.strokeLengthPx}});
            std::cout << "preprocessed " << preIn << " -> " << preOut << '\n';
        }

        if (*feat) {
            const auto family = familyFromName(featFamily);
            std::vector<FeatureFileRecord> records;
            for (const auto& path : featIn) {
                const auto mask = binarize(readGray(path)).mask;
                const auto fv = extractFamily(mask, family);
                FeatureFileRecord r;
                r.sampleId = fs::path(path).stem().string();
                r.family = featFamily;
                r.dim = fv.dim();
                r.values = fv.values;
                records.push_back(std::move(r));
            }
            exportFeatures(featOut, records);
            std::cout << "wrote " << records.size() << " feature records to "
                      << featOut << '\n';
        }

        if (*aug) {
            fs::create_directories(augOut);
            if (augPageId.empty()) augPageId = fs::path(augIn).stem().string();
            const auto mask = binarize(readGray(augIn)).mask;
            const auto samples = expandPage(mask, augPageId, augCfg);
            std::vector<ManifestRecord> manifest;
            for (const auto& s : samples) {
                const std::string rel = sanitize(s.id()) + ".png";
                writePng((fs::path(augOut) / rel).string(), toGray(s.image));
                ManifestRecord r;
                r.sampleId = s.id();
                r.writerId = writerOf(augPageId);
                r.parentPageId = s.parentPageId;
                r.variantIndex = s.variantIndex;
                r.imagePath = rel;
                manifest.push_back(std::move(r));
            }
            writeManifest((fs::path(augOut) / "manifest.jsonl").string(),
                          manifest);
            std::cout << "wrote " << samples.size() << " samples to " << augOut
                      << '\n';
        }

        if (*ident) {
            EvalPipeline p = identPipe;
            p.family = familyFromName(identFamily);
            p.classifier = ClassifierConfig::fromName(identBackend);
            p.strategy = strategyFromName(identStrategy);
            const auto corpus =
                buildCorpus(loadPages(identCorpus), {identAlphaD, p.seed});
            const std::vector<Style> all{Style::Slow, Style::Medium, Style::Fast};
            std::vector<std::vector<std::string>> rows;
            json jr;
            for (Style s : all) {
                const auto r = runSetup(corpus, all, s, p);
                rows.push_back({styleName(s), fmt(r.accuracyPct),
                                fmt(r.top2Pct), fmt(r.top5Pct)});
                jr[styleName(s)] = {{"top1", r.accuracyPct},
                                    {"top2", r.top2Pct},
                                    {"top5", r.top5Pct},
                                    {"testPages", r.testPages}};
            }
            jr["topN"] = identTopN;
            writeCsv(identOut + ".csv", {"style", "top1", "top2", "top5"}, rows);
            writeJson(identOut + ".json", jr);
            std::cout << "wrote " << identOut << ".csv and .json\n";
        }

        if (*ver) {
            const auto measure = DistanceMeasure::fromName(verMeasure);
            const auto records = ingestFeatures(verFeatures);
            std::vector<PairDw> same, diff;
            for (std::size_t i = 0; i < records.size(); ++i)
                for (std::size_t j = i + 1; j < records.size(); ++j) {
                    const double d =
                        distance(records[i].values, records[j].values, measure);
                    PairDw pair{records[i].sampleId, records[j].sampleId, d};
                    (writerOf(records[i].sampleId) ==
                             writerOf(records[j].sampleId)
                         ? same
                         : diff)
                        .push_back(std::move(pair));
                }
            json jr{{"measure", measure.name()},
                    {"samePairs", same.size()},
                    {"diffPairs", diff.size()}};
            if (verMode == "eer") {
                std::vector<double> sd, dd;
                for (const auto& p : same) sd.push_back(p.dw);
                for (const auto& p : diff) dd.push_back(p.dw);
                const auto curve = farFrrCurve(dd, sd);
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
                    rows.push_back({fmt(curve.thresholds[i]), fmt(curve.far[i]),
                                    fmt(curve.frr[i])});
                writeCsv(verOut + ".csv", {"threshold", "far", "frr"}, rows);
                jr["eer"] = curve.eer;
                jr["accuracyPct"] = curve.accuracyPct;
            } else if (verMode == "sweep") {
                const auto sweep = thresholdSweep(same, diff);
                writeCsv(verOut + ".csv",
                         {"bestD", "tpr", "tnr", "accuracy"},
                         {{fmt(sweep.bestD), fmt(sweep.tpr), fmt(sweep.tnr),
                           fmt(sweep.accuracy)}});
                jr["bestD"] = sweep.bestD;
                jr["accuracy"] = sweep.accuracy;
            } else {
                throw std::invalid_argument("verify: unknown mode " + verMode);
            }
            writeJson(verOut + ".json", jr);
            std::cout << "wrote " << verOut << ".csv and .json\n";
        }

        if (*clu) {
            const auto records = ingestFeatures(cluFeatures);
            std::vector<std::vector<double>> vectors;
            for (const auto& r : records) vectors.push_back(r.values);
            const auto assignment = clusterVectors(
                vectors, cluK, clusterMethodFromName(cluMethod), cluSeed);
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < records.size(); ++i)
                rows.push_back({records[i].sampleId + "/" + records[i].patchId,
                                std::to_string(assignment.labels[i])});
            writeCsv(cluOut, {"itemId", "label"}, rows);
            std::cout << "wrote " << cluOut << '\n';
        }

        if (*eval) {
            if (evalNine) {
                if (evalCorpus.empty())
                    throw std::invalid_argument("eval --nine-tuple needs --corpus");
                EvalPipeline p = evalPipe;
                p.family = familyFromName(evalFamily);
                p.classifier = ClassifierConfig::fromName(evalBackend);
                p.strategy = strategyFromName(evalStrategy);
                const auto corpus =
                    buildCorpus(loadPages(evalCorpus), {evalAlphaD, p.seed});
                const auto t = nineTuple(corpus, p);
                std::vector<std::string> header{"model"};
                std::vector<std::string> row{evalModelId};
                for (int i = 0; i < 9; ++i) {
                    header.push_back(NineTuple::metricNames()[i]);
                    row.push_back(fmt(t.top1[i]));
                }
                writeCsv(evalOut + ".csv", header, {row});
                writeJson(evalOut + ".json",
                          {{"model", evalModelId}, {"tuple", tupleToJson(t)}});
                std::cout << "wrote " << evalOut << ".csv and .json\n";
            }
            if (!evalBorda.empty()) {
                std::vector<std::pair<std::string, NineTuple>> models;
                for (const auto& path : evalBorda) {
                    std::ifstream in(path);
                    if (!in)
                        throw std::runtime_error("cannot read report: " + path);
                    const json j = json::parse(in);
                    models.emplace_back(j.at("model").get<std::string>(),
                                        tupleFromJson(j.at("tuple")));
                }
                const auto ranking = bordaRank(models);
                std::vector<std::string> header{"model"};
                for (int i = 0; i < 9; ++i)
                    header.push_back(NineTuple::metricNames()[i]);
                header.push_back("rank");
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < models.size(); ++i) {
                    std::vector<std::string> row{models[i].first};
                    for (int m = 0; m < 9; ++m)
                        row.push_back(fmt(models[i].second.top1[m]));
                    row.push_back(std::to_string(ranking.aggregateRank[i]));
                    rows.push_back(std::move(row));
                }
                writeCsv(evalOut + "-borda.csv", header, rows);
                json jr{{"ordering", ranking.ordering},
                        {"points", ranking.aggregatePoints}};
                writeJson(evalOut + "-borda.json", jr);
                std::cout << "wrote " << evalOut << "-borda.csv and .json\n";
            }
            if (!evalNine && evalBorda.empty())
                throw std::invalid_argument(
                    "eval: pass --nine-tuple and/or --borda");
        }

        if (*mer) {
            fs::create_directories(merOut);
            auto a = readManifest((fs::path(merA) / "manifest.jsonl").string());
            auto b = readManifest((fs::path(merB) / "manifest.jsonl").string());
            std::set<std::string> writers, ids;
            auto unique = [](std::set<std::string>& used, const std::string& id) {
                std::string candidate = id;
                for (int k = 2; !used.insert(candidate).second; ++k)
                    candidate = id + "#" + std::to_string(k);
                return candidate;
            };
            std::vector<ManifestRecord> merged;
            auto absorb = [&](std::vector<ManifestRecord>& src,
                              const std::string& dir) {
                std::map<std::string, std::string> writerMap;
                for (auto& r : src) {
                    if (!writerMap.count(r.writerId))
                        writerMap[r.writerId] = unique(writers, r.writerId);
                    r.writerId = writerMap[r.writerId];
                    r.sampleId = unique(ids, r.sampleId);
                    if (!fs::path(r.imagePath).is_absolute())
                        r.imagePath = fs::absolute(fs::path(dir) / r.imagePath)
                                          .lexically_normal()
                                          .string();
                    merged.push_back(r);
                }
            };
            absorb(a, merA);
            absorb(b, merB);
            writeManifest((fs::path(merOut) / "manifest.jsonl").string(),
                          merged);
            std::cout << "wrote " << merged.size() << " records, "
                      << writers.size() << " writers to " << merOut << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
