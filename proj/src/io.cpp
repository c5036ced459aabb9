#include "scriptrace/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "scriptrace/image_io.hpp"

namespace scriptrace {

namespace {

using nlohmann::json;

std::ofstream openOut(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream openIn(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

[[noreturn]] void lineError(const std::string& path, int line,
                            const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

const std::set<std::string> kSplits{"train", "val", "test", "none"};

}  // namespace

void writeManifest(const std::string& path,
                   const std::vector<ManifestRecord>& records) {
    auto out = openOut(path);
    for (const auto& r : records) {
        json j{{"sampleId", r.sampleId},
               {"writerId", r.writerId},
               {"style", styleName(r.style)},
               {"split", r.split},
               {"parentPageId", r.parentPageId},
               {"variantIndex", r.variantIndex},
               {"imagePath", r.imagePath}};
        if (r.elapsedSeconds >= 0.0) j["elapsedSeconds"] = r.elapsedSeconds;
        out << j.dump() << '\n';
    }
}

std::vector<ManifestRecord> readManifest(const std::string& path) {
    auto in = openIn(path);
    std::vector<ManifestRecord> records;
    std::set<std::string> seen;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            lineError(path, lineNo, std::string("bad JSON: ") + e.what());
        }
        ManifestRecord r;
        try {
            r.sampleId = j.at("sampleId").get<std::string>();
            r.writerId = j.at("writerId").get<std::string>();
            r.style = styleFromName(j.at("style").get<std::string>());
            r.split = j.at("split").get<std::string>();
            r.parentPageId = j.value("parentPageId", std::string{});
            r.variantIndex = j.value("variantIndex", -1);
            r.imagePath = j.value("imagePath", std::string{});
            r.elapsedSeconds = j.value("elapsedSeconds", -1.0);
        } catch (const json::exception& e) {
            lineError(path, lineNo, std::string("bad record: ") + e.what());
        }
        if (!kSplits.count(r.split))
            lineError(path, lineNo, "unknown split '" + r.split + "'");
        if (!seen.insert(r.sampleId).second)
            lineError(path, lineNo, "duplicate sampleId '" + r.sampleId + "'");
        records.push_back(std::move(r));
    }
    return records;
}

void exportFeatures(const std::string& path,
                    const std::vector<FeatureFileRecord>& records) {
    auto out = openOut(path);
    for (const auto& r : records) {
        if (r.dim != static_cast<int>(r.values.size()))
            throw std::invalid_argument("exportFeatures: record '" + r.sampleId +
                                        "' dim mismatch");
        json j{{"sampleId", r.sampleId}, {"patchId", r.patchId},
               {"family", r.family},    {"dim", r.dim},
               {"values", r.values}};
        out << j.dump() << '\n';
    }
}

std::vector<FeatureFileRecord> ingestFeatures(const std::string& path,
                                              bool unitNorm) {
    auto in = openIn(path);
    std::vector<FeatureFileRecord> records;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            lineError(path, lineNo, std::string("bad JSON: ") + e.what());
        }
        FeatureFileRecord r;
        try {
            r.sampleId = j.at("sampleId").get<std::string>();
            r.patchId = j.value("patchId", std::string{"page"});
            r.family = j.at("family").get<std::string>();
            r.dim = j.at("dim").get<int>();
            r.values = j.at("values").get<std::vector<double>>();
        } catch (const json::exception& e) {
            lineError(path, lineNo, std::string("bad record: ") + e.what());
        }
        if (r.dim != static_cast<int>(r.values.size()))
            lineError(path, lineNo,
                      "record '" + r.sampleId + "': dim " +
                          std::to_string(r.dim) + " but " +
                          std::to_string(r.values.size()) + " values");
        if (!records.empty() && (r.family != records.front().family ||
                                 r.dim != records.front().dim))
            lineError(path, lineNo,
                      "record '" + r.sampleId +
                          "' family/dim differs from first record");
        if (unitNorm) {
            double n2 = 0.0;
            for (double v : r.values) n2 += v * v;
            if (n2 > 0.0) {
                const double inv = 1.0 / std::sqrt(n2);
                for (double& v : r.values) v *= inv;
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ManifestRecord> synthCorpusToDisk(const SynthConfig& cfg,
                                              const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "pages");
    const auto pages = synthPages(cfg);
    std::vector<ManifestRecord> manifest;
    for (const auto& p : pages) {
        const std::string rel = "pages/" + p.pageId + ".png";
        writePng((fs::path(dir) / rel).string(), p.image);
        ManifestRecord r;
        r.sampleId = p.pageId;
        r.writerId = p.writerId;
        r.style = p.style;
        r.split = "none";
        r.parentPageId = p.pageId;
        r.imagePath = rel;
        r.elapsedSeconds = p.elapsedSeconds;
        manifest.push_back(std::move(r));
    }
    writeManifest((fs::path(dir) / "manifest.jsonl").string(), manifest);
    return manifest;
}

void writeCsv(const std::string& path,
              const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    auto out = openOut(path);
    auto escape = [](const std::string& f) {
        if (f.find_first_of(",\"\n") == std::string::npos) return f;
        std::string q = "\"";
        for (char c : f) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    auto writeRow = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << escape(row[i]);
        out << '\n';
    };
    writeRow(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("writeCsv: row width mismatch");
        writeRow(row);
    }
}

}  // namespace scriptrace
