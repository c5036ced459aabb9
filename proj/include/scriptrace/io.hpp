#pragma once

#include <string>
#include <vector>

#include "scriptrace/cluster.hpp"
#include "scriptrace/synth.hpp"

namespace scriptrace {

struct ManifestRecord {
    std::string sampleId;
    std::string writerId;
    Style style = Style::Medium;
    std::string split = "none";  // train | val | test | none
    std::string parentPageId;
    int variantIndex = -1;  // -1 for unexpanded pages
    std::string imagePath;
    double elapsedSeconds = -1.0;  // < 0 means absent
};

// JSON-lines, one record per line. readManifest validates sampleId uniqueness
// and the split vocabulary, reporting the offending line number.
void writeManifest(const std::string& path,
                   const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> readManifest(const std::string& path);

struct FeatureFileRecord {
    std::string sampleId;
    std::string patchId = "page";
    std::string family;  // fmm | fdh | fdc | external
    int dim = 0;
    std::vector<double> values;
};

// JSON-lines. ingestFeatures checks dim against the value count per record
// and that every record shares one family/dim; errors name the line.
// unitNorm rescales each vector to unit L2 norm (zero vectors left alone).
void exportFeatures(const std::string& path,
                    const std::vector<FeatureFileRecord>& records);
std::vector<FeatureFileRecord> ingestFeatures(const std::string& path,
                                              bool unitNorm = false);

// Renders the synthetic corpus to disk: PNG pages under dir/pages plus
// dir/manifest.jsonl. Returns the manifest that was written.
std::vector<ManifestRecord> synthCorpusToDisk(const SynthConfig& cfg,
                                              const std::string& dir);

// Minimal CSV writer: fields containing commas, quotes, or newlines are
// quoted per RFC 4180.
void writeCsv(const std::string& path,
              const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

}  // namespace scriptrace
