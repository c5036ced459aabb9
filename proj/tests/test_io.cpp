#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "scriptrace/image_io.hpp"
#include "scriptrace/io.hpp"

using namespace scriptrace;
namespace fs = std::filesystem;

namespace {

fs::path tmpDir() {
    const auto dir = fs::temp_directory_path() / "scriptrace-io-tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("manifest: write-read round trip is lossless") {
    const auto path = (tmpDir() / "manifest.jsonl").string();
    std::vector<ManifestRecord> recs;
    ManifestRecord a;
    a.sampleId = "w00-slow-p0/top/v3";
    a.writerId = "w00";
    a.style = Style::Slow;
    a.split = "train";
    a.parentPageId = "w00-slow-p0";
    a.variantIndex = 3;
    a.imagePath = "pages/a.png";
    a.elapsedSeconds = 12.5;
    recs.push_back(a);
    ManifestRecord b;
    b.sampleId = "w01-fast-p1";
    b.writerId = "w01";
    b.style = Style::Fast;
    b.split = "test";
    recs.push_back(b);

    writeManifest(path, recs);
    const auto back = readManifest(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].sampleId == a.sampleId);
    CHECK(back[0].style == Style::Slow);
    CHECK(back[0].split == "train");
    CHECK(back[0].variantIndex == 3);
    CHECK(back[0].elapsedSeconds == doctest::Approx(12.5));
    CHECK(back[1].elapsedSeconds < 0.0);  // absent
    CHECK(back[1].variantIndex == -1);
}

TEST_CASE("manifest: duplicate ids and bad splits name the line") {
    const auto path = (tmpDir() / "bad-manifest.jsonl").string();
    std::vector<ManifestRecord> recs(2);
    recs[0].sampleId = recs[1].sampleId = "dup";
    recs[0].writerId = recs[1].writerId = "w00";
    writeManifest(path, recs);
    CHECK_THROWS_WITH_AS(readManifest(path),
                         doctest::Contains(":2:"), std::runtime_error);

    std::ofstream(path) << R"({"sampleId":"x","writerId":"w","style":"slow","split":"bogus"})"
                        << '\n';
    CHECK_THROWS_WITH_AS(readManifest(path), doctest::Contains("bogus"),
                         std::runtime_error);

    std::ofstream(path) << "not json\n";
    CHECK_THROWS_WITH_AS(readManifest(path), doctest::Contains(":1:"),
                         std::runtime_error);
}

TEST_CASE("features: export-ingest round trip to 1e-12") {
    const auto path = (tmpDir() / "features.jsonl").string();
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<FeatureFileRecord> recs;
    for (int i = 0; i < 3; ++i) {
        FeatureFileRecord r;
        r.sampleId = "s" + std::to_string(i);
        r.patchId = "p" + std::to_string(i);
        r.family = "fdh";
        r.dim = 1024;
        for (int d = 0; d < 1024; ++d) r.values.push_back(u(rng));
        recs.push_back(std::move(r));
    }
    exportFeatures(path, recs);
    const auto back = ingestFeatures(path);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back[i].sampleId == recs[i].sampleId);
        CHECK(back[i].dim == 1024);
        for (int d = 0; d < 1024; ++d)
            CHECK(back[i].values[d] == doctest::Approx(recs[i].values[d]).epsilon(1e-12));
    }
}

TEST_CASE("features: unit-norm flag rescales to L2 norm 1") {
    const auto path = (tmpDir() / "norm.jsonl").string();
    FeatureFileRecord r;
    r.sampleId = "s";
    r.family = "external";
    r.dim = 2;
    r.values = {3.0, 4.0};
    exportFeatures(path, {r});
    const auto back = ingestFeatures(path, true);
    CHECK(back[0].values[0] == doctest::Approx(0.6));
    CHECK(back[0].values[1] == doctest::Approx(0.8));
}

TEST_CASE("features: malformed records error with line numbers") {
    const auto path = (tmpDir() / "bad-features.jsonl").string();
    std::ofstream(path)
        << R"({"sampleId":"a","family":"fdh","dim":5,"values":[1,2,3,4]})" << '\n';
    CHECK_THROWS_WITH_AS(ingestFeatures(path), doctest::Contains("'a'"),
                         std::runtime_error);

    std::ofstream(path)
        << R"({"sampleId":"a","family":"fdh","dim":2,"values":[1,2]})" << '\n'
        << R"({"sampleId":"b","family":"fmm","dim":2,"values":[1,2]})" << '\n';
    CHECK_THROWS_WITH_AS(ingestFeatures(path), doctest::Contains(":2:"),
                         std::runtime_error);
}

TEST_CASE("synthCorpusToDisk: byte-identical per seed, manifest validates") {
    const auto d1 = (tmpDir() / "corpus1").string();
    const auto d2 = (tmpDir() / "corpus2").string();
    SynthConfig cfg;
    cfg.writerCount = 2;
    cfg.pagesPerStyle = 1;
    cfg.seed = 77;
    const auto m1 = synthCorpusToDisk(cfg, d1);
    const auto m2 = synthCorpusToDisk(cfg, d2);
    REQUIRE(m1.size() == 6);  // 2 writers x 3 styles x 1 page

    const auto back = readManifest(d1 + "/manifest.jsonl");
    REQUIRE(back.size() == 6);
    for (const auto& r : back) {
        const auto img = readGray(d1 + "/" + r.imagePath);
        CHECK(img.width() > 0);
        CHECK(r.elapsedSeconds > 0.0);
    }
    CHECK(slurp(d1 + "/manifest.jsonl") == slurp(d2 + "/manifest.jsonl"));
    CHECK(slurp(fs::path(d1) / m1[0].imagePath) ==
          slurp(fs::path(d2) / m2[0].imagePath));
}

TEST_CASE("writeCsv: quoting and row width validation") {
    const auto path = (tmpDir() / "report.csv").string();
    writeCsv(path, {"id", "note"}, {{"a", "plain"}, {"b", "has,comma \"q\""}});
    CHECK(slurp(path) ==
          "id,note\na,plain\nb,\"has,comma \"\"q\"\"\"\n");
    CHECK_THROWS(writeCsv(path, {"one"}, {{"a", "b"}}));
}
