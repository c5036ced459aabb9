#include <doctest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "scriptrace/cluster.hpp"

using namespace scriptrace;

namespace {

std::vector<std::vector<double>> twoBlobs(std::mt19937& rng, int perBlob) {
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<std::vector<double>> out;
    for (int i = 0; i < perBlob; ++i)
        out.push_back({0.0 + noise(rng), 0.0 + noise(rng)});
    for (int i = 0; i < perBlob; ++i)
        out.push_back({8.0 + noise(rng), 8.0 + noise(rng)});
    return out;
}

bool samePartition(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [itF, newF] = fwd.try_emplace(a[i], b[i]);
        auto [itB, newB] = bwd.try_emplace(b[i], a[i]);
        if (itF->second != b[i] || itB->second != a[i]) return false;
        (void)newF;
        (void)newB;
    }
    return true;
}

// brute-force average-linkage reference: recompute every inter-cluster mean
// pairwise distance from scratch at each merge
std::vector<int> aggloOracle(const std::vector<std::vector<double>>& x, int k) {
    const int n = static_cast<int>(x.size());
    auto dist = [&](int i, int j) {
        double s = 0.0;
        for (std::size_t d = 0; d < x[i].size(); ++d)
            s += (x[i][d] - x[j][d]) * (x[i][d] - x[j][d]);
        return std::sqrt(s);
    };
    std::vector<int> memberOf(n);
    for (int i = 0; i < n; ++i) memberOf[i] = i;
    std::set<int> clusters;
    for (int i = 0; i < n; ++i) clusters.insert(i);
    while (static_cast<int>(clusters.size()) > k) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int ci : clusters)
            for (int cj : clusters) {
                if (cj <= ci) continue;
                double sum = 0.0;
                long cnt = 0;
                for (int i = 0; i < n; ++i) {
                    if (memberOf[i] != ci) continue;
                    for (int j = 0; j < n; ++j) {
                        if (memberOf[j] != cj) continue;
                        sum += dist(i, j);
                        ++cnt;
                    }
                }
                const double avg = sum / cnt;
                if (avg < best) {
                    best = avg;
                    bi = ci;
                    bj = cj;
                }
            }
        for (int i = 0; i < n; ++i)
            if (memberOf[i] == bj) memberOf[i] = bi;
        clusters.erase(bj);
    }
    return memberOf;
}

}  // namespace

TEST_CASE("clusterVectors: all four methods recover two separated blobs") {
    std::mt19937 rng(1);
    const auto x = twoBlobs(rng, 25);
    std::vector<int> truth(50, 0);
    std::fill(truth.begin() + 25, truth.end(), 1);
    for (auto method :
         {ClusterMethod::KMeans, ClusterMethod::MiniBatchKMeans,
          ClusterMethod::FuzzyCMeans, ClusterMethod::AgglomerativeAvgLink}) {
        const auto a = clusterVectors(x, 2, method, 11);
        REQUIRE(a.labels.size() == 50);
        CHECK(samePartition(a.labels, truth));
    }
}

TEST_CASE("clusterVectors: identical vectors stay valid, k > n errors") {
    const std::vector<std::vector<double>> same(6, {1.0, 2.0});
    for (auto method :
         {ClusterMethod::KMeans, ClusterMethod::MiniBatchKMeans,
          ClusterMethod::FuzzyCMeans, ClusterMethod::AgglomerativeAvgLink}) {
        const auto a = clusterVectors(same, 2, method, 3);
        for (int label : a.labels) {
            CHECK(label >= 0);
            CHECK(label < 2);
        }
    }
    CHECK_THROWS(clusterVectors(same, 7, ClusterMethod::KMeans, 0));
    CHECK_THROWS(clusterVectors(same, 1, ClusterMethod::KMeans, 0));
}

TEST_CASE("clusterVectors: deterministic per seed") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<std::vector<double>> x;
    for (int i = 0; i < 60; ++i) x.push_back({u(rng), u(rng), u(rng)});
    for (auto method : {ClusterMethod::KMeans, ClusterMethod::MiniBatchKMeans,
                        ClusterMethod::FuzzyCMeans}) {
        const auto a = clusterVectors(x, 4, method, 123);
        const auto b = clusterVectors(x, 4, method, 123);
        CHECK(a.labels == b.labels);
    }
}

TEST_CASE("clusterVectors: Lloyd and fuzzy objectives never increase") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0, 5);
    std::vector<std::vector<double>> x;
    for (int i = 0; i < 80; ++i) x.push_back({u(rng), u(rng)});
    for (auto method : {ClusterMethod::KMeans, ClusterMethod::FuzzyCMeans}) {
        const auto a = clusterVectors(x, 3, method, 7);
        REQUIRE(!a.objectiveHistory.empty());
        for (std::size_t i = 1; i < a.objectiveHistory.size(); ++i)
            CHECK(a.objectiveHistory[i] <= a.objectiveHistory[i - 1] + 1e-9);
    }
}

TEST_CASE("agglomerative matches the O(n^3) recompute oracle") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0, 10);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::vector<double>> x;
        for (int i = 0; i < 30; ++i) x.push_back({u(rng), u(rng)});
        const auto mine =
            clusterVectors(x, 3, ClusterMethod::AgglomerativeAvgLink, 0);
        CHECK(samePartition(mine.labels, aggloOracle(x, 3)));
    }
}

TEST_CASE("nmi: identity, degenerate, independence, symmetry") {
    const std::vector<int> a{0, 0, 1, 1, 2, 2};
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(nmi(std::vector<int>(6, 0), a) == 0.0);

    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 2);
    std::vector<int> r1(1000), r2(1000);
    for (int i = 0; i < 1000; ++i) {
        r1[i] = pick(rng);
        r2[i] = pick(rng);
    }
    const double v = nmi(r1, r2);
    CHECK(v < 0.05);
    CHECK(v == doctest::Approx(nmi(r2, r1)));
    CHECK_THROWS(nmi({0, 1}, {0, 1, 2}));
}

TEST_CASE("majorityGroupPages: modal label, tie flag, planted majority") {
    // unanimous plots
    const auto unanimous = majorityGroupPages({{1, 0}, {1, 2}, {1, 0}});
    CHECK(unanimous[0].label == 1);
    CHECK_FALSE(unanimous[0].unassigned);
    CHECK(unanimous[1].label == 0);

    // 2-2 split -> unassigned
    const auto tied = majorityGroupPages({{0}, {0}, {1}, {1}});
    CHECK(tied[0].unassigned);
    CHECK(tied[0].label == -1);

    // planted 70/30 majority over 1000 plots x 100 pages
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> cluster(0, 2);
    std::vector<int> planted(100);
    for (auto& p : planted) p = cluster(rng);
    std::vector<std::vector<int>> plots(1000, std::vector<int>(100));
    for (auto& plot : plots)
        for (int p = 0; p < 100; ++p)
            plot[p] = u(rng) < 0.7 ? planted[p] : cluster(rng);
    const auto grouped = majorityGroupPages(plots);
    for (int p = 0; p < 100; ++p) {
        CHECK_FALSE(grouped[p].unassigned);
        CHECK(grouped[p].label == planted[p]);
    }
}

TEST_CASE("speedLabel: thresholds and inclusive boundaries") {
    const SpeedThresholds th{100.0, 10.0, 2.0};
    CHECK(th.t1() == 120.0);
    CHECK(th.t2() == 80.0);
    CHECK(speedLabel({125, 1}, th) == Style::Fast);
    CHECK(speedLabel({120, 1}, th) == Style::Medium);  // boundary inclusive
    CHECK(speedLabel({80, 1}, th) == Style::Medium);   // boundary inclusive
    CHECK(speedLabel({79.5, 1}, th) == Style::Slow);
    CHECK(SpeedRecord{50, 2}.speed() == doctest::Approx(25.0));
}

TEST_CASE("speedThresholdsFrom: moments of the speed sample") {
    const std::vector<SpeedRecord> recs{{100, 1}, {120, 1}, {80, 1}};
    const auto th = speedThresholdsFrom(recs);
    CHECK(th.mu == doctest::Approx(100.0));
    CHECK(th.sigma == doctest::Approx(std::sqrt(800.0 / 3)));
    CHECK_THROWS(speedThresholdsFrom({}));
}
