#include "scriptrace/cluster.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace scriptrace {

namespace {

double sqDist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::vector<std::vector<double>> kppSeed(
    const std::vector<std::vector<double>>& x, int k, std::mt19937_64& rng) {
    std::vector<std::vector<double>> centers;
    std::uniform_int_distribution<std::size_t> first(0, x.size() - 1);
    centers.push_back(x[first(rng)]);
    std::vector<double> d2(x.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sqDist(x[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            while (pick + 1 < x.size() && r > d2[pick]) r -= d2[pick++];
        } else {
            pick = first(rng);  // all points coincide
        }
        centers.push_back(x[pick]);
    }
    return centers;
}

int nearestCenter(const std::vector<double>& p,
                  const std::vector<std::vector<double>>& centers) {
    int best = 0;
    double bestD = sqDist(p, centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
        const double d = sqDist(p, centers[c]);
        if (d < bestD) {
            bestD = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

ClusterAssignment lloyd(const std::vector<std::vector<double>>& x, int k,
                        std::mt19937_64& rng) {
    auto centers = kppSeed(x, k, rng);
    ClusterAssignment out;
    out.k = k;
    out.labels.assign(x.size(), 0);
    const std::size_t dim = x.front().size();
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int c = nearestCenter(x[i], centers);
            if (c != out.labels[i]) {
                changed = true;
                out.labels[i] = c;
            }
            objective += sqDist(x[i], centers[c]);
        }
        out.objectiveHistory.push_back(objective);
        if (!changed && iter > 0) break;
        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            ++counts[out.labels[i]];
            for (std::size_t d = 0; d < dim; ++d) next[out.labels[i]][d] += x[i][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                next[c] = centers[c];  // keep an empty cluster's center
                continue;
            }
            for (auto& v : next[c]) v /= counts[c];
        }
        centers = std::move(next);
    }
    return out;
}

ClusterAssignment miniBatch(const std::vector<std::vector<double>>& x, int k,
                            std::mt19937_64& rng) {
    auto centers = kppSeed(x, k, rng);
    std::vector<long> assignedCount(k, 0);
    const std::size_t batch = std::min<std::size_t>(32, x.size());
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    for (int iter = 0; iter < 150; ++iter) {
        for (std::size_t b = 0; b < batch; ++b) {
            const auto& p = x[pick(rng)];
            const int c = nearestCenter(p, centers);
            ++assignedCount[c];
            const double eta = 1.0 / assignedCount[c];
            for (std::size_t d = 0; d < p.size(); ++d)
                centers[c][d] += eta * (p[d] - centers[c][d]);
        }
    }
    ClusterAssignment out;
    out.k = k;
    for (const auto& p : x) out.labels.push_back(nearestCenter(p, centers));
    return out;
}

ClusterAssignment fuzzyCMeans(const std::vector<std::vector<double>>& x, int k,
                              std::mt19937_64& rng) {
    auto centers = kppSeed(x, k, rng);
    const std::size_t n = x.size(), dim = x.front().size();
    std::vector<std::vector<double>> u(n, std::vector<double>(k, 0.0));
    ClusterAssignment out;
    out.k = k;
    double prevObj = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        // membership update (exponent 2 -> weights 1/d^2 normalized)
        for (std::size_t i = 0; i < n; ++i) {
            int exact = -1;
            for (int c = 0; c < k; ++c)
                if (sqDist(x[i], centers[c]) == 0.0) {
                    exact = c;
                    break;
                }
            if (exact >= 0) {
                std::fill(u[i].begin(), u[i].end(), 0.0);
                u[i][exact] = 1.0;
                continue;
            }
            double norm = 0.0;
            for (int c = 0; c < k; ++c) {
                u[i][c] = 1.0 / sqDist(x[i], centers[c]);
                norm += u[i][c];
            }
            for (int c = 0; c < k; ++c) u[i][c] /= norm;
        }
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < k; ++c)
                objective += u[i][c] * u[i][c] * sqDist(x[i], centers[c]);
        out.objectiveHistory.push_back(objective);

        // center update
        for (int c = 0; c < k; ++c) {
            std::vector<double> num(dim, 0.0);
            double den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = u[i][c] * u[i][c];
                den += w;
                for (std::size_t d = 0; d < dim; ++d) num[d] += w * x[i][d];
            }
            if (den > 0.0)
                for (std::size_t d = 0; d < dim; ++d) centers[c][d] = num[d] / den;
        }
        if (prevObj - objective < 1e-10 * std::max(1.0, prevObj)) break;
        prevObj = objective;
    }
    // defuzzify by max membership, ties to the lowest cluster index
    out.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        for (int c = 1; c < k; ++c)
            if (u[i][c] > u[i][best]) best = c;
        out.labels[i] = best;
    }
    return out;
}

ClusterAssignment agglomerative(const std::vector<std::vector<double>>& x,
                                int k) {
    const int n = static_cast<int>(x.size());
    // Lance-Williams average-linkage updates over an explicit distance table
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d[i][j] = d[j][i] = std::sqrt(sqDist(x[i], x[j]));
    std::vector<int> size(n, 1);
    std::vector<bool> alive(n, true);
    std::vector<int> memberOf(n);
    for (int i = 0; i < n; ++i) memberOf[i] = i;

    for (int merges = 0; merges < n - k; ++merges) {
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                if (d[i][j] < best) {
                    best = d[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        // merge bj into bi (bi < bj keeps ids canonical)
        for (int t = 0; t < n; ++t) {
            if (!alive[t] || t == bi || t == bj) continue;
            d[bi][t] = d[t][bi] =
                (size[bi] * d[bi][t] + size[bj] * d[bj][t]) /
                (size[bi] + size[bj]);
        }
        size[bi] += size[bj];
        alive[bj] = false;
        for (int i = 0; i < n; ++i)
            if (memberOf[i] == bj) memberOf[i] = bi;
    }

    // relabel clusters by smallest member index
    ClusterAssignment out;
    out.k = k;
    out.labels.assign(n, -1);
    std::map<int, int> relabel;
    for (int i = 0; i < n; ++i) {
        auto [it, fresh] =
            relabel.try_emplace(memberOf[i], static_cast<int>(relabel.size()));
        out.labels[i] = it->second;
        (void)fresh;
    }
    return out;
}

}  // namespace

ClusterMethod clusterMethodFromName(const std::string& name) {
    if (name == "kmeans") return ClusterMethod::KMeans;
    if (name == "minibatch-kmeans") return ClusterMethod::MiniBatchKMeans;
    if (name == "fuzzy-cmeans") return ClusterMethod::FuzzyCMeans;
    if (name == "agglomerative") return ClusterMethod::AgglomerativeAvgLink;
    throw std::invalid_argument("unknown cluster method: " + name);
}

std::string clusterMethodName(ClusterMethod m) {
    switch (m) {
        case ClusterMethod::KMeans: return "kmeans";
        case ClusterMethod::MiniBatchKMeans: return "minibatch-kmeans";
        case ClusterMethod::FuzzyCMeans: return "fuzzy-cmeans";
        case ClusterMethod::AgglomerativeAvgLink: return "agglomerative";
    }
    return "";
}

ClusterAssignment clusterVectors(const std::vector<std::vector<double>>& vectors,
                                 int k, ClusterMethod method,
                                 std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("clusterVectors: k must be >= 2");
    if (static_cast<std::size_t>(k) > vectors.size())
        throw std::invalid_argument("clusterVectors: k exceeds item count");
    std::mt19937_64 rng(seed);
    switch (method) {
        case ClusterMethod::KMeans: return lloyd(vectors, k, rng);
        case ClusterMethod::MiniBatchKMeans: return miniBatch(vectors, k, rng);
        case ClusterMethod::FuzzyCMeans: return fuzzyCMeans(vectors, k, rng);
        case ClusterMethod::AgglomerativeAvgLink:
            return agglomerative(vectors, k);
    }
    throw std::logic_error("clusterVectors: unreachable");
}

double nmi(const std::vector<int>& labelsA, const std::vector<int>& labelsB) {
    if (labelsA.size() != labelsB.size())
        throw std::invalid_argument("nmi: length mismatch");
    if (labelsA.empty()) return 0.0;
    const double n = static_cast<double>(labelsA.size());
    std::map<int, double> ca, cb;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < labelsA.size(); ++i) {
        ca[labelsA[i]] += 1;
        cb[labelsB[i]] += 1;
        joint[{labelsA[i], labelsB[i]}] += 1;
    }
    auto entropy = [&](const std::map<int, double>& counts) {
        double h = 0.0;
        for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
        return h;
    };
    const double ha = entropy(ca), hb = entropy(cb);
    double mi = 0.0;
    for (const auto& [ab, c] : joint) {
        const double pij = c / n;
        const double pi = ca[ab.first] / n, pj = cb[ab.second] / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    const double denom = (ha + hb) / 2.0;
    if (denom <= 0.0) return 0.0;
    return std::clamp(mi / denom, 0.0, 1.0);
}

std::vector<PageGroupLabel> majorityGroupPages(
    const std::vector<std::vector<int>>& perPlotPageLabels) {
    if (perPlotPageLabels.empty()) return {};
    const std::size_t nPages = perPlotPageLabels.front().size();
    for (const auto& plot : perPlotPageLabels)
        if (plot.size() != nPages)
            throw std::invalid_argument(
                "majorityGroupPages: every page must appear in every plot");
    std::vector<PageGroupLabel> out(nPages);
    for (std::size_t p = 0; p < nPages; ++p) {
        std::map<int, int> tally;
        for (const auto& plot : perPlotPageLabels) tally[plot[p]] += 1;
        int best = -1, bestCount = -1;
        bool tie = false;
        for (const auto& [label, count] : tally) {
            if (count > bestCount) {
                bestCount = count;
                best = label;
                tie = false;
            } else if (count == bestCount) {
                tie = true;
            }
        }
        out[p].label = tie ? -1 : best;
        out[p].unassigned = tie;
    }
    return out;
}

std::string styleName(Style s) {
    switch (s) {
        case Style::Slow: return "slow";
        case Style::Medium: return "medium";
        case Style::Fast: return "fast";
    }
    return "";
}

Style styleFromName(const std::string& name) {
    if (name == "slow") return Style::Slow;
    if (name == "medium") return Style::Medium;
    if (name == "fast") return Style::Fast;
    throw std::invalid_argument("unknown style: " + name);
}

Style speedLabel(const SpeedRecord& record, const SpeedThresholds& th) {
    const double s = record.speed();
    if (s > th.t1()) return Style::Fast;
    if (s < th.t2()) return Style::Slow;
    return Style::Medium;
}

SpeedThresholds speedThresholdsFrom(const std::vector<SpeedRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("speedThresholdsFrom: no records");
    SpeedThresholds th;
    for (const auto& r : records) th.mu += r.speed();
    th.mu /= records.size();
    double var = 0.0;
    for (const auto& r : records) {
        const double d = r.speed() - th.mu;
        var += d * d;
    }
    th.sigma = std::sqrt(var / records.size());
    return th;
}

}  // namespace scriptrace
