#include "scriptrace/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scriptrace {

namespace {

constexpr double kPi = 3.14159265358979323846;

void normalizeBlock(std::vector<double>& v, std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += v[i];
    if (sum > 0.0)
        for (std::size_t i = begin; i < end; ++i) v[i] /= sum;
}

// angle of (from -> to) in degrees over [0, 360), measured from the
// horizontal with image rows growing downward (y flipped up)
double angleDeg(Point from, Point to) {
    const double dx = to.col - from.col;
    const double dy = from.row - to.row;
    double a = std::atan2(dy, dx) * 180.0 / kPi;
    if (a < 0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    return a;
}

}  // namespace

std::string familyName(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::FMM: return "fmm";
        case FeatureFamily::FDH: return "fdh";
        case FeatureFamily::FDC: return "fdc";
        case FeatureFamily::Ingested: return "ingested";
    }
    return "ingested";
}

FeatureFamily familyFromName(const std::string& name) {
    if (name == "fmm") return FeatureFamily::FMM;
    if (name == "fdh") return FeatureFamily::FDH;
    if (name == "fdc") return FeatureFamily::FDC;
    if (name == "ingested") return FeatureFamily::Ingested;
    throw std::invalid_argument("unknown feature family: " + name);
}

int computeEpsilon(const StrokeStats& stats) {
    return std::max(2, static_cast<int>(std::floor(stats.meanWidth - stats.stdWidth)));
}

std::vector<double> contourDirectionHist(const std::vector<Contour>& contours,
                                         int epsilon) {
    if (epsilon < 2) throw std::invalid_argument("contourDirectionHist: epsilon < 2");
    std::vector<double> hist(12, 0.0);
    for (const auto& ct : contours) {
        const auto& pts = ct.points;
        const int n = static_cast<int>(pts.size());
        if (n <= epsilon) continue;
        for (int i = 0; i < n; ++i) {
            const Point a = pts[i];
            const Point b = pts[(i + epsilon) % n];
            if (a == b) continue;
            double phi = angleDeg(a, b);
            if (phi >= 180.0) phi -= 180.0;  // fold
            hist[std::min(11, static_cast<int>(phi / 15.0))] += 1.0;
        }
    }
    normalizeBlock(hist, 0, hist.size());
    return hist;
}

std::vector<double> contourHingeHist(const std::vector<Contour>& contours,
                                     int epsilon) {
    if (epsilon < 2) throw std::invalid_argument("contourHingeHist: epsilon < 2");
    std::vector<double> hist(300, 0.0);
    for (const auto& ct : contours) {
        const auto& pts = ct.points;
        const int n = static_cast<int>(pts.size());
        if (n < 2 * epsilon + 1) continue;
        for (int i = 0; i < n; ++i) {
            const Point center = pts[i];
            const Point fwd = pts[(i + epsilon) % n];
            const Point bwd = pts[(i - epsilon % n + n) % n];
            if (fwd == center || bwd == center) continue;
            double phi1 = angleDeg(center, bwd);
            double phi2 = angleDeg(center, fwd);
            if (phi1 > phi2) std::swap(phi1, phi2);
            const int q1 = std::min(23, static_cast<int>(phi1 / 15.0));
            const int q2 = std::min(23, static_cast<int>(phi2 / 15.0));
            // ordered-pair index over q1 <= q2, 24+23+...+1 = 300 bins
            const int idx = q1 * 24 - q1 * (q1 - 1) / 2 + (q2 - q1);
            hist[idx] += 1.0;
        }
    }
    normalizeBlock(hist, 0, hist.size());
    return hist;
}

FeatureVector extractFDH(const std::vector<Contour>& contours,
                         const StrokeStats& stats) {
    const int eps = computeEpsilon(stats);
    FeatureVector fv;
    fv.family = FeatureFamily::FDH;
    fv.values = contourDirectionHist(contours, eps);
    const auto hinge = contourHingeHist(contours, eps);
    fv.values.insert(fv.values.end(), hinge.begin(), hinge.end());
    return fv;
}

DirectionSamples collectDirectionSamples(const StrokeGraph& g) {
    DirectionSamples out;
    const int n = static_cast<int>(g.nodes.size());
    if (n < 2) return out;

    struct Incident {
        int edge;
        int other;
    };
    std::vector<std::vector<Incident>> adj(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        adj[g.edges[e].nodeA].push_back({e, g.edges[e].nodeB});
        if (g.edges[e].nodeB != g.edges[e].nodeA)
            adj[g.edges[e].nodeB].push_back({e, g.edges[e].nodeA});
    }
    std::vector<int> degree(n, 0);
    for (const auto& e : g.edges) {
        degree[e.nodeA] += 1;
        degree[e.nodeB] += 1;
    }

    std::vector<char> used(g.edges.size(), 0);
    std::vector<std::vector<int>> chains;

    auto walk = [&](int startNode, int startEdge) {
        std::vector<int> seq{startNode};
        int cur = startNode;
        int edge = startEdge;
        while (true) {
            used[edge] = 1;
            const auto& e = g.edges[edge];
            const int next = e.nodeA == cur ? e.nodeB : e.nodeA;
            seq.push_back(next);
            if (next == cur) break;  // self-loop
            cur = next;
            if (degree[cur] != 2) break;
            int cont = -1;
            for (const auto& inc : adj[cur])
                if (!used[inc.edge]) {
                    cont = inc.edge;
                    break;
                }
            if (cont < 0) break;
            edge = cont;
        }
        chains.push_back(std::move(seq));
    };

    // maximal paths anchored at non-degree-2 nodes, then leftover cycles
    for (int v = 0; v < n; ++v) {
        if (degree[v] == 2) continue;
        for (const auto& inc : adj[v])
            if (!used[inc.edge]) walk(v, inc.edge);
    }
    for (int v = 0; v < n; ++v)
        for (const auto& inc : adj[v])
            if (!used[inc.edge]) walk(v, inc.edge);

    for (const auto& seq : chains) {
        std::vector<double> thetas;  // radians per non-degenerate segment
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            const Point a = g.nodes[seq[i]].position;
            const Point b = g.nodes[seq[i + 1]].position;
            const double dx = b.col - a.col;
            const double dy = a.row - b.row;
            const double d = std::hypot(dx, dy);
            if (d == 0.0) continue;
            out.dirCos.push_back(dx / d);
            out.dirSin.push_back(dy / d);
            thetas.push_back(std::atan2(dy, dx));
        }
        for (std::size_t i = 1; i < thetas.size(); ++i) {
            const double delta = thetas[i] - thetas[i - 1];
            out.curvCos.push_back(std::cos(delta));
            out.curvSin.push_back(std::sin(delta));
        }
    }
    return out;
}

FeatureVector keypointDirectionCurvature(const StrokeGraph& g) {
    FeatureVector fv;
    fv.family = FeatureFamily::FDC;
    fv.values.assign(kDimFdc, 0.0);
    const auto samples = collectDirectionSamples(g);
    auto binAt = [](double v) {
        return std::min(199, std::max(0, static_cast<int>((v + 1.0) * 100.0)));
    };
    auto fill = [&](const std::vector<double>& vals, int offset) {
        for (double v : vals) fv.values[offset + binAt(v)] += 1.0;
        normalizeBlock(fv.values, offset, offset + 200);
    };
    fill(samples.dirCos, 0);
    fill(samples.dirSin, 200);
    fill(samples.curvCos, 400);
    fill(samples.curvSin, 600);
    return fv;
}

std::vector<bool> microFeatureBits(const BinaryImage& ch) {
    std::vector<bool> bits;
    bits.reserve(512);
    const int h = ch.height(), w = ch.width();
    auto cellOf = [&](int r, int c) {
        const int gr = std::min(3, r * 4 / std::max(1, h));
        const int gc = std::min(3, c * 4 / std::max(1, w));
        return gr * 4 + gc;
    };
    auto emit = [&](const std::vector<std::vector<int>>& counts, int classes) {
        for (int cell = 0; cell < 16; ++cell) {
            double mean = 0.0;
            for (int k = 0; k < classes; ++k) mean += counts[cell][k];
            mean /= classes;
            for (int k = 0; k < classes; ++k)
                bits.push_back(counts[cell][k] > mean);
        }
    };

    // gradient: Sobel direction quantized into 12 bins of 30 degrees
    {
        std::vector<std::vector<int>> counts(16, std::vector<int>(12, 0));
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                auto v = [&](int rr, int cc) {
                    return ch.atSafe(rr, cc) ? 1.0 : 0.0;
                };
                const double gx = (v(r - 1, c + 1) + 2 * v(r, c + 1) + v(r + 1, c + 1)) -
                                  (v(r - 1, c - 1) + 2 * v(r, c - 1) + v(r + 1, c - 1));
                const double gy = (v(r + 1, c - 1) + 2 * v(r + 1, c) + v(r + 1, c + 1)) -
                                  (v(r - 1, c - 1) + 2 * v(r - 1, c) + v(r - 1, c + 1));
                if (gx == 0.0 && gy == 0.0) continue;
                double a = std::atan2(-gy, gx) * 180.0 / kPi;
                if (a < 0) a += 360.0;
                counts[cellOf(r, c)][std::min(11, static_cast<int>(a / 30.0))] += 1;
            }
        emit(counts, 12);
    }

    // structural: 12 fixed 3x3 neighbor-pair stroke templates
    {
        static const int tmpl[12][4] = {
            // {dr1,dc1, dr2,dc2}
            {-1, 0, 1, 0},   {0, 1, 0, -1},   {-1, 1, 1, -1}, {-1, -1, 1, 1},
            {-1, 0, 0, 1},   {0, 1, 1, 0},    {1, 0, 0, -1},  {0, -1, -1, 0},
            {-1, 1, 1, 1},   {1, 1, 1, -1},   {1, -1, -1, -1}, {-1, -1, -1, 1}};
        std::vector<std::vector<int>> counts(16, std::vector<int>(12, 0));
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                if (!ch.at(r, c)) continue;
                for (int t = 0; t < 12; ++t)
                    if (ch.atSafe(r + tmpl[t][0], c + tmpl[t][1]) &&
                        ch.atSafe(r + tmpl[t][2], c + tmpl[t][3]))
                        counts[cellOf(r, c)][t] += 1;
            }
        emit(counts, 12);
    }

    // concavity: directional-ray hit pattern of background pixels
    {
        std::vector<std::vector<int>> counts(16, std::vector<int>(8, 0));
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                if (ch.at(r, c)) continue;
                bool hit[4] = {false, false, false, false};  // up,down,left,right
                for (int rr = r - 1; rr >= 0; --rr)
                    if (ch.at(rr, c)) {
                        hit[0] = true;
                        break;
                    }
                for (int rr = r + 1; rr < h; ++rr)
                    if (ch.at(rr, c)) {
                        hit[1] = true;
                        break;
                    }
                for (int cc = c - 1; cc >= 0; --cc)
                    if (ch.at(r, cc)) {
                        hit[2] = true;
                        break;
                    }
                for (int cc = c + 1; cc < w; ++cc)
                    if (ch.at(r, cc)) {
                        hit[3] = true;
                        break;
                    }
                const int nHits = hit[0] + hit[1] + hit[2] + hit[3];
                int cls = -1;
                if (nHits == 1) {
                    cls = hit[0] ? 0 : hit[1] ? 1 : hit[2] ? 2 : 3;
                } else if (nHits == 2) {
                    if (hit[0] && hit[1]) cls = 4;       // vertical pair
                    else if (hit[2] && hit[3]) cls = 5;  // horizontal pair
                    else cls = 6;                        // corner
                } else if (nHits >= 3) {
                    cls = 7;
                }
                if (cls >= 0) counts[cellOf(r, c)][cls] += 1;
            }
        emit(counts, 8);
    }
    return bits;
}

FeatureVector extractFMM(const PageArtifacts& page) {
    if (!page.gray || !page.binary || !page.contours || !page.segmentation)
        throw std::invalid_argument("extractFMM: missing page artifacts");
    const GrayImage& gray = *page.gray;
    const BinaryImage& bin = *page.binary;
    const auto& contours = *page.contours;
    const auto& seg = *page.segmentation;

    std::vector<double> f(16, 0.0);

    // f1: gray-level entropy in bits, scaled to [0,1]
    {
        std::vector<double> hist(256, 0.0);
        for (auto p : gray.pixels()) hist[p] += 1.0;
        const double total = static_cast<double>(gray.pixels().size());
        double ent = 0.0;
        for (double hcount : hist)
            if (hcount > 0.0) {
                const double p = hcount / total;
                ent -= p * std::log2(p);
            }
        f[0] = ent / 8.0;
    }
    f[1] = page.otsuThreshold / 255.0;
    f[2] = static_cast<double>(bin.inkCount()) / (bin.width() * bin.height());

    const double charCount = static_cast<double>(seg.characters.size());
    int ext = 0, inte = 0;
    for (const auto& ct : contours)
        (ct.kind == ContourKind::Exterior ? ext : inte)++;
    if (charCount > 0) {
        f[3] = inte / charCount;
        f[4] = ext / charCount;
    }

    // f6-f9: chain-code slope classes; f10: slant deviation of near-vertical
    // segments from vertical
    {
        double vertical = 0, negative = 0, positive = 0, horizontal = 0, total = 0;
        double slantDevSum = 0, slantN = 0;
        for (const auto& ct : contours) {
            const auto& pts = ct.points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const Point a = pts[i];
                const Point b = pts[(i + 1) % pts.size()];
                const int dr = b.row - a.row, dc = b.col - a.col;
                if (dr == 0 && dc == 0) continue;
                total += 1;
                if (dc == 0) vertical += 1;
                else if (dr == 0) horizontal += 1;
                else if ((dr < 0) == (dc > 0)) positive += 1;  // up-right
                else negative += 1;
            }
            const int eps = 3;
            const int n = static_cast<int>(pts.size());
            if (n > 2 * eps) {
                for (int i = 0; i < n; ++i) {
                    double a = angleDeg(pts[i], pts[(i + eps) % n]);
                    if (a >= 180.0) a -= 180.0;
                    if (a >= 45.0 && a <= 135.0) {
                        slantDevSum += std::abs(90.0 - a) / 90.0;
                        slantN += 1;
                    }
                }
            }
        }
        if (total > 0) {
            f[5] = vertical / total;
            f[6] = negative / total;
            f[7] = positive / total;
            f[8] = horizontal / total;
        }
        if (slantN > 0) f[9] = slantDevSum / slantN;
    }

    // f11: mean text-line height / page height
    if (!seg.lines.empty()) {
        double hsum = 0;
        for (const auto& line : seg.lines) hsum += line.bbox.height();
        f[10] = hsum / seg.lines.size() / bin.height();
    }

    // f12/f13: paragraph aspect ratio and left margin
    {
        BBox para;
        for (const auto& line : seg.lines) {
            para.include(line.bbox.top, line.bbox.left);
            para.include(line.bbox.bottom, line.bbox.right);
        }
        if (!para.empty()) {
            f[11] = static_cast<double>(para.height()) / para.width();
            f[12] = static_cast<double>(para.left) / bin.width();
        }
    }

    // f14/f15: upper/lower zone ink ratios from line-band thirds
    if (!seg.lines.empty()) {
        double upSum = 0, loSum = 0;
        int nLines = 0;
        for (const auto& line : seg.lines) {
            const int top = line.bbox.top, bot = line.bbox.bottom;
            const int third = std::max(1, (bot - top + 1) / 3);
            double up = 0, lo = 0, tot = 0;
            for (int r = top; r <= bot; ++r)
                for (int c = line.bbox.left; c <= line.bbox.right; ++c) {
                    if (!bin.at(r, c)) continue;
                    tot += 1;
                    if (r < top + third) up += 1;
                    if (r > bot - third) lo += 1;
                }
            if (tot > 0) {
                upSum += up / tot;
                loSum += lo / tot;
                ++nLines;
            }
        }
        if (nLines > 0) {
            f[13] = upSum / nLines;
            f[14] = loSum / nLines;
        }
    }

    // f16: mean word width / mean line height
    if (!seg.words.empty() && !seg.lines.empty()) {
        double wsum = 0;
        for (const auto& wb : seg.words) wsum += wb.width();
        double hsum = 0;
        for (const auto& line : seg.lines) hsum += line.bbox.height();
        const double meanH = hsum / seg.lines.size();
        if (meanH > 0) f[15] = wsum / seg.words.size() / meanH;
    }

    // micro histogram over the 512-bit per-character code
    std::vector<double> micro(512, 0.0);
    for (const auto& cb : seg.characters) {
        BinaryImage raster(cb.bbox.width(), cb.bbox.height());
        for (int r = 0; r < raster.height(); ++r)
            for (int c = 0; c < raster.width(); ++c)
                raster.set(r, c, bin.at(cb.bbox.top + r, cb.bbox.left + c));
        const auto bits = microFeatureBits(raster);
        for (std::size_t b = 0; b < 512; ++b)
            if (bits[b]) micro[b] += 1.0;
    }
    if (charCount > 0)
        for (auto& v : micro) v /= charCount;

    FeatureVector fv;
    fv.family = FeatureFamily::FMM;
    fv.values = std::move(f);
    fv.values.insert(fv.values.end(), micro.begin(), micro.end());
    return fv;
}

}  // namespace scriptrace
