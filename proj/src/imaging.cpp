#include "scriptrace/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace scriptrace {

namespace {

const int kDr[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
const int kDc[8] = {-1, 0, 1, 1, 1, 0, -1, -1};

}  // namespace

int otsuThreshold(const std::vector<std::size_t>& histogram) {
    const std::size_t total =
        std::accumulate(histogram.begin(), histogram.end(), std::size_t{0});
    double sumAll = 0.0;
    for (int i = 0; i < 256; ++i) sumAll += static_cast<double>(i) * histogram[i];

    double sumBack = 0.0;
    std::size_t wBack = 0;
    double bestVar = -1.0;
    int bestT = 0;
    for (int t = 0; t < 256; ++t) {
        wBack += histogram[t];
        if (wBack == 0) continue;
        const std::size_t wFore = total - wBack;
        if (wFore == 0) break;
        sumBack += static_cast<double>(t) * histogram[t];
        const double muBack = sumBack / wBack;
        const double muFore = (sumAll - sumBack) / wFore;
        const double var = static_cast<double>(wBack) * wFore * (muBack - muFore) *
                           (muBack - muFore);
        if (var > bestVar) {
            bestVar = var;
            bestT = t + 1;  // ink = intensity < bestT
        }
    }
    if (bestVar < 0.0) {
        // constant image: threshold at that intensity, empty ink mask
        for (int i = 0; i < 256; ++i)
            if (histogram[i] > 0) return i;
    }
    return bestT;
}

BinarizeResult binarize(const GrayImage& img) {
    std::vector<std::size_t> hist(256, 0);
    for (auto p : img.pixels()) ++hist[p];
    const int t = otsuThreshold(hist);
    BinarizeResult out;
    out.threshold = t;
    out.mask = BinaryImage(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            out.mask.set(r, c, img.at(r, c) < t);
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    int makeSet() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Labeling labelComponents(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    Labeling out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    UnionFind uf;
    uf.makeSet();  // label 0 = background
    auto lab = [&](int r, int c) -> int& {
        return out.labels[static_cast<std::size_t>(r) * w + c];
    };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!img.at(r, c)) continue;
            // previously scanned 8-neighbors: NW, N, NE, W
            int neigh[4] = {0, 0, 0, 0};
            if (r > 0 && c > 0) neigh[0] = lab(r - 1, c - 1);
            if (r > 0) neigh[1] = lab(r - 1, c);
            if (r > 0 && c + 1 < w) neigh[2] = lab(r - 1, c + 1);
            if (c > 0) neigh[3] = lab(r, c - 1);
            int m = 0;
            for (int v : neigh)
                if (v > 0 && (m == 0 || v < m)) m = v;
            if (m == 0) {
                lab(r, c) = uf.makeSet();
            } else {
                lab(r, c) = m;
                for (int v : neigh)
                    if (v > 0) uf.unite(m, v);
            }
        }
    }
    // compact labels
    std::vector<int> remap(uf.parent.size(), 0);
    int next = 0;
    for (std::size_t i = 0; i < uf.parent.size(); ++i)
        if (uf.find(static_cast<int>(i)) == static_cast<int>(i)) remap[i] = next++;
    out.count = next - 1;  // minus background
    for (auto& v : out.labels)
        if (v > 0) v = remap[uf.find(v)];
    return out;
}

int componentCount(const BinaryImage& img) { return labelComponents(img).count; }

int neighborCount(const BinaryImage& img, int row, int col) {
    int n = 0;
    for (int k = 0; k < 8; ++k) n += img.atSafe(row + kDr[k], col + kDc[k]);
    return n;
}

int skeletonDegree(const BinaryImage& img, int row, int col) {
    // ring order N, NE, E, SE, S, SW, W, NW
    static const int rr[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static const int rc[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    bool ring[8];
    for (int k = 0; k < 8; ++k) ring[k] = img.atSafe(row + rr[k], col + rc[k]);
    int runs = 0;
    for (int k = 0; k < 8; ++k)
        if (ring[k] && !ring[(k + 7) % 8]) ++runs;
    if (runs == 0 && ring[0]) return 1;  // full ring
    return runs;
}

namespace {

// Zhang-Suen deletion test for one subiteration.
inline bool zsDeletable(const BinaryImage& img, int r, int c, int iter) {
    const bool p2 = img.atSafe(r - 1, c);
    const bool p3 = img.atSafe(r - 1, c + 1);
    const bool p4 = img.atSafe(r, c + 1);
    const bool p5 = img.atSafe(r + 1, c + 1);
    const bool p6 = img.atSafe(r + 1, c);
    const bool p7 = img.atSafe(r + 1, c - 1);
    const bool p8 = img.atSafe(r, c - 1);
    const bool p9 = img.atSafe(r - 1, c - 1);
    const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
    if (b < 2 || b > 6) return false;
    const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) +
                  (!p6 && p7) + (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
    if (a != 1) return false;
    if (iter == 0)
        return !(p2 && p4 && p6) && !(p4 && p6 && p8);
    return !(p2 && p4 && p8) && !(p2 && p6 && p8);
}

template <bool Parallel>
Skeleton thinImpl(const BinaryImage& img) {
    BinaryImage cur = img;
    const int w = cur.width(), h = cur.height();
    std::vector<std::uint8_t> del(static_cast<std::size_t>(w) * h);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int iter = 0; iter < 2; ++iter) {
            std::fill(del.begin(), del.end(), 0);
#pragma omp parallel for schedule(static) if (Parallel)
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < w; ++c)
                    if (cur.at(r, c) && zsDeletable(cur, r, c, iter))
                        del[static_cast<std::size_t>(r) * w + c] = 1;
            for (std::size_t i = 0; i < del.size(); ++i)
                if (del[i]) {
                    cur.bits()[i] = 0;
                    changed = true;
                }
        }
    }
    Skeleton sk;
    sk.strokeLengthPx = cur.inkCount();
    sk.image = std::move(cur);
    return sk;
}

template <bool Parallel>
std::vector<double> edtImpl(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    const double kInf = 1e18;
    std::vector<double> f(static_cast<std::size_t>(w) * h);

    // column pass: squared distance to nearest background in the same column,
    // with the image border counting as background
    auto colPass = [&](int c) {
        std::vector<double> g(h);
        for (int r = 0; r < h; ++r)
            g[r] = img.at(r, c) ? kInf : 0.0;
        // 1-D squared EDT along the column (two sweeps)
        for (int r = 0; r < h; ++r) {
            double up = (r == 0) ? 1.0 : g[r - 1] < kInf ? (std::sqrt(g[r - 1]) + 1) * (std::sqrt(g[r - 1]) + 1) : kInf;
            double border = static_cast<double>(r + 1) * (r + 1);
            g[r] = std::min({g[r], up, border});
        }
        for (int r = h - 1; r >= 0; --r) {
            double dn = (r == h - 1) ? 1.0 : g[r + 1] < kInf ? (std::sqrt(g[r + 1]) + 1) * (std::sqrt(g[r + 1]) + 1) : kInf;
            double border = static_cast<double>(h - r) * (h - r);
            g[r] = std::min({g[r], dn, border});
        }
        for (int r = 0; r < h; ++r)
            f[static_cast<std::size_t>(r) * w + c] = g[r];
    };
#pragma omp parallel for schedule(static) if (Parallel)
    for (int c = 0; c < w; ++c) colPass(c);

    // row pass: lower envelope of parabolas (Felzenszwalb-Huttenlocher),
    // plus the left/right image border as background
    std::vector<double> out(static_cast<std::size_t>(w) * h);
    auto rowPass = [&](int r) {
        std::vector<double> src(w + 2);
        src[0] = 0.0;  // virtual border column at x = -1
        for (int c = 0; c < w; ++c)
            src[c + 1] = f[static_cast<std::size_t>(r) * w + c];
        src[w + 1] = 0.0;  // virtual border column at x = w
        const int n = w + 2;
        std::vector<int> v(n);
        std::vector<double> z(n + 1);
        int k = 0;
        v[0] = 0;
        z[0] = -kInf;
        z[1] = kInf;
        for (int q = 1; q < n; ++q) {
            if (src[q] >= kInf) continue;
            double s;
            while (true) {
                const int p = v[k];
                s = ((src[q] + static_cast<double>(q) * q) -
                     (src[p] + static_cast<double>(p) * p)) /
                    (2.0 * q - 2.0 * p);
                if (s <= z[k]) {
                    --k;
                } else {
                    break;
                }
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
        }
        k = 0;
        for (int q = 0; q < n; ++q) {
            while (z[k + 1] < q) ++k;
            const int p = v[k];
            const double d2 = static_cast<double>(q - p) * (q - p) + src[p];
            if (q >= 1 && q <= w)
                out[static_cast<std::size_t>(r) * w + (q - 1)] = std::sqrt(d2);
        }
    };
#pragma omp parallel for schedule(static) if (Parallel)
    for (int r = 0; r < h; ++r) rowPass(r);
    return out;
}

}  // namespace

Skeleton thin(const BinaryImage& img) { return thinImpl<true>(img); }
Skeleton thinSerial(const BinaryImage& img) { return thinImpl<false>(img); }

std::vector<double> distanceTransform(const BinaryImage& img) {
    return edtImpl<true>(img);
}
std::vector<double> distanceTransformSerial(const BinaryImage& img) {
    return edtImpl<false>(img);
}

StrokeStats strokeWidthStats(const BinaryImage& img, const Skeleton& sk) {
    if (sk.strokeLengthPx == 0)
        throw std::runtime_error("strokeWidthStats: EmptyInk");
    const auto dist = distanceTransform(img);
    const int w = img.width(), h = img.height();
    double sum = 0.0, sumSq = 0.0;
    int n = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!sk.image.at(r, c)) continue;
            const double d = dist[static_cast<std::size_t>(r) * w + c];
            const double width = std::max(1.0, std::round(2.0 * d - 1.0));
            sum += width;
            sumSq += width * width;
            ++n;
        }
    }
    StrokeStats st;
    st.meanWidth = sum / n;
    st.stdWidth = std::sqrt(std::max(0.0, sumSq / n - st.meanWidth * st.meanWidth));
    return st;
}

Skeleton pruneSpurs(const Skeleton& sk, const StrokeStats& stats) {
    BinaryImage img = sk.image;
    const int threshold = static_cast<int>(std::ceil(stats.meanWidth / 2.0));
    bool changed = true;
    while (changed) {
        changed = false;
        const int w = img.width(), h = img.height();
        for (int r = 0; r < h && !changed; ++r) {
            for (int c = 0; c < w && !changed; ++c) {
                if (!img.at(r, c) || neighborCount(img, r, c) != 1) continue;
                // walk from the end toward the nearest branch
                std::vector<Point> path{{r, c}};
                Point prev{-1, -1};
                Point cur{r, c};
                bool hitBranch = false;
                while (static_cast<int>(path.size()) <= threshold) {
                    Point next{-1, -1};
                    for (int k = 0; k < 8; ++k) {
                        const Point q{cur.row + kDr[k], cur.col + kDc[k]};
                        if (!img.atSafe(q.row, q.col) || q == prev) continue;
                        if (skeletonDegree(img, q.row, q.col) >= 3) {
                            hitBranch = true;
                            break;
                        }
                        if (next.row < 0) next = q;
                    }
                    if (hitBranch || next.row < 0) break;
                    prev = cur;
                    cur = next;
                    path.push_back(cur);
                }
                if (hitBranch && static_cast<int>(path.size()) < threshold) {
                    for (const auto& p : path) img.set(p.row, p.col, false);
                    changed = true;
                }
            }
        }
    }
    Skeleton out;
    out.strokeLengthPx = img.inkCount();
    out.image = std::move(img);
    return out;
}

namespace {

// Moore-neighbor tracing. start must be ink, backtrack an adjacent
// non-ink pixel; returns the closed boundary chain.
std::vector<Point> mooreTrace(const BinaryImage& img, Point start, Point backtrack) {
    std::vector<Point> chain{start};
    if (neighborCount(img, start.row, start.col) == 0) return chain;

    auto dirIndex = [&](Point from, Point to) {
        for (int k = 0; k < 8; ++k)
            if (from.row + kDr[k] == to.row && from.col + kDc[k] == to.col) return k;
        return 0;
    };

    Point cur = start;
    Point back = backtrack;
    const std::size_t maxSteps =
        static_cast<std::size_t>(img.width()) * img.height() * 4 + 16;
    Point firstMove{-1, -1};
    for (std::size_t step = 0; step < maxSteps; ++step) {
        const int startDir = dirIndex(cur, back);
        Point next{-1, -1};
        Point newBack = back;
        for (int i = 1; i <= 8; ++i) {
            const int k = (startDir + i) % 8;  // clockwise scan
            const int nr = cur.row + kDr[k], nc = cur.col + kDc[k];
            if (img.atSafe(nr, nc)) {
                next = {nr, nc};
                break;
            }
            newBack = {nr, nc};
        }
        if (next.row < 0) break;
        if (cur == start) {
            if (firstMove.row < 0)
                firstMove = next;
            else if (next == firstMove)
                break;  // Jacob's stopping criterion
        }
        back = newBack;
        cur = next;
        if (cur != start) chain.push_back(cur);
    }
    return chain;
}

}  // namespace

std::vector<Contour> traceContours(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<Contour> out;

    const Labeling ink = labelComponents(img);

    // exterior contour per ink component, anchored at its topmost-leftmost pixel
    std::vector<char> seen(ink.count + 1, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int lab = ink.at(r, c);
            if (lab == 0 || seen[lab]) continue;
            seen[lab] = 1;
            Contour ct;
            ct.kind = ContourKind::Exterior;
            ct.points = mooreTrace(img, {r, c}, {r - 1, c});
            out.push_back(std::move(ct));
        }
    }

    // holes: 4-connected background components not touching the image border
    std::vector<int> bg(static_cast<std::size_t>(w) * h, -1);
    auto bgAt = [&](int r, int c) -> int& {
        return bg[static_cast<std::size_t>(r) * w + c];
    };
    int bgNext = 0;
    std::vector<char> touchesBorder;
    std::vector<Point> bgAnchor;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (img.at(r, c) || bgAt(r, c) >= 0) continue;
            const int id = bgNext++;
            touchesBorder.push_back(0);
            bgAnchor.push_back({r, c});
            std::vector<Point> stack{{r, c}};
            bgAt(r, c) = id;
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                if (p.row == 0 || p.row == h - 1 || p.col == 0 || p.col == w - 1)
                    touchesBorder[id] = 1;
                const int dr4[4] = {-1, 1, 0, 0};
                const int dc4[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = p.row + dr4[k], nc = p.col + dc4[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    if (img.at(nr, nc) || bgAt(nr, nc) >= 0) continue;
                    bgAt(nr, nc) = id;
                    stack.push_back({nr, nc});
                }
            }
        }
    }
    for (int id = 0; id < bgNext; ++id) {
        if (touchesBorder[id]) continue;
        const Point hp = bgAnchor[id];  // topmost-leftmost hole pixel
        // ink pixel directly above the hole's top pixel starts the trace
        Contour ct;
        ct.kind = ContourKind::Interior;
        ct.points = mooreTrace(img, {hp.row - 1, hp.col}, hp);
        out.push_back(std::move(ct));
    }
    return out;
}

namespace {

double turnAngleDeg(Point a, Point b, Point c) {
    const double v1r = b.row - a.row, v1c = b.col - a.col;
    const double v2r = c.row - b.row, v2c = c.col - b.col;
    const double dot = v1r * v2r + v1c * v2c;
    const double cross = v1c * v2r - v1r * v2c;
    return std::abs(std::atan2(cross, dot)) * 180.0 / 3.14159265358979323846;
}

}  // namespace

std::vector<Keypoint> detectKeypoints(const Skeleton& sk) {
    const BinaryImage& img = sk.image;
    const int w = img.width(), h = img.height();
    std::vector<Keypoint> out;
    std::set<Point> anchored;

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!img.at(r, c)) continue;
            if (neighborCount(img, r, c) == 1) {
                out.push_back({{r, c}, KeypointKind::End});
                anchored.insert({r, c});
            } else if (skeletonDegree(img, r, c) >= 3) {
                out.push_back({{r, c}, KeypointKind::Branch});
                anchored.insert({r, c});
            }
        }
    }

    // curved points: walk degree-2 chains and flag direction changes >= 45
    // degrees between 5-pixel chords
    const int chord = 5;
    std::set<Point> visited(anchored);
    auto walkChain = [&](Point from, Point startPixel) {
        std::vector<Point> path{from, startPixel};
        visited.insert(startPixel);
        Point prev = from, cur = startPixel;
        while (true) {
            Point next{-1, -1};
            for (int k = 0; k < 8; ++k) {
                const Point q{cur.row + kDr[k], cur.col + kDc[k]};
                if (!img.atSafe(q.row, q.col) || q == prev) continue;
                if (anchored.count(q)) {
                    next = q;
                    break;
                }
                if (next.row < 0 && !visited.count(q)) next = q;
            }
            if (next.row < 0) break;
            path.push_back(next);
            if (anchored.count(next)) break;
            visited.insert(next);
            prev = cur;
            cur = next;
        }
        const int len = static_cast<int>(path.size());
        for (int i = chord; i + chord < len; ++i) {
            if (turnAngleDeg(path[i - chord], path[i], path[i + chord]) >= 45.0) {
                out.push_back({path[i], KeypointKind::Curved});
                i += chord - 1;  // moderate keypoint density
            }
        }
    };
    const std::vector<Keypoint> structural = out;
    for (const auto& kp : structural) {
        for (int k = 0; k < 8; ++k) {
            const Point n{kp.position.row + kDr[k], kp.position.col + kDc[k]};
            if (img.atSafe(n.row, n.col) && !visited.count(n) && !anchored.count(n))
                walkChain(kp.position, n);
        }
    }

    // closed curves without structural points: anchor one curved keypoint so
    // the stroke graph can represent the loop
    const Labeling lab = labelComponents(img);
    std::vector<char> hasKp(lab.count + 1, 0);
    for (const auto& kp : out) hasKp[lab.at(kp.position.row, kp.position.col)] = 1;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (img.at(r, c) && !hasKp[lab.at(r, c)]) {
                out.push_back({{r, c}, KeypointKind::Curved});
                hasKp[lab.at(r, c)] = 1;
            }

    std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
        return a.position < b.position;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Keypoint& a, const Keypoint& b) {
                              return a.position == b.position;
                          }),
              out.end());
    return out;
}

StrokeGraph buildStrokeGraph(const Skeleton& sk, const std::vector<Keypoint>& kps) {
    const BinaryImage& img = sk.image;
    StrokeGraph g;
    g.nodes = kps;
    g.componentCount = componentCount(img);

    std::map<Point, int> nodeAt;
    for (std::size_t i = 0; i < kps.size(); ++i)
        nodeAt[kps[i].position] = static_cast<int>(i);

    std::map<Point, int> edgeOf;  // interior pixel -> edge index
    std::set<Point> consumed;     // interior pixels already assigned to an edge

    // direct node-to-node adjacencies (edges with no interior pixels)
    for (std::size_t i = 0; i < kps.size(); ++i) {
        const Point p = kps[i].position;
        for (int k = 0; k < 8; ++k) {
            const Point q{p.row + kDr[k], p.col + kDc[k]};
            auto it = nodeAt.find(q);
            if (it != nodeAt.end() && p < q)
                g.edges.push_back({static_cast<int>(i), it->second, {}});
        }
    }

    // walk keypoint-free chains
    for (std::size_t i = 0; i < kps.size(); ++i) {
        const Point start = kps[i].position;
        for (int k = 0; k < 8; ++k) {
            const Point s{start.row + kDr[k], start.col + kDc[k]};
            if (!img.atSafe(s.row, s.col) || nodeAt.count(s) || consumed.count(s))
                continue;
            StrokeEdge e;
            e.nodeA = static_cast<int>(i);
            e.path.push_back(s);
            consumed.insert(s);
            Point prev = start, cur = s;
            while (true) {
                Point next{-1, -1};
                bool nextIsNode = false;
                for (int j = 0; j < 8; ++j) {
                    const Point q{cur.row + kDr[j], cur.col + kDc[j]};
                    if (!img.atSafe(q.row, q.col) || q == prev) continue;
                    if (nodeAt.count(q)) {
                        next = q;
                        nextIsNode = true;
                        break;
                    }
                    if (next.row < 0 && !consumed.count(q)) next = q;
                }
                if (next.row < 0) {
                    e.nodeB = e.nodeA;  // dead end folds back as a self-loop
                    break;
                }
                if (nextIsNode) {
                    e.nodeB = nodeAt[next];
                    break;
                }
                e.path.push_back(next);
                consumed.insert(next);
                prev = cur;
                cur = next;
            }
            const int idx = static_cast<int>(g.edges.size());
            for (const auto& p : e.path) edgeOf[p] = idx;
            g.edges.push_back(std::move(e));
        }
    }

    // junction clusters can leave pixels the chain walk never reached; fold
    // them into an adjacent edge (or hang a new edge off an adjacent node)
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                const Point p{r, c};
                if (!img.at(r, c) || nodeAt.count(p) || consumed.count(p)) continue;
                int adjEdge = -1, adjNode = -1;
                for (int k = 0; k < 8 && adjEdge < 0; ++k) {
                    const Point q{r + kDr[k], c + kDc[k]};
                    auto it = edgeOf.find(q);
                    if (it != edgeOf.end()) adjEdge = it->second;
                    auto nt = nodeAt.find(q);
                    if (adjNode < 0 && nt != nodeAt.end()) adjNode = nt->second;
                }
                if (adjEdge >= 0) {
                    g.edges[adjEdge].path.push_back(p);
                    edgeOf[p] = adjEdge;
                    consumed.insert(p);
                    changed = true;
                } else if (adjNode >= 0) {
                    const int idx = static_cast<int>(g.edges.size());
                    g.edges.push_back({adjNode, adjNode, {p}});
                    edgeOf[p] = idx;
                    consumed.insert(p);
                    changed = true;
                }
            }
        }
    }
    return g;
}

}  // namespace scriptrace
