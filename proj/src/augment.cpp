#include "scriptrace/augment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "scriptrace/segmentation.hpp"

namespace scriptrace {

namespace {

// The skeleton raster is modelled as "structures": one per node (a single
// pixel) and one per edge (its interior path). Two structures are adjacent
// when any of their pixels touch (8-connectivity), so connectivity of the
// structure graph equals raster connectivity of the skeleton. Removing an
// edge's pixels keeps the component count constant exactly when its structure
// vertex is not an articulation point.
struct StructureGraph {
    int nNodes = 0;                       // vertices [0, nNodes) are keypoints
    std::vector<std::set<int>> adj;       // vertices [nNodes, ...) are edges
    std::vector<bool> hasPixels;          // pixel-less edge vertices are inert
};

StructureGraph buildStructureGraph(const StrokeGraph& g,
                                   const BinaryImage& extent) {
    StructureGraph sg;
    sg.nNodes = static_cast<int>(g.nodes.size());
    const int total = sg.nNodes + static_cast<int>(g.edges.size());
    sg.adj.assign(total, {});
    sg.hasPixels.assign(total, true);

    const int w = extent.width(), h = extent.height();
    std::vector<int> pixelOwner(static_cast<std::size_t>(w) * h, -1);
    auto mark = [&](Point p, int v) {
        pixelOwner[static_cast<std::size_t>(p.row) * w + p.col] = v;
    };
    for (int n = 0; n < sg.nNodes; ++n) mark(g.nodes[n].position, n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (g.edges[e].path.empty()) sg.hasPixels[sg.nNodes + e] = false;
        for (const Point& p : g.edges[e].path) mark(p, sg.nNodes + e);
    }

    auto link = [&](int a, int b) {
        if (a == b) return;
        sg.adj[a].insert(b);
        sg.adj[b].insert(a);
    };
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const int a = pixelOwner[static_cast<std::size_t>(r) * w + c];
            if (a < 0) continue;
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc <= 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= h || cc < 0 || cc >= w) continue;
                    const int b = pixelOwner[static_cast<std::size_t>(rr) * w + cc];
                    if (b >= 0) link(a, b);
                }
        }
    // an edge's endpoints always count as attached, even when its first path
    // pixel only touches the node diagonally across another structure
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (!sg.hasPixels[sg.nNodes + e]) continue;
        link(sg.nNodes + e, g.edges[e].nodeA);
        link(sg.nNodes + e, g.edges[e].nodeB);
    }
    return sg;
}

// articulation vertices among alive vertices (iterative Tarjan)
std::vector<char> articulationPoints(const StructureGraph& sg,
                                     const std::vector<char>& dead) {
    const int n = static_cast<int>(sg.adj.size());
    std::vector<char> cut(n, 0);
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;
    struct Frame {
        int node, parent;
        std::set<int>::const_iterator it;
        int childCount;
    };
    for (int s = 0; s < n; ++s) {
        if (disc[s] >= 0 || dead[s]) continue;
        std::vector<Frame> stack;
        disc[s] = low[s] = timer++;
        stack.push_back({s, -1, sg.adj[s].begin(), 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.it != sg.adj[f.node].end()) {
                const int to = *f.it++;
                if (dead[to] || to == f.parent) continue;
                if (disc[to] < 0) {
                    disc[to] = low[to] = timer++;
                    ++f.childCount;
                    stack.push_back({to, f.node, sg.adj[to].begin(), 0});
                } else {
                    low[f.node] = std::min(low[f.node], disc[to]);
                }
            } else {
                const Frame done = f;
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& up = stack.back();
                    low[up.node] = std::min(low[up.node], low[done.node]);
                    if (up.parent != -1 && low[done.node] >= disc[up.node])
                        cut[up.node] = 1;
                }
                if (done.parent == -1 && done.childCount >= 2) cut[done.node] = 1;
            }
        }
    }
    return cut;
}

std::vector<int> droppableUnder(const StrokeGraph& g, const StructureGraph& sg,
                                const std::vector<char>& removedEdge) {
    std::vector<char> dead(sg.adj.size(), 0);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (removedEdge[e]) dead[sg.nNodes + e] = 1;
    const auto cut = articulationPoints(sg, dead);
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        if (removedEdge[e]) continue;
        const int v = sg.nNodes + e;
        if (!sg.hasPixels[v] || !cut[v]) out.push_back(e);
    }
    return out;
}

BinaryImage skeletonExtent(const StrokeGraph& g) {
    int h = 1, w = 1;
    for (const auto& kp : g.nodes) {
        h = std::max(h, kp.position.row + 1);
        w = std::max(w, kp.position.col + 1);
    }
    for (const auto& e : g.edges)
        for (const Point& p : e.path) {
            h = std::max(h, p.row + 1);
            w = std::max(w, p.col + 1);
        }
    return BinaryImage(w, h);
}

}  // namespace

std::vector<int> droppableEdges(const StrokeGraph& g) {
    if (g.nodes.empty()) return {};
    const auto sg = buildStructureGraph(g, skeletonExtent(g));
    return droppableUnder(g, sg, std::vector<char>(g.edges.size(), 0));
}

DropResult dropStrokes(const BinaryImage& page, const StrokeGraph& g, int nD,
                       const AugmentConfig& cfg) {
    if (nD < 1) throw std::invalid_argument("dropStrokes: nD must be >= 1");
    if (cfg.alphaD < 0.1 || cfg.alphaD > 1.0)
        throw std::invalid_argument("dropStrokes: alphaD outside [0.1, 1]");

    DropResult res;
    res.page = page;
    if (g.nodes.empty()) {
        res.warning = true;
        return res;
    }

    const int want = static_cast<int>(std::ceil(cfg.alphaD * nD));
    std::mt19937_64 rng(cfg.seed);
    const auto sg = buildStructureGraph(g, page);
    std::vector<char> removed(g.edges.size(), 0);
    while (res.removedEdges < want) {
        const auto pool = droppableUnder(g, sg, removed);
        if (pool.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        removed[pool[pick(rng)]] = 1;
        ++res.removedEdges;
    }
    res.warning = res.removedEdges == 0;
    if (res.warning) return res;

    // ownership flood: every ink pixel belongs to its nearest skeleton pixel;
    // pixels owned by removed edge paths are erased, so the surviving ink
    // stays attached to the surviving skeleton and the component count never
    // increases
    const int w = page.width(), h = page.height();
    constexpr char kNone = 0, kKeep = 1, kDrop = 2;
    std::vector<char> owner(static_cast<std::size_t>(w) * h, kNone);
    std::deque<Point> queue;
    auto seed = [&](Point p, char o) {
        if (!page.atSafe(p.row, p.col)) return;
        auto& slot = owner[static_cast<std::size_t>(p.row) * w + p.col];
        if (slot != kNone) return;
        slot = o;
        queue.push_back(p);
    };
    for (const auto& kp : g.nodes) seed(kp.position, kKeep);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        for (const Point& p : g.edges[e].path)
            seed(p, removed[e] ? kDrop : kKeep);
    while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        const char o = owner[static_cast<std::size_t>(p.row) * w + p.col];
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) seed({p.row + dr, p.col + dc}, o);
    }
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (owner[static_cast<std::size_t>(r) * w + c] == kDrop)
                res.page.set(r, c, false);
    return res;
}

std::string ExpandedSample::id() const {
    const char* halfName = half == PageHalf::Top      ? "top"
                           : half == PageHalf::Bottom ? "bottom"
                                                      : "full";
    return parentPageId + "/" + halfName + "/v" + std::to_string(variantIndex);
}

std::vector<ExpandedSample> expandPage(const BinaryImage& page,
                                       const std::string& pageId,
                                       const AugmentConfig& cfg) {
    const auto seg = segmentPage(page);
    if (seg.lines.size() < 2) throw std::runtime_error("expandPage: TooShort");

    // split row: projection valley nearest mid-height
    std::vector<int> proj(page.height(), 0);
    for (int r = 0; r < page.height(); ++r)
        for (int c = 0; c < page.width(); ++c)
            if (page.at(r, c)) ++proj[r];
    const int mid = page.height() / 2;
    int splitRow = mid;
    int bestScore = -1;
    for (int r = 1; r < page.height(); ++r) {
        if (bestScore < 0 || proj[r] < bestScore ||
            (proj[r] == bestScore && std::abs(r - mid) < std::abs(splitRow - mid))) {
            bestScore = proj[r];
            splitRow = r;
        }
    }

    auto crop = [&](int top, int bottom) {
        BinaryImage half(page.width(), bottom - top);
        for (int r = top; r < bottom; ++r)
            for (int c = 0; c < page.width(); ++c)
                if (page.at(r, c)) half.set(r - top, c, true);
        return half;
    };

    std::vector<ExpandedSample> out;
    const BinaryImage halves[2] = {crop(0, splitRow),
                                   crop(splitRow, page.height())};
    for (int hIdx = 0; hIdx < 2; ++hIdx) {
        const PageHalf which = hIdx == 0 ? PageHalf::Top : PageHalf::Bottom;
        const BinaryImage& half = halves[hIdx];
        out.push_back({pageId, which, 0, half});

        const auto sk = thin(half);
        const auto kps = detectKeypoints(sk);
        const auto graph = buildStrokeGraph(sk, kps);
        const int nD =
            std::max<int>(1, static_cast<int>(segmentPage(half).characters.size()));
        for (int v = 1; v <= 10; ++v) {
            AugmentConfig vc = cfg;
            vc.seed = cfg.seed * 1000003ULL + hIdx * 211ULL + v;
            out.push_back(
                {pageId, which, v, dropStrokes(half, graph, nD, vc).page});
        }
    }
    return out;
}

Split211 split211(const std::vector<ExpandedSample>& page1,
                  const std::vector<ExpandedSample>& page2) {
    if (page1.size() != 22 || page2.size() != 22)
        throw std::runtime_error("split211: IncompleteSet");
    Split211 out;
    out.train = page1;
    for (const auto& s : page2)
        (s.half == PageHalf::Top ? out.validation : out.test).push_back(s);
    if (out.validation.size() != 11 || out.test.size() != 11)
        throw std::runtime_error("split211: IncompleteSet");
    return out;
}

}  // namespace scriptrace
