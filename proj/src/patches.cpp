#include "scriptrace/patches.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace scriptrace {

namespace {

// copy a size x size window centered at (row,col) into dst at (dstTop,dstLeft)
void copyWindow(const BinaryImage& page, int row, int col, int size,
                BinaryImage& dst, int dstTop, int dstLeft) {
    const int top = row - size / 2;
    const int left = col - size / 2;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (page.atSafe(top + r, left + c))
                dst.set(dstTop + r, dstLeft + c, true);
}

}  // namespace

Patch extractPatchChar(const BinaryImage& page, const CharacterBox& box,
                       const PatchConfig& cfg) {
    Patch p;
    p.kind = PatchKind::Char;
    p.center = {static_cast<int>(std::lround(box.cgRow)),
                static_cast<int>(std::lround(box.cgCol))};
    p.pixels = BinaryImage(cfg.padTo(), cfg.padTo());
    copyWindow(page, p.center.row, p.center.col, cfg.nChar, p.pixels, 0, 0);
    return p;
}

Patch extractPatchAllo(const BinaryImage& page, const Keypoint& kp,
                       const PatchConfig& cfg) {
    Patch p;
    p.kind = PatchKind::Allo;
    p.center = kp.position;
    p.pixels = BinaryImage(cfg.padTo(), cfg.padTo());
    const int pad = cfg.padEachSide();
    copyWindow(page, p.center.row, p.center.col, cfg.nAllo(), p.pixels, pad, pad);
    return p;
}

std::vector<Patch> samplePatches(const BinaryImage& page,
                                 const PageSegmentation& seg, int nP,
                                 std::uint64_t seed, const PatchConfig& cfg,
                                 PatchSource source) {
    if (nP < 1) throw std::invalid_argument("samplePatches: nP must be >= 1");

    std::vector<Point> candidates;
    if (source == PatchSource::Characters) {
        for (const auto& cb : seg.characters)
            candidates.push_back({static_cast<int>(std::lround(cb.cgRow)),
                                  static_cast<int>(std::lround(cb.cgCol))});
    } else {
        for (int r = 0; r < page.height(); ++r)
            for (int c = 0; c < page.width(); ++c)
                if (page.at(r, c)) candidates.push_back({r, c});
    }
    if (candidates.empty()) throw std::runtime_error("samplePatches: NoInk");

    std::mt19937_64 rng(seed);
    std::vector<Point> centers;
    centers.reserve(nP);
    if (static_cast<int>(candidates.size()) >= nP) {
        // partial Fisher-Yates: nP distinct picks
        for (int i = 0; i < nP; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
            std::swap(candidates[i], candidates[pick(rng)]);
            centers.push_back(candidates[i]);
        }
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        for (int i = 0; i < nP; ++i) centers.push_back(candidates[pick(rng)]);
    }
    std::sort(centers.begin(), centers.end());

    std::vector<Patch> out;
    out.reserve(nP);
    for (const Point& c : centers) {
        CharacterBox box;
        box.cgRow = c.row;
        box.cgCol = c.col;
        out.push_back(extractPatchChar(page, box, cfg));
    }
    return out;
}

}  // namespace scriptrace
