#include "scriptrace/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scriptrace {

namespace {

struct CompInfo {
    BBox bbox;
    long area = 0;
    double sumRow = 0.0, sumCol = 0.0;
    double centroidRow() const { return sumRow / area; }
    double centroidCol() const { return sumCol / area; }
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

PageSegmentation segmentPage(const BinaryImage& img, const SegmentationConfig& cfg) {
    PageSegmentation out;
    const Labeling lab = labelComponents(img);
    if (lab.count == 0) return out;

    std::vector<CompInfo> comps(lab.count + 1);
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) {
            const int id = lab.at(r, c);
            if (id == 0) continue;
            comps[id].bbox.include(r, c);
            comps[id].area += 1;
            comps[id].sumRow += r;
            comps[id].sumCol += c;
        }

    // drop very small components (dots, dashes, noise)
    std::vector<double> areas;
    for (int id = 1; id <= lab.count; ++id)
        areas.push_back(static_cast<double>(comps[id].area));
    const double minArea = cfg.smallComponentAreaFactor * median(areas);
    std::vector<int> kept;
    for (int id = 1; id <= lab.count; ++id)
        if (comps[id].area >= minArea) kept.push_back(id);
    if (kept.empty()) return out;

    // line bands from the smoothed horizontal projection of retained ink
    std::vector<double> proj(img.height(), 0.0);
    for (int id : kept)
        for (int r = comps[id].bbox.top; r <= comps[id].bbox.bottom; ++r)
            proj[r] += 1.0;  // bbox-level projection is robust to thin joins
    std::vector<double> smooth(proj.size(), 0.0);
    const int win = 2;
    for (int r = 0; r < img.height(); ++r) {
        double s = 0.0;
        int n = 0;
        for (int k = -win; k <= win; ++k)
            if (r + k >= 0 && r + k < img.height()) {
                s += proj[r + k];
                ++n;
            }
        smooth[r] = s / n;
    }
    struct Band {
        int top, bottom;
    };
    std::vector<Band> bands;
    int start = -1;
    for (int r = 0; r <= img.height(); ++r) {
        const bool on = r < img.height() && smooth[r] > 0.0;
        if (on && start < 0) start = r;
        if (!on && start >= 0) {
            bands.push_back({start, r - 1});
            start = -1;
        }
    }

    auto bandOf = [&](double row) {
        int best = 0;
        double bestDist = 1e18;
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (row >= bands[b].top && row <= bands[b].bottom) return static_cast<int>(b);
            const double d = std::min(std::abs(row - bands[b].top),
                                      std::abs(row - bands[b].bottom));
            if (d < bestDist) {
                bestDist = d;
                best = static_cast<int>(b);
            }
        }
        return best;
    };

    std::vector<std::vector<int>> lineComps(bands.size());
    for (int id : kept) lineComps[bandOf(comps[id].centroidRow())].push_back(id);

    std::vector<double> charWidths;
    for (int id : kept) charWidths.push_back(comps[id].bbox.width());
    const double medianWidth = median(charWidths);

    for (std::size_t b = 0; b < bands.size(); ++b) {
        auto& ids = lineComps[b];
        if (ids.empty()) continue;
        TextLine line;
        for (int id : ids) {
            line.bbox.include(comps[id].bbox.top, comps[id].bbox.left);
            line.bbox.include(comps[id].bbox.bottom, comps[id].bbox.right);
            line.componentIds.push_back(id);
        }
        // least-squares slope through component centroids
        if (ids.size() >= 2) {
            double mr = 0, mc = 0;
            for (int id : ids) {
                mr += comps[id].centroidRow();
                mc += comps[id].centroidCol();
            }
            mr /= ids.size();
            mc /= ids.size();
            double num = 0, den = 0;
            for (int id : ids) {
                num += (comps[id].centroidCol() - mc) * (comps[id].centroidRow() - mr);
                den += (comps[id].centroidCol() - mc) * (comps[id].centroidCol() - mc);
            }
            line.skewProxy = den > 0 ? num / den : 0.0;
        }

        std::sort(ids.begin(), ids.end(), [&](int a, int bb) {
            return comps[a].bbox.left < comps[bb].bbox.left;
        });

        // characters: merge horizontally overlapping components
        std::vector<std::vector<int>> charGroups;
        for (int id : ids) {
            bool merged = false;
            for (auto& grp : charGroups) {
                for (int gid : grp) {
                    const int ov = std::min(comps[gid].bbox.right, comps[id].bbox.right) -
                                   std::max(comps[gid].bbox.left, comps[id].bbox.left) + 1;
                    const int minW =
                        std::min(comps[gid].bbox.width(), comps[id].bbox.width());
                    if (ov >= cfg.charOverlapFraction * minW) {
                        grp.push_back(id);
                        merged = true;
                        break;
                    }
                }
                if (merged) break;
            }
            if (!merged) charGroups.push_back({id});
        }
        std::vector<CharacterBox> lineChars;
        for (const auto& grp : charGroups) {
            CharacterBox cb;
            double area = 0;
            for (int id : grp) {
                cb.bbox.include(comps[id].bbox.top, comps[id].bbox.left);
                cb.bbox.include(comps[id].bbox.bottom, comps[id].bbox.right);
                cb.cgRow += comps[id].sumRow;
                cb.cgCol += comps[id].sumCol;
                area += comps[id].area;
            }
            cb.cgRow /= area;
            cb.cgCol /= area;
            lineChars.push_back(cb);
        }
        std::sort(lineChars.begin(), lineChars.end(),
                  [](const CharacterBox& a, const CharacterBox& bb) {
                      return a.bbox.left < bb.bbox.left;
                  });

        // words: break at gaps clearly larger than the within-line norm
        std::vector<double> gaps;
        for (std::size_t i = 1; i < lineChars.size(); ++i)
            gaps.push_back(std::max(
                0, lineChars[i].bbox.left - lineChars[i - 1].bbox.right - 1));
        const double medGap = median(gaps);
        BBox word;
        for (std::size_t i = 0; i < lineChars.size(); ++i) {
            if (i > 0) {
                const double gap = std::max(
                    0, lineChars[i].bbox.left - lineChars[i - 1].bbox.right - 1);
                if ((gap > cfg.wordGapFactor * medGap && gap > 0.0) ||
                    gap > medianWidth) {
                    out.words.push_back(word);
                    word = BBox{};
                }
            }
            word.include(lineChars[i].bbox.top, lineChars[i].bbox.left);
            word.include(lineChars[i].bbox.bottom, lineChars[i].bbox.right);
        }
        if (!word.empty()) out.words.push_back(word);

        out.lines.push_back(std::move(line));
        out.characters.insert(out.characters.end(), lineChars.begin(),
                              lineChars.end());
    }
    return out;
}

}  // namespace scriptrace
