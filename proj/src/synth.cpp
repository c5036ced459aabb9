#include "scriptrace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace scriptrace {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0,
                  std::uint64_t d = 0) {
    return mix(mix(mix(mix(a) ^ b) ^ c) ^ d);
}

struct Vec2 {
    double x = 0.0, y = 0.0;  // unit glyph box, y grows downward
};

struct Stroke {
    bool ring = false;
    Vec2 p0, p1, p2;        // quadratic Bezier
    Vec2 center;            // ring
    double rx = 0.0, ry = 0.0;
};

struct Glyph {
    std::vector<Stroke> strokes;
};

// Strokes follow writer-preferred directions with writer-specific bow, so
// every glyph of a writer shares the same orientation statistics while the
// glyph shapes still differ.
std::vector<Glyph> writerAlphabet(std::uint64_t seed, int writer, int nGlyphs) {
    std::mt19937_64 hand(key(seed, 0xA1FAB370, writer));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double kPi = 3.14159265358979323846;
    double prefAngle[3];
    for (double& a : prefAngle) a = 2.0 * kPi * u01(hand);
    const double bow = 0.08 + 0.30 * u01(hand);  // curvature preference
    const double bowSign = (hand() & 1) ? 1.0 : -1.0;
    const double ringAspect = 0.6 + 0.8 * u01(hand);

    std::vector<Glyph> alphabet;
    for (int g = 0; g < nGlyphs; ++g) {
        std::mt19937_64 rng(key(seed, 0xA1FAB371, writer, g));
        std::uniform_real_distribution<double> u(0.18, 0.82);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        Glyph glyph;
        Vec2 cur{u(rng), u(rng)};
        const int nStrokes = 4 + (coin(rng) < 0.5 ? 1 : 0);
        for (int s = 0; s < nStrokes; ++s) {
            const double phi =
                prefAngle[rng() % 3] + 0.22 * (coin(rng) - 0.5);
            const double len = 0.30 + 0.35 * coin(rng);
            Stroke st;
            st.p0 = cur;
            st.p2 = {std::clamp(cur.x + len * std::cos(phi), 0.05, 0.95),
                     std::clamp(cur.y + len * std::sin(phi), 0.05, 0.95)};
            const Vec2 mid{(st.p0.x + st.p2.x) / 2, (st.p0.y + st.p2.y) / 2};
            // perpendicular bow with the writer's habitual curvature
            const double dx = st.p2.x - st.p0.x, dy = st.p2.y - st.p0.y;
            st.p1 = {mid.x - bowSign * bow * dy, mid.y + bowSign * bow * dx};
            cur = st.p2;
            glyph.strokes.push_back(st);
        }
        if (coin(rng) < 0.55) {  // loops give DropStroke something to drop
            Stroke ring;
            ring.ring = true;
            ring.center = {u(rng), u(rng)};
            const double r = 0.10 + 0.12 * coin(rng);
            ring.rx = r;
            ring.ry = r * ringAspect;
            glyph.strokes.push_back(ring);
        }
        alphabet.push_back(glyph);
    }
    return alphabet;
}

struct StyleTransform {
    double shear = 0.0;       // x += shear * (y - 0.5)
    double rot = 0.0;         // radians about the glyph box center
    double scaleX = 1.0;      // about the glyph box center
    double scaleY = 1.0;
    double warpScale = 0.0;   // control point perturbation
    std::uint64_t warpKey = 0;
};

// Writer identity lives in slant, aspect, and stroke width (orientation
// statistics); the style adds severity-scaled offsets on top.
StyleTransform styleTransform(std::uint64_t seed, int writer, int styleIdx,
                              double severity) {
    StyleTransform t;
    std::mt19937_64 base(key(seed, 0x57E1E, writer));
    std::normal_distribution<double> n01(0.0, 1.0);
    const double baseSlant = 0.35 * n01(base);
    const double baseAspect = 0.40 * n01(base);  // log scaleY/scaleX
    const double baseRot = 0.45 * n01(base);

    // Global style-drift direction; medium and fast move along it in opposite
    // senses so the three styles average out at each writer's base, and the
    // shared direction keeps the combined-training bias writer-independent.
    // pure rotation: orientation histograms shift near-linearly, so the
    // combined-training centroid degrades every writer's template alike
    const double dirShear = 0.0, dirRot = 1.0, dirAspect = 0.0;
    // equal-and-opposite drift keeps the three-style mean at the base; the
    // growing warp term makes fast strictly the most perturbed style
    static constexpr double kDrift[3] = {0.0, 0.20, -0.20};
    static constexpr double kWarp[3] = {0.0, 0.025, 0.06};
    const double mag = severity * kDrift[styleIdx];
    t.shear = baseSlant + mag * dirShear;
    t.rot = baseRot + mag * dirRot;
    const double aspect = baseAspect + mag * dirAspect;
    t.scaleX = std::exp(-aspect / 2);
    t.scaleY = std::exp(aspect / 2);
    t.warpScale = severity * kWarp[styleIdx];
    t.warpKey = key(seed, 0x3A9B, writer, styleIdx);
    return t;
}

Vec2 warp(Vec2 p, const StyleTransform& t, int glyphIdx, int pointIdx) {
    if (t.warpScale > 0.0) {
        std::mt19937_64 rng(key(t.warpKey, glyphIdx, pointIdx));
        std::normal_distribution<double> n(0.0, t.warpScale);
        p.x += n(rng);
        p.y += n(rng);
    }
    p.x = 0.5 + (p.x - 0.5) * t.scaleX;
    p.y = 0.5 + (p.y - 0.5) * t.scaleY;
    const double ca = std::cos(t.rot), sa = std::sin(t.rot);
    const double dx = p.x - 0.5, dy = p.y - 0.5;
    p.x = 0.5 + ca * dx - sa * dy;
    p.y = 0.5 + sa * dx + ca * dy;
    p.x += t.shear * (p.y - 0.5);
    return p;
}

void stamp(GrayImage& img, double row, double col, int radius) {
    const int r0 = static_cast<int>(std::lround(row));
    const int c0 = static_cast<int>(std::lround(col));
    for (int r = r0 - radius; r <= r0 + radius; ++r)
        for (int c = c0 - radius; c <= c0 + radius; ++c) {
            if (r < 0 || r >= img.height() || c < 0 || c >= img.width()) continue;
            if ((r - r0) * (r - r0) + (c - c0) * (c - c0) <= radius * radius)
                img.at(r, c) = 25;
        }
}

// returns the stroke length drawn, in pixels
double drawGlyph(GrayImage& img, const Glyph& glyph, const StyleTransform& t,
                 int glyphIdx, double top, double left, double size,
                 int radius) {
    double length = 0.0;
    auto place = [&](Vec2 p) {
        return Vec2{left + p.x * size, top + p.y * size};  // x=col, y=row
    };
    for (std::size_t s = 0; s < glyph.strokes.size(); ++s) {
        const Stroke& st = glyph.strokes[s];
        Vec2 prev;
        const int steps = 48;
        for (int i = 0; i <= steps; ++i) {
            const double u = static_cast<double>(i) / steps;
            Vec2 p;
            if (st.ring) {
                const double a = 2.0 * 3.14159265358979323846 * u;
                p = {st.center.x + st.rx * std::cos(a),
                     st.center.y + st.ry * std::sin(a)};
                p = warp(p, t, glyphIdx, static_cast<int>(s) * 8 + 101);
                // keep the ring rigid: warp its center only
            } else {
                const Vec2 a = warp(st.p0, t, glyphIdx, static_cast<int>(s) * 8);
                const Vec2 b = warp(st.p1, t, glyphIdx, static_cast<int>(s) * 8 + 1);
                const Vec2 cpt = warp(st.p2, t, glyphIdx, static_cast<int>(s) * 8 + 2);
                const double v = 1.0 - u;
                p = {v * v * a.x + 2 * v * u * b.x + u * u * cpt.x,
                     v * v * a.y + 2 * v * u * b.y + u * u * cpt.y};
            }
            const Vec2 q = place(p);
            stamp(img, q.y, q.x, radius);
            if (i > 0) length += std::hypot(q.x - prev.x, q.y - prev.y);
            prev = q;
        }
    }
    return length;
}

}  // namespace

std::vector<SynthPage> synthPages(const SynthConfig& cfg) {
    if (cfg.writerCount < 2)
        throw std::invalid_argument("synthPages: writerCount must be >= 2");
    if (cfg.pagesPerStyle < 1 || cfg.glyphsPerLine < 1 || cfg.linesPerPage < 2)
        throw std::invalid_argument("synthPages: invalid layout");

    constexpr int kCell = 44, kLineH = 64, kMargin = 16, kGlyphSize = 36;
    const int width = 2 * kMargin + cfg.glyphsPerLine * kCell;
    const int height = 2 * kMargin + cfg.linesPerPage * kLineH;
    constexpr int kAlphabet = 8;

    std::vector<SynthPage> pages;
    for (int w = 0; w < cfg.writerCount; ++w) {
        const auto alphabet = writerAlphabet(cfg.seed, w, kAlphabet);
        std::mt19937_64 wrng(key(cfg.seed, 0xFACE, w));
        const int radius = 1 + static_cast<int>(wrng() % 3);
        std::normal_distribution<double> nf(1.0, 0.08);
        const double writerSpeedFactor = std::max(0.5, nf(wrng));

        char wid[16];
        std::snprintf(wid, sizeof wid, "w%02d", w);

        for (int styleIdx = 0; styleIdx < 3; ++styleIdx) {
            const Style style =
                styleIdx == 0 ? Style::Slow
                              : (styleIdx == 1 ? Style::Medium : Style::Fast);
            const auto transform =
                styleTransform(cfg.seed, w, styleIdx, cfg.styleSeverity);
            for (int p = 0; p < cfg.pagesPerStyle; ++p) {
                SynthPage page;
                page.writerId = wid;
                page.style = style;
                page.pageIndex = p;
                page.pageId =
                    std::string(wid) + "-" + styleName(style) + "-p" +
                    std::to_string(p);
                page.image = GrayImage(width, height, 235);

                // content stream is style-independent on purpose
                std::mt19937_64 content(key(cfg.seed, 0xC0137E17, w, p));
                std::uniform_int_distribution<int> pickGlyph(0, kAlphabet - 1);
                std::uniform_int_distribution<int> jitter(-2, 2);
                for (int line = 0; line < cfg.linesPerPage; ++line)
                    for (int slot = 0; slot < cfg.glyphsPerLine; ++slot) {
                        const int g = pickGlyph(content);
                        const double top =
                            kMargin + line * kLineH + 10 + jitter(content);
                        const double left =
                            kMargin + slot * kCell + 2 + jitter(content);
                        page.strokeLengthPx +=
                            drawGlyph(page.image, alphabet[g], transform, g,
                                      top, left, kGlyphSize, radius);
                    }

                static constexpr double kSpeed[3] = {70.0, 100.0, 140.0};
                std::mt19937_64 speedRng(key(cfg.seed, 0x5EED5, w, styleIdx * 97 + p));
                std::uniform_real_distribution<double> u01(0.0, 1.0);
                // page jitter stratified by page index so per-style speeds
                // always spread wider than the threshold rounding
                const double jitterFactor =
                    0.92 + 0.16 * (p + u01(speedRng)) / cfg.pagesPerStyle;
                const double speed =
                    kSpeed[styleIdx] * writerSpeedFactor * jitterFactor;
                page.elapsedSeconds = page.strokeLengthPx / speed;
                pages.push_back(std::move(page));
            }
        }
    }
    return pages;
}

}  // namespace scriptrace
