#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scriptrace/imaging.hpp"
#include "scriptrace/segmentation.hpp"

namespace scriptrace {

struct PatchConfig {
    int nChar = 116;
    int nAllo() const { return nChar / 2; }
    int padEachSide() const { return (nChar - nAllo()) / 2; }
    int padTo() const { return nChar; }
};

enum class PatchKind { Char, Allo };

struct Patch {
    std::string sourceSampleId;
    Point center;
    PatchKind kind = PatchKind::Char;
    BinaryImage pixels;  // padTo x padTo
};

// nChar x nChar window centered at the character's center of gravity;
// out-of-page area zero-filled.
Patch extractPatchChar(const BinaryImage& page, const CharacterBox& box,
                       const PatchConfig& cfg);

// nAllo x nAllo window centered at the keypoint, embedded in a padTo x padTo
// zero canvas with a border of padEachSide() pixels.
Patch extractPatchAllo(const BinaryImage& page, const Keypoint& kp,
                       const PatchConfig& cfg);

// char mode samples character centers; arbitrary mode samples ink pixels.
enum class PatchSource { Characters, Arbitrary };

// Deterministic for a given seed; without replacement when enough candidates
// exist, with replacement otherwise. Output ordered by patch center (row,col).
// Throws "samplePatches: NoInk" when there are no candidates.
std::vector<Patch> samplePatches(const BinaryImage& page,
                                 const PageSegmentation& seg, int nP,
                                 std::uint64_t seed,
                                 const PatchConfig& cfg = {},
                                 PatchSource source = PatchSource::Characters);

}  // namespace scriptrace
