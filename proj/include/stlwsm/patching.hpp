#pragma once

#include "stlwsm/image.hpp"
#include "stlwsm/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace stlwsm {

struct PatchCoord {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const PatchCoord&, const PatchCoord&) = default;
};

/// All side x side windows of a single-channel image on a sliding grid.
/// Column j of `patches` is the row-major vectorization of the window whose
/// top-left corner is coords[j]; columns are ordered row position major.
struct PatchSet {
    std::size_t side = 0;
    std::size_t step = 0;
    std::size_t image_width = 0;
    std::size_t image_height = 0;
    std::vector<std::size_t> row_positions;
    std::vector<std::size_t> col_positions;
    std::vector<PatchCoord> coords;
    Matrix patches;

    std::size_t dim() const noexcept { return side * side; }
    std::size_t count() const noexcept { return coords.size(); }
    std::size_t index_of(std::size_t row_pos, std::size_t col_pos) const noexcept {
        return row_pos * col_positions.size() + col_pos;
    }
};

struct PatchGroup {
    std::size_t reference_index = 0;
    std::vector<std::size_t> member_indices;
    std::vector<double> distances; ///< squared Euclidean, parallel to member_indices
    Matrix data;                   ///< p x M, column k = patch member_indices[k]
};

/// Denoised columns for one group, placed back at the members' windows.
struct GroupEstimate {
    const PatchGroup* group = nullptr;
    Matrix data;
    double weight = 1.0;
};

/// Window offsets 0, step, 2*step, ... plus the final offset length - side,
/// so that every pixel is covered.
std::vector<std::size_t> grid_positions(std::size_t length, std::size_t side, std::size_t step);

PatchSet extract_patches(const Image& img, std::size_t side, std::size_t step);

/// Reference patches: every `stride`-th grid position along each axis, plus
/// the last position on each axis.
std::vector<std::size_t> reference_indices(const PatchSet& ps, std::size_t stride);

class GroupingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The m patches nearest to the reference (squared Euclidean distance over the
/// patch vectors) among candidates whose top-left corner lies within
/// search_radius (Chebyshev) of the reference corner. The reference is always
/// first; the rest follow by ascending (distance, index). If the window holds
/// fewer than m candidates the search widens to the whole image.
PatchGroup group_similar(const PatchSet& ps, std::size_t reference_index, std::size_t m,
                         std::size_t search_radius);

/// Uniform-weight overlap averaging of group estimates. Pixels no estimate
/// touches take their value from `fallback`; without a fallback such a gap is
/// an error.
Image aggregate(const PatchSet& ps, std::span<const GroupEstimate> estimates,
                const Image* fallback);

} // namespace stlwsm
