#include "stlwsm/patching.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace stlwsm {

std::vector<std::size_t> grid_positions(std::size_t length, std::size_t side, std::size_t step) {
    if (step == 0)
        throw std::invalid_argument("grid_positions: step must be at least 1");
    if (side == 0 || side > length)
        throw std::invalid_argument("grid_positions: patch side " + std::to_string(side) +
                                    " does not fit length " + std::to_string(length));
    std::vector<std::size_t> pos;
    const std::size_t last = length - side;
    for (std::size_t x = 0; x <= last; x += step)
        pos.push_back(x);
    if (pos.back() != last)
        pos.push_back(last);
    return pos;
}

PatchSet extract_patches(const Image& img, std::size_t side, std::size_t step) {
    if (img.channels() != 1)
        throw std::invalid_argument("extract_patches: single-channel image required");
    if (side == 0 || side > std::min(img.width(), img.height()))
        throw std::invalid_argument("extract_patches: patch side " + std::to_string(side) +
                                    " larger than image " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()));

    PatchSet ps;
    ps.side = side;
    ps.step = step;
    ps.image_width = img.width();
    ps.image_height = img.height();
    ps.row_positions = grid_positions(img.height(), side, step);
    ps.col_positions = grid_positions(img.width(), side, step);

    const std::size_t n = ps.row_positions.size() * ps.col_positions.size();
    ps.coords.reserve(n);
    ps.patches.resize(static_cast<Eigen::Index>(side * side), static_cast<Eigen::Index>(n));

    Eigen::Index j = 0;
    for (std::size_t r0 : ps.row_positions) {
        for (std::size_t c0 : ps.col_positions) {
            ps.coords.push_back({r0, c0});
            Eigen::Index k = 0;
            for (std::size_t r = 0; r < side; ++r)
                for (std::size_t c = 0; c < side; ++c)
                    ps.patches(k++, j) = img.at(r0 + r, c0 + c);
            ++j;
        }
    }
    return ps;
}

std::vector<std::size_t> reference_indices(const PatchSet& ps, std::size_t stride) {
    if (stride == 0)
        throw std::invalid_argument("reference_indices: stride must be at least 1");
    auto pick = [stride](std::size_t count) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < count; i += stride)
            out.push_back(i);
        if (out.back() != count - 1)
            out.push_back(count - 1);
        return out;
    };
    const auto rows = pick(ps.row_positions.size());
    const auto cols = pick(ps.col_positions.size());
    std::vector<std::size_t> refs;
    refs.reserve(rows.size() * cols.size());
    for (std::size_t r : rows)
        for (std::size_t c : cols)
            refs.push_back(ps.index_of(r, c));
    return refs;
}

namespace {

std::pair<std::size_t, std::size_t> position_range(const std::vector<std::size_t>& pos,
                                                   std::size_t center, std::size_t radius) {
    const std::size_t lo_val = center > radius ? center - radius : 0;
    const std::size_t hi_val = center + radius;
    const auto lo = std::lower_bound(pos.begin(), pos.end(), lo_val);
    const auto hi = std::upper_bound(pos.begin(), pos.end(), hi_val);
    return {static_cast<std::size_t>(lo - pos.begin()), static_cast<std::size_t>(hi - pos.begin())};
}

} // namespace

PatchGroup group_similar(const PatchSet& ps, std::size_t reference_index, std::size_t m,
                         std::size_t search_radius) {
    if (reference_index >= ps.count())
        throw std::out_of_range("group_similar: reference index out of range");
    if (m == 0)
        throw std::invalid_argument("group_similar: group size must be at least 1");
    if (m > ps.count())
        throw GroupingError("group_similar: requested " + std::to_string(m) +
                            " patches but the image only has " + std::to_string(ps.count()));

    const PatchCoord ref = ps.coords[reference_index];
    auto [r_lo, r_hi] = position_range(ps.row_positions, ref.row, search_radius);
    auto [c_lo, c_hi] = position_range(ps.col_positions, ref.col, search_radius);
    if ((r_hi - r_lo) * (c_hi - c_lo) < m) {
        r_lo = c_lo = 0;
        r_hi = ps.row_positions.size();
        c_hi = ps.col_positions.size();
    }

    const auto ref_col = ps.patches.col(static_cast<Eigen::Index>(reference_index));
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve((r_hi - r_lo) * (c_hi - c_lo));
    for (std::size_t r = r_lo; r < r_hi; ++r) {
        for (std::size_t c = c_lo; c < c_hi; ++c) {
            const std::size_t idx = ps.index_of(r, c);
            if (idx == reference_index)
                continue;
            const double d = (ps.patches.col(static_cast<Eigen::Index>(idx)) - ref_col).squaredNorm();
            cand.emplace_back(d, idx);
        }
    }

    const std::size_t keep = m - 1;
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end());

    PatchGroup g;
    g.reference_index = reference_index;
    g.member_indices.reserve(m);
    g.distances.reserve(m);
    g.member_indices.push_back(reference_index);
    g.distances.push_back(0.0);
    for (std::size_t k = 0; k < keep; ++k) {
        g.distances.push_back(cand[k].first);
        g.member_indices.push_back(cand[k].second);
    }
    g.data.resize(ps.patches.rows(), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k)
        g.data.col(static_cast<Eigen::Index>(k)) =
            ps.patches.col(static_cast<Eigen::Index>(g.member_indices[k]));
    return g;
}

Image aggregate(const PatchSet& ps, std::span<const GroupEstimate> estimates,
                const Image* fallback) {
    const std::size_t w = ps.image_width;
    const std::size_t h = ps.image_height;
    if (fallback && (fallback->width() != w || fallback->height() != h || fallback->channels() != 1))
        throw std::invalid_argument("aggregate: fallback image shape mismatch");

    std::vector<double> sum(w * h, 0.0);
    std::vector<double> weight(w * h, 0.0);
    const std::size_t side = ps.side;
    for (const GroupEstimate& est : estimates) {
        if (!est.group)
            throw std::invalid_argument("aggregate: estimate without group");
        const auto& members = est.group->member_indices;
        if (est.data.rows() != static_cast<Eigen::Index>(ps.dim()) ||
            est.data.cols() != static_cast<Eigen::Index>(members.size()))
            throw std::invalid_argument("aggregate: estimate shape does not match its group");
        for (std::size_t k = 0; k < members.size(); ++k) {
            const PatchCoord at = ps.coords[members[k]];
            const auto col = est.data.col(static_cast<Eigen::Index>(k));
            Eigen::Index i = 0;
            for (std::size_t r = 0; r < side; ++r) {
                const std::size_t base = (at.row + r) * w + at.col;
                for (std::size_t c = 0; c < side; ++c, ++i) {
                    sum[base + c] += est.weight * col(i);
                    weight[base + c] += est.weight;
                }
            }
        }
    }

    std::vector<double> out(w * h);
    for (std::size_t i = 0; i < w * h; ++i) {
        if (weight[i] > 0.0) {
            out[i] = sum[i] / weight[i];
        } else if (fallback) {
            out[i] = fallback->data()[i];
        } else {
            throw std::invalid_argument("aggregate: pixel (" + std::to_string(i / w) + "," +
                                        std::to_string(i % w) +
                                        ") is not covered and no fallback was given");
        }
    }
    return Image(w, h, 1, std::move(out));
}

} // namespace stlwsm
