#include "stlwsm/patching.hpp"
#include "stlwsm/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace stlwsm;

namespace {

Image random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    Rng rng(seed);
    Image img(w, h, 1);
    for (double& v : img.data())
        v = 255.0 * rng.uniform();
    return img;
}

// Every patch, each as its own single-member group, unmodified.
Image identity_roundtrip(const Image& img, std::size_t side, std::size_t step) {
    const PatchSet ps = extract_patches(img, side, step);
    std::vector<PatchGroup> groups(ps.count());
    std::vector<GroupEstimate> est(ps.count());
    for (std::size_t j = 0; j < ps.count(); ++j) {
        groups[j].reference_index = j;
        groups[j].member_indices = {j};
        groups[j].data = ps.patches.col(static_cast<Eigen::Index>(j));
        est[j] = {&groups[j], groups[j].data, 1.0};
    }
    return aggregate(ps, est, nullptr);
}

} // namespace

TEST(Grid, EdgeCompletion) {
    EXPECT_EQ(grid_positions(8, 8, 1), (std::vector<std::size_t>{0}));
    EXPECT_EQ(grid_positions(9, 8, 4), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(grid_positions(10, 3, 3), (std::vector<std::size_t>{0, 3, 6, 7}));
    EXPECT_EQ(grid_positions(9, 3, 3), (std::vector<std::size_t>{0, 3, 6}));
    EXPECT_THROW(grid_positions(4, 5, 1), std::invalid_argument);
    EXPECT_THROW(grid_positions(4, 2, 0), std::invalid_argument);
}

TEST(Extract, WholeImageSinglePatch) {
    const Image img = random_image(8, 8, 1);
    const PatchSet ps = extract_patches(img, 8, 1);
    ASSERT_EQ(ps.count(), 1u);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            EXPECT_EQ(ps.patches(static_cast<Eigen::Index>(r * 8 + c), 0), img.at(r, c));
}

TEST(Extract, NineByNineStepFour) {
    const PatchSet ps = extract_patches(random_image(9, 9, 2), 8, 4);
    EXPECT_EQ(ps.count(), 4u);
    EXPECT_EQ(ps.coords[3], (PatchCoord{1, 1}));
}

TEST(Extract, ColumnsCopyWindows) {
    const Image img = random_image(13, 11, 3);
    const PatchSet ps = extract_patches(img, 4, 3);
    EXPECT_EQ(ps.count(), ps.row_positions.size() * ps.col_positions.size());
    for (std::size_t j = 0; j < ps.count(); ++j) {
        const auto [r0, c0] = ps.coords[j];
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                ASSERT_EQ(ps.patches(static_cast<Eigen::Index>(r * 4 + c), static_cast<Eigen::Index>(j)),
                          img.at(r0 + r, c0 + c));
    }
    EXPECT_THROW(extract_patches(img, 12, 1), std::invalid_argument);
}

TEST(Aggregate, IdentityRoundTrip) {
    for (auto [side, step] : {std::pair<std::size_t, std::size_t>{4, 1}, {5, 3}, {6, 6}, {7, 2}}) {
        const Image img = random_image(23, 19, side);
        const Image back = identity_roundtrip(img, side, step);
        double err = 0;
        for (std::size_t i = 0; i < img.size(); ++i)
            err = std::max(err, std::abs(back.data()[i] - img.data()[i]));
        EXPECT_LT(err, 1e-12);
    }
}

TEST(Aggregate, AveragesOverlapsAndUsesFallback) {
    const Image img(4, 4, 1, 0.0);
    const PatchSet ps = extract_patches(img, 2, 1);
    PatchGroup g;
    g.reference_index = ps.index_of(0, 0);
    g.member_indices = {ps.index_of(0, 0), ps.index_of(0, 1)};
    Matrix data(4, 2);
    data.col(0).setConstant(2.0);
    data.col(1).setConstant(4.0);
    const GroupEstimate est{&g, data, 1.0};
    const Image fallback(4, 4, 1, -1.0);
    const Image out = aggregate(ps, std::span(&est, 1), &fallback);
    EXPECT_EQ(out.at(0, 0), 2.0);
    EXPECT_EQ(out.at(0, 1), 3.0); // covered by both windows
    EXPECT_EQ(out.at(1, 2), 4.0);
    EXPECT_EQ(out.at(3, 3), -1.0);
    EXPECT_THROW(aggregate(ps, std::span(&est, 1), nullptr), std::invalid_argument);
}

TEST(Aggregate, LinearInData) {
    const Image img = random_image(10, 10, 5);
    const PatchSet ps = extract_patches(img, 3, 1);
    const auto refs = reference_indices(ps, 1);
    std::vector<PatchGroup> groups;
    for (std::size_t r : refs)
        groups.push_back(group_similar(ps, r, 4, 40));
    auto run = [&](double a) {
        std::vector<GroupEstimate> est;
        for (const auto& g : groups)
            est.push_back({&g, a * g.data + Matrix::Constant(g.data.rows(), g.data.cols(), 1.0), 1.0});
        return aggregate(ps, est, nullptr);
    };
    const Image one = run(1.0), two = run(2.0), zero = run(0.0);
    for (std::size_t i = 0; i < img.size(); ++i)
        EXPECT_NEAR(two.data()[i] - one.data()[i], one.data()[i] - zero.data()[i], 1e-9);
}

TEST(References, StrideAndLastPosition) {
    const PatchSet ps = extract_patches(random_image(20, 20, 6), 6, 1); // 15 positions per axis
    const auto refs = reference_indices(ps, 3);
    // positions 0,3,6,9,12 plus 14 on each axis
    EXPECT_EQ(refs.size(), 36u);
    EXPECT_EQ(refs.front(), ps.index_of(0, 0));
    EXPECT_EQ(refs.back(), ps.index_of(14, 14));
}

TEST(Group, ReferenceFirstAndSorted) {
    const Image img = random_image(30, 30, 7);
    const PatchSet ps = extract_patches(img, 5, 1);
    const std::size_t ref = ps.index_of(10, 12);
    const PatchGroup g = group_similar(ps, ref, 20, 8);
    ASSERT_EQ(g.member_indices.size(), 20u);
    EXPECT_EQ(g.member_indices[0], ref);
    EXPECT_EQ(g.distances[0], 0.0);
    for (std::size_t k = 1; k < g.distances.size(); ++k) {
        EXPECT_LE(g.distances[k - 1], g.distances[k]);
        const auto c = ps.coords[g.member_indices[k]];
        EXPECT_LE(std::max(c.row > 10 ? c.row - 10 : 10 - c.row, c.col > 12 ? c.col - 12 : 12 - c.col), 8u);
    }
    for (std::size_t k = 0; k < 20; ++k)
        EXPECT_EQ(g.data.col(static_cast<Eigen::Index>(k)),
                  ps.patches.col(static_cast<Eigen::Index>(g.member_indices[k])));
}

TEST(Group, BruteForceNearest) {
    const Image img = random_image(16, 16, 8);
    const PatchSet ps = extract_patches(img, 4, 1);
    const std::size_t ref = 17;
    const PatchGroup g = group_similar(ps, ref, 10, 100);
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < ps.count(); ++j)
        all.push_back({(ps.patches.col(static_cast<Eigen::Index>(j)) - ps.patches.col(ref)).squaredNorm(), j});
    std::sort(all.begin(), all.end());
    for (std::size_t k = 0; k < 10; ++k)
        EXPECT_EQ(g.member_indices[k], all[k].second);
}

TEST(Group, TiesBrokenByIndexAndAllCandidates) {
    Image img(9, 3, 1, 0.0);
    // period 3 along columns: the windows at columns 0, 3 and 6 are identical
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 9; ++c)
            img.at(r, c) = static_cast<double>((c % 3) * 7 + r * 20);
    const PatchSet ps = extract_patches(img, 3, 1);
    const PatchGroup g = group_similar(ps, ps.index_of(0, 3), 3, 40);
    EXPECT_EQ(g.member_indices, (std::vector<std::size_t>{ps.index_of(0, 3), ps.index_of(0, 0), ps.index_of(0, 6)}));
    EXPECT_EQ(g.distances, (std::vector<double>{0.0, 0.0, 0.0}));

    const PatchGroup everything = group_similar(ps, 0, ps.count(), 40);
    EXPECT_EQ(everything.member_indices.size(), ps.count());
}

TEST(Group, WidensWindowThenFails) {
    const PatchSet ps = extract_patches(random_image(20, 20, 9), 4, 1);
    const PatchGroup g = group_similar(ps, 0, 50, 1); // window holds only 4 candidates
    EXPECT_EQ(g.member_indices.size(), 50u);
    EXPECT_THROW(group_similar(ps, 0, ps.count() + 1, 1), GroupingError);
}
