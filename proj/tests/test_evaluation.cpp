#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <shadowdecomp/evaluation.hpp>
#include <shadowdecomp/serialize.hpp>

#include "test_support.hpp"

using namespace shadowdecomp;
using namespace shadowdecomp::testing;

TEST(EvaluatePair, IdenticalImagesScoreZero) {
    std::mt19937_64 rng(1);
    const ImageBuf img = random_image(rng, 40, 30);
    const EvalReport r = evaluate_pair(img, img, rect_mask(40, 30, 10, 10, 15, 10));
    EXPECT_EQ(r.rmse_shadow, 0.0);
    EXPECT_EQ(r.rmse_nonshadow, 0.0);
    EXPECT_EQ(r.rmse_all, 0.0);
    EXPECT_EQ(r.n_shadow_px + r.n_nonshadow_px, kEvalSize * kEvalSize);
}

TEST(EvaluatePair, BlackVersusWhite) {
    // Only L differs, by 100: sqrt(100^2 / 3).
    const EvalReport r = evaluate_pair(constant_image(8, 8, 0.0), constant_image(8, 8, 1.0), MaskBuf(8, 8, 1.0));
    EXPECT_NEAR(r.rmse_shadow, 100.0 / std::sqrt(3.0), 0.01);
    EXPECT_NEAR(r.rmse_all, r.rmse_shadow, 1e-12);
    EXPECT_TRUE(std::isnan(r.rmse_nonshadow));
    EXPECT_EQ(r.n_nonshadow_px, 0u);
    const EvalReport mae =
        evaluate_pair(constant_image(8, 8, 0.0), constant_image(8, 8, 1.0), MaskBuf(8, 8, 1.0), Metric::mae);
    EXPECT_NEAR(mae.rmse_shadow, 100.0 / 3.0, 0.01);
    EXPECT_EQ(mae.metric_variant, Metric::mae);
}

TEST(EvaluatePair, SymmetricAndRegionConsistent) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const ImageBuf a = random_image(rng, 60, 45);
        const ImageBuf b = random_image(rng, 60, 45);
        const MaskBuf m = random_mask(rng, 60, 45, 0.3);
        const EvalReport ab = evaluate_pair(a, b, m);
        const EvalReport ba = evaluate_pair(b, a, m);
        EXPECT_DOUBLE_EQ(ab.rmse_shadow, ba.rmse_shadow);
        EXPECT_DOUBLE_EQ(ab.rmse_all, ba.rmse_all);
        const double lhs = ab.rmse_all * ab.rmse_all * 3.0 * static_cast<double>(ab.n_shadow_px + ab.n_nonshadow_px);
        const double rhs = ab.rmse_shadow * ab.rmse_shadow * 3.0 * static_cast<double>(ab.n_shadow_px) +
                           ab.rmse_nonshadow * ab.rmse_nonshadow * 3.0 * static_cast<double>(ab.n_nonshadow_px);
        EXPECT_NEAR(lhs, rhs, 1e-6 * rhs);
    }
}

TEST(EvaluatePair, LargerShadowErrorNeverScoresLower) {
    std::mt19937_64 rng(3);
    const ImageBuf gt = random_image(rng, 32, 32, 0.2, 0.6);
    const MaskBuf m = rect_mask(32, 32, 8, 8, 16, 16);
    double previous = 0.0;
    for (double shift : {0.0, 0.05, 0.1, 0.2}) {
        ImageBuf result = gt;
        for (std::size_t i = 0; i < result.pixel_count(); ++i)
            if (m(i) == 1.0)
                for (std::size_t k = 0; k < 3; ++k) result(i, k) += shift;
        const double v = evaluate_pair(result, gt, m).rmse_shadow;
        EXPECT_GE(v, previous);
        previous = v;
    }
}

TEST(Pool, PixelAndImagePooling) {
    // Two images with equal region sizes and per-image MSE m1, m2.
    ErrorSums a{3.0 * 100 * 4.0, 3.0 * 50 * 1.0, 100, 50};
    ErrorSums b{3.0 * 100 * 9.0, 3.0 * 50 * 4.0, 100, 50};
    const EvalReport pixel = pool({a, b}, Pooling::pixel, Metric::rmse);
    EXPECT_NEAR(pixel.rmse_shadow, std::sqrt((4.0 + 9.0) / 2.0), 1e-12);
    EXPECT_NEAR(pixel.rmse_nonshadow, std::sqrt((1.0 + 4.0) / 2.0), 1e-12);
    EXPECT_EQ(pixel.n_shadow_px, 200u);
    const EvalReport image = pool({a, b}, Pooling::image, Metric::rmse);
    EXPECT_NEAR(image.rmse_shadow, (2.0 + 3.0) / 2.0, 1e-12);
    EXPECT_NEAR(image.rmse_nonshadow, (1.0 + 2.0) / 2.0, 1e-12);
    EXPECT_EQ(image.image_count, 2u);
}

TEST(Pool, SingleImageEqualsPair) {
    std::mt19937_64 rng(4);
    const ImageBuf a = random_image(rng, 20, 20);
    const ImageBuf b = random_image(rng, 20, 20);
    const MaskBuf m = random_mask(rng, 20, 20);
    const EvalReport direct = evaluate_pair(a, b, m);
    for (Pooling p : {Pooling::pixel, Pooling::image}) {
        const EvalReport pooled = pool({error_sums(a, b, m)}, p, Metric::rmse);
        EXPECT_DOUBLE_EQ(pooled.rmse_shadow, direct.rmse_shadow);
        EXPECT_DOUBLE_EQ(pooled.rmse_all, direct.rmse_all);
    }
}

TEST(EvalReportJson, NanBecomesNull) {
    EvalReport r;
    r.rmse_nonshadow = std::nan("");
    const json j = r;
    EXPECT_TRUE(j.at("rmse_nonshadow").is_null());
    EXPECT_EQ(j.at("metric_variant"), "rmse");
    EXPECT_NE(j.at("notes").get<std::string>().find("sRGB"), std::string::npos);
}

TEST(EvaluatePair, RejectsNonBinaryMask) {
    EXPECT_THROW((void)evaluate_pair(ImageBuf(4, 4), ImageBuf(4, 4), MaskBuf(4, 4, 0.5)), ValidationError);
}
