#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "videocot/metrics.hpp"

using namespace videocot;

TEST_SUITE_BEGIN("metrics");

namespace {

BoundingBox box(double x0, double y0, double x1, double y1,
                CoordSpace space = CoordSpace::pixel) {
    BoundingBox b;
    b.x_min = x0;
    b.y_min = y0;
    b.x_max = x1;
    b.y_max = y1;
    b.space = space;
    return b;
}

}  // namespace

TEST_CASE("box_iou basics") {
    CHECK(box_iou(box(0, 0, 2, 2), box(0, 0, 2, 2)) == doctest::Approx(1.0));
    CHECK(box_iou(box(0, 0, 1, 1), box(5, 5, 6, 6)) == 0.0);
    // (0,0,2,2) vs (1,1,3,3): inter 1, union 4+4-1=7; rasterized oracle agrees
    const double iou = box_iou(box(0, 0, 2, 2), box(1, 1, 3, 3));
    CHECK(iou == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(iou ==
          doctest::Approx(testsupport::box_iou_rasterized(box(0, 0, 2, 2), box(1, 1, 3, 3), 8))
              .epsilon(1e-12));
    // touching edges: zero-area intersection
    CHECK(box_iou(box(0, 0, 1, 1), box(1, 0, 2, 1)) == 0.0);
}

TEST_CASE("box_iou rejects mixed coordinate spaces and bad boxes") {
    CHECK_THROWS_AS(box_iou(box(0, 0, 1, 1), box(0, 0, 1, 1, CoordSpace::normalized)),
                    DomainError);
    CHECK_THROWS_AS(box_iou(box(2, 0, 1, 1), box(0, 0, 1, 1)), DomainError);
}

TEST_CASE("box_iou agrees with the rasterized oracle on randomized dyadic boxes") {
    std::mt19937_64 rng(11);
    auto coord = [&](double lo, double hi) {
        // multiples of 1/8 keep the 8x-scaled raster exact
        const double step = 0.125;
        const long long n = static_cast<long long>((hi - lo) / step);
        return lo + step * static_cast<double>(rng() % n);
    };
    for (int iter = 0; iter < 2000; ++iter) {
        const double ax0 = coord(0, 24), ay0 = coord(0, 24);
        const double bx0 = coord(0, 24), by0 = coord(0, 24);
        const BoundingBox a = box(ax0, ay0, ax0 + coord(0.125, 8), ay0 + coord(0.125, 8));
        const BoundingBox b = box(bx0, by0, bx0 + coord(0.125, 8), by0 + coord(0.125, 8));
        const double kernel = box_iou(a, b);
        const double oracle = testsupport::box_iou_rasterized(a, b, 8);
        CHECK(kernel == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(kernel == doctest::Approx(box_iou(b, a)).epsilon(1e-15));  // symmetric
        CHECK(kernel >= 0.0);
        CHECK(kernel <= 1.0);
    }
}

TEST_CASE("temporal_iou uses closed-interval lengths") {
    const TemporalSpan a{NormFrame{5}, NormFrame{10}};
    CHECK(temporal_iou(a, a) == 1.0);
    CHECK(temporal_iou(a, {NormFrame{10}, NormFrame{12}}) ==
          doctest::Approx(1.0 / 8.0));  // single shared frame
    CHECK(temporal_iou({NormFrame{0}, NormFrame{3}}, {NormFrame{10}, NormFrame{12}}) == 0.0);
    // [5,10] vs [8,12]: inter {8,9,10}cardinality 3, union {5..12} cardinality 8
    const double v = temporal_iou(a, {NormFrame{8}, NormFrame{12}});
    CHECK(v == doctest::Approx(3.0 / 8.0));
    CHECK(v == doctest::Approx(testsupport::temporal_iou_enumerated(
              a, {NormFrame{8}, NormFrame{12}})));
}

TEST_CASE("temporal_iou agrees with frame-set enumeration on random spans") {
    std::mt19937_64 rng(17);
    auto span = [&] {
        int a = static_cast<int>(rng() % 32);
        int b = static_cast<int>(rng() % 32);
        if (a > b) std::swap(a, b);
        return TemporalSpan{NormFrame{a}, NormFrame{b}};
    };
    for (int iter = 0; iter < 3000; ++iter) {
        const TemporalSpan p = span(), g = span();
        const double kernel = temporal_iou(p, g);
        CHECK(kernel == doctest::Approx(testsupport::temporal_iou_enumerated(p, g))
                            .epsilon(1e-12));
        CHECK(kernel == temporal_iou(g, p));
    }
}

TEST_CASE("keyframe_recall membership counting") {
    const TemporalSpan w{NormFrame{5}, NormFrame{10}};
    const std::set<NormFrame> keys{NormFrame{3}, NormFrame{6}, NormFrame{9}, NormFrame{14}};
    CHECK(keyframe_recall(w, keys) == doctest::Approx(0.5));
    CHECK(keyframe_recall({NormFrame{0}, NormFrame{31}}, keys) == 1.0);
    CHECK(keyframe_recall({NormFrame{20}, NormFrame{25}}, keys) == 0.0);
    CHECK_THROWS_AS(keyframe_recall(w, {}), DomainError);
}

TEST_CASE("keyframe_recall agrees with enumeration on random inputs") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 2000; ++iter) {
        int a = static_cast<int>(rng() % 32);
        int b = static_cast<int>(rng() % 32);
        if (a > b) std::swap(a, b);
        std::set<NormFrame> keys;
        const int n = 1 + static_cast<int>(rng() % 6);
        while (static_cast<int>(keys.size()) < n)
            keys.insert(NormFrame{static_cast<int>(rng() % 32)});
        const TemporalSpan w{NormFrame{a}, NormFrame{b}};
        CHECK(keyframe_recall(w, keys) ==
              doctest::Approx(testsupport::recall_enumerated(w, keys)).epsilon(1e-12));
    }
}

TEST_SUITE_END();
