#include <doctest.h>

#include <random>

#include "videocot/model.hpp"
#include "videocot/util.hpp"

using namespace videocot;

TEST_SUITE_BEGIN("model");

TEST_CASE("normalize_frame_index endpoints and midpoint") {
    CHECK(normalize_frame_index(0, 64).index == 0);
    CHECK(normalize_frame_index(63, 64).index == 31);
    // round(32 * 31 / 63) = round(15.746...) = 16
    CHECK(normalize_frame_index(32, 64).index == 16);
    CHECK(normalize_frame_index(0, 1).index == 0);
    CHECK(normalize_frame_index(0, 2).index == 0);
    CHECK(normalize_frame_index(1, 2).index == 31);
}

TEST_CASE("normalize_frame_index rejects out-of-range frames") {
    CHECK_THROWS_AS(normalize_frame_index(-1, 64), DomainError);
    CHECK_THROWS_AS(normalize_frame_index(64, 64), DomainError);
    CHECK_THROWS_AS(normalize_frame_index(0, 0), DomainError);
    // the error names the offending index
    try {
        normalize_frame_index(99, 10);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
}

TEST_CASE("normalize_frame_index ties round half-up") {
    // f*31/(t-1) = 0.5 exactly at f=1, t=63
    CHECK(normalize_frame_index(1, 63).index == 1);
}

TEST_CASE("normalize_frame_index is total, monotone, surjective for t >= 32") {
    for (long long total : {1LL, 2LL, 5LL, 31LL, 32LL, 33LL, 64LL, 100LL, 307LL}) {
        int prev = 0;
        std::set<int> seen;
        for (long long f = 0; f < total; ++f) {
            const int idx = normalize_frame_index(f, total).index;
            CHECK(idx >= 0);
            CHECK(idx <= 31);
            CHECK(idx >= prev);
            prev = idx;
            seen.insert(idx);
        }
        if (total >= 32) CHECK(seen.size() == 32);
    }
}

TEST_CASE("denormalize_span endpoints") {
    CHECK(denormalize_span({NormFrame{0}, NormFrame{31}}, 64) ==
          std::pair<long long, long long>(0, 63));
    CHECK(denormalize_span({NormFrame{0}, NormFrame{0}}, 1) ==
          std::pair<long long, long long>(0, 0));
}

TEST_CASE("denormalize_span inverts the rounding map (enumeration oracle)") {
    // oracle: enumerate raw frames mapping to norm index 16 for t=64
    std::vector<long long> preimage;
    for (long long f = 0; f < 64; ++f)
        if (normalize_frame_index(f, 64).index == 16) preimage.push_back(f);
    REQUIRE(!preimage.empty());
    const auto [lo, hi] = denormalize_span({NormFrame{16}, NormFrame{16}}, 64);
    CHECK(lo == preimage.front());
    CHECK(hi == preimage.back());
    CHECK(lo <= 32);
    CHECK(32 <= hi);  // raw frame 32 is in the interval
}

TEST_CASE("denormalize then normalize is the identity on span endpoints") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 500; ++iter) {
        const long long total = 32 + static_cast<long long>(rng() % 500);
        int a = static_cast<int>(rng() % 32);
        int b = static_cast<int>(rng() % 32);
        if (a > b) std::swap(a, b);
        const TemporalSpan span{NormFrame{a}, NormFrame{b}};
        const auto [lo, hi] = denormalize_span(span, total);
        CHECK(normalize_frame_index(lo, total).index == a);
        CHECK(normalize_frame_index(hi, total).index == b);
    }
}

namespace {

SceneGraph valid_graph() {
    SceneGraph sg;
    sg.video_id = "v";
    ObjectTrack obj;
    obj.object_id = "o0";
    obj.label = "cup";
    BoundingBox box;
    box.x_min = 0;
    box.y_min = 0;
    box.x_max = 10;
    box.y_max = 10;
    obj.track[NormFrame{3}] = box;
    sg.objects.push_back(obj);
    ActionSpan act;
    act.label = "holding the cup";
    act.span = {NormFrame{2}, NormFrame{6}};
    act.key_frames = {NormFrame{3}};
    sg.actions.push_back(act);
    Relation rel;
    rel.subject_id = "o0";
    rel.predicate = "touches";
    rel.object_id = "o0";
    rel.span = {NormFrame{2}, NormFrame{4}};
    sg.relations.push_back(rel);
    return sg;
}

}  // namespace

TEST_CASE("validate_scene_graph accepts a well-formed graph") {
    CHECK(validate_scene_graph(valid_graph()).ok());
}

TEST_CASE("validate_scene_graph flags a key frame outside its action span") {
    SceneGraph sg = valid_graph();
    sg.actions[0].key_frames.insert(NormFrame{20});
    const auto report = validate_scene_graph(sg);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].path == "actions[0]");
    CHECK(report.violations[0].message.find("holding the cup") != std::string::npos);
}

TEST_CASE("validate_scene_graph flags a relation to an unknown object") {
    SceneGraph sg = valid_graph();
    sg.relations[0].object_id = "ghost";
    const auto report = validate_scene_graph(sg);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].path == "relations[0]");
}

TEST_CASE("validate_scene_graph reports every single injected violation") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 200; ++iter) {
        SceneGraph sg = valid_graph();
        switch (rng() % 5) {
            case 0: sg.actions[0].key_frames.insert(NormFrame{31}); break;
            case 1: sg.relations[0].subject_id = "nope"; break;
            case 2: sg.objects[0].track[NormFrame{4}] = BoundingBox{5, 5, 5, 9, {}, CoordSpace::pixel}; break;
            case 3: sg.actions[0].span = {NormFrame{9}, NormFrame{2}}; break;
            case 4: sg.objects.push_back(sg.objects[0]); break;  // duplicate id
        }
        CHECK(!validate_scene_graph(sg).ok());
    }
}

TEST_CASE("span helpers") {
    const TemporalSpan a{NormFrame{5}, NormFrame{10}};
    const TemporalSpan b{NormFrame{8}, NormFrame{12}};
    CHECK(span_overlap(a, b) == 3);
    CHECK(span_intersection(a, b) == TemporalSpan{NormFrame{8}, NormFrame{10}});
    CHECK(!span_intersection(a, {NormFrame{11}, NormFrame{12}}).has_value());
    CHECK(a.length() == 6);
}

TEST_CASE("render_span and render_box canonical forms") {
    CHECK(render_span({NormFrame{5}, NormFrame{12}}) == "frames 5–12 of 32");
    CHECK(render_span({NormFrame{7}, NormFrame{7}}) == "frame 7 of 32");
    BoundingBox box;
    box.x_min = 12;
    box.y_min = 30;
    box.x_max = 98.5;
    box.y_max = 120;
    CHECK(render_box(box) == "[12,30,98.5,120]");
}

TEST_CASE("scene graph JSON round-trip") {
    const SceneGraph sg = valid_graph();
    const json j = to_json(sg);
    const SceneGraph back = scene_graph_from_json(j, CoordSpace::pixel);
    CHECK(to_json(back) == j);
}

TEST_CASE("qa sample invariants enforced at parse") {
    json j{{"sample_id", "s"},
           {"video_id", "v"},
           {"question", "?"},
           {"qtype", "multiple_choice"},
           {"options", json::array({"a", "b"})},
           {"gold_answer", "B"},
           {"source_dataset", "STAR"}};
    const QASample qa = qa_from_json(j);
    CHECK(qa.gold_option_index() == 1);

    j["gold_answer"] = "Z";
    CHECK_THROWS_AS(qa_from_json(j), CorpusError);
    j["gold_answer"] = "A";
    j["options"] = json::array();
    CHECK_THROWS_AS(qa_from_json(j), CorpusError);
}

TEST_SUITE_END();
