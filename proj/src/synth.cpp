#include "videocot/synth.hpp"

#include <algorithm>
#include <random>

namespace videocot {

namespace {

const std::vector<std::string> kVerbs = {
    "opening", "closing", "taking", "holding", "washing",
    "throwing", "lifting", "reading", "eating", "moving"};

const std::vector<std::string> kObjects = {
    "door", "laptop", "book", "cup", "box",
    "blanket", "bottle", "phone", "pillow", "broom"};

constexpr int kWidth = 640;
constexpr int kHeight = 480;

struct VideoPlan {
    VideoContext video;
    SceneGraph graph;
    // per action: index of the object entity it manipulates
    std::vector<size_t> action_object;
};

class Generator {
public:
    explicit Generator(const SynthConfig& config) : config_(config), rng_(config.seed) {}

    Corpus run() {
        Corpus corpus;
        corpus.coordinate_space = CoordSpace::pixel;
        for (int v = 0; v < config_.videos; ++v) {
            VideoPlan plan = make_video(v);
            for (int q = 0; q < config_.qa_per_video; ++q)
                make_sample(corpus, plan,
                            plan.video.video_id + "-q" + std::to_string(q), q);
            corpus.videos.push_back(plan.video);
            corpus.scene_graphs.emplace(plan.graph.video_id, std::move(plan.graph));
        }
        return corpus;
    }

private:
    int uniform(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }

    VideoPlan make_video(int index) {
        VideoPlan plan;
        char id[32];
        std::snprintf(id, sizeof(id), "synth-%04d", index);
        plan.video.video_id = id;
        plan.video.total_frames = uniform(32, 300);
        plan.video.fps = 30.0;
        plan.video.uri = std::string("synthetic://") + id;
        plan.graph.video_id = id;

        // non-overlapping actions with pairwise-distinct lengths keep the
        // oracle ranking (overlap length, ties by order) unambiguous
        const int n_actions = uniform(3, 5);
        std::vector<int> lengths = {2, 3, 4, 5, 6};
        std::shuffle(lengths.begin(), lengths.end(), rng_);
        lengths.resize(static_cast<size_t>(n_actions));

        std::vector<std::pair<std::string, std::string>> combos;  // (verb, object)
        while (static_cast<int>(combos.size()) < n_actions) {
            std::pair<std::string, std::string> combo{pick(kVerbs), pick(kObjects)};
            bool dup = false;
            for (const auto& c : combos)
                if (c.second == combo.second) dup = true;  // one object per action
            if (!dup) combos.push_back(std::move(combo));
        }

        // minimal layout: lengths plus one uncovered frame between actions;
        // spare frames get distributed as random extra padding
        int extra = kNormFrameCount - (n_actions - 1);
        for (int len : lengths) extra -= len;
        int cursor = uniform(0, std::min(extra, 3));
        extra -= cursor;
        for (int a = 0; a < n_actions; ++a) {
            const int start = cursor;
            const int end = start + lengths[static_cast<size_t>(a)] - 1;
            const int pad = extra > 0 ? uniform(0, std::min(extra, 3)) : 0;
            extra -= pad;
            cursor = end + 2 + pad;

            ActionSpan action;
            action.label = combos[static_cast<size_t>(a)].first + " the " +
                           combos[static_cast<size_t>(a)].second;
            action.span = {NormFrame{start}, NormFrame{end}};
            const int n_keys = uniform(1, std::min(3, action.span.length()));
            while (static_cast<int>(action.key_frames.size()) < n_keys)
                action.key_frames.insert(NormFrame{uniform(start, end)});
            plan.graph.actions.push_back(std::move(action));

            ObjectTrack obj;
            obj.object_id = "o" + std::to_string(a);
            obj.label = combos[static_cast<size_t>(a)].second;
            fill_track(obj, start, end);
            plan.action_object.push_back(plan.graph.objects.size());
            plan.graph.objects.push_back(std::move(obj));
        }

        // distractor object visible only between actions, so it never wins a
        // "most visible in clip" contest
        std::vector<int> gap_frames;
        for (int f = 0; f < kNormFrameCount; ++f) {
            bool covered = false;
            for (const auto& act : plan.graph.actions)
                if (act.span.contains(NormFrame{f})) covered = true;
            if (!covered) gap_frames.push_back(f);
        }
        if (!gap_frames.empty()) {
            ObjectTrack distractor;
            distractor.object_id = "o" + std::to_string(n_actions);
            distractor.label = unused_object_label(plan.graph);
            const size_t n_boxes =
                std::min<size_t>(gap_frames.size(), static_cast<size_t>(uniform(1, 3)));
            for (size_t i = 0; i < n_boxes; ++i)
                distractor.track[NormFrame{gap_frames[i]}] = random_box();
            plan.graph.objects.push_back(std::move(distractor));
        }

        if (plan.graph.objects.size() >= 2) {
            Relation rel;
            rel.subject_id = plan.graph.objects[0].object_id;
            rel.predicate = "near";
            rel.object_id = plan.graph.objects.back().object_id;
            rel.span = plan.graph.actions[0].span;
            plan.graph.relations.push_back(std::move(rel));
        }
        return plan;
    }

    void fill_track(ObjectTrack& obj, int start, int end) {
        int x = uniform(0, kWidth - 180);
        int y = uniform(0, kHeight - 180);
        const int w = uniform(40, 160);
        const int h = uniform(40, 160);
        for (int f = start; f <= end; ++f) {
            x = std::clamp(x + uniform(-5, 5), 0, kWidth - w - 1);
            y = std::clamp(y + uniform(-5, 5), 0, kHeight - h - 1);
            BoundingBox box;
            box.x_min = x;
            box.y_min = y;
            box.x_max = x + w;
            box.y_max = y + h;
            obj.track[NormFrame{f}] = box;
        }
    }

    BoundingBox random_box() {
        BoundingBox box;
        const int w = uniform(40, 160);
        const int h = uniform(40, 160);
        box.x_min = uniform(0, kWidth - w - 1);
        box.y_min = uniform(0, kHeight - h - 1);
        box.x_max = box.x_min + w;
        box.y_max = box.y_min + h;
        return box;
    }

    std::string unused_object_label(const SceneGraph& sg) {
        std::vector<std::string> candidates;
        for (const auto& label : kObjects) {
            bool used = false;
            for (const auto& obj : sg.objects)
                if (obj.label == label) used = true;
            if (!used) candidates.push_back(label);
        }
        return candidates.empty() ? "window" : pick(candidates);
    }

    std::string unused_action_label(const SceneGraph& sg) {
        for (int tries = 0; tries < 64; ++tries) {
            const std::string label = pick(kVerbs) + " the " + pick(kObjects);
            bool used = false;
            for (const auto& act : sg.actions)
                if (act.label == label) used = true;
            if (!used) return label;
        }
        return "painting the fence";
    }

    /// The action the oracle ranks first in the window after `anchor`:
    /// fully-contained spans rank by length, ties cannot happen (distinct
    /// lengths by construction).
    static const ActionSpan* follower_of(const SceneGraph& sg, const ActionSpan& anchor) {
        const ActionSpan* best = nullptr;
        for (const auto& act : sg.actions) {
            if (act.span.start.index <= anchor.span.end.index) continue;
            if (!best || act.span.length() > best->span.length()) best = &act;
        }
        return best;
    }

    std::vector<std::string> mc_options(const std::string& correct,
                                        std::vector<std::string> pool, size_t* gold_idx) {
        std::erase(pool, correct);
        std::shuffle(pool.begin(), pool.end(), rng_);
        std::vector<std::string> options = {correct};
        for (const auto& p : pool) {
            if (options.size() >= 4) break;
            if (std::find(options.begin(), options.end(), p) == options.end())
                options.push_back(p);
        }
        std::shuffle(options.begin(), options.end(), rng_);
        *gold_idx = static_cast<size_t>(
            std::find(options.begin(), options.end(), correct) - options.begin());
        return options;
    }

    std::vector<std::string> action_pool(const SceneGraph& sg) {
        std::vector<std::string> pool;
        for (const auto& act : sg.actions) pool.push_back(act.label);
        for (const auto& verb : kVerbs) pool.push_back(verb + " the " + kObjects[0]);
        return pool;
    }

    std::vector<std::string> object_pool(const SceneGraph& sg) {
        std::vector<std::string> pool;
        for (const auto& obj : sg.objects) pool.push_back(obj.label);
        for (const auto& label : kObjects) pool.push_back(label);
        return pool;
    }

    void make_sample(Corpus& corpus, const VideoPlan& plan, const std::string& sample_id,
                     int ordinal) {
        const SceneGraph& sg = plan.graph;
        QASample qa;
        qa.sample_id = sample_id;
        qa.video_id = plan.video.video_id;
        qa.source_dataset = config_.dataset_name;
        std::string code;

        // templates cycle so every corpus exercises all program shapes
        const int tpl = (ordinal + uniform(0, 5)) % 6;
        switch (tpl) {
            case 0: {  // OE: what happens after action A
                const ActionSpan& anchor = sg.actions[0];
                const ActionSpan* follower = follower_of(sg, anchor);
                qa.qtype = QType::open_ended;
                qa.question = "What did the person do after " + anchor.label + "?";
                qa.gold_answer = follower ? follower->label : "nothing";
                code = "clip = trim(video, \"after " + anchor.label + "\")\n"
                       "acts = recognize_actions(clip)\n"
                       "answer(acts[0])\n";
                if (!follower) {  // degenerate video: fall back to a direct lookup
                    const ActionSpan& act = sg.actions.back();
                    qa.question = "What did the person do around the time of " + act.label + "?";
                    qa.gold_answer = act.label;
                    code = "clip = trim(video, \"" + act.label + "\")\n"
                           "acts = recognize_actions(clip)\n"
                           "answer(acts[0])\n";
                }
                break;
            }
            case 1: {  // OE: object visible during action A
                const size_t a = static_cast<size_t>(uniform(0, static_cast<int>(sg.actions.size()) - 1));
                const ActionSpan& act = sg.actions[a];
                const std::string& object = sg.objects[plan.action_object[a]].label;
                qa.qtype = QType::open_ended;
                qa.question = "What object is visible while the person is " + act.label + "?";
                qa.gold_answer = object;
                code = "clip = trim(video, \"" + act.label + "\")\n"
                       "boxes = find(clip, \"" + object + "\")\n"
                       "answer(query(clip, question))\n";
                break;
            }
            case 2: {  // MC: which object is visible during action A
                const size_t a = static_cast<size_t>(uniform(0, static_cast<int>(sg.actions.size()) - 1));
                const ActionSpan& act = sg.actions[a];
                const std::string& object = sg.objects[plan.action_object[a]].label;
                size_t gold_idx = 0;
                qa.qtype = QType::multiple_choice;
                qa.question = "Which object is visible while the person is " + act.label + "?";
                qa.options = mc_options(object, object_pool(sg), &gold_idx);
                qa.gold_answer = QASample::option_letter(gold_idx);
                code = "clip = trim(video, \"" + act.label + "\")\n"
                       "obj = query(clip, \"What object is visible in this clip?\")\n"
                       "answer(best_text_match(options, obj))\n";
                break;
            }
            case 3: {  // OE yes/no: object presence during action A
                const size_t a = static_cast<size_t>(uniform(0, static_cast<int>(sg.actions.size()) - 1));
                const ActionSpan& act = sg.actions[a];
                const bool present = uniform(0, 1) == 1;
                const std::string object = present ? sg.objects[plan.action_object[a]].label
                                                   : unused_object_label(sg);
                qa.qtype = QType::open_ended;
                qa.question =
                    "Is there a " + object + " while the person is " + act.label + "?";
                qa.gold_answer = present ? "yes" : "no";
                code = "clip = trim(video, \"" + act.label + "\")\n"
                       "if exists(clip, \"" + object + "\"):\n"
                       "    answer(\"yes\")\n"
                       "else:\n"
                       "    answer(\"no\")\n";
                break;
            }
            case 4: {  // MC: what happens after action A
                const ActionSpan& anchor = sg.actions[0];
                const ActionSpan* follower = follower_of(sg, anchor);
                if (!follower) {
                    make_sample_fallback(corpus, plan, sample_id);
                    return;
                }
                size_t gold_idx = 0;
                qa.qtype = QType::multiple_choice;
                qa.question = "What does the person do after " + anchor.label + "?";
                qa.options = mc_options(follower->label, action_pool(sg), &gold_idx);
                qa.gold_answer = QASample::option_letter(gold_idx);
                code = "clip = trim(video, \"after " + anchor.label + "\")\n"
                       "acts = recognize_actions(clip)\n"
                       "answer(best_text_match(options, acts[0]))\n";
                break;
            }
            default: {  // OE yes/no over a loop: does action B happen at all
                const bool present = uniform(0, 1) == 1;
                const std::string label =
                    present ? sg.actions[static_cast<size_t>(uniform(
                                             0, static_cast<int>(sg.actions.size()) - 1))]
                                  .label
                            : unused_action_label(sg);
                qa.qtype = QType::open_ended;
                qa.question = "Does the video show the action '" + label + "' at any point?";
                qa.gold_answer = present ? "yes" : "no";
                code = "found = \"no\"\n"
                       "for act in recognize_actions(video):\n"
                       "    if act == \"" + label + "\":\n"
                       "        found = \"yes\"\n"
                       "answer(found)\n";
                break;
            }
        }
        corpus.samples.push_back(qa);
        corpus.gold_programs[sample_id] = code;
    }

    void make_sample_fallback(Corpus& corpus, const VideoPlan& plan,
                              const std::string& sample_id) {
        const SceneGraph& sg = plan.graph;
        QASample qa;
        qa.sample_id = sample_id;
        qa.video_id = plan.video.video_id;
        qa.source_dataset = config_.dataset_name;
        qa.qtype = QType::open_ended;
        const ActionSpan& act = sg.actions[0];
        qa.question = "What did the person do around the time of " + act.label + "?";
        qa.gold_answer = act.label;
        corpus.samples.push_back(qa);
        corpus.gold_programs[sample_id] =
            "clip = trim(video, \"" + act.label + "\")\n"
            "acts = recognize_actions(clip)\n"
            "answer(acts[0])\n";
    }

    SynthConfig config_;
    std::mt19937_64 rng_;
};

}  // namespace

Corpus generate_synthetic_corpus(const SynthConfig& config) {
    if (config.videos < 1 || config.qa_per_video < 1)
        throw DomainError("synthetic corpus needs at least one video and one sample");
    Generator gen(config);
    Corpus corpus = gen.run();
    const auto report = corpus.validate();
    if (!report.ok())
        throw DomainError("synthetic corpus failed validation: " +
                          report.violations[0].path + ": " + report.violations[0].message);
    return corpus;
}

}  // namespace videocot
