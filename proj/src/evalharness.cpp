#include "videocot/evalharness.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <regex>
#include <sstream>

#include "videocot/util.hpp"

namespace videocot {

json MetricReport::to_json() const {
    json rows_json = json::array();
    for (const auto& r : rows) {
        json vj = json::object();
        for (const auto& [name, value] : r.values) vj[name] = value;
        rows_json.push_back(json{{"sample_id", r.sample_id},
                                 {"call_index", r.call_index},
                                 {"values", std::move(vj)},
                                 {"skipped", r.skipped},
                                 {"note", r.note}});
    }
    json metrics_json = json::object();
    for (const auto& [name, value] : metrics) metrics_json[name] = value;
    return json{{"sub_task", sub_task},
                {"metrics", std::move(metrics_json)},
                {"n", n},
                {"n_raw", n_raw},
                {"rows", std::move(rows_json)}};
}

std::string MetricReport::render_table() const {
    std::ostringstream out;
    out << "sub-task: " << sub_task << "  (n=" << n << ", raw=" << n_raw << ")\n";
    for (const auto& [name, value] : metrics) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", value);
        out << "  " << name << ": " << buf << "\n";
    }
    if (metrics.empty()) out << "  (no scorable rows)\n";
    return out.str();
}

namespace {

std::shared_ptr<const Corpus> borrow(const Corpus& corpus) {
    // non-owning: eval keeps the corpus alive for the duration of the call
    return std::shared_ptr<const Corpus>(&corpus, [](const Corpus*) {});
}

std::vector<size_t> select_samples(const Corpus& corpus, const EvalOptions& opts,
                                   bool need_program) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < corpus.samples.size(); ++i) {
        const auto& s = corpus.samples[i];
        if (!corpus.scene_graph(s.video_id)) continue;
        if (need_program && !corpus.gold_program(s.sample_id)) continue;
        eligible.push_back(i);
    }
    if (opts.subset == 0 || opts.subset >= eligible.size()) return eligible;
    std::mt19937_64 rng(opts.seed);
    std::vector<size_t> picked;
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(picked), opts.subset,
                rng);
    return picked;
}

void finalize(MetricReport& report) {
    std::map<std::string, std::pair<double, long long>> sums;
    for (const auto& row : report.rows) {
        if (row.skipped) continue;
        ++report.n;
        for (const auto& [name, value] : row.values) {
            sums[name].first += value;
            sums[name].second += 1;
        }
    }
    report.n_raw = static_cast<long long>(report.rows.size());
    for (const auto& [name, sum] : sums)
        if (sum.second > 0) report.metrics[name] = sum.first / static_cast<double>(sum.second);
}

/// Key frames graded for a grounding query: the matched action's annotations.
/// Relative queries ("after X") ground a window with no annotated keys.
std::optional<std::set<NormFrame>> gt_keys_for_query(const SceneGraph& sg,
                                                     const std::string& query) {
    const std::string q = trim(query);
    if (starts_with_ci(q, "after ") || starts_with_ci(q, "before ")) return std::nullopt;
    auto idx = match_action(sg, q);
    if (!idx || sg.actions[*idx].key_frames.empty()) return std::nullopt;
    return sg.actions[*idx].key_frames;
}

const Detection* top_detection(const Value& v) {
    if (!v.is_list() || v.list.empty()) return nullptr;
    if (v.list.front().kind != Value::Kind::detection) return nullptr;
    return &v.list.front().det;
}

}  // namespace

MetricReport eval_subtask(SubTask sub_task, const AgentRegistry& candidate,
                          const Corpus& corpus, const EvalOptions& opts) {
    if (sub_task == SubTask::logic)
        throw DomainError("the logic sub-task has no model to evaluate");
    candidate.require_complete();

    MetricReport report;
    report.sub_task = to_string(sub_task);
    const AgentRegistry oracle = oracle_registry(borrow(corpus));
    const dsl::ApiRegistry registry = dsl::ApiRegistry::standard();

    for (size_t idx : select_samples(corpus, opts, /*need_program=*/true)) {
        const QASample& sample = corpus.samples[idx];
        const VideoContext& video = corpus.video(sample.video_id);
        const SceneGraph& sg = *corpus.scene_graph(sample.video_id);
        auto skip = [&](const std::string& note) {
            MetricReport::SampleRow row;
            row.sample_id = sample.sample_id;
            row.skipped = true;
            row.note = note;
            report.rows.push_back(std::move(row));
        };

        dsl::ValidatedProgram program;
        try {
            program = dsl::validate_program(
                dsl::parse_program(*corpus.gold_program(sample.sample_id)), registry);
        } catch (const Error& e) {
            skip(std::string("gold program rejected: ") + e.what());
            continue;
        }

        ExecutionTrace gt_trace = execute(program, video, sample, oracle, opts.budget);
        if (!gt_trace.completed()) {
            skip("oracle run failed: " + to_string(gt_trace.status.kind) + " " +
                 gt_trace.status.message);
            continue;
        }

        SubstitutionPlan plan;
        plan.step_under_test = SubstitutionPlan::TestByTag{sub_task};
        plan.mode = opts.mode;
        for (size_t i = 0; i < gt_trace.steps.size(); ++i)
            plan.gt_bindings[static_cast<int>(i)] = gt_trace.steps[i].output;

        ExecutionTrace live =
            execute_with_substitution(program, video, sample, candidate, plan, opts.budget);

        if (sub_task == SubTask::qa) {
            bool has_qa_step = false;
            for (const auto& st : gt_trace.steps)
                if (st.call.tag == SubTask::qa) has_qa_step = true;
            MetricReport::SampleRow row;
            row.sample_id = sample.sample_id;
            if (!has_qa_step) {
                row.skipped = true;
                row.note = "program has no qa step";
                report.rows.push_back(std::move(row));
                continue;
            }
            if (!live.completed()) {
                row.values["accuracy"] = 0.0;
                row.note = "status " + to_string(live.status.kind);
            } else {
                const VerifyResult vr =
                    verify_answer(*live.final_answer, sample, opts.oe_judge);
                row.values["accuracy"] = vr.ok ? 100.0 : 0.0;
            }
            report.rows.push_back(std::move(row));
            continue;
        }

        // score each tested call against the oracle run, step by step
        for (size_t i = 0; i < gt_trace.steps.size(); ++i) {
            const TraceStep& gt_step = gt_trace.steps[i];
            if (gt_step.call.tag != sub_task) continue;
            MetricReport::SampleRow row;
            row.sample_id = sample.sample_id;
            row.call_index = static_cast<int>(i);

            const TraceStep* live_step =
                i < live.steps.size() && live.steps[i].call.tag == sub_task ? &live.steps[i]
                                                                            : nullptr;
            switch (sub_task) {
                case SubTask::detect: {
                    const Detection* gt_top = top_detection(gt_step.output);
                    if (!gt_top) {
                        row.skipped = true;
                        row.note = "no annotated box for this query";
                        break;
                    }
                    const Detection* live_top =
                        live_step ? top_detection(live_step->output) : nullptr;
                    if (!live_top) {
                        row.values["iou"] = 0.0;
                        row.note = live_step ? "no detections" : "step not reached";
                    } else {
                        row.values["iou"] = 100.0 * box_iou(live_top->box, gt_top->box);
                    }
                    break;
                }
                case SubTask::ground: {
                    if (gt_step.output.kind != Value::Kind::clip) {
                        row.skipped = true;
                        row.note = "no ground-truth window";
                        break;
                    }
                    if (!live_step || live_step->output.kind != Value::Kind::clip) {
                        row.values["iou"] = 0.0;
                        row.note = "step not reached";
                    } else {
                        row.values["iou"] =
                            100.0 * temporal_iou(live_step->output.span, gt_step.output.span);
                    }
                    const std::string query = gt_step.inputs.value("query", "");
                    if (auto keys = gt_keys_for_query(sg, query)) {
                        row.values["recall"] =
                            live_step && live_step->output.kind == Value::Kind::clip
                                ? 100.0 * keyframe_recall(live_step->output.span, *keys)
                                : 0.0;
                    }
                    break;
                }
                case SubTask::recognize: {
                    if (!gt_step.output.is_list() || gt_step.output.list.empty()) {
                        row.skipped = true;
                        row.note = "no annotated action overlaps the clip";
                        break;
                    }
                    const std::string gt_top = gt_step.output.list.front().s;
                    const bool hit = live_step && live_step->output.is_list() &&
                                     !live_step->output.list.empty() &&
                                     to_lower(live_step->output.list.front().s) ==
                                         to_lower(gt_top);
                    row.values["top1_accuracy"] = hit ? 100.0 : 0.0;
                    if (!live_step) row.note = "step not reached";
                    break;
                }
                default:
                    break;
            }
            report.rows.push_back(std::move(row));
        }
    }
    finalize(report);
    return report;
}

MetricReport eval_decomposition(const AgentRegistry& candidate, const Corpus& corpus,
                                const EvalOptions& opts) {
    candidate.require_complete();
    MetricReport report;
    report.sub_task = "decompose";
    const AgentRegistry oracle = oracle_registry(borrow(corpus));
    const dsl::ApiRegistry registry = dsl::ApiRegistry::standard();
    const std::string registry_docs = registry.docs_text();

    for (size_t idx : select_samples(corpus, opts, /*need_program=*/false)) {
        const QASample& sample = corpus.samples[idx];
        const VideoContext& video = corpus.video(sample.video_id);
        MetricReport::SampleRow row;
        row.sample_id = sample.sample_id;
        row.values["accuracy"] = 0.0;  // failures count as failures

        try {
            auto* oracle_decomposer =
                dynamic_cast<OracleDecomposer*>(candidate.decomposer.get());
            dsl::SourceProgram source =
                oracle_decomposer
                    ? oracle_decomposer->decompose_sample(sample.sample_id)
                    : candidate.decomposer->decompose(sample.question, sample.options,
                                                      registry_docs);
            if (source.code.empty()) source.code = dsl::extract_code(source.raw_llm_output);
            const dsl::ValidatedProgram program =
                dsl::validate_program(dsl::parse_program(source.code), registry);

            // single_step: every intermediate output replayed from annotations;
            // end_to_end: the program runs live on the candidate's agents.
            const AgentRegistry& agents =
                opts.mode == SubstitutionPlan::Mode::single_step ? oracle : candidate;
            const ExecutionTrace trace =
                execute(program, video, sample, agents, opts.budget);
            if (trace.completed()) {
                const VerifyResult vr =
                    verify_answer(*trace.final_answer, sample, opts.oe_judge);
                row.values["accuracy"] = vr.ok ? 100.0 : 0.0;
                if (!vr.ok) row.note = "wrong answer: " + *trace.final_answer;
            } else {
                row.note = "status " + to_string(trace.status.kind);
            }
        } catch (const Error& e) {
            row.note = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    finalize(report);
    return report;
}

// ---------------------------------------------------------------------------
// Rationale parsing and grading

ParsedRationale parse_rationale(const std::string& text) {
    ParsedRationale out;
    try {
        static const std::regex span_re(
            "frames?\\s+(\\d+)(?:\\s*(?:\xE2\x80\x93|\xE2\x80\x94|-|to)\\s*(?:frames?\\s+)?"
            "(\\d+))?",
            std::regex::icase);
        for (auto it = std::sregex_iterator(text.begin(), text.end(), span_re);
             it != std::sregex_iterator(); ++it) {
            const std::smatch& m = *it;
            long a = std::strtol(m[1].str().c_str(), nullptr, 10);
            long b = m[2].matched ? std::strtol(m[2].str().c_str(), nullptr, 10) : a;
            a = std::clamp<long>(a, 0, kNormFrameCount - 1);
            b = std::clamp<long>(b, 0, kNormFrameCount - 1);
            if (a <= b)
                out.intervals.push_back(TemporalSpan{NormFrame{static_cast<int>(a)},
                                                     NormFrame{static_cast<int>(b)}});
        }
        static const std::regex box_re(
            "\\[\\s*(-?\\d+(?:\\.\\d+)?)\\s*,\\s*(-?\\d+(?:\\.\\d+)?)\\s*,\\s*"
            "(-?\\d+(?:\\.\\d+)?)\\s*,\\s*(-?\\d+(?:\\.\\d+)?)\\s*\\]");
        for (auto it = std::sregex_iterator(text.begin(), text.end(), box_re);
             it != std::sregex_iterator(); ++it) {
            const std::smatch& m = *it;
            BoundingBox box;
            box.x_min = std::strtod(m[1].str().c_str(), nullptr);
            box.y_min = std::strtod(m[2].str().c_str(), nullptr);
            box.x_max = std::strtod(m[3].str().c_str(), nullptr);
            box.y_max = std::strtod(m[4].str().c_str(), nullptr);
            if (box.geometry_valid()) out.boxes.push_back(box);
        }
    } catch (const std::regex_error&) {
        // total function: treat as unparseable
        out.intervals.clear();
        out.boxes.clear();
    }
    out.parse_ok = !out.intervals.empty() || !out.boxes.empty();
    return out;
}

RationaleGroundTruth rationale_gt_for(const QASample& sample, const SceneGraph& sg) {
    RationaleGroundTruth gt;
    gt.sample_id = sample.sample_id;

    // an action is "the question's event" when most of its label tokens
    // appear in the question; F1 would punish long questions
    const auto question_tokens = tokenize(sample.question);
    auto containment = [&](const std::string& label) {
        const auto label_tokens = tokenize(label);
        if (label_tokens.empty()) return 0.0;
        int hit = 0;
        for (const auto& tok : label_tokens)
            if (std::find(question_tokens.begin(), question_tokens.end(), tok) !=
                question_tokens.end())
                ++hit;
        return static_cast<double>(hit) / static_cast<double>(label_tokens.size());
    };
    std::vector<size_t> matched_actions;
    for (size_t i = 0; i < sg.actions.size(); ++i)
        if (containment(sg.actions[i].label) >= 0.75) matched_actions.push_back(i);
    if (matched_actions.empty())
        for (size_t i = 0; i < sg.actions.size(); ++i) matched_actions.push_back(i);
    for (size_t i : matched_actions) {
        gt.windows.push_back(sg.actions[i].span);
        gt.window_keys.push_back(sg.actions[i].key_frames);
    }

    auto mentioned = [&](const std::string& label) {
        for (const auto& tok : tokenize(label))
            if (std::find(question_tokens.begin(), question_tokens.end(), tok) ==
                question_tokens.end())
                return false;
        return true;
    };
    for (const auto& obj : sg.objects) {
        if (!mentioned(obj.label)) continue;
        for (const auto& [frame, box] : obj.track) {
            bool in_window = gt.windows.empty();
            for (const auto& w : gt.windows)
                if (w.contains(frame)) { in_window = true; break; }
            if (in_window) gt.boxes.push_back(box);
        }
    }
    return gt;
}

namespace {

/// Greedy one-to-one pairing maximizing the score; pairs with score 0 are
/// left unmatched.
std::vector<std::pair<size_t, size_t>> greedy_pairs(size_t n_pred, size_t n_gt,
                                                    const std::function<double(size_t, size_t)>& score) {
    std::vector<std::pair<size_t, size_t>> pairs;
    std::vector<bool> pred_used(n_pred, false), gt_used(n_gt, false);
    while (true) {
        double best = 0.0;
        size_t bp = 0, bg = 0;
        bool found = false;
        for (size_t p = 0; p < n_pred; ++p) {
            if (pred_used[p]) continue;
            for (size_t g = 0; g < n_gt; ++g) {
                if (gt_used[g]) continue;
                const double s = score(p, g);
                if (s > best) {
                    best = s;
                    bp = p;
                    bg = g;
                    found = true;
                }
            }
        }
        if (!found) break;
        pred_used[bp] = true;
        gt_used[bg] = true;
        pairs.emplace_back(bp, bg);
    }
    return pairs;
}

}  // namespace

MetricReport eval_rationales(const std::vector<RationaleGroundTruth>& ground_truth,
                             const std::vector<std::string>& outputs, CoordSpace box_space) {
    if (ground_truth.size() != outputs.size())
        throw DomainError("eval_rationales: " + std::to_string(outputs.size()) +
                          " outputs for " + std::to_string(ground_truth.size()) + " samples");
    MetricReport report;
    report.sub_task = "rationale";
    long long unparseable = 0;

    for (size_t i = 0; i < outputs.size(); ++i) {
        const RationaleGroundTruth& gt = ground_truth[i];
        ParsedRationale parsed = parse_rationale(outputs[i]);
        MetricReport::SampleRow row;
        row.sample_id = gt.sample_id;
        if (!parsed.parse_ok) {
            ++unparseable;
            row.skipped = true;
            row.note = "unparseable rationale";
            report.rows.push_back(std::move(row));
            continue;
        }
        for (auto& b : parsed.boxes) b.space = box_space;

        if (!gt.windows.empty()) {
            const auto pairs = greedy_pairs(
                parsed.intervals.size(), gt.windows.size(), [&](size_t p, size_t g) {
                    return temporal_iou(parsed.intervals[p], gt.windows[g]);
                });
            double iou_sum = 0.0;
            for (const auto& [p, g] : pairs)
                iou_sum += temporal_iou(parsed.intervals[p], gt.windows[g]);
            row.values["temporal_iou"] =
                parsed.intervals.empty()
                    ? 0.0
                    : 100.0 * iou_sum / static_cast<double>(parsed.intervals.size());

            // recall is ground-truth-driven: unmatched windows miss their keys
            double recall_sum = 0.0;
            long long recall_n = 0;
            for (size_t g = 0; g < gt.windows.size(); ++g) {
                if (gt.window_keys[g].empty()) continue;
                ++recall_n;
                for (const auto& [p, pg] : pairs) {
                    if (pg == g) {
                        recall_sum += keyframe_recall(parsed.intervals[p], gt.window_keys[g]);
                        break;
                    }
                }
            }
            if (recall_n > 0)
                row.values["recall"] = 100.0 * recall_sum / static_cast<double>(recall_n);
        }

        if (!gt.boxes.empty()) {
            const auto pairs =
                greedy_pairs(parsed.boxes.size(), gt.boxes.size(), [&](size_t p, size_t g) {
                    return box_iou(parsed.boxes[p], gt.boxes[g]);
                });
            double iou_sum = 0.0;
            for (const auto& [p, g] : pairs) iou_sum += box_iou(parsed.boxes[p], gt.boxes[g]);
            row.values["spatial_iou"] =
                parsed.boxes.empty()
                    ? 0.0
                    : 100.0 * iou_sum / static_cast<double>(parsed.boxes.size());
        }
        report.rows.push_back(std::move(row));
    }
    finalize(report);
    report.metrics["unparseable_rate"] =
        outputs.empty() ? 0.0
                        : 100.0 * static_cast<double>(unparseable) /
                              static_cast<double>(outputs.size());
    return report;
}

}  // namespace videocot
