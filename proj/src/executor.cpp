#include "videocot/executor.hpp"

#include <chrono>
#include <functional>

#include "videocot/util.hpp"

namespace videocot {

// ---------------------------------------------------------------------------
// Value

Value Value::null() { return Value{}; }
Value Value::boolean(bool v) {
    Value out;
    out.kind = Kind::boolean;
    out.b = v;
    return out;
}
Value Value::integer(long long v) {
    Value out;
    out.kind = Kind::integer;
    out.i = v;
    return out;
}
Value Value::real(double v) {
    Value out;
    out.kind = Kind::real;
    out.d = v;
    return out;
}
Value Value::text(std::string v) {
    Value out;
    out.kind = Kind::text;
    out.s = std::move(v);
    return out;
}
Value Value::clip(TemporalSpan v) {
    Value out;
    out.kind = Kind::clip;
    out.span = v;
    return out;
}
Value Value::detection(Detection v) {
    Value out;
    out.kind = Kind::detection;
    out.det = std::move(v);
    return out;
}
Value Value::make_list(std::vector<Value> v) {
    Value out;
    out.kind = Kind::list;
    out.list = std::move(v);
    return out;
}

std::string Value::render() const {
    switch (kind) {
        case Kind::null: return "none";
        case Kind::boolean: return b ? "yes" : "no";
        case Kind::integer: return std::to_string(i);
        case Kind::real: return format_double(d);
        case Kind::text: return s;
        case Kind::clip: return render_span(span);
        case Kind::detection:
            return det.label + " at " + render_span({det.frame, det.frame}) + " " +
                   render_box(det.box);
        case Kind::list: {
            if (list.empty()) return "none";
            std::string out;
            for (size_t i = 0; i < list.size(); ++i) {
                if (i) out += ", ";
                out += list[i].render();
            }
            return out;
        }
    }
    return "";
}

bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Value::Kind::null: return true;
        case Value::Kind::boolean: return a.b == b.b;
        case Value::Kind::integer: return a.i == b.i;
        case Value::Kind::real: return a.d == b.d;
        case Value::Kind::text: return a.s == b.s;
        case Value::Kind::clip: return a.span == b.span;
        case Value::Kind::detection:
            return a.det.label == b.det.label && a.det.frame == b.det.frame &&
                   a.det.box.x_min == b.det.box.x_min && a.det.box.y_min == b.det.box.y_min &&
                   a.det.box.x_max == b.det.box.x_max && a.det.box.y_max == b.det.box.y_max &&
                   a.det.box.confidence == b.det.box.confidence;
        case Value::Kind::list: return a.list == b.list;
    }
    return false;
}

json value_to_json(const Value& v) {
    switch (v.kind) {
        case Value::Kind::null: return nullptr;
        case Value::Kind::boolean: return v.b;
        case Value::Kind::integer: return v.i;
        case Value::Kind::real: return v.d;
        case Value::Kind::text: return v.s;
        case Value::Kind::clip:
            return json{{"kind", "clip"}, {"start", v.span.start.index}, {"end", v.span.end.index}};
        case Value::Kind::detection:
            return json{{"kind", "detection"},
                        {"label", v.det.label},
                        {"frame", v.det.frame.index},
                        {"box", to_json(v.det.box)}};
        case Value::Kind::list: {
            json items = json::array();
            for (const auto& item : v.list) items.push_back(value_to_json(item));
            return items;
        }
    }
    return nullptr;
}

Value value_from_json(const json& j) {
    if (j.is_null()) return Value::null();
    if (j.is_boolean()) return Value::boolean(j.get<bool>());
    if (j.is_number_integer()) return Value::integer(j.get<long long>());
    if (j.is_number_float()) return Value::real(j.get<double>());
    if (j.is_string()) return Value::text(j.get<std::string>());
    if (j.is_array()) {
        std::vector<Value> items;
        for (const auto& item : j) items.push_back(value_from_json(item));
        return Value::make_list(std::move(items));
    }
    if (j.is_object()) {
        const std::string kind = j.value("kind", "");
        if (kind == "clip")
            return Value::clip(TemporalSpan{NormFrame{j.at("start").get<int>()},
                                            NormFrame{j.at("end").get<int>()}});
        if (kind == "detection") {
            Detection d;
            d.label = j.at("label").get<std::string>();
            d.frame = NormFrame{j.at("frame").get<int>()};
            d.box = box_from_json(j.at("box"), CoordSpace::pixel);
            return Value::detection(std::move(d));
        }
    }
    throw DomainError("unrecognized value encoding: " + j.dump());
}

// ---------------------------------------------------------------------------
// Trace

std::string to_string(RuntimeErrorKind k) {
    switch (k) {
        case RuntimeErrorKind::index_out_of_range: return "index_out_of_range";
        case RuntimeErrorKind::type_error: return "type_error";
        case RuntimeErrorKind::no_span: return "no_span";
        case RuntimeErrorKind::agent_failure: return "agent_failure";
        case RuntimeErrorKind::substitution_missing: return "substitution_missing";
    }
    return "?";
}

std::string to_string(TraceStatus::Kind k) {
    switch (k) {
        case TraceStatus::Kind::completed: return "completed";
        case TraceStatus::Kind::runtime_error: return "runtime_error";
        case TraceStatus::Kind::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

json trace_to_json(const ExecutionTrace& trace, bool include_latency) {
    json status{{"kind", to_string(trace.status.kind)}};
    if (trace.status.error) {
        status["error"] = to_string(*trace.status.error);
        status["message"] = trace.status.message;
        status["line"] = trace.status.pos.line;
        status["col"] = trace.status.pos.col;
    }
    json steps = json::array();
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& st = trace.steps[i];
        json sj{{"index", i},
                {"api", st.call.api},
                {"sub_task", to_string(st.call.tag)},
                {"line", st.call.pos.line},
                {"col", st.call.pos.col},
                {"inputs", st.inputs},
                {"output", value_to_json(st.output)},
                {"backend", st.backend}};
        if (include_latency) sj["latency_ms"] = st.latency_ms;
        steps.push_back(std::move(sj));
    }
    json bindings = json::object();
    for (const auto& [name, value] : trace.bindings) bindings[name] = value_to_json(value);
    json out{{"sample_id", trace.sample_id},
             {"program_hash", trace.program_hash},
             {"status", std::move(status)}};
    if (trace.final_answer) out["final_answer"] = *trace.final_answer;
    out["steps"] = std::move(steps);
    out["bindings"] = std::move(bindings);
    return out;
}

ExecutionTrace trace_from_json(const json& j) {
    ExecutionTrace trace;
    trace.sample_id = j.at("sample_id").get<std::string>();
    trace.program_hash = j.at("program_hash").get<std::string>();
    const auto& sj = j.at("status");
    const std::string kind = sj.at("kind").get<std::string>();
    if (kind == "completed") trace.status.kind = TraceStatus::Kind::completed;
    else if (kind == "budget_exceeded") trace.status.kind = TraceStatus::Kind::budget_exceeded;
    else trace.status.kind = TraceStatus::Kind::runtime_error;
    if (sj.contains("error")) {
        const std::string err = sj["error"].get<std::string>();
        for (auto k : {RuntimeErrorKind::index_out_of_range, RuntimeErrorKind::type_error,
                       RuntimeErrorKind::no_span, RuntimeErrorKind::agent_failure,
                       RuntimeErrorKind::substitution_missing})
            if (to_string(k) == err) trace.status.error = k;
        trace.status.message = sj.value("message", "");
        trace.status.pos = SourcePos{sj.value("line", 0), sj.value("col", 0)};
    }
    if (j.contains("final_answer")) trace.final_answer = j["final_answer"].get<std::string>();
    for (const auto& stj : j.at("steps")) {
        TraceStep step;
        step.call.api = stj.at("api").get<std::string>();
        step.call.tag = sub_task_from_string(stj.at("sub_task").get<std::string>());
        step.call.pos = SourcePos{stj.value("line", 0), stj.value("col", 0)};
        step.inputs = stj.at("inputs");
        step.output = value_from_json(stj.at("output"));
        step.backend = stj.at("backend").get<std::string>();
        step.latency_ms = stj.value("latency_ms", 0.0);
        trace.steps.push_back(std::move(step));
    }
    if (j.contains("bindings"))
        for (const auto& [name, vj] : j["bindings"].items())
            trace.bindings[name] = value_from_json(vj);
    return trace;
}

namespace {

std::string render_input_value(const json& j) {
    if (j.is_string()) return "\"" + j.get<std::string>() + "\"";
    if (j.is_object() && j.contains("start") && j.contains("end"))
        return render_span(TemporalSpan{NormFrame{j["start"].get<int>()},
                                        NormFrame{j["end"].get<int>()}});
    if (j.is_array()) {
        std::string out;
        for (size_t i = 0; i < j.size(); ++i) {
            if (i) out += ", ";
            out += render_input_value(j[i]);
        }
        return out;
    }
    return j.dump();
}

}  // namespace

std::string render_trace_steps(const std::vector<TraceStep>& steps) {
    std::string out;
    for (size_t i = 0; i < steps.size(); ++i) {
        const auto& st = steps[i];
        out += "Step " + std::to_string(i + 1) + ": " + to_string(st.call.tag) + "(";
        bool first = true;
        for (const auto& [key, value] : st.inputs.items()) {
            if (!first) out += ", ";
            first = false;
            out += render_input_value(value);
        }
        out += ") → " + st.output.render() + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interpreter

namespace {

struct AnswerSignal {};
struct AbortSignal {};

class Interpreter {
public:
    Interpreter(const dsl::ValidatedProgram& program, const VideoContext& video,
                const QASample& sample, const AgentRegistry& agents,
                const SubstitutionPlan* plan, const Budget& budget)
        : program_(program),
          video_(video),
          sample_(sample),
          agents_(agents),
          plan_(plan),
          budget_(budget) {}

    ExecutionTrace run() {
        agents_.require_complete();
        precheck_plan();
        trace_.sample_id = sample_.sample_id;
        trace_.program_hash = program_.program_hash;

        env_["video"] = Value::clip(full_span());
        env_["question"] = Value::text(sample_.question);
        std::vector<Value> opts;
        for (const auto& o : sample_.options) opts.push_back(Value::text(o));
        env_["options"] = Value::make_list(std::move(opts));

        try {
            exec_block(program_.ast.statements);
            // validation guarantees an answer on every path
            fail(RuntimeErrorKind::type_error, "program finished without answering",
                 SourcePos{0, 0});
        } catch (const AnswerSignal&) {
            trace_.status.kind = TraceStatus::Kind::completed;
        } catch (const AbortSignal&) {
            // status already recorded
        }
        trace_.bindings = std::move(env_);
        return std::move(trace_);
    }

private:
    [[noreturn]] void fail(RuntimeErrorKind kind, const std::string& msg, SourcePos pos) {
        trace_.status.kind = TraceStatus::Kind::runtime_error;
        trace_.status.error = kind;
        trace_.status.message = msg;
        trace_.status.pos = pos;
        throw AbortSignal{};
    }

    [[noreturn]] void exceed_budget(const std::string& msg, SourcePos pos) {
        trace_.status.kind = TraceStatus::Kind::budget_exceeded;
        trace_.status.message = msg;
        trace_.status.pos = pos;
        throw AbortSignal{};
    }

    void precheck_plan() {
        if (!plan_ || plan_->empty()) return;
        if (const auto* by_index =
                std::get_if<SubstitutionPlan::TestByIndex>(&plan_->step_under_test)) {
            for (int i = 0; i < by_index->index; ++i)
                if (!plan_->gt_bindings.count(i))
                    throw ConfigError(
                        "substitution plan is missing ground truth for step " +
                        std::to_string(i) + " preceding the step under test");
        }
    }

    void exec_block(const std::vector<dsl::Stmt>& stmts) {
        for (const auto& s : stmts) exec_stmt(s);
    }

    void exec_stmt(const dsl::Stmt& s) {
        if (++statements_ > budget_.max_statements)
            exceed_budget("statement budget exceeded (" +
                              std::to_string(budget_.max_statements) + ")",
                          s.pos);
        switch (s.kind) {
            case dsl::Stmt::Kind::assign:
                env_[s.target] = eval(s.exprs[0]);
                break;
            case dsl::Stmt::Kind::expr_stmt:
                eval(s.exprs[0]);
                break;
            case dsl::Stmt::Kind::answer: {
                Value v = eval(s.exprs[0]);
                trace_.final_answer = v.render();
                throw AnswerSignal{};
            }
            case dsl::Stmt::Kind::if_stmt: {
                Value cond = eval(s.exprs[0]);
                if (cond.kind != Value::Kind::boolean)
                    fail(RuntimeErrorKind::type_error, "if condition is not a boolean",
                         s.pos);
                exec_block(cond.b ? s.body : s.else_body);
                break;
            }
            case dsl::Stmt::Kind::for_stmt: {
                Value iterable = eval(s.exprs[0]);
                if (!iterable.is_list())
                    fail(RuntimeErrorKind::type_error,
                         "for-loop iterable is not an agent-returned list", s.pos);
                if (static_cast<int>(iterable.list.size()) > budget_.max_loop_iterations)
                    exceed_budget("loop over " + std::to_string(iterable.list.size()) +
                                      " items exceeds the cap of " +
                                      std::to_string(budget_.max_loop_iterations),
                                  s.pos);
                for (const auto& item : iterable.list) {
                    env_[s.target] = item;
                    exec_block(s.body);
                }
                break;
            }
        }
    }

    Value eval(const dsl::Expr& e) {
        switch (e.kind) {
            case dsl::Expr::Kind::literal: return literal_value(e);
            case dsl::Expr::Kind::var: {
                auto it = env_.find(e.name);
                if (it == env_.end())
                    fail(RuntimeErrorKind::type_error,
                         "variable '" + e.name + "' is not bound", e.pos);
                return it->second;
            }
            case dsl::Expr::Kind::bool_op: return eval_bool_op(e);
            case dsl::Expr::Kind::compare: return eval_compare(e);
            case dsl::Expr::Kind::index: return eval_index(e);
            case dsl::Expr::Kind::call: return eval_call(e);
        }
        fail(RuntimeErrorKind::type_error, "unreachable expression kind", e.pos);
    }

    static Value literal_value(const dsl::Expr& e) {
        if (std::holds_alternative<std::string>(e.lit))
            return Value::text(std::get<std::string>(e.lit));
        if (std::holds_alternative<long long>(e.lit))
            return Value::integer(std::get<long long>(e.lit));
        if (std::holds_alternative<double>(e.lit))
            return Value::real(std::get<double>(e.lit));
        return Value::boolean(std::get<bool>(e.lit));
    }

    Value eval_bool_op(const dsl::Expr& e) {
        auto as_bool = [&](const dsl::Expr& operand) {
            Value v = eval(operand);
            if (v.kind != Value::Kind::boolean)
                fail(RuntimeErrorKind::type_error, "boolean operator on a non-boolean",
                     operand.pos);
            return v.b;
        };
        switch (e.bop) {
            case dsl::BoolOp::logical_not:
                return Value::boolean(!as_bool(e.children[0]));
            case dsl::BoolOp::logical_and:
                for (const auto& c : e.children)
                    if (!as_bool(c)) return Value::boolean(false);
                return Value::boolean(true);
            case dsl::BoolOp::logical_or:
                for (const auto& c : e.children)
                    if (as_bool(c)) return Value::boolean(true);
                return Value::boolean(false);
        }
        fail(RuntimeErrorKind::type_error, "unreachable bool op", e.pos);
    }

    static bool numeric(const Value& v) {
        return v.kind == Value::Kind::integer || v.kind == Value::Kind::real;
    }
    static double as_number(const Value& v) {
        return v.kind == Value::Kind::integer ? static_cast<double>(v.i) : v.d;
    }

    Value eval_compare(const dsl::Expr& e) {
        Value lhs = eval(e.children[0]);
        Value rhs = eval(e.children[1]);
        const bool both_numeric = numeric(lhs) && numeric(rhs);
        if (e.cmp == dsl::CompareOp::eq || e.cmp == dsl::CompareOp::ne) {
            bool equal;
            if (both_numeric) equal = as_number(lhs) == as_number(rhs);
            else equal = lhs == rhs;  // distinct kinds simply compare unequal
            return Value::boolean(e.cmp == dsl::CompareOp::eq ? equal : !equal);
        }
        if (!both_numeric)
            fail(RuntimeErrorKind::type_error,
                 "ordering comparison on non-numeric values", e.pos);
        const double a = as_number(lhs), b = as_number(rhs);
        switch (e.cmp) {
            case dsl::CompareOp::lt: return Value::boolean(a < b);
            case dsl::CompareOp::le: return Value::boolean(a <= b);
            case dsl::CompareOp::gt: return Value::boolean(a > b);
            case dsl::CompareOp::ge: return Value::boolean(a >= b);
            default: break;
        }
        fail(RuntimeErrorKind::type_error, "unreachable compare op", e.pos);
    }

    Value eval_index(const dsl::Expr& e) {
        Value base = eval(e.children[0]);
        Value sub = eval(e.children[1]);
        if (!base.is_list())
            fail(RuntimeErrorKind::type_error, "indexing a non-list value", e.pos);
        if (sub.kind != Value::Kind::integer)
            fail(RuntimeErrorKind::type_error, "list index is not an integer", e.pos);
        if (sub.i < 0 || sub.i >= static_cast<long long>(base.list.size()))
            fail(RuntimeErrorKind::index_out_of_range,
                 "index " + std::to_string(sub.i) + " out of range for a list of " +
                     std::to_string(base.list.size()) + " item(s)",
                 e.pos);
        return base.list[static_cast<size_t>(sub.i)];
    }

    TemporalSpan as_clip(const Value& v, SourcePos pos) {
        if (v.kind != Value::Kind::clip)
            fail(RuntimeErrorKind::type_error, "expected a clip value", pos);
        return v.span;
    }
    std::string as_text(const Value& v, SourcePos pos) {
        if (v.kind != Value::Kind::text)
            fail(RuntimeErrorKind::type_error, "expected a text value", pos);
        return v.s;
    }
    std::vector<std::string> as_texts(const Value& v, SourcePos pos) {
        if (!v.is_list())
            fail(RuntimeErrorKind::type_error, "expected a list of texts", pos);
        std::vector<std::string> out;
        for (const auto& item : v.list) out.push_back(as_text(item, pos));
        return out;
    }

    // Returns the substituted output value for this step, or nullopt to run
    // the live backend.
    std::optional<Value> substituted_output(SubTask tag, SourcePos pos) {
        if (!plan_ || plan_->empty()) return std::nullopt;
        bool substitute;
        if (const auto* by_index =
                std::get_if<SubstitutionPlan::TestByIndex>(&plan_->step_under_test)) {
            if (call_index_ == by_index->index) return std::nullopt;
            substitute = call_index_ < by_index->index ||
                         plan_->mode == SubstitutionPlan::Mode::single_step;
        } else if (const auto* by_tag =
                       std::get_if<SubstitutionPlan::TestByTag>(&plan_->step_under_test)) {
            substitute = by_tag->tag != tag;
        } else {
            substitute = true;  // no step under test: replay ground truth everywhere
        }
        if (!substitute) return std::nullopt;
        auto it = plan_->gt_bindings.find(call_index_);
        if (it == plan_->gt_bindings.end())
            fail(RuntimeErrorKind::substitution_missing,
                 "no ground-truth binding for step " + std::to_string(call_index_), pos);
        return it->second;
    }

    Value record_step(const dsl::Expr& call, SubTask tag, json inputs,
                      const std::function<Value()>& live, const std::string& live_backend) {
        TraceStep step;
        step.call = dsl::CallBinding{call.pos, call.name, tag, call.children.size()};
        step.inputs = std::move(inputs);

        if (auto gt = substituted_output(tag, call.pos)) {
            step.output = *gt;
            step.backend = "oracle-substituted";
            step.latency_ms = 0.0;
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                step.output = live();
            } catch (const NoSpanError& e) {
                ++call_index_;  // the failed call still consumed a step slot
                fail(RuntimeErrorKind::no_span, e.what(), call.pos);
            } catch (const AgentError& e) {
                ++call_index_;
                fail(RuntimeErrorKind::agent_failure,
                     std::string(e.what()) + " [sub-task " + e.sub_task + "]", call.pos);
            }
            const auto t1 = std::chrono::steady_clock::now();
            step.latency_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
            step.backend = live_backend;
        }
        Value out = step.output;
        trace_.steps.push_back(std::move(step));
        ++call_index_;
        return out;
    }

    Value eval_call(const dsl::Expr& e) {
        std::vector<Value> args;
        for (const auto& arg : e.children) args.push_back(eval(arg));
        const std::string& api = e.name;

        if (api == "trim") {
            const TemporalSpan clip = as_clip(args[0], e.children[0].pos);
            const std::string query = as_text(args[1], e.children[1].pos);
            json inputs{{"clip", to_json(clip)}, {"query", query}};
            return record_step(e, SubTask::ground, std::move(inputs), [&] {
                const TemporalSpan grounded = agents_.grounder->ground(video_, query);
                auto inter = span_intersection(grounded, clip);
                if (!inter)
                    throw NoSpanError("grounded window " + render_span(grounded) +
                                      " does not overlap the clip " + render_span(clip));
                return Value::clip(*inter);
            }, agents_.grounder->backend_kind());
        }

        if (api == "find" || api == "exists") {
            const TemporalSpan clip = as_clip(args[0], e.children[0].pos);
            const std::string query = as_text(args[1], e.children[1].pos);
            json inputs{{"clip", to_json(clip)}, {"query", query}};
            Value boxes = record_step(e, SubTask::detect, std::move(inputs), [&] {
                std::vector<Value> items;
                for (auto& d : agents_.detector->detect(clip, video_, query))
                    items.push_back(Value::detection(std::move(d)));
                return Value::make_list(std::move(items));
            }, agents_.detector->backend_kind());
            if (api == "exists") return Value::boolean(!boxes.list.empty());
            return boxes;
        }

        if (api == "recognize_actions") {
            const TemporalSpan clip = as_clip(args[0], e.children[0].pos);
            json inputs{{"clip", to_json(clip)}};
            return record_step(e, SubTask::recognize, std::move(inputs), [&] {
                std::vector<Value> items;
                for (auto& label : agents_.recognizer->recognize(clip, video_))
                    items.push_back(Value::text(std::move(label)));
                return Value::make_list(std::move(items));
            }, agents_.recognizer->backend_kind());
        }

        if (api == "query") {
            const TemporalSpan clip = as_clip(args[0], e.children[0].pos);
            const std::string question = as_text(args[1], e.children[1].pos);
            json inputs{{"clip", to_json(clip)}, {"question", question}};
            // upstream findings travel to the QA agent as rendered trace steps
            const std::string context = render_trace_steps(trace_.steps);
            return record_step(e, SubTask::qa, std::move(inputs), [&] {
                return Value::text(agents_.answerer->answer(clip, video_, question, context));
            }, agents_.answerer->backend_kind());
        }

        if (api == "best_text_match") {
            const std::vector<std::string> candidates = as_texts(args[0], e.children[0].pos);
            const std::string query = as_text(args[1], e.children[1].pos);
            json cand_json = json::array();
            for (const auto& c : candidates) cand_json.push_back(c);
            json inputs{{"candidates", std::move(cand_json)}, {"query", query}};
            return record_step(e, SubTask::logic, std::move(inputs), [&] {
                if (candidates.empty())
                    throw AgentError("best_text_match with an empty candidate list", "logic");
                return Value::text(best_text_match(candidates, query));
            }, "logic");
        }

        fail(RuntimeErrorKind::type_error, "call to unregistered API '" + api + "'", e.pos);
    }

    const dsl::ValidatedProgram& program_;
    const VideoContext& video_;
    const QASample& sample_;
    const AgentRegistry& agents_;
    const SubstitutionPlan* plan_;
    const Budget& budget_;

    ExecutionTrace trace_;
    std::map<std::string, Value> env_;
    int statements_ = 0;
    int call_index_ = 0;
};

}  // namespace

ExecutionTrace execute(const dsl::ValidatedProgram& program, const VideoContext& video,
                       const QASample& sample, const AgentRegistry& agents,
                       const Budget& budget) {
    Interpreter interp(program, video, sample, agents, nullptr, budget);
    return interp.run();
}

ExecutionTrace execute_with_substitution(const dsl::ValidatedProgram& program,
                                         const VideoContext& video, const QASample& sample,
                                         const AgentRegistry& agents,
                                         const SubstitutionPlan& plan, const Budget& budget) {
    Interpreter interp(program, video, sample, agents, &plan, budget);
    return interp.run();
}

std::string final_answer_of(const ExecutionTrace& trace) {
    if (!trace.completed() || !trace.final_answer)
        throw DomainError("trace for sample '" + trace.sample_id +
                          "' has no final answer (status " + to_string(trace.status.kind) +
                          ")");
    return *trace.final_answer;
}

std::map<int, Value> harvest_gt_bindings(const dsl::ValidatedProgram& program,
                                         const VideoContext& video, const QASample& sample,
                                         const AgentRegistry& oracle_agents,
                                         const Budget& budget) {
    ExecutionTrace trace = execute(program, video, sample, oracle_agents, budget);
    if (!trace.completed())
        throw DomainError("ground-truth harvest failed for sample '" + sample.sample_id +
                          "': " + to_string(trace.status.kind) + " " + trace.status.message);
    std::map<int, Value> bindings;
    for (size_t i = 0; i < trace.steps.size(); ++i)
        bindings[static_cast<int>(i)] = trace.steps[i].output;
    return bindings;
}

}  // namespace videocot
