#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "videocot/agents.hpp"
#include "videocot/dsl.hpp"

namespace videocot {

// ---------------------------------------------------------------------------
// Runtime values

struct Value {
    enum class Kind { null, boolean, integer, real, text, clip, detection, list };

    Kind kind = Kind::null;
    bool b = false;
    long long i = 0;
    double d = 0.0;
    std::string s;
    TemporalSpan span{};
    Detection det{};
    std::vector<Value> list;

    static Value null();
    static Value boolean(bool v);
    static Value integer(long long v);
    static Value real(double v);
    static Value text(std::string v);
    static Value clip(TemporalSpan v);
    static Value detection(Detection v);
    static Value make_list(std::vector<Value> v);

    bool is_list() const { return kind == Kind::list; }
    /// Human/LLM-facing rendering ("frames a–b of 32", "[x,y,x,y]", "yes"...).
    std::string render() const;
};

bool operator==(const Value& a, const Value& b);

json value_to_json(const Value& v);
Value value_from_json(const json& j);

// ---------------------------------------------------------------------------
// Trace

struct TraceStep {
    dsl::CallBinding call;     // api name, sub-task tag, position
    json inputs;               // structured arguments, stable field order
    Value output;
    std::string backend;       // oracle | http | stub | logic | oracle-substituted
    double latency_ms = 0.0;
};

enum class RuntimeErrorKind {
    index_out_of_range,
    type_error,
    no_span,
    agent_failure,
    substitution_missing,
};

std::string to_string(RuntimeErrorKind k);

struct TraceStatus {
    enum class Kind { completed, runtime_error, budget_exceeded };
    Kind kind = Kind::completed;
    std::optional<RuntimeErrorKind> error = std::nullopt;
    std::string message;
    SourcePos pos;
};

std::string to_string(TraceStatus::Kind k);

struct ExecutionTrace {
    std::string sample_id;
    std::string program_hash;
    std::vector<TraceStep> steps;
    std::map<std::string, Value> bindings;  // final variable environment
    std::optional<std::string> final_answer;
    TraceStatus status;

    bool completed() const { return status.kind == TraceStatus::Kind::completed; }
};

/// JSONL form (one line per trace; schema in docs/trace.md). Field order is
/// stable so replay runs diff cleanly. `include_latency=false` drops the
/// timing fields entirely.
json trace_to_json(const ExecutionTrace& trace, bool include_latency = true);
ExecutionTrace trace_from_json(const json& j);

/// Deterministic text rendering of trace steps ("Step k: tag(inputs) ->
/// outputs"); feeds the QA context and the CoT conversion prompt.
std::string render_trace_steps(const std::vector<TraceStep>& steps);

// ---------------------------------------------------------------------------
// Budgets and substitution

struct Budget {
    int max_statements = 256;   // evaluated statements before abort
    int max_loop_iterations = 64;
};

/// Ground-truth substitution: outputs for agent calls (keyed by call sequence
/// index) taken from annotations instead of live agents.
struct SubstitutionPlan {
    struct TestByIndex { int index; };
    struct TestByTag { SubTask tag; };
    /// monostate: no step under test; every planned step substitutes.
    std::variant<std::monostate, TestByIndex, TestByTag> step_under_test;
    std::map<int, Value> gt_bindings;

    /// After the tested step: single_step keeps substituting ground truth,
    /// end_to_end lets live agents run.
    enum class Mode { single_step, end_to_end };
    Mode mode = Mode::single_step;

    bool empty() const {
        return gt_bindings.empty() &&
               std::holds_alternative<std::monostate>(step_under_test);
    }
};

// ---------------------------------------------------------------------------
// Execution

/// Runs a validated program against the registry. Runtime errors are data:
/// they land in trace.status and never propagate out of the call.
ExecutionTrace execute(const dsl::ValidatedProgram& program, const VideoContext& video,
                       const QASample& sample, const AgentRegistry& agents,
                       const Budget& budget = {});

/// Same, but steps selected by the plan take their outputs from
/// plan.gt_bindings verbatim (recorded with backend "oracle-substituted").
/// An index plan whose bindings do not cover every step before the tested one
/// throws ConfigError before any agent call.
ExecutionTrace execute_with_substitution(const dsl::ValidatedProgram& program,
                                         const VideoContext& video, const QASample& sample,
                                         const AgentRegistry& agents,
                                         const SubstitutionPlan& plan,
                                         const Budget& budget = {});

/// The final answer of a completed trace; throws DomainError otherwise.
std::string final_answer_of(const ExecutionTrace& trace);

/// Runs the program on oracle agents and returns every step output keyed by
/// call sequence index — the ground-truth bindings for substitution plans.
std::map<int, Value> harvest_gt_bindings(const dsl::ValidatedProgram& program,
                                         const VideoContext& video, const QASample& sample,
                                         const AgentRegistry& oracle_agents,
                                         const Budget& budget = {});

}  // namespace videocot
