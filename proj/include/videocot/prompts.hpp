#pragma once

#include <string>
#include <vector>

namespace videocot {
namespace prompts {

// Suffix prompts selecting the output mode at training and inference time.
// These strings are part of the dataset file contract; do not reword them.
inline constexpr const char* kMcAnswerSuffix =
    "Answer with the option's letter from the given choices directly and only "
    "give the best option.";
inline constexpr const char* kOeAnswerSuffix = "Answer in one word or phrase.";
inline constexpr const char* kRationaleSuffix =
    "Explain the rationale to answer the question.";

/// Marker line that precedes the trace rendering in the conversion prompt.
/// Kept last in the prompt so an echo stub reproduces the rendering verbatim.
inline constexpr const char* kTraceMarker = "Execution trace:\n";

/// "(A) ...\n(B) ..." block, empty string when there are no options.
std::string render_options(const std::vector<std::string>& options);

/// Program-generation prompt: instructions + API docs + the question.
std::string program_generation(const std::string& question,
                               const std::vector<std::string>& options,
                               const std::string& registry_docs);

/// Trace-to-rationale conversion prompt. The trace rendering is appended
/// after kTraceMarker.
std::string cot_conversion(const std::string& question,
                           const std::vector<std::string>& options,
                           const std::string& trace_rendering);

/// Binary usefulness/coherence judgment over a finished rationale.
std::string cot_filter(const std::string& question,
                       const std::vector<std::string>& options, const std::string& cot);

/// Binary open-ended answer equivalence judgment.
std::string oe_answer_judge(const std::string& question, const std::string& gold,
                            const std::string& predicted);

}  // namespace prompts
}  // namespace videocot
