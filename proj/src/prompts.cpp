#include "videocot/prompts.hpp"

namespace videocot {
namespace prompts {

std::string render_options(const std::vector<std::string>& options) {
    std::string out;
    for (size_t i = 0; i < options.size(); ++i)
        out += "(" + std::string(1, static_cast<char>('A' + i)) + ") " + options[i] + "\n";
    return out;
}

std::string program_generation(const std::string& question,
                               const std::vector<std::string>& options,
                               const std::string& registry_docs) {
    std::string p;
    p += "You decompose a video question into a short program of sub-tasks.\n";
    p += "Write only code. The program runs in a restricted Python-like "
         "language with these functions:\n\n";
    p += registry_docs;
    p += "\nRules:\n";
    p += "- `video` is the full clip, `question` is the question text";
    p += ", `options` is the list of answer options (empty unless "
         "multiple-choice).\n";
    p += "- No imports, no attribute access, no while loops, no function "
         "definitions.\n";
    p += "- Every path must end with answer(<expression>).\n";
    p += "- For multiple-choice questions, answer with "
         "best_text_match(options, <your result>).\n\n";
    p += "Question: " + question + "\n";
    if (!options.empty()) p += "Options:\n" + render_options(options);
    p += "Program:\n";
    return p;
}

std::string cot_conversion(const std::string& question,
                           const std::vector<std::string>& options,
                           const std::string& trace_rendering) {
    std::string p;
    p += "Rewrite the execution trace below as a clear step-by-step rationale "
         "in natural language.\n";
    p += "Keep every temporal window (\"frames a–b of 32\") and every "
         "bounding box (\"[x_min,y_min,x_max,y_max]\") exactly as written, and "
         "end by stating the answer.\n\n";
    p += "Question: " + question + "\n";
    if (!options.empty()) p += "Options:\n" + render_options(options);
    p += kTraceMarker + trace_rendering;
    return p;
}

std::string cot_filter(const std::string& question,
                       const std::vector<std::string>& options, const std::string& cot) {
    std::string p;
    p += "Decide whether the rationale below follows a clear step-by-step "
         "reasoning process and is truly helpful for solving the question.\n";
    p += "Reply with exactly one word: Yes or No.\n\n";
    p += "Question: " + question + "\n";
    if (!options.empty()) p += "Options:\n" + render_options(options);
    p += "Rationale:\n" + cot + "\n";
    p += "Verdict:";
    return p;
}

std::string oe_answer_judge(const std::string& question, const std::string& gold,
                            const std::string& predicted) {
    std::string p;
    p += "Decide whether the predicted answer means the same thing as the "
         "correct answer, ignoring wording and format differences.\n";
    p += "Reply with exactly one word: Yes or No.\n\n";
    p += "Question: " + question + "\n";
    p += "Correct answer: " + gold + "\n";
    p += "Predicted answer: " + predicted + "\n";
    p += "Verdict:";
    return p;
}

}  // namespace prompts
}  // namespace videocot
