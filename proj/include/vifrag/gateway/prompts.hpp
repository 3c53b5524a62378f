#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vifrag/util/strings.hpp"

// Prompt templates and the transcript parsers that pair with them. The
// consistency-scoring and RAG-judging templates are fixed text with single
// substitution slots; the golden-file tests in tests/ compare them byte for
// byte, so edit with care. The remaining prompts (rewriting, verification
// generation, reforming, blending) have no published wording and are this
// project's own.

namespace vifrag::gateway::prompts {

inline const char* kConsistencyTemplate =
    "You are an expert proficient in determining whether multiple instructions are suitable to "
    "be implemented as simultaneous constraints.\n"
    "\n"
    "[Instructions]{instruction}\n"
    "\n"
    "The text contains two or more instructions. Based on the semantic coherence and logical "
    "connection, assess whether these instructions are suitable to be implemented as "
    "simultaneous constraints. Please first conduct a thorough analysis and then assign a score "
    "ranging from 0 to 10 on the last line. A score of 0 indicates that the instructions are "
    "highly inappropriate to coexist, while a score of 10 signifies that the instructions are "
    "very suitable to serve as concurrent constraints. Please ensure that only a score is "
    "provided in the format Score: {{score}} without any additional content on the last line.";

inline const char* kJudgingTemplate =
    "Please act as an impartial judge and perform the task:\n"
    "Given a [Question], you need to evaluate whether the [Response] correctly answers or hits "
    "the correct answer, and output your judgment after [Judge]. I will provide a correct "
    "answer [Reference] as a reference.\n"
    "Scoring criteria:\n"
    "- If the [Response] is completely correct and aligns with the correct answer, it scores 1 "
    "point;\n"
    "- If the [Response] partially answers correctly, it scores 0.5 point;\n"
    "- If the [response] is completely incorrect compared to the [Reference], it scores 0 "
    "point.\n"
    "\n"
    "Note:\n"
    "- Your only evaluation criterion is whether the [Response] correctly answered the answer, "
    "regardless of the format, language, case, length, etc., of the [Response]. Besides, "
    "providing more information than the [Reference] in the [Response] cannot be a reason for "
    "point deduction.\n"
    "- Use the [Reference] as the correct answer reference rather than your own knowledge.\n"
    "- The rating reply must strictly follow the format below: \"Rating: "
    "[judge_score]\\nReason: [judge_reason]\", and do not output any other content. For "
    "example: \"Rating: [0]\\nReason: [Response and Reference are completely unrelated.]\". "
    "Ensure that judge_score and judge_reason are enclosed in [].\n"
    "\n"
    "[Question]\n"
    "{question}\n"
    "\n"
    "[Reference]\n"
    "{answer_gold}\n"
    "\n"
    "[Response]\n"
    "{response}\n"
    "\n"
    "[Judge]";

inline std::string render_consistency_prompt(const std::string& instruction_text) {
    return util::replace_all(kConsistencyTemplate, "{instruction}", instruction_text);
}

inline std::string render_judging_prompt(const std::string& question, const std::string& gold,
                                         const std::string& response) {
    std::string out = kJudgingTemplate;
    out = util::replace_all(std::move(out), "{question}", question);
    out = util::replace_all(std::move(out), "{answer_gold}", gold);
    out = util::replace_all(std::move(out), "{response}", response);
    return out;
}

/// Parses `Score: N` (case-insensitive) on the last non-empty line only.
/// N outside 1..10 counts as unparseable, matching the gate's fail-closed
/// handling of malformed replies.
inline std::optional<int> parse_consistency_score(const std::string& reply) {
    auto lines = util::split_lines(reply);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        std::string line = util::trim(*it);
        if (line.empty()) continue;
        std::string lower = util::lower_ascii(line);
        if (lower.rfind("score:", 0) != 0) return std::nullopt;
        std::string rest = util::trim(line.substr(6));
        if (rest.empty() || rest.size() > 2) return std::nullopt;
        for (char c : rest)
            if (!util::is_ascii_digit(c)) return std::nullopt;
        int score = std::stoi(rest);
        if (score < 1 || score > 10) return std::nullopt;
        return score;
    }
    return std::nullopt;
}

/// Parses `Rating: [x]` with x in {1, 0.5, 0}; anything else is a judge
/// error. The first line carrying "Rating:" decides.
inline std::optional<double> parse_rating(const std::string& reply) {
    for (const auto& raw : util::split_lines(reply)) {
        std::string line = util::trim(raw);
        if (line.rfind("Rating:", 0) != 0) continue;
        std::string rest = util::trim(line.substr(7));
        if (rest.size() < 3 || rest.front() != '[') return std::nullopt;
        size_t close = rest.find(']');
        if (close == std::string::npos) return std::nullopt;
        std::string value = util::trim(rest.substr(1, close - 1));
        if (value == "1") return 1.0;
        if (value == "0.5") return 0.5;
        if (value == "0") return 0.0;
        return std::nullopt;
    }
    return std::nullopt;
}

// ---- artifact-authored prompts ------------------------------------------------

inline std::string render_rewrite_prompt(const std::vector<std::string>& instructions) {
    std::string prompt =
        "You will be given a numbered list of instructions. Rewrite each instruction with "
        "different wording while preserving every requirement and constraint it states. Do not "
        "add, drop, or weaken any requirement.\n"
        "Reply with the same numbered format, exactly one rewritten instruction per line, and "
        "no other content.\n\n";
    for (size_t i = 0; i < instructions.size(); ++i) {
        prompt += std::to_string(i + 1) + ". " + util::collapse_whitespace(instructions[i]) + "\n";
    }
    return prompt;
}

/// Reply format: numbered lines aligned with the input. Returns slot ->
/// rewritten text; missing or empty slots stay unset.
inline std::vector<std::optional<std::string>> parse_numbered_reply(const std::string& reply,
                                                                    size_t expected) {
    std::vector<std::optional<std::string>> out(expected);
    for (const auto& raw : util::split_lines(reply)) {
        std::string line = util::trim(raw);
        size_t dot = line.find(". ");
        if (dot == std::string::npos || dot == 0 || dot > 4) continue;
        bool digits = true;
        for (size_t i = 0; i < dot; ++i)
            if (!util::is_ascii_digit(line[i])) digits = false;
        if (!digits) continue;
        size_t idx = static_cast<size_t>(std::stoul(line.substr(0, dot)));
        if (idx < 1 || idx > expected) continue;
        std::string text = util::trim(line.substr(dot + 2));
        if (!text.empty()) out[idx - 1] = text;
    }
    return out;
}

inline std::string render_gen_verification_prompt(const std::string& instruction_text, int k) {
    std::string prompt =
        "Write verification code for the following instruction constraint.\n\n"
        "Instruction: " + instruction_text + "\n\n"
        "Produce exactly " + std::to_string(k) + " independent verification programs and " +
        std::to_string(k) + " test cases.\n"
        "Each program reads one JSON document from standard input (the candidate response), "
        "checks whether it satisfies the instruction, and prints True or False as its final "
        "line.\n"
        "Each test case is a single JSON document.\n"
        "Format your reply as alternating fenced blocks: a ```python block for each program, "
        "followed by a ```json block for its test case.";
    return prompt;
}

/// Extracts fenced blocks with the given info tag, e.g. "python" or "json".
inline std::vector<std::string> extract_fenced_blocks(const std::string& reply,
                                                      const std::string& tag) {
    std::vector<std::string> blocks;
    const std::string open = "```" + tag;
    size_t pos = 0;
    while (true) {
        size_t start = reply.find(open, pos);
        if (start == std::string::npos) break;
        size_t body_start = reply.find('\n', start);
        if (body_start == std::string::npos) break;
        ++body_start;
        size_t end = reply.find("```", body_start);
        if (end == std::string::npos) break;
        blocks.push_back(reply.substr(body_start, end - body_start));
        pos = end + 3;
    }
    return blocks;
}

inline std::string render_sample_prompt(const std::string& instruction_text,
                                        const std::string& question,
                                        const std::vector<std::pair<std::string, std::string>>&
                                            passages /* (title, text) */) {
    std::string prompt;
    if (!passages.empty()) {
        prompt += "Passages:\n";
        for (size_t i = 0; i < passages.size(); ++i) {
            prompt += "[" + std::to_string(i + 1) + "] " + passages[i].first + "\n" +
                      passages[i].second + "\n\n";
        }
    }
    prompt += "Question: " + question + "\n\n" + instruction_text;
    return prompt;
}

inline std::string render_reform_prompt(const std::string& question, const std::string& spec_id,
                                        const std::string& spec_description,
                                        const std::string& param_schema_json,
                                        const std::vector<std::string>& demos) {
    std::string prompt =
        "Generate a varied instruction for a question-answering task.\n\n"
        "spec: " + spec_id + "\n"
        "meaning: " + spec_description + "\n"
        "parameter schema: " + param_schema_json + "\n\n"
        "Question: " + question + "\n\nDemonstrations:\n";
    for (const auto& d : demos) prompt += "- " + d + "\n";
    prompt +=
        "\nWrite one new instruction of this type with fresh phrasing and concrete parameters. "
        "Reply with a single JSON object {\"text\": ..., \"params\": {...}} and nothing else.";
    return prompt;
}

inline std::string render_blend_prompt(const std::string& question,
                                       const std::vector<std::string>& instruction_texts) {
    std::string prompt =
        "Blend the question and the instructions below into one natural, coherent paragraph "
        "that a user might write. Keep every requirement intact and keep the question "
        "answerable. Reply with the paragraph only, on a single line.\n\n"
        "Question: " + question + "\n";
    for (size_t i = 0; i < instruction_texts.size(); ++i) {
        prompt += "Instruction " + std::to_string(i + 1) + ": " + instruction_texts[i] + "\n";
    }
    return prompt;
}

}  // namespace vifrag::gateway::prompts
