#pragma once

#include <string>

#include "vifrag/core/types.hpp"

namespace vifrag::core {

inline std::string join_quoted(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += (i + 1 == items.size()) ? " and " : ", ";
        out += "\"" + items[i] + "\"";
    }
    return out;
}

inline std::string relation_phrase(Relation r, int64_t n) {
    std::string num = std::to_string(n);
    switch (r) {
        case Relation::AtLeast: return "at least " + num;
        case Relation::AtMost: return "at most " + num;
        case Relation::Exactly: return "exactly " + num;
    }
    return num;
}

/// Default natural-language phrasing for an instance. Seeds and LLM-reformed
/// instructions carry their own text; this is the fallback used by templates
/// and the blend fallback path.
inline std::string render_default_text(const AtomicInstructionInstance& inst) {
    const std::string& id = inst.spec_id;
    const ParamMap& p = inst.params;
    if (id == "keywords:inclusion")
        return "Include the keyword(s) " + join_quoted(param_string_list(p, "keywords")) +
               " in your response.";
    if (id == "keywords:exclusion")
        return "Do not use the keyword(s) " + join_quoted(param_string_list(p, "keywords")) +
               " anywhere in your response.";
    if (id == "keywords:frequency")
        return "Use the word \"" + param_string(p, "keyword") + "\" " +
               relation_phrase(param_relation(p), param_int(p, "n")) + " times.";
    if (id == "length:words")
        return "Answer with " + relation_phrase(param_relation(p), param_int(p, "n")) + " words.";
    if (id == "length:sentences")
        return "Answer with " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " sentences.";
    if (id == "length:paragraphs")
        return "Write " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " paragraphs separated by blank lines.";
    if (id == "format:json") return "Wrap your entire response in valid JSON format.";
    if (id == "format:quotation") return "Wrap your entire response in double quotation marks.";
    if (id == "format:no_commas") return "Do not use any commas in your response.";
    if (id == "format:language")
        return "Respond entirely in the language with code \"" + param_string(p, "language") +
               "\".";
    if (id == "format:repeat_question")
        return "First repeat the question word for word without change, then give your answer.";
    if (id == "structure:title")
        return "Give your answer a title wrapped in double angular brackets, such as "
               "<<your title>>, on its own line.";
    if (id == "structure:sections")
        return "Organize the response into " +
               relation_phrase(param_relation(p), param_int(p, "n")) +
               " sections, each starting with the word \"" + param_string(p, "splitter") + "\".";
    if (id == "structure:highlights")
        return "Highlight " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " parts of your answer with asterisks, like *this*.";
    if (id == "structure:bullets")
        return "Format your answer as " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " bullet points, one per line starting with \"- \".";
    if (id == "structure:placeholder")
        return "Leave " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " placeholders in square brackets, such as [address].";
    if (id == "cases:uppercase") return "Your entire response must be in English capital letters only.";
    if (id == "cases:lowercase")
        return "Your entire response must be in English lowercase letters; no capitals are allowed.";
    if (id == "cases:capital_words")
        return "Use " + relation_phrase(param_relation(p), param_int(p, "n")) +
               " words written in all capital letters.";
    if (id == "position:end_with")
        return "Finish your response with this exact phrase: \"" + param_string(p, "suffix") +
               "\". No other words should follow it.";
    if (id == "position:postscript")
        return "At the end of your response, add a postscript starting with \"" +
               param_string(p, "marker") + "\".";
    if (id == "position:first_word")
        return "Paragraph " + std::to_string(param_int(p, "n")) +
               " must start with the word \"" + param_string(p, "word") + "\".";
    return spec_by_id(id).description;
}

}  // namespace vifrag::core
