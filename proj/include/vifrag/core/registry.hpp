#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vifrag/core/params.hpp"

namespace vifrag::core {

enum class Family { Keywords, Length, Format, Structure, Cases, Position };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::Keywords: return "keywords";
        case Family::Length: return "length";
        case Family::Format: return "format";
        case Family::Structure: return "structure";
        case Family::Cases: return "cases";
        case Family::Position: return "position";
    }
    return "keywords";
}

inline Family family_from_string(const std::string& s) {
    if (s == "keywords") return Family::Keywords;
    if (s == "length") return Family::Length;
    if (s == "format") return Family::Format;
    if (s == "structure") return Family::Structure;
    if (s == "cases") return Family::Cases;
    if (s == "position") return Family::Position;
    throw util::SchemaError("unknown constraint family \"" + s + "\"");
}

struct ParamField {
    ParamKind kind;
    bool required;
};

/// One of the 22 verifiable constraint types. `id` is the stable key
/// ("family:row") that instances, conflict rules, and benchmark records use.
struct AtomicInstructionSpec {
    std::string id;
    Family family;
    std::string description;
    std::map<std::string, ParamField> param_schema;
};

class UnknownSpecError : public std::runtime_error {
public:
    explicit UnknownSpecError(const std::string& id)
        : std::runtime_error("unknown constraint spec id \"" + id + "\"") {}
};

inline const std::vector<AtomicInstructionSpec>& registry() {
    static const std::vector<AtomicInstructionSpec> specs = [] {
        using F = Family;
        const ParamField req_int{ParamKind::Int, true};
        const ParamField opt_rel{ParamKind::Relation, false};
        std::vector<AtomicInstructionSpec> s;
        s.push_back({"keywords:inclusion", F::Keywords,
                     "Include specific keywords in the response.",
                     {{"keywords", {ParamKind::StringList, true}}}});
        s.push_back({"keywords:exclusion", F::Keywords,
                     "Exclude specific keywords from the response.",
                     {{"keywords", {ParamKind::StringList, true}}}});
        s.push_back({"keywords:frequency", F::Keywords,
                     "Frequency constraint for including a specific keyword in the response.",
                     {{"keyword", {ParamKind::String, true}}, {"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"length:words", F::Length,
                     "Constraint on the number of words.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"length:sentences", F::Length,
                     "Constraint on the number of sentences.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"length:paragraphs", F::Length,
                     "Constraint on the number of paragraphs.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"format:json", F::Format,
                     "Wrap the entire response in JSON format.",
                     {}});
        s.push_back({"format:quotation", F::Format,
                     "Wrap the response in double quotation marks.",
                     {}});
        s.push_back({"format:no_commas", F::Format,
                     "No commas allowed anywhere in the response.",
                     {}});
        s.push_back({"format:language", F::Format,
                     "Restrict the output language.",
                     {{"language", {ParamKind::LanguageCode, true}}}});
        s.push_back({"format:repeat_question", F::Format,
                     "Repeat the question verbatim before answering.",
                     {{"question", {ParamKind::String, true}}}});
        s.push_back({"structure:title", F::Structure,
                     "Include a title wrapped in double angular brackets on its own line.",
                     {}});
        s.push_back({"structure:sections", F::Structure,
                     "Constrain the number of sections marked by a splitter token.",
                     {{"relation", opt_rel}, {"n", req_int}, {"splitter", {ParamKind::String, false}}}});
        s.push_back({"structure:highlights", F::Structure,
                     "Constrain the number of emphasized (*highlighted*) parts.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"structure:bullets", F::Structure,
                     "Constrain the number of bullet points.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"structure:placeholder", F::Structure,
                     "Constrain the number of square-bracket placeholders.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"cases:uppercase", F::Cases,
                     "Response must be in all capital letters.",
                     {}});
        s.push_back({"cases:lowercase", F::Cases,
                     "Response must be in all lowercase letters.",
                     {}});
        s.push_back({"cases:capital_words", F::Cases,
                     "Constrain the number of fully-capitalized words.",
                     {{"relation", opt_rel}, {"n", req_int}}});
        s.push_back({"position:end_with", F::Position,
                     "Response must end with specific content.",
                     {{"suffix", {ParamKind::String, true}}}});
        s.push_back({"position:postscript", F::Position,
                     "Add a postscript marker (e.g. P.S.) after the main response.",
                     {{"marker", {ParamKind::String, false}}}});
        s.push_back({"position:first_word", F::Position,
                     "Constrain the starting word of paragraph n.",
                     {{"n", req_int}, {"word", {ParamKind::String, true}}}});
        return s;
    }();
    return specs;
}

inline const AtomicInstructionSpec& spec_by_id(const std::string& id) {
    for (const auto& s : registry())
        if (s.id == id) return s;
    throw UnknownSpecError(id);
}

inline bool spec_exists(const std::string& id) {
    for (const auto& s : registry())
        if (s.id == id) return true;
    return false;
}

/// True for specs whose semantics are a (relation, n) count.
inline bool spec_is_counted(const AtomicInstructionSpec& spec) {
    return spec.param_schema.count("n") > 0 && spec.id != "position:first_word";
}

/// Checks `params` against the spec schema, injects defaults (relation ->
/// at_least, sections splitter -> "Section", postscript marker -> "P.S."),
/// and rejects unknown or mistyped parameters.
inline ParamMap validate_params(const AtomicInstructionSpec& spec, const ParamMap& params) {
    for (const auto& [name, value] : params) {
        auto it = spec.param_schema.find(name);
        if (it == spec.param_schema.end())
            throw util::SchemaError(spec.id + ": unknown param \"" + name + "\"");
        const ParamKind kind = it->second.kind;
        bool ok = false;
        switch (kind) {
            case ParamKind::Int: ok = std::holds_alternative<int64_t>(value); break;
            case ParamKind::String:
            case ParamKind::LanguageCode: ok = std::holds_alternative<std::string>(value); break;
            case ParamKind::StringList:
                ok = std::holds_alternative<std::vector<std::string>>(value);
                break;
            case ParamKind::Relation: ok = std::holds_alternative<Relation>(value); break;
        }
        if (!ok)
            throw util::SchemaError(spec.id + ": param \"" + name + "\" must be " +
                                    to_string(kind));
    }
    for (const auto& [name, field] : spec.param_schema) {
        if (field.required && params.find(name) == params.end())
            throw util::SchemaError(spec.id + ": missing required param \"" + name + "\"");
    }

    ParamMap normalized = params;
    if (spec.param_schema.count("relation") && !normalized.count("relation"))
        normalized["relation"] = Relation::AtLeast;
    if (spec.id == "structure:sections" && !normalized.count("splitter"))
        normalized["splitter"] = std::string("Section");
    if (spec.id == "position:postscript" && !normalized.count("marker"))
        normalized["marker"] = std::string("P.S.");

    if (spec.id == "keywords:inclusion" || spec.id == "keywords:exclusion") {
        if (param_string_list(normalized, "keywords").empty())
            throw util::SchemaError(spec.id + ": keywords must be non-empty");
    }
    return normalized;
}

}  // namespace vifrag::core
