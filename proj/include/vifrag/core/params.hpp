#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vifrag/util/jsonl.hpp"

namespace vifrag::core {

/// Comparison mode for counted constraints. When a count parameter arrives
/// without a relation, loaders default it to AtLeast.
enum class Relation { AtLeast, AtMost, Exactly };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::AtLeast: return "at_least";
        case Relation::AtMost: return "at_most";
        case Relation::Exactly: return "exactly";
    }
    return "at_least";
}

inline Relation relation_from_string(const std::string& s) {
    if (s == "at_least") return Relation::AtLeast;
    if (s == "at_most") return Relation::AtMost;
    if (s == "exactly") return Relation::Exactly;
    throw util::SchemaError("unknown relation \"" + s + "\"");
}

inline bool relation_satisfied(Relation r, int64_t count, int64_t n) {
    switch (r) {
        case Relation::AtLeast: return count >= n;
        case Relation::AtMost: return count <= n;
        case Relation::Exactly: return count == n;
    }
    return false;
}

enum class ParamKind { Int, String, StringList, Relation, LanguageCode };

inline const char* to_string(ParamKind k) {
    switch (k) {
        case ParamKind::Int: return "int";
        case ParamKind::String: return "string";
        case ParamKind::StringList: return "string_list";
        case ParamKind::Relation: return "relation";
        case ParamKind::LanguageCode: return "language_code";
    }
    return "string";
}

using ParamValue = std::variant<int64_t, std::string, std::vector<std::string>, Relation>;

// std::map keeps parameter serialization key-ordered, hence byte-stable.
using ParamMap = std::map<std::string, ParamValue>;

inline nlohmann::json param_value_to_json(const ParamValue& v) {
    if (std::holds_alternative<int64_t>(v)) return std::get<int64_t>(v);
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    if (std::holds_alternative<std::vector<std::string>>(v))
        return std::get<std::vector<std::string>>(v);
    return to_string(std::get<Relation>(v));
}

inline nlohmann::json params_to_json(const ParamMap& params) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : params) j[k] = param_value_to_json(v);
    return j;
}

inline int64_t param_int(const ParamMap& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || !std::holds_alternative<int64_t>(it->second))
        throw util::SchemaError("missing int param \"" + key + "\"");
    return std::get<int64_t>(it->second);
}

inline const std::string& param_string(const ParamMap& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || !std::holds_alternative<std::string>(it->second))
        throw util::SchemaError("missing string param \"" + key + "\"");
    return std::get<std::string>(it->second);
}

inline const std::vector<std::string>& param_string_list(const ParamMap& params,
                                                         const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || !std::holds_alternative<std::vector<std::string>>(it->second))
        throw util::SchemaError("missing string_list param \"" + key + "\"");
    return std::get<std::vector<std::string>>(it->second);
}

inline Relation param_relation(const ParamMap& params, const std::string& key = "relation") {
    auto it = params.find(key);
    if (it == params.end()) return Relation::AtLeast;
    if (std::holds_alternative<Relation>(it->second)) return std::get<Relation>(it->second);
    if (std::holds_alternative<std::string>(it->second))
        return relation_from_string(std::get<std::string>(it->second));
    throw util::SchemaError("param \"" + key + "\" is not a relation");
}

}  // namespace vifrag::core
