#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vifrag::util {

struct LineDiagnostic {
    size_t line_no = 0;  // 1-based
    std::string message;
};

/// Parse error that knows where it happened. JSONL readers fill in the line
/// number; object validators fill in the offending field.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

template <typename T>
struct JsonlResult {
    std::vector<T> records;
    std::vector<LineDiagnostic> diagnostics;
};

/// Reads a JSONL file, applying `parse` to every non-blank line. In strict
/// mode the first bad line throws with its line number; in lenient mode bad
/// lines become diagnostics and good records are kept.
template <typename T>
JsonlResult<T> read_jsonl(const std::filesystem::path& path,
                          const std::function<T(const nlohmann::json&)>& parse,
                          bool strict = true) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    JsonlResult<T> result;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        }
        if (blank) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            result.records.push_back(parse(j));
        } catch (const std::exception& e) {
            if (strict) {
                throw SchemaError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            result.diagnostics.push_back({line_no, e.what()});
        }
    }
    return result;
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    for (const auto& j : records) {
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("short write: " + path.string());
}

/// Rejects unknown keys and missing required keys, naming the field. Keeps
/// record schemas honest: a typo'd optional field fails loudly instead of
/// being silently dropped.
inline void check_object_fields(const nlohmann::json& j,
                                const std::vector<std::string>& required,
                                const std::vector<std::string>& optional,
                                const std::string& what) {
    if (!j.is_object()) throw SchemaError(what + ": expected a JSON object");
    for (const auto& f : required) {
        if (!j.contains(f)) throw SchemaError(what + ": missing required field \"" + f + "\"");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        bool known = false;
        for (const auto& f : required)
            if (f == key) known = true;
        for (const auto& f : optional)
            if (f == key) known = true;
        if (!known) throw SchemaError(what + ": unknown field \"" + key + "\"");
    }
}

}  // namespace vifrag::util
