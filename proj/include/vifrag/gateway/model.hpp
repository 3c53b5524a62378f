#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/util/sha256.hpp"

namespace vifrag::gateway {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct ChatRequest {
    std::string model_name;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_output_tokens = 2048;
    int sample_count = 1;  // n
    std::optional<int64_t> seed;
};

struct ChatResponse {
    std::vector<std::string> texts;  // one per sample

    const std::string& first() const {
        if (texts.empty()) throw std::runtime_error("empty chat response");
        return texts.front();
    }
};

/// Transient failure: worth a bounded retry (HTTP 429/5xx, socket errors).
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Permanent failure for this request: retrying the same call cannot help.
class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Strict replay: the run must abort when a request is not in the store.
class ReplayMissError : public BackendError {
public:
    explicit ReplayMissError(const std::string& key)
        : BackendError("replay store has no entry for key " + key), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

inline nlohmann::json request_to_json(const ChatRequest& req) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    nlohmann::json j;
    j["model"] = req.model_name;
    j["messages"] = messages;
    j["temperature"] = req.temperature;
    j["n"] = req.sample_count;
    j["max_tokens"] = req.max_output_tokens;
    if (req.seed) j["seed"] = *req.seed;
    return j;
}

/// Content digest for the persistent cache and replay store. Covers the key
/// namespace (the logical backend identity, so recorded stores replay under
/// the same config), model, messages, temperature, sample count, and seed.
/// max_output_tokens is deliberately not part of the key.
inline std::string cache_key(const std::string& key_namespace, const ChatRequest& req) {
    nlohmann::json j;
    j["backend"] = key_namespace;
    j["model"] = req.model_name;
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    j["messages"] = messages;
    j["temperature"] = req.temperature;
    j["n"] = req.sample_count;
    if (req.seed) j["seed"] = *req.seed;
    return util::sha256_hex(j.dump());
}

}  // namespace vifrag::gateway
