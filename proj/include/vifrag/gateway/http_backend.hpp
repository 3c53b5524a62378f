#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "vifrag/gateway/backend.hpp"
#include "vifrag/gateway/model.hpp"

namespace vifrag::gateway {

struct HttpBackendConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "VIF_API_KEY";
    int connect_timeout_s = 10;
    int read_timeout_s = 120;
};

/// OpenAI-compatible chat-completion client. Credentials come only from the
/// environment; 429/5xx and transport failures surface as TransportError so
/// the gateway's bounded retry can handle them.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
        client_ = std::make_unique<httplib::Client>(config_.base_url);
        client_->set_connection_timeout(config_.connect_timeout_s);
        client_->set_read_timeout(config_.read_timeout_s);
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
            api_key_ = key;
        }
    }

    ChatResponse complete(const ChatRequest& request) override {
        httplib::Headers headers = {{"Content-Type", "application/json"}};
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        // httplib::Client is not safe for concurrent requests; callers fan
        // out, so serialize here.
        std::lock_guard<std::mutex> lock(mu_);
        auto result = client_->Post(config_.path, headers, request_to_json(request).dump(),
                                    "application/json");
        if (!result) {
            throw TransportError("http backend " + config_.base_url +
                                 " unreachable: " + httplib::to_string(result.error()));
        }
        if (result->status == 429 || result->status >= 500) {
            throw TransportError("http backend returned status " +
                                 std::to_string(result->status));
        }
        if (result->status != 200) {
            throw BackendError("http backend returned status " + std::to_string(result->status) +
                               ": " + result->body.substr(0, 256));
        }
        try {
            nlohmann::json j = nlohmann::json::parse(result->body);
            ChatResponse resp;
            for (const auto& choice : j.at("choices")) {
                resp.texts.push_back(choice.at("message").at("content").get<std::string>());
            }
            if (resp.texts.empty()) throw BackendError("http backend returned no choices");
            return resp;
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("unparseable chat completion response: ") + e.what());
        }
    }

    std::string id() const override { return "http:" + config_.base_url; }

private:
    HttpBackendConfig config_;
    std::string api_key_;
    std::unique_ptr<httplib::Client> client_;
    std::mutex mu_;
};

}  // namespace vifrag::gateway
