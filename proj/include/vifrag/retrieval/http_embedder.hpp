#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "vifrag/gateway/model.hpp"
#include "vifrag/retrieval/embed.hpp"

namespace vifrag::retrieval {

struct HttpEmbedderConfig {
    std::string base_url = "http://localhost:8080";
    std::string path = "/v1/embeddings";
    std::string model = "embedding-model";
    std::string api_key_env = "VIF_API_KEY";
    size_t dim = 768;
    int max_attempts = 3;
};

/// External embedding service speaking the usual {model, input} /embeddings
/// shape. Failures retry up to max_attempts and then propagate.
class HttpEmbedder : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig config) : config_(std::move(config)) {
        client_ = std::make_unique<httplib::Client>(config_.base_url);
        if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
    }

    size_t dim() const override { return config_.dim; }

    std::vector<float> embed_query(const std::string& text) const override {
        return embed(text);
    }
    std::vector<float> embed_passage(const std::string& text) const override {
        return embed(text);
    }

private:
    std::vector<float> embed(const std::string& text) const {
        nlohmann::json body;
        body["model"] = config_.model;
        body["input"] = text;
        httplib::Headers headers = {{"Content-Type", "application/json"}};
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        std::string last_error;
        for (int attempt = 0; attempt < std::max(1, config_.max_attempts); ++attempt) {
            std::lock_guard<std::mutex> lock(mu_);
            auto res = client_->Post(config_.path, headers, body.dump(), "application/json");
            if (!res) {
                last_error = "unreachable: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "status " + std::to_string(res->status);
                continue;
            }
            try {
                nlohmann::json j = nlohmann::json::parse(res->body);
                auto vec = j.at("data").at(0).at("embedding").get<std::vector<float>>();
                if (vec.size() != config_.dim)
                    throw gateway::BackendError("embedding dim mismatch: got " +
                                                std::to_string(vec.size()));
                return vec;
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("bad response: ") + e.what();
            }
        }
        throw gateway::TransportError("embedding service failed: " + last_error);
    }

    HttpEmbedderConfig config_;
    std::string api_key_;
    std::unique_ptr<httplib::Client> client_;
    mutable std::mutex mu_;
};

}  // namespace vifrag::retrieval
