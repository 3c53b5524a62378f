#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "vifrag/gateway/backend.hpp"
#include "vifrag/gateway/model.hpp"
#include "vifrag/util/fs.hpp"
#include "vifrag/util/log.hpp"

namespace vifrag::gateway {

/// Content-addressed request/response store: one `{key}.json` file per entry.
/// Concurrent readers are free; writes go through a mutex and a rename so a
/// reader never sees a torn file. The same store format backs the persistent
/// cache, the recorder, and the replay backend.
class ReplayStore {
public:
    explicit ReplayStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::optional<nlohmann::json> get(const std::string& key) const {
        std::filesystem::path file = dir_ / (key + ".json");
        if (!std::filesystem::exists(file)) return std::nullopt;
        try {
            return nlohmann::json::parse(util::read_file(file));
        } catch (const std::exception& e) {
            // Corrupt entry: treat as a miss so the backend can repopulate it.
            util::log_warn("cache_corrupt_entry", {{"key", key}, {"error", e.what()}});
            return std::nullopt;
        }
    }

    void put(const std::string& key, const nlohmann::json& entry) {
        std::lock_guard<std::mutex> lock(write_mu_);
        util::write_file_atomic(dir_ / (key + ".json"), entry.dump(2));
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex write_mu_;
};

/// Cache-through wrapper. With an inner backend it acts as recorder +
/// persistent cache; without one it is the replay backend. `key_namespace`
/// must match between the recording run and later replay runs (it is part of
/// the cache key).
class StoreBackend : public Backend {
public:
    StoreBackend(std::shared_ptr<ReplayStore> store, BackendPtr inner, std::string key_namespace,
                 bool strict = false)
        : store_(std::move(store)),
          inner_(std::move(inner)),
          key_namespace_(std::move(key_namespace)),
          strict_(strict) {}

    ChatResponse complete(const ChatRequest& request) override {
        const std::string key = cache_key(key_namespace_, request);
        if (auto entry = store_->get(key)) {
            ChatResponse resp;
            resp.texts = entry->at("response").at("texts").get<std::vector<std::string>>();
            return resp;
        }
        if (!inner_) {
            if (strict_) throw ReplayMissError(key);
            throw BackendError("replay miss for key " + key);
        }
        ChatResponse resp = inner_->complete(request);
        nlohmann::json entry;
        entry["request"] = request_to_json(request);
        entry["response"] = {{"texts", resp.texts}};
        store_->put(key, entry);
        return resp;
    }

    std::string id() const override { return inner_ ? ("record:" + inner_->id()) : "replay"; }

private:
    std::shared_ptr<ReplayStore> store_;
    BackendPtr inner_;
    std::string key_namespace_;
    bool strict_;
};

}  // namespace vifrag::gateway
