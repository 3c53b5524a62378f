#pragma once

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "vifrag/gateway/model.hpp"
#include "vifrag/util/log.hpp"

namespace vifrag::gateway {

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string id() const = 0;
};

using BackendPtr = std::shared_ptr<Backend>;

/// Scripted backend for tests and offline runs: a handler maps each request
/// to a canned response. Throw TransportError/BackendError from the handler
/// to script failures.
class MockBackend : public Backend {
public:
    using Handler = std::function<ChatResponse(const ChatRequest&)>;

    explicit MockBackend(Handler handler, std::string id = "mock")
        : handler_(std::move(handler)), id_(std::move(id)) {}

    ChatResponse complete(const ChatRequest& request) override { return handler_(request); }
    std::string id() const override { return id_; }

private:
    Handler handler_;
    std::string id_;
};

}  // namespace vifrag::gateway
