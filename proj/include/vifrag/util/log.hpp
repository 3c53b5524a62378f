#pragma once

#include <chrono>
#include <cstdio>
#include <mutex>
#include <string>

#include <json.hpp>

namespace vifrag::util {

/// Line-delimited JSON event log on stderr. Human-facing summaries go to
/// stdout and are the caller's business; everything structured lands here.
class Logger {
public:
    static Logger& instance() {
        static Logger logger;
        return logger;
    }

    void set_min_level(int level) { min_level_ = level; }

    void event(int level, const std::string& name, nlohmann::json fields = {}) {
        if (level < min_level_) return;
        fields["level"] = level_name(level);
        fields["event"] = name;
        fields["ts_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
        std::lock_guard<std::mutex> lock(mu_);
        std::fputs(fields.dump().c_str(), stderr);
        std::fputc('\n', stderr);
    }

    static constexpr int kDebug = 0;
    static constexpr int kInfo = 1;
    static constexpr int kWarn = 2;
    static constexpr int kError = 3;

private:
    static const char* level_name(int level) {
        switch (level) {
            case kDebug: return "debug";
            case kInfo: return "info";
            case kWarn: return "warn";
            default: return "error";
        }
    }

    std::mutex mu_;
    int min_level_ = kInfo;
};

inline void log_info(const std::string& name, nlohmann::json fields = {}) {
    Logger::instance().event(Logger::kInfo, name, std::move(fields));
}

inline void log_warn(const std::string& name, nlohmann::json fields = {}) {
    Logger::instance().event(Logger::kWarn, name, std::move(fields));
}

inline void log_error(const std::string& name, nlohmann::json fields = {}) {
    Logger::instance().event(Logger::kError, name, std::move(fields));
}

}  // namespace vifrag::util
