#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vifrag::util {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + path.string());
}

/// Write-then-rename so readers never observe a partial file.
inline void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_file(tmp, content);
    fs::rename(tmp, path);
}

/// Fresh unique directory under the system temp root. Removed on destruction
/// unless released.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "vifrag") {
        static std::atomic<uint64_t> counter{0};
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto name = prefix + "-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)) + "-" + std::to_string(rd());
            fs::path candidate = fs::temp_directory_path() / name;
            std::error_code ec;
            if (fs::create_directory(candidate, ec) && !ec) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("TempDir: could not create unique directory");
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    TempDir(TempDir&& other) noexcept : path_(std::move(other.path_)) { other.path_.clear(); }

    ~TempDir() {
        if (!path_.empty()) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
    }

    const fs::path& path() const { return path_; }

    fs::path release() {
        fs::path p = path_;
        path_.clear();
        return p;
    }

private:
    fs::path path_;
};

}  // namespace vifrag::util
