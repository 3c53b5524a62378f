#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vifrag/sandbox/artifact.hpp"
#include "vifrag/util/fs.hpp"
#include "vifrag/util/log.hpp"
#include "vifrag/util/strings.hpp"

// Executes model-generated verification scripts in isolated subprocesses.
// Wire protocol (bit-exact): the case payload is written to the script's
// stdin as a UTF-8 JSON document; the verdict is the final non-empty stdout
// line, which must be exactly "True" or "False". The exit code is ignored
// when a verdict line exists; every other termination (error output only,
// nonzero exit without verdict, timeout, oversized output) maps to 0. There
// is no third state.

namespace vifrag::sandbox {

struct SandboxPolicy {
    std::vector<std::string> interpreter_command = {"python3"};
    std::chrono::milliseconds wall_timeout{5000};
    size_t max_output_bytes = 64 * 1024;
    // Best-effort rlimits in the child; 0 disables. Platforms without support
    // degrade to the wall timeout with a logged warning.
    long cpu_seconds_limit = 0;
    long memory_bytes_limit = 0;

    void check() const {
        if (wall_timeout.count() <= 0) throw std::invalid_argument("wall_timeout must be > 0");
        if (interpreter_command.empty())
            throw std::invalid_argument("interpreter_command must be non-empty");
    }
};

struct ExecOutcome {
    int value = 0;  // Eq.-3 outcome: 1 or 0
    std::string diagnostic;
};

namespace detail {

/// Deadline-aware non-blocking write so a script that never reads its stdin
/// cannot stall the parent past the wall timeout.
inline void write_all_with_deadline(int fd, const std::string& data,
                                    std::chrono::steady_clock::time_point deadline) {
    int flags = ::fcntl(fd, F_GETFL, 0);
    if (flags >= 0) ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    size_t off = 0;
    while (off < data.size()) {
        if (std::chrono::steady_clock::now() >= deadline) return;
        ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n > 0) {
            off += static_cast<size_t>(n);
            continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            pollfd pfd{fd, POLLOUT, 0};
            ::poll(&pfd, 1, 50);
            continue;
        }
        if (n < 0 && errno == EINTR) continue;
        return;  // child closed stdin early; its verdict still decides
    }
}

/// Final non-empty line, with a trailing '\r' tolerated.
inline std::string final_nonempty_line(const std::string& output) {
    auto lines = util::split_lines(output);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        std::string t = util::trim(*it);
        if (!t.empty()) return t;
    }
    return "";
}

}  // namespace detail

/// Runs one (script, case) pair under the policy. All abnormal terminations
/// fold into outcome 0 with a diagnostic; nothing throws for script behavior.
inline ExecOutcome execute_one(const std::string& func_source, const nlohmann::json& case_doc,
                               const SandboxPolicy& policy) {
    policy.check();
    ExecOutcome outcome;

    util::TempDir workdir("vifrag-sbx");
    const auto script_path = workdir.path() / "verify_func.py";
    try {
        util::write_file(script_path, func_source);
    } catch (const std::exception& e) {
        outcome.diagnostic = std::string("setup: ") + e.what();
        return outcome;
    }

    int in_pipe[2], out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
        outcome.diagnostic = "setup: pipe failed";
        return outcome;
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        outcome.diagnostic = "setup: fork failed";
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        return outcome;
    }

    if (pid == 0) {
        // child: own process group so a timeout kill reaps grandchildren too
        ::setsid();
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        if (::chdir(workdir.path().c_str()) != 0) ::_exit(127);

        if (policy.cpu_seconds_limit > 0) {
            rlimit lim{static_cast<rlim_t>(policy.cpu_seconds_limit),
                       static_cast<rlim_t>(policy.cpu_seconds_limit + 1)};
            ::setrlimit(RLIMIT_CPU, &lim);
        }
        if (policy.memory_bytes_limit > 0) {
            rlimit lim{static_cast<rlim_t>(policy.memory_bytes_limit),
                       static_cast<rlim_t>(policy.memory_bytes_limit)};
            ::setrlimit(RLIMIT_AS, &lim);
        }

        std::vector<std::string> args = policy.interpreter_command;
        args.push_back(script_path.string());
        std::vector<char*> argv;
        argv.reserve(args.size() + 1);
        for (auto& a : args) argv.push_back(a.data());
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }

    // parent
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);

    const auto deadline = std::chrono::steady_clock::now() + policy.wall_timeout;
    ::signal(SIGPIPE, SIG_IGN);
    detail::write_all_with_deadline(in_pipe[1], case_doc.dump(), deadline);
    ::close(in_pipe[1]);
    std::string output;
    bool timed_out = false;
    bool truncated = false;
    char buf[4096];

    while (true) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd{out_pipe[0], POLLIN, 0};
        int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 200)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue;  // poll tick; re-check the deadline
        ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (n == 0) break;  // EOF
        if (output.size() + static_cast<size_t>(n) > policy.max_output_bytes) {
            truncated = true;
            break;
        }
        output.append(buf, static_cast<size_t>(n));
    }
    ::close(out_pipe[0]);

    int status = 0;
    if (timed_out || truncated) {
        ::kill(-pid, SIGKILL);  // whole process group
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        outcome.value = 0;
        outcome.diagnostic = timed_out ? "timeout" : "output limit exceeded";
        return outcome;
    }
    ::waitpid(pid, &status, 0);

    std::string verdict = detail::final_nonempty_line(output);
    if (verdict == "True") {
        outcome.value = 1;
    } else if (verdict == "False") {
        outcome.value = 0;
        outcome.diagnostic = "verdict False";
    } else {
        outcome.value = 0;
        if (WIFSIGNALED(status)) {
            outcome.diagnostic = "killed by signal " + std::to_string(WTERMSIG(status));
        } else if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
            outcome.diagnostic = "exit code " + std::to_string(WEXITSTATUS(status));
        } else {
            outcome.diagnostic = verdict.empty() ? "no verdict line" : "unrecognized verdict";
        }
    }
    return outcome;
}

/// Bounded worker pool over independent jobs; results land by index so the
/// merge order never depends on scheduling.
inline void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
    int workers = std::max(1, jobs);
    if (workers == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

/// Row/column means over an already-filled K x K matrix: acc_func[j] is the
/// mean of row j, acc_case[i] the mean of column i.
inline void compute_accuracies(VerificationArtifact& artifact) {
    const size_t k = artifact.matrix.size();
    if (k == 0) throw std::invalid_argument("compute_accuracies: empty matrix");
    for (const auto& row : artifact.matrix)
        if (row.size() != k) throw std::invalid_argument("compute_accuracies: ragged matrix");

    artifact.acc_func.assign(k, 0.0);
    artifact.acc_case.assign(k, 0.0);
    for (size_t j = 0; j < k; ++j) {
        for (size_t i = 0; i < k; ++i) {
            artifact.acc_func[j] += artifact.matrix[j][i];
            artifact.acc_case[i] += artifact.matrix[j][i];
        }
    }
    for (size_t j = 0; j < k; ++j) artifact.acc_func[j] /= static_cast<double>(k);
    for (size_t i = 0; i < k; ++i) artifact.acc_case[i] /= static_cast<double>(k);
}

/// Runs all K x K (func, case) pairs and fills the matrix and both accuracy
/// vectors.
inline void cross_accuracy(VerificationArtifact& artifact, const SandboxPolicy& policy,
                           int jobs = 1) {
    if (artifact.funcs.size() != artifact.cases.size())
        throw std::invalid_argument("cross_accuracy: func/case count mismatch");
    const size_t k = artifact.funcs.size();
    if (k == 0) throw std::invalid_argument("cross_accuracy: K must be >= 1");

    artifact.matrix.assign(k, std::vector<int>(k, 0));
    parallel_for(k * k, jobs, [&](size_t idx) {
        size_t j = idx / k;  // func index (row)
        size_t i = idx % k;  // case index (column)
        artifact.matrix[j][i] =
            execute_one(artifact.funcs[j], artifact.cases[i], policy).value;
    });
    compute_accuracies(artifact);
}

enum class FilterMode { Any, All };

/// Keep/discard per the cross-accuracy gate. Any (default): the best func and
/// the best case must each exceed 0.5 -- strictly, so 0.5 itself discards.
/// All: every func and every case must exceed 0.5.
inline bool filter_instruction(const VerificationArtifact& artifact,
                               FilterMode mode = FilterMode::Any) {
    if (artifact.acc_func.empty() || artifact.acc_case.empty()) return false;
    if (mode == FilterMode::Any) {
        double best_func = 0.0, best_case = 0.0;
        for (double a : artifact.acc_func) best_func = std::max(best_func, a);
        for (double a : artifact.acc_case) best_case = std::max(best_case, a);
        return best_func > 0.5 && best_case > 0.5;
    }
    for (double a : artifact.acc_func)
        if (!(a > 0.5)) return false;
    for (double a : artifact.acc_case)
        if (!(a > 0.5)) return false;
    return true;
}

struct ResponseVerification {
    std::vector<double> per_response_acc_case;
    bool keep = false;
    size_t chosen_index = 0;  // valid only when keep
};

/// Each response is a fresh case evaluated by all K funcs. The sample is kept
/// iff some response's accuracy strictly exceeds acc_threshold (0.5); the
/// chosen response is the highest-accuracy one, ties broken by lowest index.
inline ResponseVerification verify_responses(const std::vector<std::string>& responses,
                                             const std::vector<std::string>& funcs,
                                             const SandboxPolicy& policy, int jobs = 1,
                                             double acc_threshold = 0.5) {
    if (funcs.empty()) throw std::invalid_argument("verify_responses: no verification funcs");
    ResponseVerification rv;
    rv.per_response_acc_case.assign(responses.size(), 0.0);

    const size_t k = funcs.size();
    std::vector<int> outcomes(responses.size() * k, 0);
    parallel_for(outcomes.size(), jobs, [&](size_t idx) {
        size_t r = idx / k;
        size_t j = idx % k;
        outcomes[idx] =
            execute_one(funcs[j], nlohmann::json(responses[r]), policy).value;
    });

    for (size_t r = 0; r < responses.size(); ++r) {
        double sum = 0.0;
        for (size_t j = 0; j < k; ++j) sum += outcomes[r * k + j];
        rv.per_response_acc_case[r] = sum / static_cast<double>(k);
    }

    double best = 0.0;
    for (size_t r = 0; r < responses.size(); ++r) {
        if (rv.per_response_acc_case[r] > best) {
            best = rv.per_response_acc_case[r];
            rv.chosen_index = r;
        }
    }
    rv.keep = best > acc_threshold;
    return rv;
}

}  // namespace vifrag::sandbox
