#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

#include "nsr/engines.hpp"

namespace nsr::engines {

namespace {

bool on_path(const std::string& exe) {
    if (exe.find('/') != std::string::npos) return access(exe.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty()) continue;
        std::string cand = dir + "/" + exe;
        if (access(cand.c_str(), X_OK) == 0) return true;
    }
    return false;
}

struct TempFile {
    std::string path;
    bool valid = false;

    explicit TempFile(const std::string& contents) {
        char buf[] = "/tmp/nsr_programXXXXXX";
        int fd = mkstemp(buf);
        if (fd < 0) return;
        path = buf;
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(contents.size())) {
            ssize_t w = write(fd, contents.data() + off, contents.size() - off);
            if (w < 0) {
                close(fd);
                return;
            }
            off += w;
        }
        close(fd);
        valid = true;
    }
    ~TempFile() {
        if (!path.empty()) unlink(path.c_str());
    }
};

}  // namespace

bool external_engine_available(const ExternalEngine& engine) {
    return !engine.executable.empty() && on_path(engine.executable);
}

SolverVerdict run_external(const ExternalEngine& engine, const std::string& program_text,
                           const EngineLimits& limits) {
    if (!external_engine_available(engine))
        return SolverVerdict::engine_error("external engine not found: " + engine.executable);

    bool uses_file = false;
    for (const auto& a : engine.args)
        if (a.find("{input}") != std::string::npos) uses_file = true;

    TempFile tmp(uses_file ? program_text : std::string());
    if (uses_file && !tmp.valid)
        return SolverVerdict::engine_error("could not stage program for external engine");

    std::vector<std::string> argv_s;
    argv_s.push_back(engine.executable);
    for (auto a : engine.args) {
        size_t pos;
        while ((pos = a.find("{input}")) != std::string::npos)
            a.replace(pos, 7, tmp.path);
        argv_s.push_back(std::move(a));
    }
    std::vector<char*> argv;
    for (auto& a : argv_s) argv.push_back(a.data());
    argv.push_back(nullptr);

    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0) return SolverVerdict::engine_error("pipe failed");
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        return SolverVerdict::engine_error("pipe failed");
    }

    pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        return SolverVerdict::engine_error("fork failed");
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(out_pipe[1], STDERR_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        execvp(argv[0], argv.data());
        _exit(127);
    }

    close(in_pipe[0]);
    close(out_pipe[1]);

    if (!uses_file) {
        const std::string& text = program_text;
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(text.size())) {
            ssize_t w = write(in_pipe[1], text.data() + off, text.size() - off);
            if (w < 0) break;
            off += w;
        }
    }
    close(in_pipe[1]);

    std::string output;
    const auto deadline = std::chrono::steady_clock::now() + limits.timeout;
    bool timed_out = false;
    char buf[4096];
    for (;;) {
        auto now = std::chrono::steady_clock::now();
        if (now > deadline) {
            timed_out = true;
            break;
        }
        int remaining = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        pollfd pfd{out_pipe[0], POLLIN, 0};
        int pr = poll(&pfd, 1, std::max(1, remaining));
        if (pr == 0) {
            timed_out = true;
            break;
        }
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        ssize_t r = read(out_pipe[0], buf, sizeof(buf));
        if (r <= 0) break;
        output.append(buf, static_cast<size_t>(r));
    }
    close(out_pipe[0]);

    if (timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, nullptr, 0);
        return SolverVerdict::engine_error("external engine timed out");
    }

    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
        return SolverVerdict::engine_error("external engine failed to start");

    for (const auto& pat : engine.output_patterns) {
        std::regex re(pat.regex);
        if (std::regex_search(output, re)) {
            SolverVerdict v;
            v.kind = pat.verdict;
            v.detail = "mapped from external engine output";
            return v;
        }
    }
    std::string preview = output.substr(0, 200);
    return SolverVerdict::engine_error("unrecognized external engine output: " + preview);
}

ExternalEngine preset_z3() {
    ExternalEngine e;
    e.kind = ExternalEngineKind::smt_engine;
    e.executable = "z3";
    e.args = {"-in"};
    e.output_patterns = {
        {"^unsat", SolverVerdict::Kind::unsat},
        {"^sat", SolverVerdict::Kind::sat},
        {"^unknown", SolverVerdict::Kind::unknown},
    };
    return e;
}

ExternalEngine preset_minizinc() {
    ExternalEngine e;
    e.kind = ExternalEngineKind::csp_engine;
    e.executable = "minizinc";
    e.args = {"--solver", "gecode", "{input}"};
    e.output_patterns = {
        {"=====UNSATISFIABLE=====", SolverVerdict::Kind::unsat},
        {"----------", SolverVerdict::Kind::sat},
    };
    return e;
}

}  // namespace nsr::engines
