#include <cerrno>
#include <csignal>
#include <cstring>
#include <sstream>
#include <utility>

#include <sys/wait.h>
#include <unistd.h>

#include "ibea/attack.hpp"
#include "ibea/errors.hpp"

namespace ibea::attack {

namespace {

[[noreturn]] void child_exec(const std::string& command, int in_fd, int out_fd) {
    dup2(in_fd, STDIN_FILENO);
    dup2(out_fd, STDOUT_FILENO);
    close(in_fd);
    close(out_fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
}

void write_all(int fd, const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw AttackError(std::string("oracle: write to child failed: ") +
                              std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string read_all(int fd) {
    std::string out;
    char buf[65536];
    for (;;) {
        const ssize_t n = ::read(fd, buf, sizeof buf);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw AttackError(std::string("oracle: read from child failed: ") +
                              std::strerror(errno));
        }
        if (n == 0)
            break;
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

} // namespace

SubprocessOracle::SubprocessOracle(std::string command) : command_(std::move(command)) {
    if (command_.empty())
        throw ValidationError("SubprocessOracle: empty command");
}

Image SubprocessOracle::encrypt_chosen(const WideImage& chosen) {
    std::ostringstream request;
    write_wide_text(chosen, request);

    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw AttackError("oracle: pipe() failed");

    // A broken pipe surfaces as a write error plus the child's exit
    // status instead of killing this process.
    signal(SIGPIPE, SIG_IGN);

    const pid_t pid = fork();
    if (pid < 0)
        throw AttackError("oracle: fork() failed");
    if (pid == 0) {
        close(to_child[1]);
        close(from_child[0]);
        child_exec(command_, to_child[0], from_child[1]);
    }
    close(to_child[0]);
    close(from_child[1]);

    std::string reply;
    std::string write_error;
    try {
        // The child consumes its whole stdin before it produces output,
        // so write-then-read cannot deadlock.
        write_all(to_child[1], request.str());
    } catch (const AttackError& e) {
        write_error = e.what();
    }
    close(to_child[1]);
    reply = read_all(from_child[0]);
    close(from_child[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw AttackError("oracle: child command failed (status " +
                          std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "): " +
                          command_);
    if (!write_error.empty())
        throw AttackError(write_error);

    std::istringstream in(reply);
    try {
        return read_pgm(in);
    } catch (const FormatError& e) {
        throw AttackError(std::string("oracle: reply is not a valid PGM: ") + e.what());
    }
}

} // namespace ibea::attack
