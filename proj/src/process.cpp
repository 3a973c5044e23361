#include "sotp/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "sotp/error.hpp"

namespace sotp {

namespace {

void drain(int fd, std::string& sink, bool& open_flag) {
    char buf[4096];
    ssize_t n = read(fd, buf, sizeof buf);
    if (n > 0)
        sink.append(buf, static_cast<std::size_t>(n));
    else if (n == 0)
        open_flag = false;
    else if (errno != EINTR && errno != EAGAIN)
        open_flag = false;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv, const std::string& working_dir) {
    if (argv.empty()) throw Error(ErrorKind::computation, "run_command: empty argv");

    int out_pipe[2], err_pipe[2], status_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0 || pipe(status_pipe) != 0)
        throw Error(ErrorKind::io, "pipe() failed");
    // status_pipe reports exec failure back to the parent (close-on-exec).
    fcntl(status_pipe[1], F_SETFD, FD_CLOEXEC);

    pid_t pid = fork();
    if (pid < 0) throw Error(ErrorKind::io, "fork() failed");

    if (pid == 0) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        close(status_pipe[0]);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[1]);
        close(err_pipe[1]);
        if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) {
            int err = errno;
            (void)!write(status_pipe[1], &err, sizeof err);
            _exit(127);
        }
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        int err = errno;
        (void)!write(status_pipe[1], &err, sizeof err);
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    close(status_pipe[1]);

    CommandResult result;
    bool out_open = true, err_open = true;
    while (out_open || err_open) {
        pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        if (poll(fds, nfds, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (nfds_t i = 0; i < nfds; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
            if (fds[i].fd == out_pipe[0])
                drain(out_pipe[0], result.out, out_open);
            else
                drain(err_pipe[0], result.err, err_open);
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int exec_errno = 0;
    if (read(status_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno)
        result.exec_failed = true;
    close(status_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    if (result.exec_failed && result.err.empty())
        result.err = std::strerror(exec_errno);
    return result;
}

}  // namespace sotp
