#include "rpa/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "rpa/errors.hpp"

namespace rpa {

namespace {

void set_cloexec(int fd) { ::fcntl(fd, F_SETFD, FD_CLOEXEC); }

struct Pipe {
  int read_end = -1;
  int write_end = -1;
  Pipe() {
    int fds[2];
    if (::pipe(fds) != 0) throw Error("pipe() failed");
    read_end = fds[0];
    write_end = fds[1];
  }
  ~Pipe() {
    if (read_end >= 0) ::close(read_end);
    if (write_end >= 0) ::close(write_end);
  }
  int release_read() { int fd = read_end; read_end = -1; return fd; }
  int release_write() { int fd = write_end; write_end = -1; return fd; }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& opts) {
  if (argv.empty()) throw Error("run_process: empty argv");

  // A child may exit before its stdin is fully written; the EPIPE is
  // handled at the write site.
  static const bool sigpipe_ignored = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  Pipe out_pipe, err_pipe, in_pipe;

  pid_t pid = ::fork();
  if (pid < 0) throw Error("fork() failed");

  if (pid == 0) {
    // Child. Put it in its own process group so a timeout can kill the
    // whole tree.
    ::setpgid(0, 0);
    if (opts.workdir && ::chdir(opts.workdir->c_str()) != 0) ::_exit(127);
    if (opts.stdin_data) {
      ::dup2(in_pipe.read_end, STDIN_FILENO);
    } else {
      int devnull = ::open("/dev/null", O_RDONLY);
      if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    }
    if (opts.capture_stdout) ::dup2(out_pipe.write_end, STDOUT_FILENO);
    if (opts.capture_stderr) ::dup2(err_pipe.write_end, STDERR_FILENO);
    ::close(in_pipe.read_end);
    ::close(in_pipe.write_end);
    ::close(out_pipe.read_end);
    ::close(out_pipe.write_end);
    ::close(err_pipe.read_end);
    ::close(err_pipe.write_end);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }

  // Parent.
  ::close(in_pipe.read_end);
  in_pipe.read_end = -1;
  ::close(out_pipe.write_end);
  out_pipe.write_end = -1;
  ::close(err_pipe.write_end);
  err_pipe.write_end = -1;

  int in_fd = -1;
  std::size_t in_off = 0;
  if (opts.stdin_data) {
    in_fd = in_pipe.release_write();
    ::fcntl(in_fd, F_SETFL, O_NONBLOCK);
    set_cloexec(in_fd);
  } else {
    ::close(in_pipe.write_end);
    in_pipe.write_end = -1;
  }
  int out_fd = opts.capture_stdout ? out_pipe.release_read() : -1;
  int err_fd = opts.capture_stderr ? err_pipe.release_read() : -1;
  if (!opts.capture_stdout) { ::close(out_pipe.read_end); out_pipe.read_end = -1; }
  if (!opts.capture_stderr) { ::close(err_pipe.read_end); err_pipe.read_end = -1; }

  ProcessResult result;
  double deadline = opts.timeout_seconds ? now_seconds() + *opts.timeout_seconds : 0.0;
  bool child_done = false;
  int status = 0;

  auto drain = [&](int& fd, std::string& sink) {
    char buf[4096];
    for (;;) {
      ssize_t n = ::read(fd, buf, sizeof buf);
      if (n > 0) {
        sink.append(buf, static_cast<std::size_t>(n));
        if (static_cast<std::size_t>(n) < sizeof buf) return;
      } else {
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
        ::close(fd);
        fd = -1;
        return;
      }
    }
  };

  while (true) {
    if (!child_done) {
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) child_done = true;
    }
    if (opts.timeout_seconds && !child_done && now_seconds() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      child_done = true;
      result.timed_out = true;
    }

    struct pollfd fds[3];
    nfds_t nfds = 0;
    auto add = [&](int fd, short events) {
      if (fd >= 0) { fds[nfds].fd = fd; fds[nfds].events = events; ++nfds; }
    };
    add(out_fd, POLLIN);
    add(err_fd, POLLIN);
    add(in_fd, POLLOUT);
    if (nfds == 0) {
      if (child_done) break;
      ::usleep(2000);
      continue;
    }
    int rc = ::poll(fds, nfds, 20);
    if (rc > 0) {
      for (nfds_t i = 0; i < nfds; ++i) {
        if (fds[i].revents == 0) continue;
        if (fds[i].fd == out_fd && out_fd >= 0) drain(out_fd, result.out);
        else if (fds[i].fd == err_fd && err_fd >= 0) drain(err_fd, result.err);
        else if (fds[i].fd == in_fd && in_fd >= 0) {
          const std::string& data = *opts.stdin_data;
          if (in_off >= data.size()) {
            ::close(in_fd);
            in_fd = -1;
          } else {
            ssize_t n = ::write(in_fd, data.data() + in_off, data.size() - in_off);
            if (n > 0) in_off += static_cast<std::size_t>(n);
            else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
              ::close(in_fd);
              in_fd = -1;
            }
            if (in_off >= data.size() && in_fd >= 0) { ::close(in_fd); in_fd = -1; }
          }
        }
      }
    }
    if (child_done && out_fd < 0 && err_fd < 0) break;
  }

  if (in_fd >= 0) ::close(in_fd);
  if (result.timed_out) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace rpa
