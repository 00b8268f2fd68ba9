#include "approxsmt/process.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "approxsmt/errors.hpp"

extern char** environ;

namespace approxsmt {

namespace {

struct Pipe
{
  int fd[2] = {-1, -1};

  Pipe()
  {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw BackendFailure(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe()
  {
    closeEnd(0);
    closeEnd(1);
  }
  void closeEnd(int i)
  {
    if (fd[i] >= 0) ::close(fd[i]);
    fd[i] = -1;
  }
};

}  // namespace

ProcessResult runProcess(const std::vector<std::string>& argv, std::string_view input,
                         std::optional<std::chrono::milliseconds> timeout)
{
  if (argv.empty()) throw BackendFailure("empty command line");

  Pipe in, out, err;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.fd[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out.fd[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err.fd[1], STDERR_FILENO);

  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw BackendFailure("cannot start " + argv[0] + ": " + std::strerror(rc));

  in.closeEnd(0);
  out.closeEnd(1);
  err.closeEnd(1);
  ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);

  // A child that exits early must not kill us with SIGPIPE.
  static const bool sigpipeIgnored = (std::signal(SIGPIPE, SIG_IGN), true);
  (void)sigpipeIgnored;

  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) in.closeEnd(1);
  auto deadline = timeout ? std::optional(std::chrono::steady_clock::now() + *timeout) : std::nullopt;

  char buf[4096];
  while (out.fd[0] >= 0 || err.fd[0] >= 0)
  {
    std::vector<pollfd> fds;
    if (in.fd[1] >= 0) fds.push_back({in.fd[1], POLLOUT, 0});
    if (out.fd[0] >= 0) fds.push_back({out.fd[0], POLLIN, 0});
    if (err.fd[0] >= 0) fds.push_back({err.fd[0], POLLIN, 0});

    int wait = -1;
    if (deadline)
    {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0)
      {
        result.timedOut = true;
        ::kill(pid, SIGKILL);
        break;
      }
      wait = static_cast<int>(left.count());
    }
    int n = ::poll(fds.data(), fds.size(), wait);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) break;

    for (const pollfd& p : fds)
    {
      if (p.revents == 0) continue;
      if (p.fd == in.fd[1])
      {
        ssize_t k = ::write(p.fd, input.data() + written, input.size() - written);
        if (k > 0) written += static_cast<std::size_t>(k);
        if (k < 0 && errno != EAGAIN) in.closeEnd(1);
        if (written == input.size()) in.closeEnd(1);
        continue;
      }
      ssize_t k = ::read(p.fd, buf, sizeof buf);
      std::string& sink = p.fd == out.fd[0] ? result.out : result.err;
      if (k > 0)
        sink.append(buf, static_cast<std::size_t>(k));
      else if (k == 0 || errno != EAGAIN)
        (p.fd == out.fd[0] ? out : err).closeEnd(0);
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR)
  {
  }
  if (WIFEXITED(status))
    result.status = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.status = -WTERMSIG(status);
  return result;
}

}  // namespace approxsmt
