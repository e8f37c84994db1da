#include "labtom/translator.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>

#include "labtom/errors.hpp"

namespace labtom {

std::vector<TranslationCandidate> translate(const std::string& sentence, TranslatorBackend& backend,
                                            const DomainSignature& sig, int n_candidates) {
  std::vector<TranslationCandidate> out;
  double total = 0.0;
  for (const RawCandidate& raw : backend.propose(sentence, n_candidates)) {
    if (!(raw.weight > 0.0) || !std::isfinite(raw.weight)) continue;
    try {
      out.push_back({elot::parse(raw.text, sig), raw.weight});
      total += raw.weight;
    } catch (const ElotError&) {
      // outside the grammar: dropped
    }
  }
  if (out.empty()) throw TranslationError("no valid translation for: " + sentence);
  for (TranslationCandidate& c : out) c.weight /= total;
  std::stable_sort(out.begin(), out.end(),
                   [](const TranslationCandidate& a, const TranslationCandidate& b) { return a.weight > b.weight; });
  return out;
}

const std::vector<GoldPair>& gold_corpus() {
  static const std::vector<GoldPair> corpus = {
      {"The player believes that box 3 is empty.", "believes(player, formula(empty(box3)))"},
      {"The player knows that box 2 and box 3 are empty.",
       "knows_that(player, formula(and(empty(box2), empty(box3))))"},
      {"The player knows the color of the keys in all of the boxes.",
       "forall(box(B), knows_about(player, color(C), exists(and(key(K), inside(K, B)), iscolor(K, C))))"},
      // sentence and formula disagree on the color as published
      {"The player doesn't know that there is a blue key in box 2.",
       "not_knows_that(player, formula(exists(and(key(K), iscolor(K, red)), inside(K, box2))))"},
      {"The player is sure of the color of the key in box 4.",
       "certain_about(player, color(C), exists(and(key(K), inside(K, box4)), iscolor(K, C)))"},
      {"The player is uncertain about what's in box 2.",
       "uncertain_about(player, color(C), exists(and(key(K), inside(K, box2)), iscolor(K, C)))"},
      {"The player believes that there is a key in box 4.", "believes(player, formula(exists(key(K), inside(K, box4))))"},
      {"The player thinks that there is a red key in either box 1 or box 3.",
       "believes(player, formula(exists(and(key(K), iscolor(K, red)), or(inside(K, box1), inside(K, box3)))))"},
      {"The player thinks there might be a key in box 1 or box 2.",
       "believes(player, might(exists(key(K), or(inside(K, box1), inside(K, box2)))))"},
      {"The player thinks there is likely a key in box 2.", "believes(player, likely(exists(key(K), inside(K, box2))))"},
      {"The player initially expected to find a key in box 3.",
       "believes(player, formula(exists(key(K), inside(K, box3))))"},
      {"", "believes(player, likely(exists(key(K), inside(K, box3))))"},
      {"The player initially thought that box 2 contained a red key.",
       "believes(player, formula(exists(and(key(K), iscolor(K, red)), inside(K, box2))))"},
      {"The player initially did not know if box 2 had a key.",
       "not_knows_if(player, formula(exists(key(K), inside(K, box2))))"},
  };
  return corpus;
}

const std::vector<MalformedTranslation>& malformed_corpus() {
  static const std::vector<MalformedTranslation> corpus = {
      {"believes(player, empty(box3))", "type"},
      {"believes(player, contains(red, box2))", "unknown_symbol"},
      {"type about(player, box2, contains)", "syntax"},
      {"not_knows_if(player, exists(key(K), inside(K, box2)))", "type"},
      {">=(prob_of(player, empty(box3)), believes)", "syntax"},
  };
  return corpus;
}

FixtureCorpus default_fixture_corpus() {
  FixtureCorpus corpus;
  for (const GoldPair& p : gold_corpus())
    if (!p.sentence.empty()) corpus[p.sentence] = {{p.formula, 1.0}};
  corpus["The player initially expected to find a key in box 3."] = {
      {"believes(player, likely(exists(key(K), inside(K, box3))))", 0.67},
      {"believes(player, formula(exists(key(K), inside(K, box3))))", 0.32},
  };
  return corpus;
}

std::vector<RawCandidate> FixtureBackend::propose(const std::string& sentence, int n_candidates) {
  auto it = corpus_.find(sentence);
  if (it == corpus_.end())
    throw TranslationError("sentence not in the fixture corpus (use --backend external:CMD): " + sentence);
  std::vector<RawCandidate> out = it->second;
  if (n_candidates > 0 && out.size() > static_cast<std::size_t>(n_candidates))
    out.resize(static_cast<std::size_t>(n_candidates));
  return out;
}

ExternalBackend::ExternalBackend(std::string command, int timeout_ms)
    : command_(std::move(command)), timeout_ms_(timeout_ms) {}

ExternalBackend::~ExternalBackend() { stop(); }

void ExternalBackend::start() {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
    throw TranslationError(std::string("socketpair: ") + std::strerror(errno));
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw TranslationError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  pid_ = pid;
  to_child_ = fds[0];
  from_child_ = fds[0];
  buffer_.clear();
}

void ExternalBackend::stop() {
  if (to_child_ >= 0) close(to_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
    }
  }
  pid_ = -1;
}

std::string ExternalBackend::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
    if (left <= 0) {
      stop();
      throw TranslationError("translator timed out: " + command_);
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int r = poll(&pfd, 1, static_cast<int>(left));
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) throw TranslationError(std::string("poll: ") + std::strerror(errno));
    if (r == 0) continue;
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      stop();
      throw TranslationError("translator closed its output: " + command_);
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<RawCandidate> ExternalBackend::propose(const std::string& sentence, int n_candidates) {
  if (sentence.find_first_of("\t\n") != std::string::npos)
    throw TranslationError("sentence contains a tab or newline");
  if (pid_ < 0) start();
  const std::string request = "TRANSLATE\t" + std::to_string(n_candidates) + "\t" + sentence + "\n";
  for (std::size_t sent = 0; sent < request.size();) {
    const ssize_t n = send(to_child_, request.data() + sent, request.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      stop();
      throw TranslationError("cannot write to translator: " + command_);
    }
    sent += static_cast<std::size_t>(n);
  }
  std::vector<RawCandidate> out;
  for (std::string line = read_line(); !line.empty(); line = read_line()) {
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw TranslationError("malformed translator line: " + line);
    RawCandidate c{line.substr(0, tab), 0.0};
    const std::string w = line.substr(tab + 1);
    char* end = nullptr;
    c.weight = std::strtod(w.c_str(), &end);
    if (w.empty() || end != w.c_str() + w.size() || !std::isfinite(c.weight) || c.weight < 0.0)
      throw TranslationError("malformed translator weight: " + line);
    out.push_back(std::move(c));
    if (out.size() > static_cast<std::size_t>(std::max(n_candidates, 1)))
      throw TranslationError("translator sent more than " + std::to_string(n_candidates) + " candidates");
  }
  return out;
}

std::unique_ptr<TranslatorBackend> make_backend(const std::string& spec) {
  if (spec == "fixture") return std::make_unique<FixtureBackend>();
  const std::string prefix = "external:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size())
    return std::make_unique<ExternalBackend>(spec.substr(prefix.size()));
  throw InputError("unknown backend '" + spec + "' (expected fixture or external:CMD)");
}

}  // namespace labtom
