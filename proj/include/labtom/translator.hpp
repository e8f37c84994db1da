// Sentence -> ELoT translation boundary.
//
// A backend proposes raw (text, weight) pairs; translate() keeps only those
// that parse and type-check, renormalizes and ranks them.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "labtom/domain.hpp"
#include "labtom/elot.hpp"

namespace labtom {

struct TranslationCandidate {
  elot::FormulaPtr formula;
  double weight = 0.0;
};

struct RawCandidate {
  std::string text;
  double weight = 0.0;
};

class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;
  /// Throws TranslationError on backend failure.
  virtual std::vector<RawCandidate> propose(const std::string& sentence, int n_candidates) = 0;
};

/// Ranked by weight (stable), weights summing to 1. Throws TranslationError
/// when no candidate survives validation.
std::vector<TranslationCandidate> translate(const std::string& sentence, TranslatorBackend& backend,
                                            const DomainSignature& sig = default_signature(),
                                            int n_candidates = 4);

/// One published English/ELoT pair. `sentence` is empty for formulas that
/// only appear as alternative translations.
struct GoldPair {
  std::string sentence;
  std::string formula;
};
/// The fourteen published pairs.
const std::vector<GoldPair>& gold_corpus();

/// A rejected translation and the error it must raise.
struct MalformedTranslation {
  std::string text;
  std::string error;  // "syntax", "type" or "unknown_symbol"
};
const std::vector<MalformedTranslation>& malformed_corpus();

using FixtureCorpus = std::map<std::string, std::vector<RawCandidate>>;
/// Gold sentences with weight 1, except the expected-key sentence which
/// carries its two sampled readings (0.67 likely, 0.32 plain).
FixtureCorpus default_fixture_corpus();

class FixtureBackend : public TranslatorBackend {
 public:
  explicit FixtureBackend(FixtureCorpus corpus = default_fixture_corpus()) : corpus_(std::move(corpus)) {}
  std::vector<RawCandidate> propose(const std::string& sentence, int n_candidates) override;

 private:
  FixtureCorpus corpus_;
};

/// Runs `/bin/sh -c command` once and speaks the line protocol over its
/// stdin/stdout:
///   request   TRANSLATE<TAB>n<TAB>sentence
///   response  formula<TAB>weight lines, then one blank line
class ExternalBackend : public TranslatorBackend {
 public:
  explicit ExternalBackend(std::string command, int timeout_ms = 10000);
  ~ExternalBackend() override;
  ExternalBackend(const ExternalBackend&) = delete;
  ExternalBackend& operator=(const ExternalBackend&) = delete;

  std::vector<RawCandidate> propose(const std::string& sentence, int n_candidates) override;

 private:
  void start();
  void stop();
  std::string read_line();

  std::string command_;
  int timeout_ms_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// "fixture" or "external:<command>".
std::unique_ptr<TranslatorBackend> make_backend(const std::string& spec);

}  // namespace labtom
