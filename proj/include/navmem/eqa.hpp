#ifndef NAVMEM_EQA_HPP
#define NAVMEM_EQA_HPP

#include "navmem/types.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace navmem {

/// Response text lacks a section, repeats one, or leaves one empty.
class ResponseParseError : public Error {
 public:
  using Error::Error;
};

/// The generation service could not be reached or refused the request.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A failure worth retrying (connection drop, 5xx, 429).
class TransientError : public TransportError {
 public:
  using TransportError::TransportError;
};

// Section headers of the response wire format, each at the start of a line.
inline constexpr std::string_view kSceneHeader = "Scene:";
inline constexpr std::string_view kPlanHeader = "Plan:";
inline constexpr std::string_view kReasoningHeader = "Reasoning:";

struct StructuredResponse {
  std::string scene_description;
  std::string path_planning;
  std::string commonsense;

  bool operator==(const StructuredResponse&) const = default;
};

struct Exemplar {
  std::string question;
  StructuredResponse answer;

  bool operator==(const Exemplar&) const = default;
};

struct EqaPrompt {
  std::string role_preamble;
  std::vector<Exemplar> exemplars;
  std::string instruction;
  std::vector<std::int64_t> frame_refs;

  bool operator==(const EqaPrompt&) const = default;
};

/// Timesteps of the last min(len, w) frames, oldest first.
std::vector<std::int64_t> select_context(const Trajectory& traj, std::size_t w);

std::string_view default_role_preamble();

/// Two placeholder worked examples. Swap in curated ones through
/// build_prompt's `exemplars` argument.
std::vector<Exemplar> default_exemplars();

/// Throws Error on an empty instruction, a frame list that is empty or not
/// contiguous, or an exemplar count other than two.
EqaPrompt build_prompt(std::string instruction, std::vector<std::int64_t> frames,
                       std::vector<Exemplar> exemplars,
                       std::string role_preamble = std::string(default_role_preamble()));

/// Plain-text rendering of the prompt.
std::string render_prompt(const EqaPrompt& prompt);

/// JSON request body sent to a generation service.
std::string request_body(const EqaPrompt& prompt, const Trajectory::Meta& meta = {});

/// Splits `raw` into its three headed sections (any order).
StructuredResponse parse_response(std::string_view raw);

/// Inverse of parse_response for well-formed records.
std::string format_response(const StructuredResponse& response);

class GenerationClient {
 public:
  virtual ~GenerationClient() = default;
  /// Sends a JSON request body and returns the response text. Throws
  /// TransientError for retryable failures, TransportError otherwise.
  virtual std::string send(const std::string& request_json) = 0;
};

/// Deterministic stand-in for a generation service: answers with a canned
/// three-section template chosen by a hash of the instruction and seed.
class MockClient : public GenerationClient {
 public:
  struct Options {
    std::uint64_t seed = 0;
    int n_sections = 3;
    // Number of leading calls that fail with TransientError.
    int fail_first = 0;
  };

  MockClient() = default;
  explicit MockClient(Options options) : options_(options) {}

  std::string send(const std::string& request_json) override;
  int calls() const { return calls_; }

 private:
  Options options_;
  int calls_ = 0;
};

/// POSTs the request to an http:// endpoint and reads {"text": ...}.
class HttpClient : public GenerationClient {
 public:
  explicit HttpClient(std::string url, std::chrono::seconds timeout = std::chrono::seconds(60));
  std::string send(const std::string& request_json) override;

 private:
  std::string host_port_;
  std::string path_;
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int retry_limit = 3;
  std::chrono::milliseconds base_delay{200};
  std::function<void(std::chrono::milliseconds)> sleep;

  /// EQA_RETRY_LIMIT overrides retry_limit when set.
  static RetryPolicy from_env();
};

/// Mock client unless EQA_ENDPOINT names a service.
std::unique_ptr<GenerationClient> client_from_env(std::uint64_t mock_seed = 0);

/// Sends the prompt, retrying transient failures up to retry_limit times
/// with delays base_delay * 2^attempt, and parses the reply.
StructuredResponse generate(const EqaPrompt& prompt, GenerationClient& client,
                            const RetryPolicy& retry = {}, const Trajectory::Meta& meta = {});

/// One persisted EQA pair as a single JSON line (no trailing newline).
std::string eqa_pair_to_json(const EqaPrompt& prompt, const StructuredResponse& response);

}  // namespace navmem

#endif  // NAVMEM_EQA_HPP
