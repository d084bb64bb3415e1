#pragma once

#include <memory>
#include <optional>
#include <string>

#include "stn/prompt.hpp"

namespace stn {

struct LLMConfig {
  std::string endpoint_url;  ///< https URL, or a deterministic "stub:" scheme
  std::string model_id = "stub-model";
  double temperature = 0.0;  ///< deterministic by default
  int max_tokens = 1024;
  std::string api_key_env = "STN_API_KEY";
  double timeout_seconds = 60.0;
  int retries = 2;                     ///< extra attempts after the first, <= 5
  double requests_per_second = 0.0;    ///< 0 disables rate limiting
  double backoff_base_seconds = 0.5;   ///< doubled per retry

  void validate() const;
};

struct LLMReply {
  std::string text;  // verbatim, untrimmed
  std::string model_id;
  double latency_seconds = 0.0;
};

/// Anything that can answer a prompt; lets tests script replies without a
/// network in the loop.
class Completer {
 public:
  virtual ~Completer() = default;
  virtual LLMReply complete(const RenderedPrompt& prompt) = 0;
};

/// Chat-completion client. Attachments are inlined into the single user
/// message (byte-identical to inline_attachments). Network errors, 429 and
/// 5xx responses are retried with exponential backoff; auth failures and
/// malformed response envelopes are fatal. `stub:` endpoints answer locally
/// and deterministically:
///   stub:echo    - replies with the full submitted text
///   stub:oracle  - applies the task rules to the DATA block
class LLMClient : public Completer {
 public:
  explicit LLMClient(LLMConfig config);
  LLMClient(LLMClient&&) noexcept;
  LLMClient& operator=(LLMClient&&) noexcept;
  ~LLMClient() override;

  LLMReply complete(const RenderedPrompt& prompt) override;

  /// Appends one JSON line per attempt to the given file (audit log).
  void log_transcripts_to(const std::string& path);

  const LLMConfig& config() const { return config_; }

 private:
  LLMConfig config_;
  std::string transcript_path_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// JSON body of the chat-completions request for the given prompt.
std::string wire_payload(const RenderedPrompt& prompt, const LLMConfig& config);

/// Extracts the first candidate text from a chat-completions response body.
/// Throws EndpointError when the envelope is malformed.
std::string extract_reply_text(const std::string& body);

}  // namespace stn
