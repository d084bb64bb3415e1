#include "stn/llm.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "stn/common.hpp"

namespace stn {

namespace {

using json = nlohmann::json;

/// Shared per-endpoint token bucket (capacity one token) so concurrent
/// callers jointly respect the endpoint's request budget.
void rate_limit(const std::string& endpoint, double rps) {
  if (rps <= 0.0) return;
  static std::mutex mu;
  struct Bucket {
    double tokens = 1.0;
    std::chrono::steady_clock::time_point last;
  };
  static std::map<std::string, Bucket> buckets;

  std::chrono::duration<double> wait{0.0};
  {
    std::lock_guard lock(mu);
    auto now = std::chrono::steady_clock::now();
    auto [it, inserted] = buckets.try_emplace(endpoint);
    Bucket& b = it->second;
    if (inserted) {
      b.last = now;
      b.tokens -= 1.0;
      return;
    }
    b.tokens = std::min(1.0, b.tokens + std::chrono::duration<double>(now - b.last).count() * rps);
    b.last = now;
    if (b.tokens >= 1.0) {
      b.tokens -= 1.0;
      return;
    }
    wait = std::chrono::duration<double>((1.0 - b.tokens) / rps);
    b.tokens = 0.0;
    b.last = now + std::chrono::duration_cast<std::chrono::steady_clock::duration>(wait);
  }
  std::this_thread::sleep_for(wait);
}

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // normalized chat-completions path
};

ParsedUrl split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw InputError(fmt::format("endpoint URL '{}' has no scheme", url));
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.base = path_start == std::string::npos ? url : url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (path.size() > 1 && path.back() == '/') path.pop_back();
  if (path.empty() || path == "/")
    out.path = "/v1/chat/completions";
  else if (path.ends_with("/chat/completions"))
    out.path = path;
  else
    out.path = path + "/chat/completions";
  return out;
}

// ---- deterministic stub endpoint ------------------------------------------

struct StubFeatures {
  std::string name;
  int count = 0;
  double conn = 0.0;
  double avg = 0.0;
};

bool similar_value(double a, double b) {
  return std::abs(a - b) <= 0.01 * std::max(std::abs(a), std::abs(b));
}

/// Local re-statement of the comparison rules over the sentences in the DATA
/// block. Intentionally independent from the evaluation oracle: this is the
/// "model", the oracle is the judge.
std::string stub_task_a_reply(const std::string& text) {
  std::string data = text;
  if (auto pos = data.find("[DATA]\n"); pos != std::string::npos) data = data.substr(pos + 7);
  if (auto pos = data.find("\n\n[QUERIES]"); pos != std::string::npos) data = data.substr(0, pos);

  static const std::regex count_re(R"(^(.+) has (\d+) nodes pointing to nodes with the best fitness\.$)");
  static const std::regex conn_re(R"(^(.+) has ([0-9.]+) connectivity among all the nodes\.$)");
  static const std::regex avg_re(R"(^(.+) has an average fitness of (-?[0-9.]+) across (\d+) trajectories\.$)");

  std::vector<StubFeatures> algos;
  auto entry = [&](const std::string& name) -> StubFeatures& {
    for (auto& a : algos)
      if (a.name == name) return a;
    algos.push_back(StubFeatures{name});
    return algos.back();
  };
  std::istringstream lines(data);
  std::string line;
  std::smatch m;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::regex_match(line, m, count_re)) entry(m[1]).count = std::stoi(m[2]);
    else if (std::regex_match(line, m, conn_re)) entry(m[1]).conn = std::stod(m[2]);
    else if (std::regex_match(line, m, avg_re)) entry(m[1]).avg = std::stod(m[2]);
  }
  if (algos.size() < 2) return "[draw]";

  const bool minimize = text.find("address a minimization problem") != std::string::npos;
  int max_count = 0;
  for (const auto& a : algos) max_count = std::max(max_count, a.count);
  std::vector<const StubFeatures*> leaders;
  for (const auto& a : algos)
    if (a.count == max_count) leaders.push_back(&a);

  if (leaders.size() > 1) {
    double best_avg = leaders.front()->avg;
    for (const auto* a : leaders)
      if (minimize ? a->avg < best_avg : a->avg > best_avg) best_avg = a->avg;
    std::vector<const StubFeatures*> kept;
    for (const auto* a : leaders)
      if (similar_value(a->avg, best_avg)) kept.push_back(a);
    leaders = kept;
  }
  if (leaders.size() > 1 && max_count > 0) {
    double best_conn = 0.0;
    for (const auto* a : leaders) best_conn = std::max(best_conn, a->conn);
    std::vector<const StubFeatures*> kept;
    for (const auto* a : leaders)
      if (similar_value(a->conn, best_conn)) kept.push_back(a);
    leaders = kept;
  }
  if (leaders.size() == 1)
    return fmt::format("The rules point to a clear winner: [winner={}].", leaders.front()->name);
  return "The compared algorithms perform comparably, so the outcome is a [draw].";
}

std::string stub_task_b_reply(const std::string& text) {
  static const std::regex min_re(R"(- minimum possible number of clusters: (\d+))");
  static const std::regex max_re(R"(- maximum possible number of clusters: (\d+))");
  std::smatch m;
  int lo = 1, hi = 1;
  if (std::regex_search(text, m, min_re)) lo = std::stoi(m[1]);
  if (std::regex_search(text, m, max_re)) hi = std::stoi(m[1]);
  int suggestion = static_cast<int>(std::floor((lo + 0.9 * hi) / 2.0));
  if (suggestion <= lo) suggestion = lo + 1;
  return fmt::format(
      "A finer partitioning should make the graphic easier to read: [cluster_number={}].",
      suggestion);
}

std::string stub_reply(const std::string& variant, const std::string& wire_text) {
  if (variant == "echo") return wire_text;
  if (variant == "oracle") {
    if (wire_text.find("[PARAMETERS DEFINITIONS]") != std::string::npos)
      return stub_task_b_reply(wire_text);
    if (wire_text.find("[RULES]") != std::string::npos) return stub_task_a_reply(wire_text);
    if (wire_text.find("Generate a grouped bar plot") != std::string::npos)
      return "Plot generated from the attached table.";
    return wire_text;
  }
  throw EndpointError(fmt::format("unknown stub endpoint 'stub:{}'", variant));
}

}  // namespace

void LLMConfig::validate() const {
  if (endpoint_url.empty()) throw InputError("endpoint URL must not be empty");
  if (retries < 0 || retries > 5) throw InputError("retries must be between 0 and 5");
  if (temperature < 0.0) throw InputError("temperature must be >= 0");
  if (max_tokens < 1) throw InputError("max_tokens must be >= 1");
  if (timeout_seconds <= 0.0) throw InputError("timeout must be positive");
}

std::string wire_payload(const RenderedPrompt& prompt, const LLMConfig& config) {
  json body = {
      {"model", config.model_id},
      {"messages", json::array({json{{"role", "user"}, {"content", inline_attachments(prompt)}}})},
      {"temperature", config.temperature},
      {"max_tokens", config.max_tokens},
  };
  return body.dump();
}

std::string extract_reply_text(const std::string& body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw EndpointError("response body is not valid JSON");
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw EndpointError("response envelope has no choices");
  const json& choice = j["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content") ||
      !choice["message"]["content"].is_string())
    throw EndpointError("response envelope has no message content");
  return choice["message"]["content"].get<std::string>();
}

struct LLMClient::Impl {
  std::mutex transcript_mu;
};

LLMClient::LLMClient(LLMConfig config) : config_(std::move(config)), impl_(new Impl) {
  config_.validate();
}

LLMClient::LLMClient(LLMClient&&) noexcept = default;
LLMClient& LLMClient::operator=(LLMClient&&) noexcept = default;
LLMClient::~LLMClient() = default;

void LLMClient::log_transcripts_to(const std::string& path) { transcript_path_ = path; }

LLMReply LLMClient::complete(const RenderedPrompt& prompt) {
  const std::string wire_text = inline_attachments(prompt);

  auto log_attempt = [&](int attempt, const std::string& status, const std::string& response) {
    if (transcript_path_.empty()) return;
    json line = {
        {"endpoint", config_.endpoint_url}, {"model", config_.model_id},
        {"task", to_string(prompt.task)},   {"attempt", attempt},
        {"status", status},                 {"request", wire_text},
        {"response", response},
    };
    std::lock_guard lock(impl_->transcript_mu);
    std::ofstream out(transcript_path_, std::ios::app | std::ios::binary);
    out << line.dump() << "\n";
  };

  if (config_.endpoint_url.starts_with("stub:")) {
    std::string reply = stub_reply(config_.endpoint_url.substr(5), wire_text);
    log_attempt(1, "stub", reply);
    return LLMReply{reply, config_.model_id, 0.0};
  }

  ParsedUrl url = split_endpoint(config_.endpoint_url);
  httplib::Client client(url.base);
  client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
  client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", fmt::format("Bearer {}", key));

  const std::string payload = wire_payload(prompt, config_);
  std::string last_error;
  for (int attempt = 1; attempt <= config_.retries + 1; ++attempt) {
    rate_limit(url.base, config_.requests_per_second);
    auto t0 = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(url.path, headers, payload, "application/json");
    double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!res) {
      last_error = fmt::format("network error: {}", httplib::to_string(res.error()));
      log_attempt(attempt, "network_error", last_error);
    } else if (res->status == 200) {
      log_attempt(attempt, "200", res->body);
      return LLMReply{extract_reply_text(res->body), config_.model_id, latency};
    } else if (res->status == 401 || res->status == 403) {
      log_attempt(attempt, fmt::format("{}", res->status), res->body);
      throw EndpointError(fmt::format("authentication failed (HTTP {}); check ${}", res->status,
                                      config_.api_key_env));
    } else if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      log_attempt(attempt, fmt::format("{}", res->status), res->body);
    } else {
      log_attempt(attempt, fmt::format("{}", res->status), res->body);
      throw EndpointError(fmt::format("endpoint rejected the request with HTTP {}", res->status));
    }

    if (attempt <= config_.retries) {
      double backoff = config_.backoff_base_seconds * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(std::min(backoff, 8.0)));
    }
  }
  throw EndpointError(fmt::format("giving up after {} attempts ({})", config_.retries + 1,
                                  last_error));
}

}  // namespace stn
