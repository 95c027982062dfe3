#pragma once

// Vendor-neutral multimodal chat client plus the interpreter/locator backends
// built on it.

#include <chrono>
#include <cstdint>
#include <memory>
#include <semaphore>
#include <span>
#include <stdexcept>
#include <string>

#include "guiagent/backends.hpp"

namespace guiagent {

struct BackendConfig {
  std::string endpoint_url;       // http(s)://host[:port]/path
  std::string auth_header_name = "Authorization";
  std::string auth_token_env_var;  // empty: send no auth header
  std::string model_name;
  double temperature = 0.0;
  double timeout_seconds = 60.0;
  int max_retries = 2;
  int backoff_initial_ms = 500;   // doubles after every retry
  int max_in_flight = 4;

  /// Throws BackendError(Config) when an invariant does not hold.
  void validate() const;
};

BackendConfig backend_config_from_json(const nlohmann::json& j);

class HttpError : public std::runtime_error {
 public:
  enum class Kind { Transport, Protocol, Auth };
  HttpError(Kind kind, const std::string& what, int status = 0, std::string body = {})
      : std::runtime_error(what), kind_(kind), status_(status), body_(std::move(body)) {}
  Kind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }
  /// Raw response body, kept for diagnostics.
  const std::string& body() const noexcept { return body_; }

 private:
  Kind kind_;
  int status_;
  std::string body_;
};

/// JSON request body sent by HttpClient.
nlohmann::json build_chat_request(const BackendConfig& cfg, std::string_view prompt,
                                  std::span<const std::uint8_t> png);
/// First text segment of the first choice; throws HttpError(Protocol).
std::string extract_reply_text(const std::string& body);

/// Thread-safe; at most cfg.max_in_flight requests run concurrently.
/// Transport failures and 5xx/429 responses are retried up to max_retries
/// times with exponential backoff. Other non-2xx statuses, malformed bodies
/// and missing tokens fail immediately.
class HttpClient {
 public:
  explicit HttpClient(BackendConfig cfg);
  std::string complete(std::string_view prompt, std::span<const std::uint8_t> png) const;
  const BackendConfig& config() const noexcept { return cfg_; }

 private:
  BackendConfig cfg_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

std::string http_complete(const BackendConfig& cfg, std::string_view prompt,
                          std::span<const std::uint8_t> png);

class HttpInterpreter final : public Interpreter {
 public:
  explicit HttpInterpreter(BackendConfig cfg) : client_(std::move(cfg)) {}
  std::string interpret(const InterpreterRequest& req) const override;
  std::string name() const override { return "http:" + client_.config().model_name; }

 private:
  HttpClient client_;
};

class HttpLocator final : public Locator {
 public:
  explicit HttpLocator(BackendConfig cfg) : client_(std::move(cfg)) {}
  std::string locate(const LocatorRequest& req) const override;
  std::string name() const override { return "http:" + client_.config().model_name; }

 private:
  HttpClient client_;
};

}  // namespace guiagent
