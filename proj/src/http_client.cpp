#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "guiagent/http_client.hpp"

#include <cstdlib>
#include <thread>

#include "guiagent/util.hpp"
#include "httplib.h"
#include "text_util.hpp"

namespace guiagent {

using nlohmann::json;

void BackendConfig::validate() const {
  auto bad = [](const std::string& why) { throw BackendError(BackendError::Kind::Config, why); };
  if (endpoint_url.rfind("http://", 0) != 0 && endpoint_url.rfind("https://", 0) != 0) {
    bad("endpoint_url must start with http:// or https://");
  }
  if (model_name.empty()) bad("model_name is required");
  if (!(temperature >= 0.0)) bad("temperature must be >= 0");
  if (max_retries < 0) bad("max_retries must be >= 0");
  if (!(timeout_seconds > 0.0)) bad("timeout must be > 0");
  if (backoff_initial_ms < 0) bad("backoff_initial_ms must be >= 0");
  if (max_in_flight < 1) bad("max_in_flight must be >= 1");
}

BackendConfig backend_config_from_json(const json& j) {
  BackendConfig cfg;
  try {
    cfg.endpoint_url = j.at("endpoint_url").get<std::string>();
    cfg.model_name = j.at("model_name").get<std::string>();
    cfg.auth_header_name = j.value("auth_header_name", cfg.auth_header_name);
    cfg.auth_token_env_var = j.value("auth_token_env_var", cfg.auth_token_env_var);
    cfg.temperature = j.value("temperature", cfg.temperature);
    cfg.timeout_seconds = j.value("timeout", cfg.timeout_seconds);
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.backoff_initial_ms = j.value("backoff_initial_ms", cfg.backoff_initial_ms);
    cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
  } catch (const json::exception& e) {
    throw BackendError(BackendError::Kind::Config, std::string("bad backend config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json build_chat_request(const BackendConfig& cfg, std::string_view prompt,
                        std::span<const std::uint8_t> png) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", std::string(prompt)}});
  content.push_back({{"type", "image"}, {"data", base64_encode(png)}});
  return {{"model", cfg.model_name},
          {"temperature", cfg.temperature},
          {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
}

std::string extract_reply_text(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw HttpError(HttpError::Kind::Protocol, std::string("malformed JSON reply: ") + e.what(), 200,
                    body);
  }
  auto protocol = [&](const std::string& why) {
    return HttpError(HttpError::Kind::Protocol, why, 200, body);
  };
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw protocol("reply has no choices");
  }
  const json& choice = j["choices"][0];
  const json* content = nullptr;
  if (choice.contains("message") && choice["message"].is_object() &&
      choice["message"].contains("content")) {
    content = &choice["message"]["content"];
  }
  if (!content) throw protocol("first choice has no message content");
  if (content->is_string()) return content->get<std::string>();
  if (content->is_array()) {
    for (const auto& seg : *content) {
      if (seg.is_object() && seg.value("type", "") == "text" && seg.contains("text") &&
          seg["text"].is_string()) {
        return seg["text"].get<std::string>();
      }
    }
  }
  throw protocol("first choice has no text segment");
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~InFlightSlot() { s_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

HttpClient::HttpClient(BackendConfig cfg)
    : cfg_(std::move(cfg)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(std::max(cfg_.max_in_flight, 1))) {
  cfg_.validate();
}

std::string HttpClient::complete(std::string_view prompt, std::span<const std::uint8_t> png) const {
  httplib::Headers headers;
  if (!cfg_.auth_token_env_var.empty()) {
    const char* token = std::getenv(cfg_.auth_token_env_var.c_str());
    if (!token || !*token) {
      throw HttpError(HttpError::Kind::Auth,
                      "environment variable " + cfg_.auth_token_env_var + " is not set");
    }
    std::string value = token;
    if (text::to_lower(cfg_.auth_header_name) == "authorization" &&
        value.find(' ') == std::string::npos) {
      value = "Bearer " + value;
    }
    headers.emplace(cfg_.auth_header_name, value);
  }

  const std::string body = build_chat_request(cfg_, prompt, png).dump();
  const Endpoint ep = split_url(cfg_.endpoint_url);
  const auto timeout = std::chrono::duration<double>(cfg_.timeout_seconds);
  const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);

  InFlightSlot slot(*in_flight_);
  std::string last_error;
  auto backoff = std::chrono::milliseconds(cfg_.backoff_initial_ms);
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(ep.origin);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);
    auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw HttpError(HttpError::Kind::Auth, "HTTP " + std::to_string(res->status), res->status,
                      res->body);
    }
    if (res->status < 200 || res->status >= 300) {
      throw HttpError(HttpError::Kind::Protocol, "HTTP " + std::to_string(res->status), res->status,
                      res->body);
    }
    return extract_reply_text(res->body);
  }
  throw HttpError(HttpError::Kind::Transport,
                  last_error + " (after " + std::to_string(cfg_.max_retries + 1) + " attempts)");
}

std::string http_complete(const BackendConfig& cfg, std::string_view prompt,
                          std::span<const std::uint8_t> png) {
  return HttpClient(cfg).complete(prompt, png);
}

std::string HttpInterpreter::interpret(const InterpreterRequest& req) const {
  return client_.complete(build_interpreter_prompt(req), req.observation.png);
}

std::string HttpLocator::locate(const LocatorRequest& req) const {
  return client_.complete(build_locator_prompt(req.description), req.observation.png);
}

}  // namespace guiagent
