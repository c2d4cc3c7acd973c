#include <cstdlib>

#include <fmt/format.h>
#include <json.hpp>

#include "pcgeval/harness.hpp"

#if PCGEVAL_HAS_LIVE_PROVIDER
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#endif

namespace pcgeval {

std::string build_chat_request(const Conversation& conversation, std::string_view model, double temperature,
                               int seed) {
  nlohmann::ordered_json body;
  body["model"] = std::string(model);
  auto messages = nlohmann::ordered_json::array();
  for (const auto& m : conversation) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  body["temperature"] = temperature;
  body["seed"] = seed;
  return body.dump();
}

std::string parse_chat_reply(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(fmt::format("chat reply is not JSON: {}", e.what()));
  }
  if (doc.contains("error")) throw ProviderError(fmt::format("provider returned an error: {}", doc["error"].dump()));
  const auto* content = [&]() -> const nlohmann::json* {
    if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) return nullptr;
    const auto& first = doc["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content")) return nullptr;
    return &first["message"]["content"];
  }();
  if (content == nullptr) throw ProviderError("chat reply has no choices[0].message.content");
  if (content->is_null()) return {};
  if (!content->is_string()) throw ProviderError("chat reply content is not a string");
  return content->get<std::string>();
}

#if PCGEVAL_HAS_LIVE_PROVIDER
namespace {

// Holds no connection state between calls, so one instance can serve
// concurrent trials.
class ChatCompletionsProvider final : public Provider {
 public:
  ChatCompletionsProvider(LiveProviderConfig config, std::string api_key)
      : config_(std::move(config)), api_key_(std::move(api_key)) {}

  std::string complete(const Conversation& conversation, double temperature, int seed) override {
    httplib::Client client(config_.base_url);
    const auto seconds = static_cast<time_t>(config_.timeout_seconds);
    client.set_connection_timeout(seconds);
    client.set_read_timeout(seconds);
    client.set_write_timeout(seconds);
    client.set_bearer_token_auth(api_key_);

    const auto body = build_chat_request(conversation, config_.model, temperature, seed);
    auto response = client.Post(config_.path, body, "application/json");
    if (!response) throw ProviderError(fmt::format("HTTP request failed: {}", httplib::to_string(response.error())));
    if (response->status != 200) {
      throw ProviderError(fmt::format("HTTP {} from provider: {}", response->status, response->body.substr(0, 200)));
    }
    return parse_chat_reply(response->body);
  }

 private:
  LiveProviderConfig config_;
  std::string api_key_;
};

}  // namespace

std::unique_ptr<Provider> make_live_provider(const LiveProviderConfig& config) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError(fmt::format("live provider needs an API key in ${}", config.api_key_env));
  }
  return std::make_unique<ChatCompletionsProvider>(config, key);
}
#else
std::unique_ptr<Provider> make_live_provider(const LiveProviderConfig&) {
  throw ConfigError("this build has no TLS support; rebuild with OpenSSL for the live provider");
}
#endif

}  // namespace pcgeval
