#pragma once

// Trial execution under the competition budgets: a provider abstraction, a
// metered session, and the reference prompting strategies.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/core_model.hpp"

namespace pcgeval {

enum class Role { system, user, assistant };
std::string_view to_string(Role role);

struct Message {
  Role role;
  std::string content;
  friend bool operator==(const Message&, const Message&) = default;
};

using Conversation = std::vector<Message>;

struct Budgets {
  long max_tokens = 25000;
  double max_seconds = 120.0;
  double temperature = 1.0;
  int seed = 42;
};

struct ProviderError : Error {
  using Error::Error;
};

class Provider {
 public:
  virtual ~Provider() = default;
  // Throws ProviderError on transport or protocol failure.
  virtual std::string complete(const Conversation& conversation, double temperature, int seed) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_seconds() const = 0;
};

class SteadyClock final : public Clock {
 public:
  double now_seconds() const override;
};

class ManualClock final : public Clock {
 public:
  double now_seconds() const override { return now_; }
  void advance(double seconds) { now_ += seconds; }

 private:
  double now_ = 0.0;
};

using TokenCounter = std::function<long(std::string_view)>;

// ceil(byte length / 4)
long count_tokens(std::string_view text);

// Replays replies from a script. Lookup order for call n (0-based within the
// current trial) of character C, trial t: "C/tt/n", "C/n", "n", "*".
class ScriptedProvider final : public Provider {
 public:
  explicit ScriptedProvider(std::map<std::string, std::string> script, ManualClock* clock = nullptr,
                            double seconds_per_call = 0.0);
  // Throws LoadError for unreadable files or non-string replies.
  static ScriptedProvider from_json(std::string_view json_text, ManualClock* clock = nullptr,
                                    double seconds_per_call = 0.0);

  void start_trial(char character, int trial_index);
  std::string complete(const Conversation& conversation, double temperature, int seed) override;

  int calls() const { return total_calls_; }
  // Every (temperature, seed) pair seen, in call order.
  const std::vector<std::pair<double, int>>& sampling_log() const { return sampling_; }

 private:
  std::map<std::string, std::string> script_;
  ManualClock* clock_;
  double seconds_per_call_;
  char character_ = '?';
  int trial_ = 0;
  int call_in_trial_ = 0;
  int total_calls_ = 0;
  std::vector<std::pair<double, int>> sampling_;
};

struct LiveProviderConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-3.5-turbo-0125";
  std::string api_key_env = "PCGEVAL_API_KEY";
  double timeout_seconds = 120.0;
};

// Request body for a chat-completions endpoint.
std::string build_chat_request(const Conversation& conversation, std::string_view model, double temperature,
                               int seed);
// Content of the first choice's message. Throws ProviderError.
std::string parse_chat_reply(std::string_view body);

// Throws ConfigError when the build lacks TLS support or the key is unset.
std::unique_ptr<Provider> make_live_provider(const LiveProviderConfig& config);

enum class TrialOutcome { ok, budget_exceeded, provider_error, timeout };
std::string_view to_string(TrialOutcome outcome);

// One metered trial. After the first violation the session is closed and no
// further provider calls are made.
class TrialSession {
 public:
  TrialSession(Provider& provider, const Clock& clock, Budgets budgets, TokenCounter counter = count_tokens);

  // Appends a user turn to the running conversation and returns the reply.
  // Charge: tokens(message) + tokens(reply).
  std::optional<std::string> send(std::string_view message);

  // Sends a standalone conversation; every message in it is charged, plus the reply.
  std::optional<std::string> ask(const Conversation& conversation);

  void set_system_prompt(std::string prompt);

  bool open() const { return status_ == TrialOutcome::ok; }
  TrialOutcome status() const { return status_; }
  long tokens_used() const { return tokens_used_; }
  double seconds_used() const;
  int provider_calls() const { return static_cast<int>(transcript_.size()); }
  const Conversation& history() const { return history_; }
  const std::vector<Conversation>& transcript() const { return transcript_; }
  const std::string& error_message() const { return error_; }

 private:
  std::optional<std::string> call(const Conversation& conversation, long input_charge);
  bool out_of_time() const;

  Provider& provider_;
  const Clock& clock_;
  Budgets budgets_;
  TokenCounter counter_;
  double started_;
  double finished_ = -1.0;
  long tokens_used_ = 0;
  TrialOutcome status_ = TrialOutcome::ok;
  std::string error_;
  Conversation history_;
  std::vector<Conversation> transcript_;
};

struct TrialContext {
  std::string program_id;
  char character = 'A';
  int trial_index = 1;
};

struct TrialRecord {
  std::string program_id;
  char character = 'A';
  int trial_index = 1;
  std::string final_response;  // empty for any non-ok outcome
  TrialOutcome status = TrialOutcome::ok;
  long tokens_used = 0;
  double seconds_used = 0.0;
  std::vector<Conversation> transcript;  // one conversation (with reply) per provider call
  std::string error;

  // Stable key order, two-space indent, trailing newline.
  std::string to_json() const;
};

struct ToTConfig {
  int max_depth = 2;
  int branching = 2;
  std::string task_prompt;
  std::string eval_prompt;
  std::string final_prompt;

  void validate() const;
};

struct FewShotExample {
  char character;
  std::string program;  // drop_block calls, one per line
};

enum class Strategy { zero_shot, zero_shot_multi_turn, few_shot, tot_bfs };
std::string_view to_string(Strategy strategy);
std::optional<Strategy> strategy_from_name(std::string_view name);

// Prompt texts are supplied by the user. "<OBJECT>" in any prompt is replaced
// by the quoted target character, e.g. "I".
struct StrategyPrompts {
  std::string task_prompt;
  std::string format_prompt;  // second turn of zero_shot_multi_turn
  std::vector<FewShotExample> examples;
  ToTConfig tot;
};

std::string fill_character(std::string_view prompt, char character);

// Task prompt followed by an "Examples" section, one fenced program per example.
std::string few_shot_prompt(std::string_view task_prompt, char character, const std::vector<FewShotExample>& examples);

// First two numbers in an evaluation reply, multiplied; 0 when fewer than two.
double thought_score(std::string_view evaluation_reply);

TrialRecord run_strategy(Strategy strategy, const TrialContext& context, const StrategyPrompts& prompts,
                         Provider& provider, const Budgets& budgets, const Clock& clock,
                         TokenCounter counter = count_tokens);

// Breadth-first tree of thoughts: per depth, `branching` generation calls,
// `branching` evaluation calls, best candidate extends the chain (ties keep the
// lower index); one final formatting call at the end.
TrialRecord tot_bfs(const ToTConfig& cfg, const TrialContext& context, Provider& provider, const Budgets& budgets,
                    const Clock& clock, TokenCounter counter = count_tokens);

}  // namespace pcgeval
