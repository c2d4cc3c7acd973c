#include "pcgeval/harness.hpp"

#include <chrono>
#include <regex>

#include <fmt/format.h>
#include <json.hpp>

namespace pcgeval {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(TrialOutcome outcome) {
  switch (outcome) {
    case TrialOutcome::ok: return "ok";
    case TrialOutcome::budget_exceeded: return "budget_exceeded";
    case TrialOutcome::provider_error: return "provider_error";
    case TrialOutcome::timeout: return "timeout";
  }
  return "provider_error";
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::zero_shot: return "zero_shot";
    case Strategy::zero_shot_multi_turn: return "zero_shot_multi_turn";
    case Strategy::few_shot: return "few_shot";
    case Strategy::tot_bfs: return "tot_bfs";
  }
  return "zero_shot";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  for (auto s : {Strategy::zero_shot, Strategy::zero_shot_multi_turn, Strategy::few_shot, Strategy::tot_bfs}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

double SteadyClock::now_seconds() const {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

long count_tokens(std::string_view text) { return static_cast<long>((text.size() + 3) / 4); }

// --- scripted provider ---

ScriptedProvider::ScriptedProvider(std::map<std::string, std::string> script, ManualClock* clock,
                                   double seconds_per_call)
    : script_(std::move(script)), clock_(clock), seconds_per_call_(seconds_per_call) {}

ScriptedProvider ScriptedProvider::from_json(std::string_view json_text, ManualClock* clock, double seconds_per_call) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(fmt::format("mock script is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw LoadError("mock script must be a JSON object of call key -> reply");
  std::map<std::string, std::string> script;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw LoadError(fmt::format("mock script reply '{}' is not a string", key));
    script.emplace(key, value.get<std::string>());
  }
  return ScriptedProvider(std::move(script), clock, seconds_per_call);
}

void ScriptedProvider::start_trial(char character, int trial_index) {
  character_ = character;
  trial_ = trial_index;
  call_in_trial_ = 0;
}

std::string ScriptedProvider::complete(const Conversation&, double temperature, int seed) {
  const int n = call_in_trial_++;
  ++total_calls_;
  sampling_.emplace_back(temperature, seed);
  if (clock_ != nullptr && seconds_per_call_ > 0.0) clock_->advance(seconds_per_call_);

  const std::string keys[] = {
      fmt::format("{}/{}/{}", character_, trial_label(trial_), n),
      fmt::format("{}/{}", character_, n),
      std::to_string(n),
      "*",
  };
  for (const auto& key : keys) {
    if (auto it = script_.find(key); it != script_.end()) return it->second;
  }
  throw ProviderError(fmt::format("mock script has no reply for call {} of {}/{}", n, character_, trial_label(trial_)));
}

// --- session ---

TrialSession::TrialSession(Provider& provider, const Clock& clock, Budgets budgets, TokenCounter counter)
    : provider_(provider),
      clock_(clock),
      budgets_(budgets),
      counter_(counter ? std::move(counter) : TokenCounter(count_tokens)),
      started_(clock.now_seconds()) {}

void TrialSession::set_system_prompt(std::string prompt) {
  if (!history_.empty() && history_.front().role == Role::system) {
    history_.front().content = std::move(prompt);
  } else {
    history_.insert(history_.begin(), Message{Role::system, std::move(prompt)});
  }
}

double TrialSession::seconds_used() const {
  return (finished_ >= 0.0 ? finished_ : clock_.now_seconds()) - started_;
}

bool TrialSession::out_of_time() const { return clock_.now_seconds() - started_ > budgets_.max_seconds; }

std::optional<std::string> TrialSession::call(const Conversation& conversation, long input_charge) {
  auto close = [this](TrialOutcome outcome, std::string why) -> std::optional<std::string> {
    status_ = outcome;
    error_ = std::move(why);
    finished_ = clock_.now_seconds();
    return std::nullopt;
  };

  if (!open()) return std::nullopt;
  if (out_of_time()) return close(TrialOutcome::timeout, "time budget exhausted before call");
  if (tokens_used_ + input_charge > budgets_.max_tokens) {
    return close(TrialOutcome::budget_exceeded,
                 fmt::format("prompt of {} tokens exceeds the remaining budget", input_charge));
  }

  std::string reply;
  try {
    reply = provider_.complete(conversation, budgets_.temperature, budgets_.seed);
  } catch (const std::exception& e) {
    transcript_.push_back(conversation);
    return close(TrialOutcome::provider_error, e.what());
  }

  tokens_used_ += input_charge + counter_(reply);
  auto exchange = conversation;
  exchange.push_back({Role::assistant, reply});
  transcript_.push_back(std::move(exchange));

  if (tokens_used_ > budgets_.max_tokens) {
    return close(TrialOutcome::budget_exceeded,
                 fmt::format("{} tokens used, budget {}", tokens_used_, budgets_.max_tokens));
  }
  if (out_of_time()) {
    return close(TrialOutcome::timeout, fmt::format("call finished after the {} s budget", budgets_.max_seconds));
  }
  return reply;
}

std::optional<std::string> TrialSession::send(std::string_view message) {
  if (!open()) return std::nullopt;
  history_.push_back({Role::user, std::string(message)});
  auto reply = call(history_, counter_(message));
  if (reply) history_.push_back({Role::assistant, *reply});
  return reply;
}

std::optional<std::string> TrialSession::ask(const Conversation& conversation) {
  long charge = 0;
  for (const auto& m : conversation) charge += counter_(m.content);
  return call(conversation, charge);
}

// --- records ---

std::string TrialRecord::to_json() const {
  nlohmann::ordered_json doc;
  doc["program"] = program_id;
  doc["character"] = std::string(1, character);
  doc["trial"] = trial_index;
  doc["status"] = std::string(to_string(status));
  doc["tokens_used"] = tokens_used;
  doc["seconds_used"] = seconds_used;
  doc["error"] = error;
  doc["final_response"] = final_response;
  auto calls = nlohmann::ordered_json::array();
  for (const auto& conversation : transcript) {
    auto turns = nlohmann::ordered_json::array();
    for (const auto& m : conversation) {
      nlohmann::ordered_json turn;
      turn["role"] = std::string(to_string(m.role));
      turn["content"] = m.content;
      turns.push_back(std::move(turn));
    }
    calls.push_back(std::move(turns));
  }
  doc["transcript"] = std::move(calls);
  return doc.dump(2) + "\n";
}

namespace {

TrialRecord make_record(const TrialContext& context, const TrialSession& session, std::optional<std::string> last) {
  TrialRecord record;
  record.program_id = context.program_id;
  record.character = context.character;
  record.trial_index = context.trial_index;
  record.status = session.status();
  record.tokens_used = session.tokens_used();
  record.seconds_used = session.seconds_used();
  record.transcript = session.transcript();
  record.error = session.error_message();
  if (session.status() == TrialOutcome::ok && last) record.final_response = std::move(*last);
  return record;
}

std::string chain_text(const std::vector<std::string>& chain) {
  if (chain.empty()) return {};
  std::string out = "\n\nThoughts so far:\n";
  for (std::size_t s = 0; s < chain.size(); ++s) out += fmt::format("Step {}: {}\n", s + 1, chain[s]);
  return out;
}

std::string join_chain(const std::vector<std::string>& chain) {
  std::string out;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (s > 0) out += "\n\n";
    out += chain[s];
  }
  return out;
}

}  // namespace

std::string fill_character(std::string_view prompt, char character) {
  constexpr std::string_view placeholder = "<OBJECT>";
  const std::string quoted = fmt::format("\"{}\"", character);
  std::string out;
  std::size_t start = 0;
  for (auto pos = prompt.find(placeholder); pos != std::string_view::npos; pos = prompt.find(placeholder, start)) {
    out.append(prompt.substr(start, pos - start));
    out += quoted;
    start = pos + placeholder.size();
  }
  out.append(prompt.substr(start));
  return out;
}

std::string few_shot_prompt(std::string_view task_prompt, char character, const std::vector<FewShotExample>& examples) {
  std::string out = fill_character(task_prompt, character);
  out += "\n\nExamples\n";
  for (const auto& example : examples) {
    out += fmt::format("\nCharacter: \"{}\"\n```\n{}", example.character, example.program);
    if (!example.program.empty() && example.program.back() != '\n') out += '\n';
    out += "```\n";
  }
  return out;
}

double thought_score(std::string_view evaluation_reply) {
  static const std::regex number(R"([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)");
  std::vector<double> values;
  for (std::cregex_iterator it(evaluation_reply.data(), evaluation_reply.data() + evaluation_reply.size(), number),
       end;
       it != end && values.size() < 2; ++it) {
    values.push_back(std::stod(it->str()));
  }
  if (values.size() < 2) return 0.0;
  return values[0] * values[1];
}

void ToTConfig::validate() const {
  if (max_depth < 1 || branching < 1) {
    throw ConfigError(fmt::format("tree of thoughts needs depth and branching >= 1, got {} and {}", max_depth, branching));
  }
}

TrialRecord tot_bfs(const ToTConfig& cfg, const TrialContext& context, Provider& provider, const Budgets& budgets,
                    const Clock& clock, TokenCounter counter) {
  cfg.validate();
  TrialSession session(provider, clock, budgets, std::move(counter));
  const auto task = fill_character(cfg.task_prompt, context.character);
  const auto eval = fill_character(cfg.eval_prompt, context.character);

  std::vector<std::string> chain;
  for (int depth = 1; depth <= cfg.max_depth; ++depth) {
    std::vector<std::string> candidates;
    for (int c = 0; c < cfg.branching; ++c) {
      const auto prompt = fmt::format("{}{}\n\nPropose thought {} of {} for step {} of {}.", task, chain_text(chain),
                                      c + 1, cfg.branching, depth, cfg.max_depth);
      auto reply = session.ask({{Role::user, prompt}});
      if (!reply) return make_record(context, session, std::nullopt);
      candidates.push_back(std::move(*reply));
    }

    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto prompt = fmt::format("{}{}\n\nCandidate thought:\n{}", eval, chain_text(chain), candidates[c]);
      auto reply = session.ask({{Role::user, prompt}});
      if (!reply) return make_record(context, session, std::nullopt);
      const double score = thought_score(*reply);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    chain.push_back(std::move(candidates[best]));
  }

  auto answer = session.ask({
      {Role::user, task},
      {Role::assistant, join_chain(chain)},
      {Role::user, fill_character(cfg.final_prompt, context.character)},
  });
  return make_record(context, session, std::move(answer));
}

TrialRecord run_strategy(Strategy strategy, const TrialContext& context, const StrategyPrompts& prompts,
                         Provider& provider, const Budgets& budgets, const Clock& clock, TokenCounter counter) {
  if (strategy == Strategy::tot_bfs) return tot_bfs(prompts.tot, context, provider, budgets, clock, std::move(counter));

  TrialSession session(provider, clock, budgets, std::move(counter));
  std::optional<std::string> last;
  switch (strategy) {
    case Strategy::zero_shot:
      last = session.send(fill_character(prompts.task_prompt, context.character));
      break;
    case Strategy::zero_shot_multi_turn:
      last = session.send(fill_character(prompts.task_prompt, context.character));
      if (last) last = session.send(fill_character(prompts.format_prompt, context.character));
      break;
    case Strategy::few_shot:
      last = session.send(few_shot_prompt(prompts.task_prompt, context.character, prompts.examples));
      break;
    case Strategy::tot_bfs:
      break;
  }
  return make_record(context, session, std::move(last));
}

}  // namespace pcgeval
