#include "navmem/eqa.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <thread>

namespace navmem {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Section {
  std::string_view header;
  std::string_view name;
  std::string StructuredResponse::*field;
};

constexpr std::array<Section, 3> kSections{{
    {kSceneHeader, "scene_description", &StructuredResponse::scene_description},
    {kPlanHeader, "path_planning", &StructuredResponse::path_planning},
    {kReasoningHeader, "commonsense", &StructuredResponse::commonsense},
}};

}  // namespace

std::vector<std::int64_t> select_context(const Trajectory& traj, std::size_t w) {
  if (traj.empty()) {
    throw Error("select_context: empty trajectory");
  }
  if (w == 0) {
    throw Error("select_context: window must be positive");
  }
  const std::size_t n = std::min(traj.size(), w);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = traj.size() - n; i < traj.size(); ++i) {
    out.push_back(traj[i].t);
  }
  return out;
}

std::string_view default_role_preamble() {
  return "Assume you are a robot exploring an indoor home from a first-person camera. "
         "The listed frames are the most recent views along your trajectory. "
         "Answer in three headed sections: Scene: what you currently see, "
         "Plan: how you will move next, Reasoning: what common sense says about where the "
         "target usually is.";
}

std::vector<Exemplar> default_exemplars() {
  // Placeholder exemplars; replace with curated navigation walkthroughs.
  return {
      {"[placeholder] Find a mug in the kitchen.",
       {"I am in a hallway. A doorway on my left opens onto tiled floor and cabinets.",
        "Turn left, pass through the doorway, and keep the counter on my right.",
        "Mugs are usually kept on kitchen counters or in cabinets near the sink."}},
      {"[placeholder] Go to the bed.",
       {"I see a sofa and a television; this looks like a living room.",
        "Leave through the door behind me and follow the corridor to the closed rooms.",
        "Beds are found in bedrooms, which tend to be off corridors away from the entrance."}},
  };
}

EqaPrompt build_prompt(std::string instruction, std::vector<std::int64_t> frames,
                       std::vector<Exemplar> exemplars, std::string role_preamble) {
  if (trim(instruction).empty()) {
    throw Error("build_prompt: empty instruction");
  }
  if (exemplars.size() != 2) {
    throw Error("build_prompt: exactly two exemplars required, got " +
                std::to_string(exemplars.size()));
  }
  if (frames.empty()) {
    throw Error("build_prompt: no frames");
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i] != frames[i - 1] + 1) {
      throw Error("build_prompt: frame references must be contiguous");
    }
  }
  return {std::move(role_preamble), std::move(exemplars), std::move(instruction), std::move(frames)};
}

std::string render_prompt(const EqaPrompt& prompt) {
  std::ostringstream out;
  out << prompt.role_preamble << "\n\n";
  for (std::size_t i = 0; i < prompt.exemplars.size(); ++i) {
    out << "Example " << (i + 1) << ":\nQuestion: " << prompt.exemplars[i].question << '\n'
        << format_response(prompt.exemplars[i].answer) << "\n\n";
  }
  out << "Frames: " << prompt.frame_refs.front() << ".." << prompt.frame_refs.back() << " ("
      << prompt.frame_refs.size() << " frames)\n";
  out << "Question: " << prompt.instruction << '\n';
  return out.str();
}

std::string request_body(const EqaPrompt& prompt, const Trajectory::Meta& meta) {
  json j;
  j["role_preamble"] = prompt.role_preamble;
  j["exemplars"] = json::array();
  for (const auto& ex : prompt.exemplars) {
    j["exemplars"].push_back({{"question", ex.question}, {"answer", format_response(ex.answer)}});
  }
  j["instruction"] = prompt.instruction;
  j["frame_refs"] = prompt.frame_refs;
  j["meta"] = json::object();
  for (const auto& [k, v] : meta) {
    j["meta"][k] = v;
  }
  return j.dump();
}

StructuredResponse parse_response(std::string_view raw) {
  std::array<std::optional<std::string>, 3> found;
  int current = -1;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto end = raw.find('\n', pos);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(pos, end - pos);
    pos = end + 1;

    const auto lead = line.find_first_not_of(" \t");
    const std::string_view body = lead == std::string_view::npos ? std::string_view{} : line.substr(lead);
    int header = -1;
    for (std::size_t s = 0; s < kSections.size(); ++s) {
      if (body.starts_with(kSections[s].header)) {
        header = static_cast<int>(s);
        break;
      }
    }
    if (header >= 0) {
      auto& slot = found[static_cast<std::size_t>(header)];
      if (slot) {
        throw ResponseParseError("duplicate section: " +
                                 std::string(kSections[static_cast<std::size_t>(header)].name));
      }
      slot = std::string(body.substr(kSections[static_cast<std::size_t>(header)].header.size()));
      current = header;
    } else if (current >= 0) {
      auto& text = *found[static_cast<std::size_t>(current)];
      text += '\n';
      text += line;
    }
  }

  StructuredResponse out;
  for (std::size_t s = 0; s < kSections.size(); ++s) {
    if (!found[s]) {
      throw ResponseParseError("missing section: " + std::string(kSections[s].name));
    }
    std::string text = trim(*found[s]);
    if (text.empty()) {
      throw ResponseParseError("empty section: " + std::string(kSections[s].name));
    }
    out.*kSections[s].field = std::move(text);
  }
  return out;
}

std::string format_response(const StructuredResponse& response) {
  std::string out;
  for (const auto& s : kSections) {
    if (!out.empty()) out += '\n';
    out += s.header;
    out += ' ';
    out += response.*s.field;
  }
  return out;
}

std::string MockClient::send(const std::string& request_json) {
  ++calls_;
  if (calls_ <= options_.fail_first) {
    throw TransientError("mock: simulated transient failure " + std::to_string(calls_));
  }
  std::string instruction;
  try {
    instruction = json::parse(request_json).at("instruction").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("mock: bad request: ") + e.what());
  }

  static constexpr std::array<std::string_view, 3> kScenes{
      "I see a doorway ahead and a corridor branching to the right.",
      "I am in a small room with a rug, a chair and a closed door to my left.",
      "Open floor stretches ahead; furniture lines the far wall.",
  };
  static constexpr std::array<std::string_view, 3> kPlans{
      "Move forward through the doorway, then scan left and right before committing to a room.",
      "Turn toward the closed door, pass it, and avoid the chair on the way.",
      "Walk along the wall to keep obstacles on one side and check each opening in turn.",
  };
  static constexpr std::array<std::string_view, 3> kReasons{
      "Rooms off a corridor are where such objects are usually found.",
      "Objects like this are normally placed on furniture rather than the floor.",
      "Targets are more likely in rooms not yet visited than in those already seen.",
  };
  const std::uint64_t h = fnv1a(instruction, fnv1a(std::to_string(options_.seed)));
  std::string text = std::string(kSceneHeader) + " " + std::string(kScenes[h % 3]) + "\n" +
                     std::string(kPlanHeader) + " " + std::string(kPlans[(h >> 8) % 3]) +
                     " Goal: " + instruction + "\n";
  if (options_.n_sections >= 3) {
    text += std::string(kReasoningHeader) + " " + std::string(kReasons[(h >> 16) % 3]) + "\n";
  }
  return text;
}

RetryPolicy RetryPolicy::from_env() {
  RetryPolicy policy;
  if (const char* env = std::getenv("EQA_RETRY_LIMIT")) {
    try {
      policy.retry_limit = std::stoi(env);
    } catch (const std::exception&) {
      throw Error("EQA_RETRY_LIMIT is not an integer: " + std::string(env));
    }
    if (policy.retry_limit < 0) {
      throw Error("EQA_RETRY_LIMIT must be non-negative");
    }
  }
  return policy;
}

std::unique_ptr<GenerationClient> client_from_env(std::uint64_t mock_seed) {
  const char* endpoint = std::getenv("EQA_ENDPOINT");
  if (endpoint != nullptr && *endpoint != '\0') {
    return std::make_unique<HttpClient>(endpoint);
  }
  return std::make_unique<MockClient>(MockClient::Options{mock_seed, 3, 0});
}

StructuredResponse generate(const EqaPrompt& prompt, GenerationClient& client,
                            const RetryPolicy& retry, const Trajectory::Meta& meta) {
  const std::string body = request_body(prompt, meta);
  for (int attempt = 0;; ++attempt) {
    try {
      return parse_response(client.send(body));
    } catch (const TransientError& e) {
      if (attempt >= retry.retry_limit) {
        throw TransportError("generation failed after " + std::to_string(attempt + 1) +
                             " attempts: " + e.what());
      }
      const auto delay = retry.base_delay * (1LL << std::min(attempt, 20));
      if (retry.sleep) {
        retry.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
}

std::string eqa_pair_to_json(const EqaPrompt& prompt, const StructuredResponse& response) {
  json j;
  j["instruction"] = prompt.instruction;
  j["frame_refs"] = prompt.frame_refs;
  j["scene"] = response.scene_description;
  j["plan"] = response.path_planning;
  j["reasoning"] = response.commonsense;
  return j.dump();
}

}  // namespace navmem
