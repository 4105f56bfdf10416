#include "navmem/io.hpp"

#include "detail/validate.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace navmem {

using json = nlohmann::ordered_json;

namespace {

std::string at_line(const std::string& what, std::size_t line) {
  return what + " at line " + std::to_string(line);
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string() + " for reading");
  }
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw FormatError("write to " + path.string() + " failed");
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw FormatError(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

Position position_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw FormatError(std::string(what) + " must be an array of 3 numbers");
  }
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

json position_to(const Position& p) { return json::array({p.x, p.y, p.z}); }

std::vector<FeatureVector> matrix_from(const json& j, const char* what) {
  if (!j.is_array()) {
    throw FormatError(std::string(what) + " must be an array of arrays");
  }
  std::vector<FeatureVector> rows;
  rows.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_array()) {
      throw FormatError(std::string(what) + " must be an array of arrays");
    }
    FeatureVector v;
    v.reserve(row.size());
    for (const auto& x : row) {
      v.push_back(number(x, what));
    }
    rows.push_back(std::move(v));
  }
  return rows;
}

std::optional<std::string> optional_string(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_string()) {
    throw FormatError(std::string(key) + " must be a string or null");
  }
  return it->get<std::string>();
}

Observation observation_from(const json& rec) {
  if (!rec.is_object()) {
    throw FormatError("record must be a JSON object");
  }
  for (const char* key : {"t", "p", "heading_deg", "feature"}) {
    if (!rec.contains(key)) {
      throw FormatError(std::string("missing field ") + key);
    }
  }
  Observation obs;
  if (!rec["t"].is_number_integer()) {
    throw FormatError("t must be an integer");
  }
  obs.t = rec["t"].get<std::int64_t>();
  obs.position = position_from(rec["p"], "p");
  obs.heading_deg = number(rec["heading_deg"], "heading_deg");
  try {
    obs.features = FeatureTokens(matrix_from(rec["feature"], "feature"));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  obs.room_id = optional_string(rec, "room_id");
  obs.action = optional_string(rec, "action");
  return obs;
}

json observation_to(const Observation& obs) {
  json rec;
  rec["t"] = obs.t;
  rec["p"] = position_to(obs.position);
  rec["heading_deg"] = obs.heading_deg;
  rec["feature"] = obs.features.rows();
  rec["room_id"] = obs.room_id ? json(*obs.room_id) : json(nullptr);
  rec["action"] = obs.action ? json(*obs.action) : json(nullptr);
  return rec;
}

}  // namespace

Trajectory read_trajectory(std::istream& in) {
  std::vector<Observation> observations;
  Trajectory::Meta meta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError(at_line("malformed JSON", line_no));
    }
    if (rec.is_object() && rec.contains("meta")) {
      if (line_no != 1) {
        throw FormatError(at_line("meta header must be the first line, found", line_no));
      }
      if (!rec["meta"].is_object()) {
        throw FormatError(at_line("meta must be an object", line_no));
      }
      for (const auto& [k, v] : rec["meta"].items()) {
        meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      continue;
    }
    Observation obs;
    try {
      obs = observation_from(rec);
    } catch (const FormatError& e) {
      throw FormatError(at_line(std::string("malformed record (") + e.what() + ")", line_no));
    }
    const Observation* prev = observations.empty() ? nullptr : &observations.back();
    const Observation* first = observations.empty() ? nullptr : &observations.front();
    if (auto why = detail::check_observation(obs, prev, first)) {
      throw FormatError(at_line(*why, line_no));
    }
    observations.push_back(std::move(obs));
  }
  return Trajectory(std::move(observations), std::move(meta));
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_trajectory(in);
}

void write_trajectory(const Trajectory& traj, std::ostream& out) {
  if (!traj.meta().empty()) {
    json header;
    header["meta"] = json::object();
    for (const auto& [k, v] : traj.meta()) {
      header["meta"][k] = v;
    }
    out << header.dump() << '\n';
  }
  for (const auto& obs : traj.observations()) {
    out << observation_to(obs).dump() << '\n';
  }
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trajectory(traj, out);
  finish_write(out, path);
}

std::string sampled_to_json(const SampledHistory& history) {
  json j;
  j["w"] = history.w;
  j["n_valid"] = history.n_valid;
  j["source_t"] = history.source_t;
  j["rel_positions"] = json::array();
  for (const auto& p : history.rel_positions) {
    j["rel_positions"].push_back(position_to(p));
  }
  j["features"] = history.features;
  return j.dump();
}

SampledHistory sampled_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw FormatError("malformed sampled-history JSON");
  }
  SampledHistory h;
  try {
    h.w = j.at("w").get<std::size_t>();
    h.n_valid = j.at("n_valid").get<std::size_t>();
    h.source_t = j.at("source_t").get<std::vector<std::int64_t>>();
    for (const auto& p : j.at("rel_positions")) {
      h.rel_positions.push_back(position_from(p, "rel_positions"));
    }
    h.features = matrix_from(j.at("features"), "features");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed sampled history: ") + e.what());
  }
  if (h.n_valid > h.w || h.source_t.size() != h.w || h.rel_positions.size() != h.w ||
      h.features.size() != h.w) {
    throw FormatError("sampled history lengths disagree with w");
  }
  return h;
}

void save_sampled(const SampledHistory& history, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << sampled_to_json(history) << '\n';
  finish_write(out, path);
}

SampledHistory load_sampled(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return sampled_from_json(buf.str());
}

std::string episode_to_json(const Episode& episode) {
  json j;
  j["success"] = episode.success;
  j["w"] = episode.shortest_len;
  j["e"] = episode.episode_len;
  j["rooms_visited"] = episode.rooms_visited;
  j["total_rooms"] = episode.total_rooms;
  return j.dump();
}

Episode episode_from_json(const std::string& line) {
  try {
    auto j = json::parse(line);
    Episode ep;
    ep.success = j.at("success").get<bool>();
    ep.shortest_len = number(j.at("w"), "w");
    ep.episode_len = number(j.at("e"), "e");
    ep.rooms_visited = j.at("rooms_visited").get<std::set<std::string>>();
    ep.total_rooms = j.at("total_rooms").get<int>();
    return ep;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed episode record: ") + e.what());
  }
}

std::vector<Episode> load_episodes(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::vector<Episode> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(episode_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(at_line(e.what(), line_no));
    }
  }
  return out;
}

void save_episodes(const std::vector<Episode>& episodes, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& ep : episodes) {
    out << episode_to_json(ep) << '\n';
  }
  finish_write(out, path);
}

}  // namespace navmem
