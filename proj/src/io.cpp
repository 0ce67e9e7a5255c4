#include "sixv/io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sixv {

namespace {

// JSON integer when it fits, decimal string otherwise.
nlohmann::json big_to_json(const BigInt& v) {
  static const BigInt lo = std::numeric_limits<std::int64_t>::min();
  static const BigInt hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
  return v.str();
}

std::int64_t parse_whole_int(const std::string& s) {
  std::size_t pos = 0;
  std::int64_t v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    out.push_back(parse_whole_int(s.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

nlohmann::json pattern_to_json(const ChangePattern& p) {
  nlohmann::json j;
  j["eps"] = nlohmann::json::array();
  nlohmann::json flips = nlohmann::json::object();
  for (std::size_t i = 0; i < p.eps.size(); ++i) {
    j["eps"].push_back(static_cast<int>(p.eps[i]));
    if (p.eps[i]) flips[std::to_string(i + 1)] = p.pos[i];
  }
  j["E"] = flips;
  j["loop_sign"] = p.loop_sign ? nlohmann::json(*p.loop_sign) : nlohmann::json(nullptr);
  return j;
}

ChangePattern pattern_from_json(const nlohmann::json& j) {
  ChangePattern p;
  const auto& eps = j.at("eps");
  if (!eps.is_array()) throw std::invalid_argument("pattern: eps must be an array");
  p.eps.reserve(eps.size());
  for (const auto& e : eps) {
    int v = e.get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument("pattern: eps entries must be 0 or 1");
    p.eps.push_back(static_cast<std::uint8_t>(v));
  }
  p.pos.assign(p.eps.size(), 0);
  for (const auto& [key, val] : j.at("E").items()) {
    auto m = parse_whole_int(key);
    if (m < 1 || m > static_cast<std::int64_t>(p.eps.size()))
      throw std::invalid_argument("pattern: flip block out of range");
    p.pos[static_cast<std::size_t>(m - 1)] = val.get<std::int64_t>();
  }
  if (!j.at("loop_sign").is_null()) p.loop_sign = j.at("loop_sign").get<int>();
  return p;
}

nlohmann::json pmf_to_json(const TransitionPmf& pmf) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : pmf.entries) {
    nlohmann::json row;
    if (is_loop(e.label)) {
      row["loop"] = e.label == EdgeLabel::PositiveLoop ? "+" : "-";
    } else {
      row["target"] = e.target.to_string();
    }
    row["label"] = label_text(e.label);
    row["prob_num"] = big_to_json(numerator(e.prob));
    row["prob_den"] = big_to_json(denominator(e.prob));
    row["prob_float"] = to_double(e.prob);
    out.push_back(std::move(row));
  }
  return out;
}

void write_trajectory(std::ostream& os, const Trajectory& t, std::uint64_t seed) {
  check_trajectory(t);
  nlohmann::json header{{"K", t.k}, {"seed", seed}, {"version", 1}};
  os << header.dump() << '\n';
  for (std::size_t i = 0; i < t.y.size(); ++i) {
    nlohmann::json row;
    row["t"] = i;
    row["y"] = t.y[i].to_string();
    row["label"] = i == 0 ? nlohmann::json(nullptr) : nlohmann::json(label_text(t.labels[i - 1]));
    row["z1"] = t.z1[i];
    os << row.dump() << '\n';
  }
}

Trajectory read_trajectory(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("trajectory: missing header line");
  nlohmann::json header = nlohmann::json::parse(line);
  if (header.at("version").get<int>() != 1)
    throw std::invalid_argument("trajectory: unsupported version");

  Trajectory t;
  t.k = header.at("K").get<std::int64_t>();
  std::int64_t expected_t = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    if (row.at("t").get<std::int64_t>() != expected_t)
      throw std::invalid_argument("trajectory: records out of order");
    t.y.push_back(Vertex::from_string(row.at("y").get<std::string>()));
    if (expected_t == 0) {
      if (!row.at("label").is_null())
        throw std::invalid_argument("trajectory: t=0 record must have a null label");
    } else {
      t.labels.push_back(label_from_text(row.at("label").get<std::string>()));
    }
    t.z1.push_back(row.at("z1").get<std::int64_t>());
    ++expected_t;
  }
  if (t.y.empty()) throw std::invalid_argument("trajectory: no state records");
  check_trajectory(t);
  return t;
}

SimConfig config_from_json(const nlohmann::json& j) {
  SimConfig cfg;
  std::vector<std::int64_t> prefix, period;
  for (const auto& [key, val] : j.items()) {
    if (key == "k") {
      cfg.k = val.get<std::int64_t>();
    } else if (key == "steps") {
      cfg.steps = val.get<std::int64_t>();
    } else if (key == "chains") {
      cfg.chains = val.get<std::int64_t>();
    } else if (key == "seed") {
      cfg.seed = val.get<std::uint64_t>();
    } else if (key == "start") {
      cfg.start = Vertex::from_string(val.get<std::string>());
    } else if (key == "field") {
      cfg.field = FieldSpec::parse(val.get<std::string>());
    } else if (key == "out") {
      cfg.out = val.get<std::string>();
    } else if (key == "infinite_prefix") {
      prefix = val.get<std::vector<std::int64_t>>();
    } else if (key == "infinite_period") {
      period = val.get<std::vector<std::int64_t>>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!prefix.empty() || !period.empty()) cfg.infinite = InfiniteSpec{prefix, period};
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return config_from_json(nlohmann::json::parse(text));

  // flat key=value lines, '#' comments
  nlohmann::json j = nlohmann::json::object();
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto eq = line.find('=', start);
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    std::string key = line.substr(start, eq - start);
    std::string val = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    auto vstart = val.find_first_not_of(" \t");
    val = vstart == std::string::npos ? "" : val.substr(vstart);

    if (key == "k" || key == "steps" || key == "chains") {
      j[key] = parse_whole_int(val);
    } else if (key == "seed") {
      j[key] = static_cast<std::uint64_t>(std::stoull(val));
    } else if (key == "start" || key == "field" || key == "out") {
      j[key] = val;
    } else if (key == "infinite_prefix" || key == "infinite_period") {
      j[key] = parse_int_list(val);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return config_from_json(j);
}

}  // namespace sixv
