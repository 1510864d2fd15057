#include "tapf/gridmap.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tapf/cost.hpp"

namespace tapf {

std::ostream& operator<<(std::ostream& os, const Vertex& v) {
  return os << "(" << v.x << "," << v.y << ")";
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line),
      detail_(what) {}

// ---------------------------------------------------------------------------
// CostTable lives here to avoid a translation unit of its own.

CostTable::CostTable(int rows, int cols, Cost fill) : cols_(cols) {
  rows_.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    rows_.push_back(std::make_shared<const std::vector<Cost>>(cols, fill));
  }
}

CostTable CostTable::from_rows(const std::vector<std::vector<Cost>>& rows) {
  CostTable t;
  t.cols_ = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != t.cols_) {
      throw std::invalid_argument("CostTable: ragged rows");
    }
    t.rows_.push_back(std::make_shared<const std::vector<Cost>>(r));
  }
  return t;
}

void CostTable::set_row(int i, std::vector<Cost> values) {
  if (static_cast<int>(values.size()) != cols_) {
    throw std::invalid_argument("CostTable::set_row: wrong row length");
  }
  rows_[i] = std::make_shared<const std::vector<Cost>>(std::move(values));
}

void CostTable::set(int i, int j, Cost value) {
  if ((*rows_[i])[j] == value) return;
  auto copy = *rows_[i];
  copy[j] = value;
  rows_[i] = std::make_shared<const std::vector<Cost>>(std::move(copy));
}

bool operator==(const CostTable& a, const CostTable& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i) {
    if (!std::ranges::equal(a.row(i), b.row(i))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> passable)
    : width_(width), height_(height), passable_(std::move(passable)) {
  if (width < 1 || height < 1) throw std::invalid_argument("GridMap: empty dimensions");
  if (passable_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("GridMap: cell count does not match dimensions");
  }
  num_passable_ = static_cast<int>(std::ranges::count_if(passable_, [](auto c) { return c != 0; }));
}

std::vector<Vertex> GridMap::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for_each_neighbor(v, [&](Vertex u) { out.push_back(u); });
  return out;
}

std::vector<Vertex> GridMap::passable_cells() const {
  std::vector<Vertex> out;
  out.reserve(num_passable_);
  for (int i = 0; i < num_cells(); ++i) {
    if (passable_[i]) out.push_back(vertex(i));
  }
  return out;
}

std::string GridMap::to_movingai() const {
  std::string out = "type octile\nheight " + std::to_string(height_) + "\nwidth " +
                    std::to_string(width_) + "\nmap\n";
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out += passable_[index({x, y})] ? '.' : '@';
    out += '\n';
  }
  return out;
}

namespace {

bool read_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

int parse_dimension(const std::string& value, std::size_t lineno, const char* key) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size() || v < 1) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ParseError(lineno, std::string("invalid ") + key + " '" + value + "'");
  }
}

}  // namespace

GridMap parse_map(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  int width = -1;
  int height = -1;
  bool have_type = false;

  while (true) {
    if (!read_line(in, line, lineno)) throw ParseError(lineno, "unexpected end of header");
    std::istringstream ss(line);
    std::string key;
    std::string value;
    ss >> key >> value;
    std::string rest;
    if (ss >> rest) throw ParseError(lineno, "unexpected header content '" + line + "'");
    if (key == "type") {
      have_type = true;
    } else if (key == "height") {
      height = parse_dimension(value, lineno, "height");
    } else if (key == "width") {
      width = parse_dimension(value, lineno, "width");
    } else if (key == "map" && value.empty()) {
      break;
    } else {
      throw ParseError(lineno, "malformed header line '" + line + "'");
    }
  }
  if (!have_type) throw ParseError(lineno, "missing 'type' header");
  if (width < 0) throw ParseError(lineno, "missing 'width' header");
  if (height < 0) throw ParseError(lineno, "missing 'height' header");

  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    if (!read_line(in, line, lineno)) {
      throw ParseError(lineno + 1, "expected " + std::to_string(height) + " map rows, got " +
                                       std::to_string(y));
    }
    if (static_cast<int>(line.size()) != width) {
      throw ParseError(lineno, "row has " + std::to_string(line.size()) + " glyphs, expected " +
                                   std::to_string(width));
    }
    for (int x = 0; x < width; ++x) {
      const char g = line[x];
      std::uint8_t free = 0;
      switch (g) {
        case '.':
        case 'G':
        case 'S':
          free = 1;
          break;
        case '@':
        case 'O':
        case 'T':
        case 'W':
          free = 0;
          break;
        default:
          throw ParseError(lineno, std::string("unknown glyph '") + g + "' at column " +
                                       std::to_string(x));
      }
      cells[static_cast<std::size_t>(y) * width + x] = free;
    }
  }
  while (read_line(in, line, lineno)) {
    if (line.find_first_not_of(" \t") != std::string::npos) {
      throw ParseError(lineno, "unexpected content after map rows");
    }
  }
  return GridMap(width, height, std::move(cells));
}

GridMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file " + path.string());
  try {
    return parse_map(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

// ---------------------------------------------------------------------------

TAPFInstance::TAPFInstance(std::shared_ptr<const GridMap> map, std::vector<Vertex> starts,
                           std::vector<Vertex> targets, std::vector<std::vector<bool>> eligible,
                           std::vector<std::string> agent_names)
    : map_(std::move(map)),
      starts_(std::move(starts)),
      targets_(std::move(targets)),
      names_(std::move(agent_names)) {
  if (!map_) throw InstanceError("instance has no map");
  const auto n = starts_.size();
  const auto m = targets_.size();
  if (n == 0) throw InstanceError("instance has no agents");
  if (m < n) {
    throw InstanceError("fewer targets (" + std::to_string(m) + ") than agents (" +
                        std::to_string(n) + ")");
  }
  if (eligible.size() != n) throw InstanceError("target matrix has wrong number of rows");

  auto check_cell = [&](Vertex v, const std::string& what) {
    if (!map_->passable(v)) {
      std::ostringstream os;
      os << what << " " << v << " is not a passable cell";
      throw InstanceError(os.str());
    }
  };
  std::set<Vertex> seen;
  for (std::size_t i = 0; i < n; ++i) {
    check_cell(starts_[i], "start of agent " + std::to_string(i));
    if (!seen.insert(starts_[i]).second) {
      std::ostringstream os;
      os << "duplicate start " << starts_[i];
      throw InstanceError(os.str());
    }
  }
  seen.clear();
  for (std::size_t j = 0; j < m; ++j) {
    check_cell(targets_[j], "target " + std::to_string(j));
    if (!seen.insert(targets_[j]).second) {
      std::ostringstream os;
      os << "duplicate target " << targets_[j];
      throw InstanceError(os.str());
    }
  }

  eligible_.assign(n * m, 0);
  targets_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (eligible[i].size() != m) throw InstanceError("target matrix has wrong number of columns");
    for (std::size_t j = 0; j < m; ++j) {
      if (eligible[i][j]) {
        eligible_[i * m + j] = 1;
        targets_of_[i].push_back(static_cast<int>(j));
      }
    }
    if (targets_of_[i].empty()) {
      throw InstanceError("agent " + std::to_string(i) + " has an empty target set");
    }
  }

  if (names_.empty()) {
    for (std::size_t i = 0; i < n; ++i) names_.push_back("agent" + std::to_string(i));
  }
  if (names_.size() != n) throw InstanceError("agent name count does not match agent count");
}

TAPFInstance TAPFInstance::from_goal_sets(std::shared_ptr<const GridMap> map,
                                          std::vector<Vertex> starts,
                                          const std::vector<std::vector<Vertex>>& goal_sets,
                                          std::vector<std::string> agent_names) {
  if (goal_sets.size() != starts.size()) {
    throw InstanceError("goal set count does not match agent count");
  }
  std::vector<Vertex> targets;
  std::map<Vertex, int> column;
  for (std::size_t i = 0; i < goal_sets.size(); ++i) {
    if (goal_sets[i].empty()) {
      throw InstanceError("agent " + std::to_string(i) + " has an empty target set");
    }
    std::set<Vertex> own;
    for (const Vertex g : goal_sets[i]) {
      if (!own.insert(g).second) {
        std::ostringstream os;
        os << "agent " << i << " lists goal " << g << " twice";
        throw InstanceError(os.str());
      }
      if (column.emplace(g, static_cast<int>(targets.size())).second) targets.push_back(g);
    }
  }
  std::vector<std::vector<bool>> eligible(goal_sets.size(), std::vector<bool>(targets.size()));
  for (std::size_t i = 0; i < goal_sets.size(); ++i) {
    for (const Vertex g : goal_sets[i]) eligible[i][column.at(g)] = true;
  }
  return TAPFInstance(std::move(map), std::move(starts), std::move(targets), std::move(eligible),
                      std::move(agent_names));
}

namespace {

std::size_t line_of(const YAML::Node& node) {
  return node.Mark().line >= 0 ? static_cast<std::size_t>(node.Mark().line) + 1 : 0;
}

Vertex read_vertex(const YAML::Node& node, const char* what) {
  if (!node.IsSequence() || node.size() != 2) {
    throw ParseError(line_of(node), std::string(what) + " must be a [x, y] pair");
  }
  try {
    return {node[0].as<int>(), node[1].as<int>()};
  } catch (const YAML::Exception&) {
    throw ParseError(line_of(node), std::string(what) + " coordinates must be integers");
  }
}

}  // namespace

namespace {

TAPFInstance parse_agents(std::istream& in, std::shared_ptr<const GridMap> map) {
  YAML::Node root;
  try {
    root = YAML::Load(in);
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
  if (!root.IsMap()) throw ParseError(0, "instance file must be a mapping");
  const YAML::Node agents = root["agents"];
  if (!agents || !agents.IsSequence()) {
    throw ParseError(line_of(root), "instance file needs an 'agents' list");
  }

  std::vector<Vertex> starts;
  std::vector<std::vector<Vertex>> goal_sets;
  std::vector<std::string> names;
  for (const auto& agent : agents) {
    if (!agent.IsMap()) throw ParseError(line_of(agent), "agent entry must be a mapping");
    if (!agent["start"]) throw ParseError(line_of(agent), "agent entry needs 'start'");
    if (!agent["potentialGoals"] || !agent["potentialGoals"].IsSequence()) {
      throw ParseError(line_of(agent), "agent entry needs a 'potentialGoals' list");
    }
    names.push_back(agent["name"] ? agent["name"].as<std::string>()
                                  : "agent" + std::to_string(starts.size()));
    starts.push_back(read_vertex(agent["start"], "start"));
    auto& goals = goal_sets.emplace_back();
    for (const auto& g : agent["potentialGoals"]) goals.push_back(read_vertex(g, "goal"));
  }
  return TAPFInstance::from_goal_sets(std::move(map), std::move(starts), goal_sets,
                                      std::move(names));
}

}  // namespace

TAPFInstance parse_instance(std::istream& in, std::shared_ptr<const GridMap> map) {
  try {
    return parse_agents(in, std::move(map));
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
}

TAPFInstance load_instance(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open instance file " + path.string());
  std::stringstream text;
  text << file.rdbuf();

  YAML::Node root;
  try {
    root = YAML::Load(text.str());
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, path.string() + ": " + e.msg);
  }
  if (!root.IsMap() || !root["map"]) {
    throw ParseError(0, path.string() + ": instance file needs a 'map' key");
  }
  std::filesystem::path map_path;
  try {
    map_path = root["map"].as<std::string>();
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, path.string() + ": " + e.msg);
  }
  if (map_path.is_relative() && !std::filesystem::exists(map_path)) {
    map_path = path.parent_path() / map_path;
  }
  auto map = std::make_shared<const GridMap>(load_map(map_path));
  text.clear();
  text.seekg(0);
  return parse_instance(text, std::move(map));
}

void write_instance(std::ostream& out, const TAPFInstance& instance, std::string_view map_path) {
  YAML::Emitter em;
  em << YAML::BeginMap;
  em << YAML::Key << "map" << YAML::Value << std::string(map_path);
  em << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < instance.num_agents(); ++i) {
    em << YAML::BeginMap;
    em << YAML::Key << "name" << YAML::Value << instance.agent_name(i);
    const Vertex s = instance.start(i);
    em << YAML::Key << "start" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.x << s.y
       << YAML::EndSeq;
    em << YAML::Key << "potentialGoals" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const int j : instance.targets_of(i)) {
      const Vertex g = instance.target(j);
      em << YAML::Flow << YAML::BeginSeq << g.x << g.y << YAML::EndSeq;
    }
    em << YAML::EndSeq;
    em << YAML::EndMap;
  }
  em << YAML::EndSeq << YAML::EndMap;
  out << em.c_str() << '\n';
}

}  // namespace tapf
