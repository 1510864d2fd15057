#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tapf {

/// Grid cell as (column, row), matching the MovingAI convention.
struct Vertex {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::ostream& operator<<(std::ostream& os, const Vertex& v);

/// Malformed map, instance, or plan text. Carries the 1-based line number
/// when one is known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const { return line_; }
  /// The message without the line prefix.
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Well-formed text describing an invalid TAPF instance.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 4-connected grid graph with wait self-loops. Immutable after construction.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<std::uint8_t> passable);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] int num_cells() const { return width_ * height_; }
  [[nodiscard]] int num_passable() const { return num_passable_; }

  [[nodiscard]] bool in_bounds(Vertex v) const {
    return v.x >= 0 && v.y >= 0 && v.x < width_ && v.y < height_;
  }
  [[nodiscard]] bool passable(Vertex v) const {
    return in_bounds(v) && passable_[index(v)] != 0;
  }

  [[nodiscard]] int index(Vertex v) const { return v.y * width_ + v.x; }
  [[nodiscard]] Vertex vertex(int index) const { return {index % width_, index / width_}; }

  /// Calls f(u) for v itself (wait) and then each passable 4-neighbour, in the
  /// fixed order east, west, south, north.
  template <class F>
  void for_each_neighbor(Vertex v, F&& f) const {
    f(v);
    static constexpr int kDx[4] = {1, -1, 0, 0};
    static constexpr int kDy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const Vertex u{v.x + kDx[d], v.y + kDy[d]};
      if (passable(u)) f(u);
    }
  }

  [[nodiscard]] std::vector<Vertex> neighbors(Vertex v) const;

  /// Passable cells in row-major order.
  [[nodiscard]] std::vector<Vertex> passable_cells() const;

  /// MovingAI text. Blocked cells are written as '@'.
  [[nodiscard]] std::string to_movingai() const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_;
  int height_;
  int num_passable_ = 0;
  std::vector<std::uint8_t> passable_;
};

GridMap parse_map(std::istream& in);
GridMap load_map(const std::filesystem::path& path);

/// Starts, targets and the binary eligibility matrix of a TAPF problem.
/// Immutable after construction; the map is shared between instances.
class TAPFInstance {
 public:
  /// Validates every invariant; throws InstanceError on violation.
  TAPFInstance(std::shared_ptr<const GridMap> map, std::vector<Vertex> starts,
               std::vector<Vertex> targets, std::vector<std::vector<bool>> eligible,
               std::vector<std::string> agent_names = {});

  /// Builds the target list as the union of all goal sets, in first-appearance
  /// order.
  static TAPFInstance from_goal_sets(std::shared_ptr<const GridMap> map,
                                     std::vector<Vertex> starts,
                                     const std::vector<std::vector<Vertex>>& goal_sets,
                                     std::vector<std::string> agent_names = {});

  [[nodiscard]] const GridMap& map() const { return *map_; }
  [[nodiscard]] const std::shared_ptr<const GridMap>& shared_map() const { return map_; }

  [[nodiscard]] int num_agents() const { return static_cast<int>(starts_.size()); }
  [[nodiscard]] int num_targets() const { return static_cast<int>(targets_.size()); }

  [[nodiscard]] Vertex start(int agent) const { return starts_[agent]; }
  [[nodiscard]] Vertex target(int j) const { return targets_[j]; }
  [[nodiscard]] const std::vector<Vertex>& starts() const { return starts_; }
  [[nodiscard]] const std::vector<Vertex>& targets() const { return targets_; }

  [[nodiscard]] bool eligible(int agent, int target) const {
    return eligible_[static_cast<std::size_t>(agent) * targets_.size() + target] != 0;
  }
  /// Indices j with eligible(agent, j), ascending.
  [[nodiscard]] const std::vector<int>& targets_of(int agent) const { return targets_of_[agent]; }

  [[nodiscard]] const std::string& agent_name(int agent) const { return names_[agent]; }

 private:
  std::shared_ptr<const GridMap> map_;
  std::vector<Vertex> starts_;
  std::vector<Vertex> targets_;
  std::vector<std::uint8_t> eligible_;
  std::vector<std::vector<int>> targets_of_;
  std::vector<std::string> names_;
};

/// Reads the `agents:` list of an instance file; the `map:` key is ignored.
TAPFInstance parse_instance(std::istream& in, std::shared_ptr<const GridMap> map);

/// Reads an instance file and the map it names. A relative map path is tried
/// against the working directory first, then against the instance's directory.
TAPFInstance load_instance(const std::filesystem::path& path);

void write_instance(std::ostream& out, const TAPFInstance& instance, std::string_view map_path);

}  // namespace tapf
