#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "tapf/gridmap.hpp"

namespace tapf {

enum class ConstraintKind { Vertex, Edge };

/// Vertex constraint (agent, at, time): the agent may not occupy `at` at `time`.
/// Edge constraint (agent, from, at, time): the agent may not move from `from`
/// to `at` between time-1 and time.
struct Constraint {
  ConstraintKind kind = ConstraintKind::Vertex;
  int agent = 0;
  Vertex from{};
  Vertex at{};
  int time = 0;

  static Constraint vertex(int agent, Vertex v, int time) {
    return {ConstraintKind::Vertex, agent, Vertex{}, v, time};
  }
  static Constraint edge(int agent, Vertex u, Vertex v, int time) {
    return {ConstraintKind::Edge, agent, u, v, time};
  }

  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

std::ostream& operator<<(std::ostream& os, const Constraint& c);

/// Persistent constraint set. Adding a constraint yields a new set that shares
/// all earlier constraints with its parent, so constraint-tree children cost
/// one allocation each.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  [[nodiscard]] ConstraintSet with(const Constraint& c) const;

  [[nodiscard]] bool contains(const Constraint& c) const;
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }

  /// Constraints on one agent, oldest first.
  [[nodiscard]] std::vector<Constraint> for_agent(int agent) const;
  /// All constraints, oldest first.
  [[nodiscard]] std::vector<Constraint> to_vector() const;

  template <class F>
  void for_each(F&& f) const {
    for (const Node* n = head_.get(); n != nullptr; n = n->next.get()) f(n->constraint);
  }

 private:
  struct Node {
    Constraint constraint;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
  std::size_t size_ = 0;
};

}  // namespace tapf
