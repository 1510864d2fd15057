#include "tapf/constraints.hpp"

#include <algorithm>
#include <ostream>

namespace tapf {

std::ostream& operator<<(std::ostream& os, const Constraint& c) {
  if (c.kind == ConstraintKind::Vertex) {
    return os << "V(" << c.agent << ", " << c.at << ", t=" << c.time << ")";
  }
  return os << "E(" << c.agent << ", " << c.from << "->" << c.at << ", t=" << c.time << ")";
}

ConstraintSet ConstraintSet::with(const Constraint& c) const {
  ConstraintSet out;
  out.head_ = std::make_shared<const Node>(Node{c, head_});
  out.size_ = size_ + 1;
  return out;
}

bool ConstraintSet::contains(const Constraint& c) const {
  for (const Node* n = head_.get(); n != nullptr; n = n->next.get()) {
    if (n->constraint == c) return true;
  }
  return false;
}

std::vector<Constraint> ConstraintSet::for_agent(int agent) const {
  std::vector<Constraint> out;
  for_each([&](const Constraint& c) {
    if (c.agent == agent) out.push_back(c);
  });
  std::ranges::reverse(out);
  return out;
}

std::vector<Constraint> ConstraintSet::to_vector() const {
  std::vector<Constraint> out;
  out.reserve(size_);
  for_each([&](const Constraint& c) { out.push_back(c); });
  std::ranges::reverse(out);
  return out;
}

}  // namespace tapf
