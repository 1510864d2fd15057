#include <algorithm>

#include "assignment_kernel.hpp"
#include "tapf/assignment.hpp"

namespace tapf {

using detail::AssignmentKernel;

bool KBestEnumerator::Later::operator()(const Partition& a, const Partition& b) const {
  if (a.state.total_cost() != b.state.total_cost()) {
    return a.state.total_cost() > b.state.total_cost();
  }
  for (int i = 0; i < a.state.num_agents(); ++i) {
    if (a.state.target_of(i) != b.state.target_of(i)) {
      return a.state.target_of(i) > b.state.target_of(i);
    }
  }
  return false;
}

KBestEnumerator::KBestEnumerator(CostTable base) : base_(std::move(base)) {}

void KBestEnumerator::push(Partition p) {
  frontier_.push_back(std::move(p));
  std::ranges::push_heap(frontier_, Later{});
}

void KBestEnumerator::split(const Partition& p) {
  AssignmentState s = p.state;
  std::vector<bool> fixed = p.fixed;
  for (int k = 0; k < s.num_agents(); ++k) {
    if (fixed[k]) continue;
    const int taken = s.target_of(k);
    std::vector<Cost> row(s.costs().row(k).begin(), s.costs().row(k).end());
    row[taken] = Cost::infinity();
    if (auto child = dynamic_update(s, k, std::move(row))) {
      lexicographic_refine(*child);
      push({std::move(*child), fixed});
    }
    AssignmentKernel::fix_pair(s, k, taken);
    fixed[k] = true;
  }
}

std::optional<Assignment> KBestEnumerator::next() {
  if (!started_) {
    started_ = true;
    if (auto s = hungarian(base_)) push({std::move(*s), std::vector<bool>(base_.rows(), false)});
  }
  if (pending_split_) {
    split(*pending_split_);
    pending_split_.reset();
  }
  if (frontier_.empty()) return std::nullopt;
  std::ranges::pop_heap(frontier_, Later{});
  Partition best = std::move(frontier_.back());
  frontier_.pop_back();
  Assignment out = best.state.assignment();
  pending_split_ = std::move(best);
  ++emitted_;
  return out;
}

}  // namespace tapf
