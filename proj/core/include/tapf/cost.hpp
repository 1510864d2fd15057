#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

namespace tapf {

/// Extended natural number: a finite path cost or infinity.
///
/// Infinity is a dedicated sentinel that compares greater than every finite
/// value. Addition saturates at infinity, so sums over assignments never
/// overflow.
class Cost {
 public:
  using value_type = std::int64_t;

  constexpr Cost() = default;
  constexpr explicit Cost(value_type v) : value_(v) {}

  static constexpr Cost infinity() { return Cost(kInfinity); }

  [[nodiscard]] constexpr bool is_finite() const { return value_ != kInfinity; }
  [[nodiscard]] constexpr bool is_infinite() const { return value_ == kInfinity; }
  [[nodiscard]] constexpr value_type value() const { return value_; }

  friend constexpr Cost operator+(Cost a, Cost b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Cost(a.value_ + b.value_);
  }
  constexpr Cost& operator+=(Cost other) { return *this = *this + other; }

  friend constexpr auto operator<=>(Cost, Cost) = default;

  friend std::ostream& operator<<(std::ostream& os, Cost c) {
    if (c.is_infinite()) return os << "inf";
    return os << c.value_;
  }

 private:
  static constexpr value_type kInfinity = std::numeric_limits<value_type>::max();
  value_type value_ = 0;
};

/// Dense rows x cols table of costs with copy-on-write rows.
///
/// Copying a table shares every row; replacing one row copies only that row.
/// Search nodes that differ from their parent in a single agent's row rely on
/// this to stay cheap.
class CostTable {
 public:
  CostTable() = default;
  CostTable(int rows, int cols, Cost fill = Cost::infinity());

  static CostTable from_rows(const std::vector<std::vector<Cost>>& rows);

  [[nodiscard]] int rows() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] int cols() const { return cols_; }

  [[nodiscard]] Cost operator()(int i, int j) const { return (*rows_[i])[j]; }
  [[nodiscard]] std::span<const Cost> row(int i) const { return *rows_[i]; }

  void set_row(int i, std::vector<Cost> values);
  void set(int i, int j, Cost value);

  /// True when both tables point at the same storage for row i.
  [[nodiscard]] bool shares_row(const CostTable& other, int i) const {
    return rows_[i] == other.rows_[i];
  }

  friend bool operator==(const CostTable& a, const CostTable& b);

 private:
  int cols_ = 0;
  std::vector<std::shared_ptr<const std::vector<Cost>>> rows_;
};

}  // namespace tapf
