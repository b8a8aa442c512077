#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace triside {

// All quantities in the library are exact rationals. Equilibrium conditions
// compare utilities for exact equality (indifference matters), so floating
// point is never used except for clearly-marked display approximations.
using Rat = mpq_class;

// Parses "7", "-3", "3/4", "-12/8" (reduced on the way in). Returns nullopt
// for anything else, including zero denominators and decimal notation.
std::optional<Rat> rat_from_string(const std::string& text);

// Canonical "n" or "n/d" with d > 1 and gcd(n, d) = 1.
std::string rat_to_string(const Rat& value);

// Display-only decimal approximation.
double rat_to_double(const Rat& value);

// Dense row-by-column grid of rationals, used for valuations, per-courier
// cost slices, compensations and tips.
class RatGrid {
 public:
  RatGrid() = default;
  RatGrid(int rows, int cols)
      : rows_(rows), cols_(cols),
        cells_(static_cast<size_t>(rows) * static_cast<size_t>(cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int row, int col) { return cells_[index(row, col)]; }
  const Rat& operator()(int row, int col) const { return cells_[index(row, col)]; }

  bool operator==(const RatGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && cells_ == other.cells_;
  }

  bool all_zero() const {
    for (const Rat& cell : cells_)
      if (cell != 0) return false;
    return true;
  }

 private:
  size_t index(int row, int col) const {
    return static_cast<size_t>(row) * static_cast<size_t>(cols_) +
           static_cast<size_t>(col);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> cells_;
};

}  // namespace triside
