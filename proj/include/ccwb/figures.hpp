#pragma once

// Hand-entered copies of the printed matrices of M (29x15) and S (15x13).
// Kept independent of the generated tables so the two can be diffed.

#include <vector>

#include "ccwb/value_table.hpp"

namespace ccwb {

inline ValueTable figure_M() {
  static const std::vector<std::vector<CellValue>> rows = {
      {0, 0, 2, 0, 2, 8, 8, 0, 0, 6, 6, 12, 0, 12, 0},
      {0, 0, 2, 0, 2, 8, 8, 0, 0, 6, 6, 13, 0, 13, 0},
      {0, 0, 2, 0, 2, 9, 9, 0, 0, 7, 7, 12, 0, 12, 0},
      {0, 0, 3, 0, 3, 8, 8, 0, 0, 7, 7, 13, 0, 13, 0},
      {0, 0, 3, 0, 3, 9, 9, 0, 0, 6, 6, 12, 0, 12, 0},
      {0, 0, 3, 0, 3, 9, 9, 0, 0, 7, 7, 13, 0, 13, 0},
      {0, 0, 2, 0, 2, 8, 8, 11, 2, 0, 2, 8, 8, 11, 11},
      {0, 0, 3, 0, 3, 12, 14, 12, 3, 0, 3, 12, 14, 12, 14},
      {1, 1, 2, 1, 2, 9, 9, 11, 2, 1, 2, 9, 9, 11, 11},
      {1, 1, 2, 1, 2, 13, 14, 13, 2, 1, 2, 13, 14, 13, 14},
      {1, 1, 3, 1, 3, 12, 14, 12, 3, 1, 3, 12, 14, 12, 14},
      {1, 1, 3, 1, 3, 8, 8, 11, 3, 1, 3, 8, 8, 11, 11},
      {4, 4, 4, 6, 6, 9, 9, 11, 4, 6, 6, 9, 9, 11, 11},
      {4, 4, 4, 7, 7, 8, 8, 11, 4, 7, 7, 8, 8, 11, 11},
      {4, 4, 4, 6, 6, 12, 14, 12, 4, 6, 6, 12, 14, 12, 14},
      {4, 4, 4, 7, 7, 13, 14, 13, 4, 7, 7, 13, 14, 13, 14},
      {0, 0, 0, 7, 7, 8, 8, 11, 0, 7, 7, 8, 8, 11, 11},
      {11, 0, 2, 0, 2, 9, 9, 11, 2, 0, 2, 9, 9, 11, 11},
      {14, 0, 3, 0, 3, 13, 14, 13, 3, 0, 3, 13, 14, 13, 14},
      {11, 1, 2, 1, 2, 8, 8, 11, 2, 1, 2, 8, 8, 11, 11},
      {14, 1, 2, 1, 2, 12, 14, 12, 2, 1, 2, 12, 14, 12, 14},
      {11, 1, 3, 1, 3, 9, 9, 11, 3, 1, 3, 9, 9, 11, 11},
      {14, 1, 3, 1, 3, 13, 14, 13, 3, 1, 3, 13, 14, 13, 14},
      {11, 4, 4, 6, 6, 8, 8, 11, 4, 6, 6, 8, 8, 11, 11},
      {14, 4, 4, 6, 6, 13, 14, 13, 4, 6, 6, 13, 14, 13, 14},
      {11, 4, 4, 7, 7, 9, 9, 11, 4, 7, 7, 9, 9, 11, 11},
      {0, 4, 4, 7, 7, 9, 9, 0, 4, 7, 7, 9, 9, 0, 0},
      {0, 4, 4, 6, 6, 12, 0, 12, 4, 6, 6, 12, 0, 12, 0},
      {14, 4, 4, 7, 7, 12, 14, 12, 4, 7, 7, 12, 14, 12, 14},
  };
  return ValueTable::from_rows(rows);
}

inline ValueTable figure_S() {
  static const std::vector<std::vector<CellValue>> rows = {
      {0, 0, 0, 2, 9, 0, 0, 0, 7, 7, 12, 12, 0},
      {0, 0, 0, 3, 8, 0, 0, 0, 7, 7, 13, 13, 0},
      {0, 0, 0, 2, 8, 0, 0, 0, 6, 6, 13, 13, 0},
      {0, 0, 7, 7, 13, 13, 0, 0, 7, 7, 13, 13, 0},
      {0, 0, 6, 6, 12, 12, 14, 0, 6, 6, 12, 12, 14},
      {4, 4, 6, 6, 12, 12, 14, 4, 6, 6, 12, 12, 14},
      {4, 4, 6, 6, 9, 11, 11, 4, 6, 6, 9, 11, 11},
      {1, 1, 1, 3, 9, 0, 0, 1, 1, 3, 9, 0, 0},
      {0, 0, 0, 2, 8, 0, 0, 0, 0, 2, 8, 0, 0},
      {0, 0, 7, 7, 13, 13, 0, 0, 7, 7, 13, 13, 0},
      {14, 0, 6, 6, 12, 12, 14, 0, 6, 6, 12, 12, 14},
      {14, 4, 6, 6, 12, 12, 14, 4, 6, 6, 12, 12, 14},
      {11, 4, 6, 6, 9, 11, 11, 4, 6, 6, 9, 11, 11},
      {0, 1, 1, 3, 9, 0, 0, 1, 1, 3, 9, 0, 0},
      {0, 0, 0, 2, 8, 0, 0, 0, 0, 2, 8, 0, 0},
  };
  return ValueTable::from_rows(rows);
}

}  // namespace ccwb
