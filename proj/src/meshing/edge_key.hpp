#pragma once

#include <utility>

namespace robin::detail {

inline std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace robin::detail
