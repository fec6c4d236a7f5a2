#pragma once

#include <vector>

#include "backresp/resp/shapley.hpp"

namespace backresp {

// Brute-force reference: solves one fresh game per coalition and sums the
// Shapley formula term by term. Independent of PayoffGame and its memo.
ResponsibilityReport oracle_shapley(const GameContext& ctx, const PlayerSet& players, std::size_t cap = 20);

// All winning coalitions none of whose one-smaller subsets win.
std::vector<Coalition> minimal_winning_coalitions(const GameContext& ctx, const PlayerSet& players,
                                                  std::size_t cap = 20);

}  // namespace backresp
