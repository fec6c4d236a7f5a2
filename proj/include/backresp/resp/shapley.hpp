#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "backresp/budget.hpp"
#include "backresp/rational.hpp"
#include "backresp/resp/payoff.hpp"

namespace backresp {

struct PlayerValue {
    std::string name;
    std::vector<StateId> members;
    std::optional<Rational> value;  // absent when only positivity was decided
    bool positive = false;
};

struct ResponsibilityReport {
    Mode mode = Mode::pessimistic;
    PlayerKind kind = PlayerKind::states;
    ObjectiveKind objective = ObjectiveKind::safety;
    std::vector<PlayerValue> entries;  // player order
    GameStats stats;
    std::vector<std::string> notes;

    const PlayerValue* find(std::string_view name) const;
    std::vector<std::string> positive_names() const;
};

struct ShapleyOptions {
    std::size_t player_cap = 24;
    unsigned threads = 1;
    Deadline deadline;
};

// A report with one zero-valued entry per player, values present.
ResponsibilityReport empty_report(const PayoffGame& pg);

// Exact Shapley values of gamma. Throws Refusal above the player cap.
ResponsibilityReport shapley_exact(const PayoffGame& pg, const ShapleyOptions& options = {});

// gamma(C) = 0 and gamma(C + player) = 1.
bool is_switching_pair(const PayoffGame& pg, Coalition c, std::size_t player);

// Whether the player's value strictly exceeds t. Throws InputError for unknown players or absent values.
bool threshold(const ResponsibilityReport& report, std::string_view player, const Rational& t);

}  // namespace backresp
