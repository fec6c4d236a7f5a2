#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "backresp/model.hpp"
#include "backresp/resp/payoff.hpp"

namespace backresp {

struct ObjectiveDoc {
    ObjectiveKind kind = ObjectiveKind::safety;
    std::vector<std::string> target;             // non-parity kinds
    std::map<std::string, unsigned> colours;     // parity; unlisted states get colour 0
    friend bool operator==(const ObjectiveDoc&, const ObjectiveDoc&) = default;
};

struct RunDoc {
    std::vector<std::string> prefix;
    std::vector<std::string> loop;
    friend bool operator==(const RunDoc&, const RunDoc&) = default;
};

using GroupList = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Name-level document; nothing is resolved until load().
struct ExplicitModelDoc {
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::pair<std::string, std::string>> transitions;
    std::optional<ObjectiveDoc> objective;
    std::optional<RunDoc> run;
    std::optional<GroupList> groups;  // ordered by block name
    friend bool operator==(const ExplicitModelDoc&, const ExplicitModelDoc&) = default;
};

// Syntax errors carry "line L, column C"; structural ones a JSON pointer. Throws InputError.
ExplicitModelDoc parse_explicit(std::string_view text);
std::string serialize_explicit(const ExplicitModelDoc& doc);

struct LoadedModel {
    TransitionSystem ts;
    std::optional<Objective> objective;
    std::optional<LassoRun> run;
    std::optional<PlayerSet> groups;
};

// Resolves names and checks totality, run shape and that groups partition the states.
LoadedModel load_model(const ExplicitModelDoc& doc);

ExplicitModelDoc to_doc(const TransitionSystem& ts, const std::optional<Objective>& objective = std::nullopt,
                        const std::optional<LassoRun>& run = std::nullopt,
                        const std::optional<PlayerSet>& groups = std::nullopt);

Objective resolve_objective(const ObjectiveDoc& doc, const TransitionSystem& ts);
LassoRun resolve_run(const RunDoc& doc, const TransitionSystem& ts);
// Blocks must be non-empty, disjoint and cover every state.
PlayerSet resolve_groups(const GroupList& groups, const TransitionSystem& ts);

// Grouping file: a JSON object mapping block names to arrays of state names.
GroupList parse_group_file(std::string_view text);

std::string read_file(const std::string& path);  // throws InputError

}  // namespace backresp
