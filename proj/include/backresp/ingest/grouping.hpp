#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "backresp/ingest/explicit.hpp"

namespace backresp {

struct ExplicitGroups {
    GroupList blocks;
};

// One block per combination of truth values of the listed labels.
struct ByLabel {
    std::vector<std::string> labels;
};

// Each state goes to the first module (declaration order) whose owner predicate holds, else "_unowned".
struct ByModule {};

using GroupingSpec = std::variant<ExplicitGroups, ByLabel, ByModule>;

struct LabelInfo {
    std::map<std::string, StateSet> labels;
    std::vector<std::pair<std::string, StateSet>> owners;
};

// Partition of all states into named blocks. Throws InputError on bad names or non-partitions.
PlayerSet resolve_grouping(const GroupingSpec& spec, const TransitionSystem& ts, const LabelInfo& info = {});

}  // namespace backresp
