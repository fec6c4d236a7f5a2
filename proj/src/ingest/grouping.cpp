#include "backresp/ingest/grouping.hpp"

namespace backresp {

PlayerSet resolve_grouping(const GroupingSpec& spec, const TransitionSystem& ts, const LabelInfo& info) {
    if (auto* g = std::get_if<ExplicitGroups>(&spec)) return resolve_groups(g->blocks, ts);

    std::map<std::string, std::vector<StateId>> blocks;
    if (auto* by = std::get_if<ByLabel>(&spec)) {
        if (by->labels.empty()) throw InputError("label grouping needs at least one label");
        std::vector<const StateSet*> sets;
        for (const auto& l : by->labels) {
            auto it = info.labels.find(l);
            if (it == info.labels.end()) throw InputError("unknown label \"" + l + "\"");
            sets.push_back(&it->second);
        }
        for (std::uint32_t i = 0; i < ts.size(); ++i) {
            std::string key;
            for (std::size_t k = 0; k < sets.size(); ++k)
                key += (k ? "," : "") + by->labels[k] + (sets[k]->contains(StateId(i)) ? "=true" : "=false");
            blocks[key].push_back(StateId(i));
        }
    } else {
        if (info.owners.empty()) throw InputError("module grouping needs at least one module with an owner declaration");
        for (std::uint32_t i = 0; i < ts.size(); ++i) {
            std::string owner = "_unowned";
            for (const auto& [name, states] : info.owners)
                if (states.contains(StateId(i))) {
                    owner = name;
                    break;
                }
            blocks[owner].push_back(StateId(i));
        }
    }
    std::vector<std::pair<std::string, std::vector<StateId>>> list(blocks.begin(), blocks.end());
    return PlayerSet::of_blocks(std::move(list), ts.size());
}

}  // namespace backresp
