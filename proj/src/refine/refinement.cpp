#include "backresp/refine/refinement.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>

namespace backresp {

std::string_view to_string(SelectHeuristic h) {
    switch (h) {
        case SelectHeuristic::random: return "random";
        case SelectHeuristic::max_delta: return "max-delta";
        case SelectHeuristic::min_delta: return "min-delta";
        case SelectHeuristic::min_frontier: return "min-frontier";
    }
    return "?";
}

std::string_view to_string(RefineHeuristic h) {
    switch (h) {
        case RefineHeuristic::random: return "random";
        case RefineHeuristic::frontier_random: return "frontier-random";
        case RefineHeuristic::frontier_max: return "frontier-max";
        case RefineHeuristic::frontier_losing: return "frontier-losing";
        case RefineHeuristic::frontier_winning: return "frontier-winning";
        case RefineHeuristic::frontier_lowest: return "frontier-lowest";
    }
    return "?";
}

SelectHeuristic select_heuristic_from_string(std::string_view s) {
    for (auto h : {SelectHeuristic::random, SelectHeuristic::max_delta, SelectHeuristic::min_delta,
                   SelectHeuristic::min_frontier})
        if (to_string(h) == s) return h;
    throw InputError("unknown block selection heuristic '" + std::string(s) + "'");
}

RefineHeuristic refine_heuristic_from_string(std::string_view s) {
    for (auto h : {RefineHeuristic::random, RefineHeuristic::frontier_random, RefineHeuristic::frontier_max,
                   RefineHeuristic::frontier_losing, RefineHeuristic::frontier_winning,
                   RefineHeuristic::frontier_lowest})
        if (to_string(h) == s) return h;
    throw InputError("unknown refinement heuristic '" + std::string(s) + "'");
}

std::uint64_t CounterRng::next() {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * ++counter_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t CounterRng::below(std::size_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

Partition Partition::initial(std::size_t atoms, std::size_t blocks, CounterRng& rng) {
    Partition p;
    if (atoms == 0) return p;
    blocks = std::clamp<std::size_t>(blocks, 1, atoms);
    std::vector<std::size_t> order(atoms);
    for (std::size_t i = 0; i < atoms; ++i) order[i] = i;
    if (blocks > 1)
        for (std::size_t i = atoms - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    p.blocks_.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) p.blocks_[b].id = static_cast<BlockId>(b);
    for (std::size_t i = 0; i < atoms; ++i) p.blocks_[i % blocks].atoms.push_back(order[i]);
    for (auto& b : p.blocks_) std::sort(b.atoms.begin(), b.atoms.end());
    p.next_id_ = static_cast<BlockId>(blocks);
    return p;
}

const Partition::Block& Partition::block(BlockId id) const {
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), id, [](const Block& b, BlockId v) { return b.id < v; });
    if (it == blocks_.end() || it->id != id) throw std::out_of_range("unknown block id");
    return *it;
}

std::pair<BlockId, BlockId> Partition::split(BlockId id, std::size_t atom) {
    Block old = block(id);
    auto pos = std::find(old.atoms.begin(), old.atoms.end(), atom);
    if (pos == old.atoms.end() || old.atoms.size() < 2) throw std::invalid_argument("split needs a member of a block with at least two atoms");
    old.atoms.erase(pos);
    blocks_.erase(std::find_if(blocks_.begin(), blocks_.end(), [&](const Block& b) { return b.id == id; }));
    BlockId single = next_id_++;
    BlockId rest = next_id_++;
    blocks_.push_back({single, {atom}});
    blocks_.push_back({rest, std::move(old.atoms)});
    return {single, rest};
}

BlockGame::BlockGame(std::shared_ptr<const GameContext> ctx, PlayerSet atoms)
    : ctx_(std::move(ctx)), atoms_(std::move(atoms)) {
    if (atoms_.universe() != ctx_->size()) throw InputError("player set does not match the system");
}

bool BlockGame::gamma(const StateSet& coalition) {
    auto it = memo_.find(coalition);
    if (it != memo_.end()) {
        ++stats_.memo_hits;
        return it->second;
    }
    bool v = ctx_->wins(coalition);
    ++stats_.games_solved;
    memo_.emplace(coalition, v);
    return v;
}

StateSet BlockGame::states_of(const Partition& p, BlockId id) const { return atoms_.flatten(p.block(id).atoms); }

StateSet BlockGame::states_of(const Partition& p, const std::vector<BlockId>& ids) const {
    StateSet out(ctx_->size());
    for (BlockId id : ids) out |= states_of(p, id);
    return out;
}

namespace {

class WitnessSearch {
public:
    WitnessSearch(BlockGame& game, const Partition& partition, const HeuristicsConfig& config)
        : game_(game), partition_(partition), config_(config) {}

    std::optional<std::vector<BlockId>> run(BlockId id) {
        const std::size_t n = game_.context().size();
        const StateSet b = game_.states_of(partition_, id);
        if (game_.gamma(b)) return std::vector<BlockId>{};

        std::vector<std::pair<BlockId, StateSet>> others;
        for (const auto& blk : partition_.blocks())
            if (blk.id != id) others.emplace_back(blk.id, game_.atoms().flatten(blk.atoms));
        for (const auto& [oid, states] : others)
            if (!game_.gamma(states) && game_.gamma(states | b)) return std::vector<BlockId>{oid};

        // Complete branch and bound over the blocks that lose alone.
        pool_.clear();
        for (auto& o : others)
            if (!game_.gamma(o.second)) pool_.push_back(o);
        suffix_.assign(pool_.size() + 1, StateSet(n));
        for (std::size_t i = pool_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] | pool_[i].second;
        b_ = b;
        visited_ = 0;
        chosen_.clear();
        if (descend(StateSet(n), 0)) return chosen_;
        return std::nullopt;
    }

private:
    bool descend(const StateSet& inside, std::size_t next) {
        if (++visited_ > (std::uint64_t{1} << config_.search_budget_log2))
            throw Refusal("block-switching-pair search exceeded 2^" + std::to_string(config_.search_budget_log2) +
                          " coalitions");
        if ((visited_ & 1023) == 0) config_.deadline.check();
        if (game_.gamma(inside | b_)) return true;
        if (next == pool_.size()) return false;
        if (!game_.gamma(inside | suffix_[next] | b_)) return false;
        StateSet with = inside | pool_[next].second;
        if (!game_.gamma(with)) {
            chosen_.push_back(pool_[next].first);
            if (descend(with, next + 1)) return true;
            chosen_.pop_back();
        }
        return descend(inside, next + 1);
    }

    BlockGame& game_;
    const Partition& partition_;
    const HeuristicsConfig& config_;
    std::vector<std::pair<BlockId, StateSet>> pool_;
    std::vector<StateSet> suffix_;
    StateSet b_;
    std::uint64_t visited_ = 0;
    std::vector<BlockId> chosen_;
};

StateSet reachable_from_initial(const TransitionSystem& g) {
    StateSet seen(g.size());
    std::deque<StateId> queue{g.initial()};
    seen.insert(g.initial());
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (StateId t : g.successors(s))
            if (!seen.contains(t)) {
                seen.insert(t);
                queue.push_back(t);
            }
    }
    return seen;
}

}  // namespace

std::map<BlockId, std::optional<BspWitness>> compute_has_bsp(BlockGame& game, const Partition& partition,
                                                             const std::set<std::size_t>* known,
                                                             const HeuristicsConfig& config) {
    std::map<BlockId, std::optional<BspWitness>> out;
    const std::size_t n = game.context().size();
    const bool trivial = !game.gamma(game.atoms().all_states()) || game.gamma(StateSet(n));
    WitnessSearch search(game, partition, config);
    for (const auto& blk : partition.blocks()) {
        if (trivial) {
            out[blk.id] = std::nullopt;
            continue;
        }
        if (known && blk.atoms.size() == 1 && known->count(blk.atoms.front())) {
            out[blk.id] = BspWitness{blk.id, {}, true};
            continue;
        }
        auto c = search.run(blk.id);
        out[blk.id] = c ? std::optional<BspWitness>(BspWitness{blk.id, *c, false}) : std::nullopt;
    }
    return out;
}

FrontierInfo frontier(BlockGame& game, const Partition& partition, const BspWitness& witness) {
    const auto& ctx = game.context();
    const StateSet c = game.states_of(partition, witness.coalition);
    const StateSet b = game.states_of(partition, witness.block);
    Game with = ctx.build(c | b);
    FrontierInfo info;
    info.win_with = solve(with).sat_wins;
    info.win_without = ctx.region(c).sat_wins;
    info.delta = info.win_with - info.win_without;
    info.frontier = StateSet(ctx.size());
    const StateSet reach = reachable_from_initial(with.arena.graph);
    const auto& atoms = game.atoms();
    for (std::size_t a : partition.block(witness.block).atoms) {
        bool meets_delta = false, on_frontier = false;
        std::size_t winning = 0, losing = 0;
        for (StateId s : atoms.members(a)) {
            if (!info.delta.contains(s)) continue;
            meets_delta = true;
            if (!reach.contains(s)) continue;
            bool leaves = false;
            for (StateId t : with.arena.graph.successors(s)) {
                if (!info.delta.contains(t)) leaves = true;
                if (info.win_without.contains(t)) ++winning;
                if (!info.win_with.contains(t)) ++losing;
            }
            if (leaves) {
                info.frontier.insert(s);
                on_frontier = true;
            }
        }
        if (meets_delta) info.delta_atoms.push_back(a);
        if (on_frontier) {
            info.frontier_atoms.push_back(a);
            info.to_winning[a] = winning;
            info.to_losing[a] = losing;
        }
    }
    return info;
}

RefineChoice refine_block(const FrontierInfo& info, const HeuristicsConfig& config, CounterRng& rng) {
    const auto& fr = info.frontier_atoms;
    if (fr.empty() || config.refine == RefineHeuristic::random) {
        if (info.delta_atoms.empty()) throw std::logic_error("block has no state in the winning difference");
        bool fallback = config.refine != RefineHeuristic::random;
        if (config.refine == RefineHeuristic::frontier_lowest) return {info.delta_atoms.front(), true};
        return {info.delta_atoms[rng.below(info.delta_atoms.size())], fallback};
    }
    auto best_by = [&](auto score) {
        std::size_t best = fr.front();
        for (std::size_t a : fr)
            if (score(a) > score(best)) best = a;
        return best;
    };
    switch (config.refine) {
        case RefineHeuristic::frontier_random: return {fr[rng.below(fr.size())]};
        case RefineHeuristic::frontier_lowest: return {fr.front()};
        case RefineHeuristic::frontier_max:
            return {best_by([&](std::size_t a) { return info.to_winning.at(a) + info.to_losing.at(a); })};
        case RefineHeuristic::frontier_losing: return {best_by([&](std::size_t a) { return info.to_losing.at(a); })};
        case RefineHeuristic::frontier_winning: return {best_by([&](std::size_t a) { return info.to_winning.at(a); })};
        case RefineHeuristic::random: break;
    }
    return {fr.front()};
}

BlockId select_blocks(const std::vector<Candidate>& candidates, const HeuristicsConfig& config, CounterRng& rng) {
    if (candidates.empty()) throw std::invalid_argument("no candidate blocks");
    auto best_by = [&](auto score) {
        const Candidate* best = &candidates.front();
        for (const auto& c : candidates)
            if (score(c) > score(*best)) best = &c;
        return best->witness.block;
    };
    switch (config.select) {
        case SelectHeuristic::random: return candidates[rng.below(candidates.size())].witness.block;
        case SelectHeuristic::max_delta:
            return best_by([](const Candidate& c) { return static_cast<long long>(c.info.delta.size()); });
        case SelectHeuristic::min_delta:
            return best_by([](const Candidate& c) { return -static_cast<long long>(c.info.delta.size()); });
        case SelectHeuristic::min_frontier:
            return best_by([](const Candidate& c) { return -static_cast<long long>(c.info.frontier_atoms.size()); });
    }
    return candidates.front().witness.block;
}

RefinementResult refine_loop(BlockGame& game, const HeuristicsConfig& config) {
    CounterRng rng(config.seed);
    Partition partition = Partition::initial(game.atoms().size(), config.initial_blocks, rng);
    std::set<std::size_t> known;
    RefinementResult result;
    for (std::size_t iteration = 1;; ++iteration) {
        config.deadline.check();
        auto has = compute_has_bsp(game, partition, &known, config);
        TraceRecord record;
        record.iteration = iteration;
        record.partition = partition.blocks();
        std::vector<Candidate> candidates;
        for (const auto& [id, w] : has) {
            if (!w) continue;
            const auto& atoms = partition.block(id).atoms;
            TraceWitness tw{id, w->coalition, w->carried, std::nullopt, std::nullopt};
            if (atoms.size() == 1) {
                known.insert(atoms.front());
            } else {
                Candidate c{*w, frontier(game, partition, *w)};
                tw.delta_size = c.info.delta.size();
                tw.frontier_atoms = c.info.frontier_atoms;
                candidates.push_back(std::move(c));
            }
            record.witnesses.push_back(std::move(tw));
        }
        if (candidates.empty()) {
            result.trace.push_back(std::move(record));
            break;
        }
        BlockId chosen = select_blocks(candidates, config, rng);
        const Candidate& cand = *std::find_if(candidates.begin(), candidates.end(),
                                              [&](const Candidate& c) { return c.witness.block == chosen; });
        RefineChoice pick = refine_block(cand.info, config, rng);
        record.selected = chosen;
        record.split_atom = pick.atom;
        record.fallback = pick.fallback;
        result.trace.push_back(std::move(record));
        partition.split(chosen, pick.atom);
        ++result.iterations;
    }
    result.responsible.assign(known.begin(), known.end());
    result.stats = game.stats();
    return result;
}

RefinementResult refine_loop(std::shared_ptr<const GameContext> ctx, const PlayerSet& atoms,
                             const HeuristicsConfig& config) {
    BlockGame game(std::move(ctx), atoms);
    return refine_loop(game, config);
}

RefinedReport responsibility_via_refinement(std::shared_ptr<const GameContext> ctx, const PlayerSet& atoms,
                                            const HeuristicsConfig& config, const ShapleyOptions& shapley) {
    RefinedReport out;
    out.refinement = refine_loop(ctx, atoms, config);
    const auto& ts = ctx->system();
    ResponsibilityReport& r = out.report;
    r.mode = ctx->mode();
    r.kind = atoms.kind();
    r.objective = ctx->objective().kind();
    for (std::size_t i = 0; i < atoms.size(); ++i) r.entries.push_back({atoms.name(i, ts), atoms.members(i), Rational(0), false});
    const auto& resp = out.refinement.responsible;
    for (std::size_t a : resp) r.entries[a].positive = true;
    r.stats = out.refinement.stats;
    if (resp.size() > shapley.player_cap) {
        out.values_refused = true;
        for (auto& e : r.entries) e.value.reset();
        r.notes.push_back(std::to_string(resp.size()) + " responsible players exceed the exact Shapley cap of " +
                          std::to_string(shapley.player_cap) + "; only positivity is reported");
        return out;
    }
    auto values = shapley_exact(PayoffGame(ctx, atoms.restrict_to(resp)), shapley);
    for (std::size_t k = 0; k < resp.size(); ++k) {
        r.entries[resp[k]].value = values.entries[k].value;
        r.entries[resp[k]].positive = values.entries[k].positive;
    }
    r.stats.games_solved += values.stats.games_solved;
    r.stats.memo_hits += values.stats.memo_hits;
    return out;
}

std::string trace_to_jsonl(const std::vector<TraceRecord>& trace, const PlayerSet& atoms, const TransitionSystem& ts) {
    using nlohmann::json;
    auto atom_names = [&](const std::vector<std::size_t>& as) {
        json arr = json::array();
        for (std::size_t a : as) arr.push_back(atoms.name(a, ts));
        return arr;
    };
    std::string out;
    for (const auto& rec : trace) {
        json j;
        j["iteration"] = rec.iteration;
        json blocks = json::array();
        for (const auto& b : rec.partition) blocks.push_back({{"id", b.id}, {"members", atom_names(b.atoms)}});
        j["partition"] = blocks;
        json ws = json::array();
        for (const auto& w : rec.witnesses) {
            json jw{{"block", w.block}, {"coalition", w.coalition}, {"carried", w.carried}};
            if (w.delta_size) jw["delta_size"] = *w.delta_size;
            if (w.frontier_atoms) jw["frontier"] = atom_names(*w.frontier_atoms);
            ws.push_back(jw);
        }
        j["witnesses"] = ws;
        if (rec.selected) {
            j["selected"] = *rec.selected;
            j["split"] = atoms.name(*rec.split_atom, ts);
            j["fallback"] = rec.fallback;
        } else {
            j["selected"] = nullptr;
        }
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace backresp
