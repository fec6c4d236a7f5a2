#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "backresp/budget.hpp"
#include "backresp/resp/shapley.hpp"

namespace backresp {

enum class SelectHeuristic { random, max_delta, min_delta, min_frontier };
enum class RefineHeuristic { random, frontier_random, frontier_max, frontier_losing, frontier_winning, frontier_lowest };

std::string_view to_string(SelectHeuristic h);
std::string_view to_string(RefineHeuristic h);
SelectHeuristic select_heuristic_from_string(std::string_view s);  // throws InputError
RefineHeuristic refine_heuristic_from_string(std::string_view s);  // throws InputError

struct HeuristicsConfig {
    std::size_t initial_blocks = 1;
    SelectHeuristic select = SelectHeuristic::random;
    RefineHeuristic refine = RefineHeuristic::frontier_random;
    std::uint64_t seed = 0;
    unsigned search_budget_log2 = 24;  // visited coalitions per block-switching-pair search
    Deadline deadline;
};

// Seeded counter-based generator (splitmix64 over seed + counter).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t next();
    std::size_t below(std::size_t bound);

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

using BlockId = std::uint32_t;

// Partition of the player indices ("atoms") into blocks with stable ids.
// A split retires the block id and mints two fresh ones.
class Partition {
public:
    struct Block {
        BlockId id;
        std::vector<std::size_t> atoms;  // ascending
    };

    // Atoms shuffled with `rng` and dealt round-robin into min(blocks, atoms) blocks.
    static Partition initial(std::size_t atoms, std::size_t blocks, CounterRng& rng);

    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& block(BlockId id) const;
    std::size_t size() const { return blocks_.size(); }

    // Returns {id of {atom}, id of the remainder}.
    std::pair<BlockId, BlockId> split(BlockId id, std::size_t atom);

private:
    std::vector<Block> blocks_;  // ascending id
    BlockId next_id_ = 0;
};

// Coalitions of atoms, evaluated with a memo keyed by the flattened state set.
class BlockGame {
public:
    BlockGame(std::shared_ptr<const GameContext> ctx, PlayerSet atoms);

    bool gamma(const StateSet& coalition);
    const GameContext& context() const { return *ctx_; }
    std::shared_ptr<const GameContext> shared_context() const { return ctx_; }
    const PlayerSet& atoms() const { return atoms_; }
    StateSet states_of(const Partition& p, BlockId id) const;
    StateSet states_of(const Partition& p, const std::vector<BlockId>& ids) const;
    GameStats stats() const { return stats_; }

private:
    std::shared_ptr<const GameContext> ctx_;
    PlayerSet atoms_;
    std::unordered_map<StateSet, bool, StateSetHash> memo_;
    GameStats stats_;
};

struct BspWitness {
    BlockId block = 0;
    std::vector<BlockId> coalition;
    bool carried = false;  // singleton already known to be responsible
};

// Per-block witness, or nullopt when the block has no block-switching pair.
// Blocks holding a single atom listed in `known` are reported as carried without a search.
std::map<BlockId, std::optional<BspWitness>> compute_has_bsp(BlockGame& game, const Partition& partition,
                                                             const std::set<std::size_t>* known = nullptr,
                                                             const HeuristicsConfig& config = {});

struct FrontierInfo {
    StateSet win_with;      // Win(G[C + B])
    StateSet win_without;   // Win(G[C])
    StateSet delta;         // win_with \ win_without
    StateSet frontier;      // reachable states of delta and B with an edge leaving delta
    std::vector<std::size_t> delta_atoms;     // atoms of B meeting delta
    std::vector<std::size_t> frontier_atoms;  // atoms of B meeting the frontier
    std::map<std::size_t, std::size_t> to_winning;  // edges into win_without, per frontier atom
    std::map<std::size_t, std::size_t> to_losing;   // edges out of win_with, per frontier atom
};

FrontierInfo frontier(BlockGame& game, const Partition& partition, const BspWitness& witness);

struct RefineChoice {
    std::size_t atom;
    bool fallback = false;  // frontier empty, picked from B and delta instead
};

RefineChoice refine_block(const FrontierInfo& info, const HeuristicsConfig& config, CounterRng& rng);

struct Candidate {
    BspWitness witness;
    FrontierInfo info;
};

BlockId select_blocks(const std::vector<Candidate>& candidates, const HeuristicsConfig& config, CounterRng& rng);

struct TraceWitness {
    BlockId block;
    std::vector<BlockId> coalition;
    bool carried = false;
    std::optional<std::size_t> delta_size;
    std::optional<std::vector<std::size_t>> frontier_atoms;
};

struct TraceRecord {
    std::size_t iteration = 0;
    std::vector<Partition::Block> partition;
    std::vector<TraceWitness> witnesses;
    std::optional<BlockId> selected;
    std::optional<std::size_t> split_atom;
    bool fallback = false;
};

struct RefinementResult {
    std::vector<std::size_t> responsible;  // atom indices, ascending
    std::vector<TraceRecord> trace;
    std::size_t iterations = 0;            // number of splits
    GameStats stats;
};

RefinementResult refine_loop(BlockGame& game, const HeuristicsConfig& config);
RefinementResult refine_loop(std::shared_ptr<const GameContext> ctx, const PlayerSet& atoms,
                             const HeuristicsConfig& config);

// Refinement for positivity, then exact values restricted to the responsible atoms.
// Values are left absent (with a note) when the responsible set exceeds the Shapley cap.
struct RefinedReport {
    ResponsibilityReport report;
    RefinementResult refinement;
    bool values_refused = false;
};

RefinedReport responsibility_via_refinement(std::shared_ptr<const GameContext> ctx, const PlayerSet& atoms,
                                            const HeuristicsConfig& config, const ShapleyOptions& shapley = {});

// One JSON object per line, atoms and blocks rendered by name.
std::string trace_to_jsonl(const std::vector<TraceRecord>& trace, const PlayerSet& atoms, const TransitionSystem& ts);

}  // namespace backresp
