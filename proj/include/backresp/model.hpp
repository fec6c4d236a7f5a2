#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "backresp/errors.hpp"
#include "backresp/state_set.hpp"

namespace backresp {

// Finite, total, directed graph with named states and one initial state.
// Successor lists are sorted and free of duplicates.
class TransitionSystem {
public:
    TransitionSystem() = default;

    // Validates names, endpoints and totality; throws InputError.
    TransitionSystem(std::vector<std::string> names, StateId initial,
                     std::vector<std::vector<StateId>> successors);

    // Same graph, different edges. Edges must already be sorted, unique and total.
    TransitionSystem with_edges(std::vector<std::uint32_t> offsets, std::vector<StateId> targets) const;

    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t transition_count() const { return targets_.size(); }
    StateId initial() const { return initial_; }

    std::span<const StateId> successors(StateId s) const {
        return {targets_.data() + offsets_[s.index], targets_.data() + offsets_[s.index + 1]};
    }
    bool has_edge(StateId from, StateId to) const;

    const std::string& name(StateId s) const { return (*names_)[s.index]; }
    const std::vector<std::string>& names() const { return *names_; }
    std::optional<StateId> find(std::string_view name) const;
    StateId lookup(std::string_view name) const;  // throws InputError

private:
    std::shared_ptr<const std::vector<std::string>> names_;
    std::shared_ptr<const std::unordered_map<std::string, std::uint32_t>> index_;
    StateId initial_{};
    std::vector<std::uint32_t> offsets_;
    std::vector<StateId> targets_;
};

enum class ObjectiveKind { safety, reachability, buechi, parity };

std::string_view to_string(ObjectiveKind k);
ObjectiveKind objective_kind_from_string(std::string_view s);  // throws InputError

// Safety avoids the target forever, reachability visits it, Buechi visits it
// infinitely often, parity wants the maximal colour seen infinitely often even.
class Objective {
public:
    static Objective safety(StateSet bad) { return {ObjectiveKind::safety, std::move(bad), {}}; }
    static Objective reachability(StateSet goal) { return {ObjectiveKind::reachability, std::move(goal), {}}; }
    static Objective buechi(StateSet accepting) { return {ObjectiveKind::buechi, std::move(accepting), {}}; }
    static Objective parity(std::vector<unsigned> colours);

    ObjectiveKind kind() const { return kind_; }
    const StateSet& target() const { return target_; }
    const std::vector<unsigned>& colours() const { return colours_; }
    unsigned colour(StateId s) const { return colours_[s.index]; }

    friend bool operator==(const Objective&, const Objective&) = default;

private:
    Objective(ObjectiveKind k, StateSet t, std::vector<unsigned> c)
        : kind_(k), target_(std::move(t)), colours_(std::move(c)) {}

    ObjectiveKind kind_ = ObjectiveKind::safety;
    StateSet target_;
    std::vector<unsigned> colours_;
};

// Ultimately periodic run prefix . loop^omega.
struct LassoRun {
    std::vector<StateId> prefix;
    std::vector<StateId> loop;

    friend bool operator==(const LassoRun&, const LassoRun&) = default;
};

struct RunValidation {
    bool ok = true;
    std::string message;
};

RunValidation validate_run(const TransitionSystem& ts, const LassoRun& run);

// Throws InputError carrying the diagnostic when the run is invalid.
void require_valid_run(const TransitionSystem& ts, const LassoRun& run);

bool violates(const LassoRun& run, const Objective& obj);

class NoViolation : public std::runtime_error {
public:
    NoViolation() : std::runtime_error("every run of the system satisfies the objective") {}
};

// Deterministic search for a simple violating lasso; throws NoViolation.
LassoRun find_violating_run(const TransitionSystem& ts, const Objective& obj);

// Positions of a valid run: index order is prefix first, then loop.
class RunPosition {
public:
    RunPosition() = default;
    RunPosition(const LassoRun& run, std::size_t num_states);

    bool on_run(StateId s) const { return index_[s.index] >= 0; }
    bool in_loop(StateId s) const { return on_run(s) && static_cast<std::size_t>(index_[s.index]) >= prefix_len_; }
    std::size_t index(StateId s) const { return static_cast<std::size_t>(index_[s.index]); }
    StateId successor(StateId s) const { return next_[s.index]; }
    std::size_t length() const { return order_.size(); }
    std::size_t prefix_length() const { return prefix_len_; }
    StateId at(std::size_t i) const { return order_[i]; }
    const std::vector<StateId>& states() const { return order_; }
    StateSet as_set() const;

private:
    std::vector<int> index_;
    std::vector<StateId> next_;
    std::vector<StateId> order_;
    std::size_t prefix_len_ = 0;
};

}  // namespace backresp
