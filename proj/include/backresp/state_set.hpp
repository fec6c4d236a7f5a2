#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace backresp {

// Dense index of a state inside one transition system.
struct StateId {
    std::uint32_t index = 0;

    constexpr StateId() = default;
    constexpr explicit StateId(std::uint32_t i) : index(i) {}
    constexpr explicit StateId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
    constexpr explicit StateId(int i) : index(static_cast<std::uint32_t>(i)) {}

    friend constexpr auto operator<=>(StateId, StateId) = default;
};

// Fixed-universe bitset over StateIds.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static StateSet full(std::size_t universe) {
        StateSet s(universe);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    template <class Range>
    static StateSet of(std::size_t universe, const Range& ids) {
        StateSet s(universe);
        for (StateId id : ids) s.insert(id);
        return s;
    }

    std::size_t universe() const { return universe_; }

    bool contains(StateId s) const { return (words_[s.index >> 6] >> (s.index & 63)) & 1U; }
    void insert(StateId s) { words_[s.index >> 6] |= std::uint64_t{1} << (s.index & 63); }
    void erase(StateId s) { words_[s.index >> 6] &= ~(std::uint64_t{1} << (s.index & 63)); }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    StateSet& operator|=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    StateSet& operator&=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    StateSet& operator-=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    StateSet complement() const {
        StateSet r(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    bool subset_of(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                unsigned b = static_cast<unsigned>(std::countr_zero(w));
                f(StateId(static_cast<std::uint32_t>(i * 64 + b)));
                w &= w - 1;
            }
        }
    }

    std::vector<StateId> to_vector() const {
        std::vector<StateId> out;
        for_each([&](StateId s) { out.push_back(s); });
        return out;
    }

    std::size_t hash() const {
        std::size_t h = universe_;
        for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ULL;
        return h;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    void trim() {
        if (universe_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

}  // namespace backresp
