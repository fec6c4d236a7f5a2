#pragma once

#include <chrono>
#include <optional>

#include "backresp/errors.hpp"

namespace backresp {

// Wall-clock budget shared by long-running analyses.
class Deadline {
public:
    Deadline() = default;
    static Deadline after_seconds(double seconds) {
        Deadline d;
        d.at_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
        return d;
    }

    bool expired() const { return at_ && std::chrono::steady_clock::now() >= *at_; }
    void check() const {
        if (expired()) throw Refusal("time budget exceeded");
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace backresp
