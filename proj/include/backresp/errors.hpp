#pragma once

#include <stdexcept>
#include <string>

namespace backresp {

// Malformed or semantically invalid input (exit code 2 in the CLI).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured size or time budget would be exceeded (exit code 1 in the CLI).
class Refusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Called with an objective or mode the routine does not handle.
class WrongObjective : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace backresp
