#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "backresp/ingest/explicit.hpp"

namespace backresp {

enum class Family { clouds, exp_coalitions, frontier_stress_reach, frontier_stress_safety, almost_empty_frontier,
                    centrifuge_analog };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);  // throws InputError

struct GeneratorSpec {
    Family family = Family::clouds;
    std::size_t size = 3;
    std::optional<std::size_t> faulty;  // centrifuge-analog: 1-based index of the centrifuge with the early-abort guard
};

struct GeneratedModel {
    TransitionSystem ts;
    Objective objective = Objective::safety(StateSet(0));
    std::optional<LassoRun> run;  // absent when no run violates the objective
    std::optional<PlayerSet> groups;
    std::string mode;  // analysis mode the family is meant for
};

// Deterministic. Throws InputError when the size is out of range.
GeneratedModel generate(const GeneratorSpec& spec);
ExplicitModelDoc generate_doc(const GeneratorSpec& spec);

// Module-language source for clouds(k); expands to a graph isomorphic to generate(clouds, k).
std::string clouds_program(std::size_t k);

// Module-language source for the centrifuge-analog family (a reconstruction, not the original lab model).
std::string centrifuge_program(std::size_t centrifuges, std::optional<std::size_t> faulty);

}  // namespace backresp
