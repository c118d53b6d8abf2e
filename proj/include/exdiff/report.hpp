#pragma once

#include "exdiff/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace exdiff {

struct Counterexample {
    std::string probe;  // smallest failing probe (ordinals / descriptor)
    std::string state;  // basis state where the sides differ
    std::string lhs;
    std::string rhs;
    std::string diff;
};

/// Outcome of one verification campaign; fail <=> counterexample present.
struct Report {
    std::string check;
    std::map<std::string, std::string> params;
    long probes = 0;
    bool pass = true;
    std::optional<Counterexample> counterexample;
    std::vector<std::pair<std::string, GR>> fitted;
    long millis = 0;

    void fail(Counterexample ce) {
        if (pass) {
            pass = false;
            counterexample = std::move(ce);
        }
    }
};

}  // namespace exdiff
