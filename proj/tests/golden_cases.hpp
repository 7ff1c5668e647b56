#pragma once

// Fixed CLI invocations whose full transcripts are stored under golden/.

#include <string>
#include <vector>

namespace logitpath::testing {

struct GoldenCase {
    std::string name;
    std::vector<std::string> args;
};

inline const std::vector<GoldenCase>& golden_cases() {
    static const std::vector<GoldenCase> cases{
        {"collapsible_decompose", {"decompose", "--spec", "data/collapsible.json", "--verify"}},
        {"collapsible_decompose_json", {"decompose", "--spec", "data/collapsible.json", "--json"}},
        {"collapsible_reduce", {"reduce", "--spec", "data/collapsible.json"}},
        {"collapsible_sensitivity", {"sensitivity", "--spec", "data/collapsible.json", "--verify"}},
        {"collapsible_check", {"check", "--spec", "data/collapsible.json"}},

        {"noncollapsible_decompose", {"decompose", "--spec", "data/noncollapsible.json", "--verify"}},
        {"noncollapsible_reduce", {"reduce", "--spec", "data/noncollapsible.json"}},
        {"noncollapsible_sensitivity", {"sensitivity", "--spec", "data/noncollapsible.json"}},
        {"noncollapsible_check", {"check", "--spec", "data/noncollapsible.json", "--verify"}},

        {"chain_k2_decompose", {"decompose", "--spec", "data/chain_k2.json", "--verify"}},
        {"chain_k2_reduce", {"reduce", "--spec", "data/chain_k2.json", "--verify"}},
        {"chain_k2_reduce_keep", {"reduce", "--spec", "data/chain_k2.json", "--keep", "2=1", "--verify"}},
        {"chain_k2_reduce_json", {"reduce", "--spec", "data/chain_k2.json", "--json"}},
        {"chain_k2_sensitivity", {"sensitivity", "--spec", "data/chain_k2.json"}},
        {"chain_k2_check", {"check", "--spec", "data/chain_k2.json"}},

        {"chain_k2_continuous_reduce",
         {"reduce", "--spec", "data/chain_k2_continuous.json", "--taylor-x0", "0", "--x=-0.5,0,0.5", "--verify"}},
    };
    return cases;
}

// Invocations that must pass --verify cleanly and fail it once the closed
// form is perturbed through the test seam.
inline const std::vector<std::vector<std::string>>& verify_cases() {
    static const std::vector<std::vector<std::string>> cases{
        {"decompose", "--spec", "data/collapsible.json"},
        {"decompose", "--spec", "data/noncollapsible.json"},
        {"decompose", "--spec", "data/chain_k2.json"},
        {"reduce", "--spec", "data/chain_k2.json"},
        {"reduce", "--spec", "data/chain_k2.json", "--keep", "2=0"},
        {"reduce", "--spec", "data/chain_k2_continuous.json"},
        {"sensitivity", "--spec", "data/collapsible.json"},
        {"sensitivity", "--spec", "data/noncollapsible.json"},
        {"check", "--spec", "data/noncollapsible.json"},
    };
    return cases;
}

inline const char* seam_flag = "--test-closed-form-offset";

}  // namespace logitpath::testing
