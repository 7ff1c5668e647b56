#pragma once

// Spec file: one JSON document describing a mediator chain, parsed strictly
// (unknown keys are errors, omitted coefficients are zero).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "logitpath/model.hpp"

namespace logitpath {

inline constexpr const char* schema_version = "1";

struct SweepGrid {
    std::vector<double> beta_w;
    std::vector<double> beta_xw;
    std::vector<double> gamma_x;

    bool empty() const { return beta_w.empty() && beta_xw.empty() && gamma_x.empty(); }
};

struct RunOptions {
    std::optional<double> tolerance;
    std::optional<double> taylor_x0;
    SweepGrid sweep;
};

struct SpecFile {
    std::string schema_version;
    SystemSpec system;
    std::vector<double> x_grid;  // evaluation points, continuous treatment only
    RunOptions options;
};

// Throw Error(parse) on malformed documents or schema violations.
SpecFile parse_spec(const nlohmann::json& doc);
SpecFile load_spec(const std::filesystem::path& path);

// Serializes in the spec-file vocabulary (covariates by name); terms beyond
// second order go to "beta_higher".
nlohmann::ordered_json outcome_to_json(const OutcomeModel& model, const SystemSpec& context);
nlohmann::ordered_json mediator_to_json(const MediatorModel& model, const SystemSpec& context);
nlohmann::ordered_json spec_to_json(const SpecFile& file);

}  // namespace logitpath
