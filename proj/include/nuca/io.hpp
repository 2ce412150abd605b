// JSON file schemas for rule sets, distributions, configurations, and
// templates, plus the PGM space-time emitter. Parsing reports the offending
// key on schema violations; emission is byte-deterministic.
#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "nuca/core.hpp"

namespace nuca {
namespace io {

using Json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DistFile {
    RuleSet rules;
    DistPresentation dist;
    std::filesystem::path ruleset_path;
};

using ParsedFile = std::variant<RuleSet, DistFile, Configuration, Template>;

RuleSet parse_ruleset(const Json& j);
// Rule words may reference rules by name or by index.
DistPresentation parse_distribution_body(const Json& j, const RuleSet& rules,
                                         std::uint64_t cell_budget);
Configuration parse_configuration(const Json& j);
Template parse_template(const Json& j, std::uint64_t cell_budget);

RuleSet load_ruleset(const std::filesystem::path& path);
DistFile load_distribution(const std::filesystem::path& path, std::uint64_t cell_budget);
Configuration load_configuration(const std::filesystem::path& path);
Template load_template(const std::filesystem::path& path, std::uint64_t cell_budget);

// Dispatches on content: "rules" -> RuleSet, "template_symbols" -> Template,
// "ruleset" -> distribution, otherwise a configuration.
ParsedFile parse_spec_file(const std::filesystem::path& path, std::uint64_t cell_budget = 1u << 20);

Json emit_ruleset(const RuleSet& rules);
Json emit_distribution(const DistPresentation& dist, const RuleSet& rules,
                       const std::string& ruleset_ref);
Json emit_configuration(const Configuration& c);

// P2 grayscale, one row per time step, state v drawn as floor(255 v/(s-1)).
std::string spacetime_pgm(const std::vector<Pattern>& rows, std::uint32_t alphabet_size);
void emit_spacetime(const std::vector<Pattern>& rows, std::uint32_t alphabet_size,
                    const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

}  // namespace io
}  // namespace nuca
