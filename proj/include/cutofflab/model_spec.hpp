#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cutofflab/graph.hpp"
#include "cutofflab/models.hpp"

namespace cutofflab {

/// A built model: the chain, the spec it came from, a distinguished origin
/// state and builder-specific facts (condition reports, class data).
struct Model {
  std::string kind;
  nlohmann::json spec;
  MarkovChain chain;
  Index origin = 0;
  nlohmann::json info = nlohmann::json::object();
};

/// Builds a model from a JSON spec; the schema is documented in README.md.
/// Relative matrix paths resolve against `base_dir`.
/// Throws Error(InvalidInput) on malformed specs and propagates builder errors.
Model build_model(const nlohmann::json& spec, const std::filesystem::path& base_dir = {});
Model load_model(const std::filesystem::path& file);

/// {"vertices": n, "edges": [[i,j],...]} or {"family": name, "n": n}.
Graph parse_graph(const nlohmann::json& spec);

}  // namespace cutofflab
