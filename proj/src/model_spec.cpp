#include "cutofflab/model_spec.hpp"

#include <fstream>
#include <map>

#include "cutofflab/error.hpp"

namespace cutofflab {

namespace {

using nlohmann::json;

template <class T>
T required(const json& spec, const char* key) {
  if (!spec.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("spec is missing \"") + key + "\"");
  try {
    return spec.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad value for \"") + key + "\": " + e.what());
  }
}

json spin_info(const SpinModel& m) {
  return {{"max_degree", m.max_degree},       {"M", m.M},
          {"d", m.d},                         {"condition_value", m.condition_value},
          {"condition_holds", m.condition_holds}, {"M_bound", m.M_bound},
          {"d_bound", m.d_bound},             {"M_within_bound", m.M <= m.M_bound * (1 + 1e-12)},
          {"d_within_bound", m.d <= m.d_bound * (1 + 1e-12)}};
}

std::size_t factorial_size(const MarkovChain& chain) {
  std::size_t n = 1, f = 1;
  while (f < chain.size()) f *= ++n;
  return f == chain.size() ? n : 0;
}

StateMap parse_map(const json& map, const Model& inner) {
  if (map.is_string()) {
    const auto name = map.get<std::string>();
    if (name == "coordinate_sum") {
      if (inner.kind != "hypercube") throw Error(ErrorCode::InvalidInput, "coordinate_sum needs a hypercube inner model");
      return coordinate_sum_map(inner.spec.at("n").get<int>());
    }
    if (name == "bernoulli_laplace") {
      const std::size_t n = factorial_size(inner.chain);
      if (n == 0) throw Error(ErrorCode::InvalidInput, "bernoulli_laplace map needs an inner walk on all of S_n");
      return bernoulli_laplace_map(static_cast<int>(n));
    }
    if (name == "multislice_to_bernoulli_laplace") {
      if (inner.kind != "multislice") throw Error(ErrorCode::InvalidInput, "this map needs a multislice inner model");
      return multislice_to_bernoulli_laplace_map(inner.spec.at("kappa").get<std::vector<int>>());
    }
    throw Error(ErrorCode::InvalidInput, "unknown projection map \"" + name + "\"");
  }
  if (map.is_object() && map.contains("multislice")) {
    const auto kappa = map.at("multislice").get<std::vector<int>>();
    int n = 0;
    for (int k : kappa) n += k;
    if (factorial_size(inner.chain) != static_cast<std::size_t>(n))
      throw Error(ErrorCode::InvalidInput, "multislice map needs an inner walk on all of S_n with n = sum kappa");
    return multislice_map(kappa);
  }
  if (map.is_object() && map.contains("labels")) {
    const auto names = map.at("labels").get<std::vector<std::string>>();
    if (names.size() != inner.chain.size())
      throw Error(ErrorCode::InvalidInput, "explicit map needs one label per inner state");
    StateMap phi;
    std::map<std::string, Index> seen;
    for (const auto& s : names) {
      auto [it, fresh] = seen.emplace(s, static_cast<Index>(phi.labels.size()));
      if (fresh) phi.labels.push_back(s);
      phi.image.push_back(it->second);
    }
    return phi;
  }
  throw Error(ErrorCode::InvalidInput, "projection map must be a name, {\"multislice\": [...]} or {\"labels\": [...]}");
}

Model from_matrix(const json& spec, const std::filesystem::path& base_dir) {
  if (spec.contains("rows")) {
    const auto rows = spec.at("rows").get<std::vector<std::vector<double>>>();
    const auto n = static_cast<Index>(rows.size());
    DenseMatrix T(n, n);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != n)
        throw Error(ErrorCode::InvalidInput, "matrix rows must form a square matrix");
      for (Index j = 0; j < n; ++j) T(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    std::vector<std::string> labels;
    if (spec.contains("labels")) labels = spec.at("labels").get<std::vector<std::string>>();
    return {"matrix", spec, build_chain(T, std::move(labels))};
  }
  const auto file = base_dir / required<std::string>(spec, "file");
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open matrix file " + file.string());
  SparseMatrix T = read_sparse_matrix(in);
  std::vector<std::string> labels;
  if (spec.contains("labels")) {
    std::ifstream lin(base_dir / spec.at("labels").get<std::string>());
    if (!lin) throw Error(ErrorCode::InvalidInput, "cannot open label file");
    labels = read_labels(lin, static_cast<std::size_t>(T.rows()));
  }
  return {"matrix", spec, build_chain(std::move(T), std::move(labels))};
}

}  // namespace

Graph parse_graph(const json& spec) {
  if (spec.contains("family")) return Graph::family(required<std::string>(spec, "family"), required<int>(spec, "n"));
  return Graph(required<int>(spec, "vertices"), required<std::vector<std::pair<int, int>>>(spec, "edges"));
}

Model build_model(const json& spec, const std::filesystem::path& base_dir) {
  if (!spec.is_object()) throw Error(ErrorCode::InvalidInput, "model spec must be a JSON object");
  const auto kind = required<std::string>(spec, "model");
  Model m;
  m.kind = kind;
  m.spec = spec;
  if (kind == "two_state") {
    m.chain = build_two_state();
  } else if (kind == "hypercube") {
    m.chain = build_hypercube(required<int>(spec, "n"));
  } else if (kind == "complete") {
    m.chain = build_complete_graph_walk(required<int>(spec, "n"));
  } else if (kind == "transpositions" || kind == "conjugacy_class") {
    const int n = required<int>(spec, "n");
    const std::vector<int> type = kind == "transpositions" ? std::vector<int>{2} : required<std::vector<int>>(spec, "cycle_type");
    auto walk = build_conjugacy_class_walk(n, type);
    m.chain = std::move(walk.chain);
    m.info = {{"complexity", walk.complexity},
              {"class_size", walk.class_size},
              {"conjugation_invariant", walk.conjugation_invariant}};
  } else if (kind == "group_walk") {
    GroupTable g;
    if (spec.contains("table")) {
      g.mul = required<std::vector<std::vector<Index>>>(spec, "table");
    } else {
      const auto group = required<std::string>(spec, "group");
      const int n = required<int>(spec, "n");
      if (group == "symmetric") g = GroupTable::symmetric(n);
      else if (group == "cube") g = GroupTable::cyclic_power(n);
      else throw Error(ErrorCode::InvalidInput, "unknown group \"" + group + "\"");
    }
    const auto mu = required<std::vector<double>>(spec, "mu");
    auto walk = build_group_walk(g, mu);
    m.chain = std::move(walk.chain);
    m.origin = g.identity();
    m.info = {{"conjugation_invariant", walk.conjugation_invariant}};
    if (walk.counterexample) m.info["counterexample"] = {walk.counterexample->first, walk.counterexample->second};
  } else if (kind == "multislice") {
    m.chain = build_multislice(required<std::vector<int>>(spec, "kappa"));
  } else if (kind == "ehrenfest") {
    m.chain = build_ehrenfest(required<int>(spec, "n"));
  } else if (kind == "bernoulli_laplace") {
    m.chain = build_bernoulli_laplace(required<int>(spec, "n"));
  } else if (kind == "ising") {
    auto sm = build_ising(parse_graph(required<json>(spec, "graph")), required<double>(spec, "beta"));
    m.info = spin_info(sm);
    m.chain = std::move(sm.chain);
  } else if (kind == "hardcore") {
    auto sm = build_hardcore(parse_graph(required<json>(spec, "graph")), required<double>(spec, "lambda"));
    m.info = spin_info(sm);
    m.chain = std::move(sm.chain);
  } else if (kind == "projection") {
    const Model inner = build_model(required<json>(spec, "inner"), base_dir);
    const StateMap phi = parse_map(required<json>(spec, "map"), inner);
    m.chain = project(inner.chain, phi);
    m.origin = phi.image[static_cast<std::size_t>(inner.origin)];
    m.info = {{"inner_states", inner.chain.size()}};
  } else if (kind == "lazy") {
    const Model inner = build_model(required<json>(spec, "inner"), base_dir);
    m.chain = lazify(inner.chain, required<double>(spec, "theta"));
    m.origin = inner.origin;
  } else if (kind == "matrix") {
    m = from_matrix(spec, base_dir);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown model \"" + kind + "\"");
  }
  if (spec.contains("origin")) {
    const auto o = required<Index>(spec, "origin");
    if (o < 0 || o >= static_cast<Index>(m.chain.size())) throw Error(ErrorCode::InvalidInput, "origin out of range");
    m.origin = o;
  }
  return m;
}

Model load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open spec file " + file.string());
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "spec file is not valid JSON: " + std::string(e.what()));
  }
  return build_model(spec, file.parent_path());
}

}  // namespace cutofflab
