#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reqlattice/algebra.hpp"
#include "reqlattice/error.hpp"
#include "reqlattice/model.hpp"
#include "reqlattice/refinement.hpp"

namespace reqlattice {

// ---------------------------------------------------------------------------
// Catalog documents (.reqcat.json)
//
// Strict schema: unknown keys are rejected at every level, the version must
// be 1, and an applicability scope is either an id array or the string "all".

namespace detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kAllMarker = "all";

inline Error schema_error(const std::string& where, const std::string& what) {
  return Error(ErrorCode::SchemaError, where + ": " + what);
}

inline void check_keys(const json& object, const std::string& where, std::initializer_list<std::string_view> required,
                       std::initializer_list<std::string_view> optional) {
  if (!object.is_object()) throw schema_error(where, "expected an object");
  for (const auto& [key, value] : object.items()) {
    auto known = [&](std::initializer_list<std::string_view> keys) {
      return std::find(keys.begin(), keys.end(), key) != keys.end();
    };
    if (!known(required) && !known(optional)) throw schema_error(where, "unknown key \"" + key + "\"");
  }
  for (auto key : required) {
    if (!object.contains(key)) throw schema_error(where, "missing key \"" + std::string(key) + "\"");
  }
}

inline std::string read_string(const json& object, std::string_view key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return {};
  if (!it->is_string()) throw schema_error(where + "." + std::string(key), "expected a string");
  return it->get<std::string>();
}

inline IdSet read_id_array(const json& value, const std::string& where) {
  if (!value.is_array()) throw schema_error(where, "expected an array of strings");
  IdSet out;
  for (const auto& item : value) {
    if (!item.is_string()) throw schema_error(where, "expected an array of strings");
    if (!out.insert(item.get<std::string>()).second) {
      throw schema_error(where, "duplicate entry \"" + item.get<std::string>() + "\"");
    }
  }
  return out;
}

inline IdSet read_optional_ids(const json& object, std::string_view key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return {};
  return read_id_array(*it, where + "." + std::string(key));
}

inline IdScope read_scope(const json& object, std::string_view key, const std::string& where) {
  const auto& value = object.at(key);
  const std::string path = where + "." + std::string(key);
  if (value.is_string()) {
    if (value.get<std::string>() != kAllMarker) throw schema_error(path, "expected \"all\" or an array of ids");
    return IdScope::everything();
  }
  return IdScope::of(read_id_array(value, path));
}

inline const json& read_array(const json& document, std::string_view key) {
  const auto& value = document.at(key);
  if (!value.is_array()) throw schema_error(std::string(key), "expected an array");
  return value;
}

inline std::string element_path(std::string_view key, std::size_t index) {
  return std::string(key) + "[" + std::to_string(index) + "]";
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline ordered_json scope_json(const IdScope& scope) {
  if (scope.all) return std::string(kAllMarker);
  return ordered_json(std::vector<Id>(scope.ids.begin(), scope.ids.end()));
}

inline ordered_json ids_json(const IdSet& ids) { return ordered_json(std::vector<Id>(ids.begin(), ids.end())); }

}  // namespace detail

// Parses and schema-checks a catalog. Does not run validate().
inline Catalog load_catalog(std::string_view text) {
  using detail::json;
  json document;
  try {
    document = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = detail::line_column(text, e.byte);
    std::string message = e.what();
    if (auto pos = message.find("] "); pos != std::string::npos) message = message.substr(pos + 2);
    throw ParseError(message, line, column);
  }

  detail::check_keys(document, "catalog",
                     {"version", "jurisdictions", "regulations", "products", "requirements", "refinements"}, {});
  const auto& version = document.at("version");
  if (!version.is_number_integer() || version.get<long long>() != kCatalogVersion) {
    throw detail::schema_error("version", "expected 1, got " + version.dump());
  }

  Catalog catalog;
  catalog.version = kCatalogVersion;

  std::size_t i = 0;
  for (const auto& item : detail::read_array(document, "jurisdictions")) {
    const auto where = detail::element_path("jurisdictions", i++);
    detail::check_keys(item, where, {"id"}, {"name"});
    catalog.jurisdictions.push_back({detail::read_string(item, "id", where), detail::read_string(item, "name", where)});
  }

  i = 0;
  for (const auto& item : detail::read_array(document, "regulations")) {
    const auto where = detail::element_path("regulations", i++);
    detail::check_keys(item, where, {"id", "jurisdictions"}, {"title"});
    catalog.regulations.push_back({detail::read_string(item, "id", where), detail::read_string(item, "title", where),
                                   detail::read_scope(item, "jurisdictions", where)});
  }

  i = 0;
  for (const auto& item : detail::read_array(document, "products")) {
    const auto where = detail::element_path("products", i++);
    detail::check_keys(item, where, {"id"}, {"name"});
    catalog.products.push_back({detail::read_string(item, "id", where), detail::read_string(item, "name", where)});
  }

  i = 0;
  for (const auto& item : detail::read_array(document, "requirements")) {
    const auto where = detail::element_path("requirements", i++);
    detail::check_keys(item, where, {"id", "kind", "applies_to_products", "applies_to_jurisdictions"},
                       {"title", "derived_from", "human_factors"});
    Requirement q;
    q.id = detail::read_string(item, "id", where);
    auto kind_text = detail::read_string(item, "kind", where);
    if (kind_text != "RL" && kind_text != "RFN") {
      throw detail::schema_error(where + ".kind", "expected \"RL\" or \"RFN\", got \"" + kind_text + "\"");
    }
    q.kind = *parse_kind(kind_text);
    q.title = detail::read_string(item, "title", where);
    q.derived_from = detail::read_optional_ids(item, "derived_from", where);
    q.human_factors = detail::read_optional_ids(item, "human_factors", where);
    q.applies_to_products = detail::read_scope(item, "applies_to_products", where);
    q.applies_to_jurisdictions = detail::read_scope(item, "applies_to_jurisdictions", where);
    catalog.requirements.push_back(std::move(q));
  }

  i = 0;
  for (const auto& item : detail::read_array(document, "refinements")) {
    const auto where = detail::element_path("refinements", i++);
    detail::check_keys(item, where, {"stronger", "weaker"}, {});
    catalog.refinements.push_back(
        {detail::read_string(item, "stronger", where), detail::read_string(item, "weaker", where)});
  }
  return catalog;
}

inline Catalog load_catalog_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_catalog(text);
}

// Canonical form: schema key order, collections sorted by id, 2-space
// indentation, trailing newline.
inline std::string save_catalog(const Catalog& input) {
  using detail::ordered_json;
  const Catalog catalog = canonicalize(input);

  ordered_json document;
  document["version"] = catalog.version;

  document["jurisdictions"] = ordered_json::array();
  for (const auto& j : catalog.jurisdictions) {
    ordered_json o;
    o["id"] = j.id;
    o["name"] = j.name;
    document["jurisdictions"].push_back(std::move(o));
  }

  document["regulations"] = ordered_json::array();
  for (const auto& r : catalog.regulations) {
    ordered_json o;
    o["id"] = r.id;
    o["title"] = r.title;
    o["jurisdictions"] = detail::scope_json(r.jurisdictions);
    document["regulations"].push_back(std::move(o));
  }

  document["products"] = ordered_json::array();
  for (const auto& p : catalog.products) {
    ordered_json o;
    o["id"] = p.id;
    o["name"] = p.name;
    document["products"].push_back(std::move(o));
  }

  document["requirements"] = ordered_json::array();
  for (const auto& q : catalog.requirements) {
    ordered_json o;
    o["id"] = q.id;
    o["kind"] = std::string(to_string(q.kind));
    o["title"] = q.title;
    o["derived_from"] = detail::ids_json(q.derived_from);
    o["human_factors"] = detail::ids_json(q.human_factors);
    o["applies_to_products"] = detail::scope_json(q.applies_to_products);
    o["applies_to_jurisdictions"] = detail::scope_json(q.applies_to_jurisdictions);
    document["requirements"].push_back(std::move(o));
  }

  document["refinements"] = ordered_json::array();
  for (const auto& e : catalog.refinements) {
    ordered_json o;
    o["stronger"] = e.stronger;
    o["weaker"] = e.weaker;
    document["refinements"].push_back(std::move(o));
  }

  return document.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Architectural dependency views (.dot)

enum class ViewKind { CountryCentred, ProductCentred, Global };

inline std::string_view to_string(ViewKind kind) {
  switch (kind) {
    case ViewKind::CountryCentred: return "country";
    case ViewKind::ProductCentred: return "product";
    case ViewKind::Global: return "global";
  }
  return "?";
}

inline std::optional<ViewKind> parse_view_kind(std::string_view text) {
  if (text == "country") return ViewKind::CountryCentred;
  if (text == "product") return ViewKind::ProductCentred;
  if (text == "global") return ViewKind::Global;
  return std::nullopt;
}

struct GraphNode {
  std::string id;
  std::string title;
  std::vector<Id> members;  // requirement or regulation ids listed in the label
};

struct GraphEdge {
  std::string from;
  std::string to;
};

struct GraphView {
  ViewKind kind = ViewKind::Global;
  std::string name;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  const GraphNode* find(std::string_view id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const GraphNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
  }
};

namespace detail {

inline GraphNode set_node(std::string id, std::string title, const RequirementSet& members) {
  return {std::move(id), std::move(title), members.to_vector()};
}

inline GraphNode set_node(std::string id, std::string title, const IdSet& members) {
  return {std::move(id), std::move(title), std::vector<Id>(members.begin(), members.end())};
}

inline std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

// Fig. 1 layout: RegulC_j split into core and complement, feeding the RL
// general/specific partitions of every product, with the RFN partitions beside them.
inline GraphView country_view(const Catalog& catalog, const Id& jurisdiction) {
  catalog.jurisdiction(jurisdiction);
  const auto shared = shared_regulations(catalog);
  GraphView view;
  view.kind = ViewKind::CountryCentred;
  view.name = "country_" + jurisdiction;
  view.nodes.push_back(set_node("core", "Regul (shared)", shared.core));
  view.nodes.push_back(
      set_node("complement:" + jurisdiction, "RegulC' " + jurisdiction, shared.complements.at(jurisdiction)));

  std::vector<Product> products = catalog.products;
  std::sort(products.begin(), products.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& p : products) {
    auto rl = partition_general_specific(catalog, p.id, RequirementKind::RL);
    auto rfn = partition_general_specific(catalog, p.id, RequirementKind::RFN);
    view.nodes.push_back(set_node("RLgeneral:" + p.id, "RLgeneral " + p.id, rl.general));
    view.nodes.push_back(
        set_node("RLspecific:" + p.id, "RLspecific " + p.id + " " + jurisdiction, rl.specific.at(jurisdiction)));
    view.nodes.push_back(set_node("RFNgeneral:" + p.id, "RFNgeneral " + p.id, rfn.general));
    view.nodes.push_back(
        set_node("RFNspecific:" + p.id, "RFNspecific " + p.id + " " + jurisdiction, rfn.specific.at(jurisdiction)));
    view.edges.push_back({"core", "RLgeneral:" + p.id});
    view.edges.push_back({"complement:" + jurisdiction, "RLspecific:" + p.id});
  }
  return view;
}

// Fig. 2 layout: R^{P_i} assembled from the general parts and the
// per-jurisdiction specific parts, then reduced to its strongest set.
inline GraphView product_view(const Catalog& catalog, const RefinementGraph& graph, const Id& product) {
  catalog.product(product);
  GraphView view;
  view.kind = ViewKind::ProductCentred;
  view.name = "product_" + product;
  const std::string union_id = "R:" + product;
  const std::string strongest_id = "R*:" + product;
  view.nodes.push_back(set_node(union_id, "R " + product, product_union(catalog, product)));
  view.nodes.push_back(set_node(strongest_id, "R* " + product, strongest_product(catalog, graph, product)));
  view.edges.push_back({union_id, strongest_id});
  if (catalog.jurisdictions.empty()) return view;

  auto rl = partition_general_specific(catalog, product, RequirementKind::RL);
  auto rfn = partition_general_specific(catalog, product, RequirementKind::RFN);
  view.nodes.push_back(set_node("RLgeneral", "RLgeneral " + product, rl.general));
  view.nodes.push_back(set_node("RFNgeneral", "RFNgeneral " + product, rfn.general));
  view.edges.push_back({"RLgeneral", union_id});
  view.edges.push_back({"RFNgeneral", union_id});
  for (const auto& [j, members] : rl.specific) {
    view.nodes.push_back(set_node("RLspecific:" + j, "RLspecific " + product + " " + j, members));
    view.nodes.push_back(set_node("RFNspecific:" + j, "RFNspecific " + product + " " + j, rfn.specific.at(j)));
    view.edges.push_back({"RLspecific:" + j, union_id});
    view.edges.push_back({"RFNspecific:" + j, union_id});
  }
  return view;
}

// Fig. 3 layout: every (product, jurisdiction) RL projection feeds both the
// jurisdiction's RL^min and its union RL^{C_j}; each union is reduced to
// RL^{C_j}* and all of them lead to the global strongest set R*.
inline GraphView global_view(const Catalog& catalog, const RefinementGraph& graph) {
  GraphView view;
  view.kind = ViewKind::Global;
  view.name = "global";
  if (catalog.products.empty() || catalog.jurisdictions.empty()) return view;

  const Catalog sorted = canonicalize(catalog);
  for (const auto& j : sorted.jurisdictions) {
    for (const auto& p : sorted.products) {
      const std::string id = "RL:" + p.id + ":" + j.id;
      view.nodes.push_back(set_node(id, "RL " + p.id + " " + j.id,
                                    requirements_for(catalog, p.id, j.id, RequirementKind::RL)));
      view.edges.push_back({id, "RLmin:" + j.id});
      view.edges.push_back({id, "RL:" + j.id});
    }
    view.nodes.push_back(set_node("RLmin:" + j.id, "RLmin " + j.id, rl_min(catalog, j.id)));
    view.nodes.push_back(set_node("RL:" + j.id, "RL " + j.id, jurisdiction_rl(catalog, j.id)));
    view.nodes.push_back(set_node("RL*:" + j.id, "RL* " + j.id, strongest_rl(catalog, graph, j.id)));
    view.edges.push_back({"RL:" + j.id, "RL*:" + j.id});
    view.edges.push_back({"RL*:" + j.id, "R*"});
  }
  view.nodes.push_back(set_node("R*", "R*", strongest_global(catalog, graph)));
  return view;
}

}  // namespace detail

inline GraphView build_view(const Catalog& catalog, const RefinementGraph& graph, ViewKind kind,
                            const std::optional<Id>& focus = std::nullopt) {
  switch (kind) {
    case ViewKind::CountryCentred:
      if (!focus) throw Error(ErrorCode::FocusRequired, "country view needs a jurisdiction focus");
      return detail::country_view(catalog, *focus);
    case ViewKind::ProductCentred:
      if (!focus) throw Error(ErrorCode::FocusRequired, "product view needs a product focus");
      return detail::product_view(catalog, graph, *focus);
    case ViewKind::Global:
      if (focus) throw Error(ErrorCode::FocusForbidden, "global view takes no focus");
      return detail::global_view(catalog, graph);
  }
  throw Error(ErrorCode::FocusForbidden, "unknown view kind");
}

inline std::string to_dot(const GraphView& view) {
  std::ostringstream out;
  out << "digraph " << detail::dot_quote(view.name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& node : view.nodes) {
    std::string label = node.title;
    if (node.members.empty()) {
      label += "\n(empty)";
    } else {
      for (const auto& m : node.members) label += "\n" + m;
    }
    out << "  " << detail::dot_quote(node.id) << " [label=" << detail::dot_quote(label) << "];\n";
  }
  for (const auto& edge : view.edges) {
    out << "  " << detail::dot_quote(edge.from) << " -> " << detail::dot_quote(edge.to) << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_view(const Catalog& catalog, const RefinementGraph& graph, ViewKind kind,
                               const std::optional<Id>& focus = std::nullopt) {
  return to_dot(build_view(catalog, graph, kind, focus));
}

}  // namespace reqlattice
