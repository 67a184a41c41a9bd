#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reqlattice/algebra.hpp"
#include "reqlattice/analysis.hpp"
#include "reqlattice/io.hpp"
#include "reqlattice/model.hpp"
#include "reqlattice/refinement.hpp"

namespace reqlattice::cli {

// Process exit codes.
enum ExitStatus : int {
  kSuccess = 0,
  kValidationFailed = 1,
  kUsageError = 2,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json ids_json(const RequirementSet& set) { return ordered_json(set.to_vector()); }
inline ordered_json ids_json(const IdSet& set) { return ordered_json(std::vector<Id>(set.begin(), set.end())); }

inline void emit_json(std::ostream& out, const ordered_json& document) { out << document.dump(2) << "\n"; }

inline std::string paint(const Streams& io, std::string_view text, std::string_view ansi) {
  if (!io.color) return std::string(text);
  return "\x1b[" + std::string(ansi) + "m" + std::string(text) + "\x1b[0m";
}

inline ordered_json issue_json(const Issue& issue) {
  ordered_json o;
  o["code"] = issue.code;
  o["message"] = issue.message;
  o["ids"] = issue.ids;
  return o;
}

inline ordered_json report_json(const ValidationReport& report) {
  ordered_json o;
  o["ok"] = report.ok();
  o["errors"] = ordered_json::array();
  for (const auto& issue : report.errors) o["errors"].push_back(issue_json(issue));
  o["warnings"] = ordered_json::array();
  for (const auto& issue : report.warnings) o["warnings"].push_back(issue_json(issue));
  return o;
}

inline void print_report(const Streams& io, std::ostream& out, const ValidationReport& report) {
  for (const auto& issue : report.errors) {
    out << paint(io, "error", "31") << " " << issue.code << ": " << issue.message << "\n";
  }
  for (const auto& issue : report.warnings) {
    out << paint(io, "warning", "33") << " " << issue.code << ": " << issue.message << "\n";
  }
  out << report.errors.size() << " error(s), " << report.warnings.size() << " warning(s)\n";
}

inline void print_list(std::ostream& out, const RequirementSet& set, std::string_view indent = "") {
  for (const auto& id : set) out << indent << id << "\n";
}

inline std::string join(const IdSet& ids) {
  return reqlattice::detail::join(std::vector<Id>(ids.begin(), ids.end()));
}

// Loads and validates; analytical commands refuse catalogs with errors.
struct Loaded {
  Catalog catalog;
  RefinementGraph graph;
};

inline std::optional<Loaded> load_validated(const Streams& io, const std::string& path, int& status) {
  Catalog catalog = load_catalog_file(path);
  auto report = validate(catalog);
  if (!report.ok()) {
    io.err << "catalog '" << path << "' has validation errors:\n";
    print_report(io, io.err, report);
    status = kValidationFailed;
    return std::nullopt;
  }
  auto graph = build_graph(catalog);
  return Loaded{std::move(catalog), std::move(graph)};
}

}  // namespace detail

struct Options {
  bool json = false;
  std::string catalog;
  std::optional<std::string> product;
  std::optional<std::string> jurisdiction;
  std::optional<std::string> regulation;
  std::optional<std::string> kind;
  std::optional<std::string> view;
  std::optional<std::string> focus;
  std::optional<std::string> out_path;
  bool rl = false;
  bool min = false;
  bool global = false;
};

inline int cmd_validate(const Options& opt, const Streams& io) {
  auto catalog = load_catalog_file(opt.catalog);
  auto report = validate_with_diagnostics(catalog);
  if (opt.json) {
    detail::emit_json(io.out, detail::report_json(report));
  } else {
    detail::print_report(io, io.out, report);
  }
  return report.ok() ? kSuccess : kValidationFailed;
}

inline int cmd_sets(const Options& opt, const Streams& io) {
  const bool projection = opt.product.has_value();
  if (projection && (opt.rl || opt.min)) throw CLI::ValidationError("--rl/--min cannot be combined with --product");
  if (opt.rl && opt.min) throw CLI::ValidationError("--rl and --min are mutually exclusive");
  if (!projection && opt.kind) throw CLI::ValidationError("--kind needs --product");
  if (!projection && !(opt.jurisdiction && (opt.rl || opt.min))) {
    throw CLI::ValidationError("choose --product P [--jurisdiction C] [--kind rl|rfn], --jurisdiction C --rl, or "
                               "--jurisdiction C --min");
  }
  std::optional<RequirementKind> kind;
  if (opt.kind) {
    kind = parse_kind(*opt.kind);
    if (!kind) throw CLI::ValidationError("--kind must be rl or rfn");
  }

  int status = kSuccess;
  auto loaded = detail::load_validated(io, opt.catalog, status);
  if (!loaded) return status;
  const auto& catalog = loaded->catalog;

  std::string construct;
  RequirementSet result;
  if (projection && opt.jurisdiction) {
    construct = "projection";
    result = requirements_for(catalog, *opt.product, *opt.jurisdiction, kind);
  } else if (projection) {
    construct = "product_union";
    result = product_union(catalog, *opt.product);
    if (kind) {
      RequirementSet filtered;
      for (const auto& id : result) {
        if (catalog.requirement(id).kind == *kind) filtered.insert(id);
      }
      result = std::move(filtered);
    }
  } else if (opt.rl) {
    construct = "jurisdiction_rl";
    result = jurisdiction_rl(catalog, *opt.jurisdiction);
  } else {
    construct = "rl_min";
    result = rl_min(catalog, *opt.jurisdiction);
  }

  if (opt.json) {
    detail::ordered_json o;
    o["construct"] = construct;
    o["product"] = opt.product ? detail::ordered_json(*opt.product) : detail::ordered_json(nullptr);
    o["jurisdiction"] = opt.jurisdiction ? detail::ordered_json(*opt.jurisdiction) : detail::ordered_json(nullptr);
    o["kind"] = kind ? detail::ordered_json(std::string(to_string(*kind))) : detail::ordered_json(nullptr);
    o["requirements"] = detail::ids_json(result);
    detail::emit_json(io.out, o);
  } else {
    detail::print_list(io.out, result);
  }
  return kSuccess;
}

inline int cmd_optimize(const Options& opt, const Streams& io) {
  const int chosen = int(opt.jurisdiction.has_value()) + int(opt.product.has_value()) + int(opt.global);
  if (chosen != 1) throw CLI::ValidationError("choose exactly one of --jurisdiction, --product, --global");

  int status = kSuccess;
  auto loaded = detail::load_validated(io, opt.catalog, status);
  if (!loaded) return status;
  const auto& [catalog, graph] = *loaded;

  std::string scope;
  std::optional<Id> focus;
  RequirementSet input;
  if (opt.jurisdiction) {
    scope = "jurisdiction";
    focus = *opt.jurisdiction;
    input = jurisdiction_rl(catalog, *focus);
  } else if (opt.product) {
    scope = "product";
    focus = *opt.product;
    input = product_union(catalog, *focus);
  } else {
    scope = "global";
    input = applicable_union(catalog);
  }
  const auto strongest = optimize(graph, input);
  const auto removed = set_difference(input, strongest);

  if (opt.json) {
    detail::ordered_json o;
    o["scope"] = scope;
    o["focus"] = focus ? detail::ordered_json(*focus) : detail::ordered_json(nullptr);
    o["input"] = detail::ids_json(input);
    o["strongest"] = detail::ids_json(strongest);
    o["removed"] = detail::ordered_json::array();
    for (const auto& id : removed) {
      detail::ordered_json r;
      r["id"] = id;
      r["witness"] = *dominating_witness(graph, strongest, id);
      o["removed"].push_back(std::move(r));
    }
    detail::emit_json(io.out, o);
  } else {
    io.out << "strongest:\n";
    detail::print_list(io.out, strongest, "  ");
    io.out << "removed:\n";
    for (const auto& id : removed) {
      io.out << "  " << id << " (weaker than " << *dominating_witness(graph, strongest, id) << ")\n";
    }
  }
  return kSuccess;
}

inline int cmd_classify(const Options& opt, const Streams& io) {
  int status = kSuccess;
  auto loaded = detail::load_validated(io, opt.catalog, status);
  if (!loaded) return status;
  const auto shared = shared_regulations(loaded->catalog);
  const auto overlap = classify_overlap(shared);

  if (opt.json) {
    detail::ordered_json o;
    o["case"] = std::string(to_string(overlap.kind));
    o["core_size"] = overlap.core_size;
    o["core"] = detail::ids_json(shared.core);
    o["regulation_sizes"] = overlap.per_jurisdiction_sizes;
    o["complement_sizes"] = overlap.complement_sizes;
    o["recommendation"] = overlap.recommendation;
    o["recommendation_text"] = std::string(recommendation_text(overlap.kind));
    detail::emit_json(io.out, o);
  } else {
    io.out << "case: " << to_string(overlap.kind) << "\n";
    io.out << "core size: " << overlap.core_size << "\n";
    for (const auto& [j, size] : overlap.complement_sizes) {
      io.out << "complement " << j << ": " << size << " of " << overlap.per_jurisdiction_sizes.at(j) << "\n";
    }
    io.out << "recommendation: " << overlap.recommendation << "\n";
    io.out << "  " << recommendation_text(overlap.kind) << "\n";
  }
  return kSuccess;
}

inline int cmd_impact(const Options& opt, const Streams& io) {
  int status = kSuccess;
  auto loaded = detail::load_validated(io, opt.catalog, status);
  if (!loaded) return status;
  const auto report = change_impact(loaded->catalog, *opt.regulation);

  if (opt.json) {
    detail::ordered_json o;
    o["regulation"] = report.regulation;
    o["in_core"] = report.in_core;
    o["scope"] = std::string(to_string(report.scope));
    o["jurisdictions"] = report.jurisdictions;
    o["affected_requirements"] = detail::ids_json(report.affected_requirements);
    o["affected_products"] = detail::ids_json(report.affected_products);
    detail::emit_json(io.out, o);
  } else {
    io.out << "regulation: " << report.regulation << "\n";
    io.out << "scope: " << to_string(report.scope);
    if (report.scope == ImpactScope::CountrySpecific) {
      io.out << " (" << reqlattice::detail::join(report.jurisdictions) << ")";
    }
    io.out << "\n";
    io.out << "affected requirements: " << detail::join(report.affected_requirements.ids()) << "\n";
    io.out << "affected products: " << detail::join(report.affected_products) << "\n";
  }
  return kSuccess;
}

inline int cmd_export(const Options& opt, const Streams& io) {
  auto kind = parse_view_kind(*opt.view);
  if (!kind) throw CLI::ValidationError("--view must be country, product or global");

  int status = kSuccess;
  auto loaded = detail::load_validated(io, opt.catalog, status);
  if (!loaded) return status;
  const auto view = build_view(loaded->catalog, loaded->graph, *kind, opt.focus);
  const auto dot = to_dot(view);

  if (opt.out_path) {
    std::ofstream file(*opt.out_path, std::ios::binary);
    if (!file || !(file << dot)) throw Error(ErrorCode::IoError, "cannot write '" + *opt.out_path + "'");
  }

  if (opt.json) {
    detail::ordered_json o;
    o["view"] = std::string(to_string(*kind));
    o["focus"] = opt.focus ? detail::ordered_json(*opt.focus) : detail::ordered_json(nullptr);
    o["nodes"] = view.nodes.size();
    o["edges"] = view.edges.size();
    o["out"] = opt.out_path ? detail::ordered_json(*opt.out_path) : detail::ordered_json(nullptr);
    if (!opt.out_path) o["dot"] = dot;
    detail::emit_json(io.out, o);
  } else if (opt.out_path) {
    io.out << "wrote " << *opt.out_path << ": " << view.nodes.size() << " nodes, " << view.edges.size()
           << " edges\n";
  } else {
    io.out << dot;
    io.err << view.nodes.size() << " nodes, " << view.edges.size() << " edges\n";
  }
  return kSuccess;
}

// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, const Streams& io) {
  CLI::App app{"Requirements set algebra for geographically distributed products", "reqlattice"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "Emit a single JSON document on stdout");

  auto catalog_arg = [&](CLI::App* sub) {
    sub->add_option("catalog", opt.catalog, "Catalog file (.reqcat.json)")->required();
    sub->fallthrough();
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a catalog and report errors and warnings");
  catalog_arg(validate_cmd);

  auto* sets_cmd = app.add_subcommand("sets", "List a requirement set");
  catalog_arg(sets_cmd);
  sets_cmd->add_option("--product", opt.product, "Product id");
  sets_cmd->add_option("--jurisdiction", opt.jurisdiction, "Jurisdiction id");
  sets_cmd->add_option("--kind", opt.kind, "rl or rfn");
  sets_cmd->add_flag("--rl", opt.rl, "All RL requirements of the jurisdiction");
  sets_cmd->add_flag("--min", opt.min, "RL requirements shared by every product in the jurisdiction");

  auto* optimize_cmd = app.add_subcommand("optimize", "Remove weaker versions of requirements");
  catalog_arg(optimize_cmd);
  optimize_cmd->add_option("--jurisdiction", opt.jurisdiction, "Strongest RL set of a jurisdiction");
  optimize_cmd->add_option("--product", opt.product, "Strongest set of a product");
  optimize_cmd->add_flag("--global", opt.global, "Strongest set over every product and jurisdiction");

  auto* classify_cmd = app.add_subcommand("classify", "Classify how regulations overlap across jurisdictions");
  catalog_arg(classify_cmd);

  auto* impact_cmd = app.add_subcommand("impact", "Trace the impact of a regulation change");
  catalog_arg(impact_cmd);
  impact_cmd->add_option("--regulation", opt.regulation, "Regulation id")->required();

  auto* export_cmd = app.add_subcommand("export", "Export an architectural dependency view as DOT");
  catalog_arg(export_cmd);
  export_cmd->add_option("--view", opt.view, "country, product or global")->required();
  export_cmd->add_option("--focus", opt.focus, "Jurisdiction (country view) or product (product view)");
  export_cmd->add_option("--out", opt.out_path, "Output .dot path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (*validate_cmd) return cmd_validate(opt, io);
    if (*sets_cmd) return cmd_sets(opt, io);
    if (*optimize_cmd) return cmd_optimize(opt, io);
    if (*classify_cmd) return cmd_classify(opt, io);
    if (*impact_cmd) return cmd_impact(opt, io);
    if (*export_cmd) return cmd_export(opt, io);
  } catch (const CLI::Success&) {
    io.out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    io.err << "reqlattice: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    io.err << "reqlattice: " << e.what() << "\n";
    return e.code() == ErrorCode::CatalogInvalid ? kValidationFailed : kUsageError;
  }
  return kUsageError;
}

}  // namespace reqlattice::cli
