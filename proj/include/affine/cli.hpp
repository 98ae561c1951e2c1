#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "affine/adjunction.hpp"
#include "affine/builtins.hpp"
#include "affine/instances.hpp"
#include "affine/io.hpp"

namespace affine::cli {

inline constexpr int schema_version = 1;

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct Options {
  std::string algebra_file;
  std::string builtin;
  std::string ground;
  std::size_t arity = 1;
  std::size_t target_arity = 0;
  bool target_arity_set = false;
  bool json = false;
  std::uint64_t budget = Budget::default_limit;
  std::string points;
  std::string relation;
  bool all = false;
  bool stable = false;
  bool congruence = false;
};

namespace detail {

inline AlgebraRef resolve(const std::string& name_or_path) {
  if (auto b = builtins::find(name_or_path)) return b;
  return std::make_shared<const FiniteAlgebra>(load_algebra_file(name_or_path));
}

inline AlgebraRef generator(const Options& o) {
  if (o.builtin.empty() == o.algebra_file.empty()) fail(ErrorKind::usage_error, "give exactly one of --builtin and --algebra");
  if (!o.builtin.empty()) {
    auto b = builtins::find(o.builtin);
    if (!b) fail(ErrorKind::usage_error, "unknown builtin '" + o.builtin + "'");
    return b;
  }
  return std::make_shared<const FiniteAlgebra>(load_algebra_file(o.algebra_file));
}

inline AlgebraRef ground(const Options& o, const AlgebraRef& g) { return o.ground.empty() ? g : resolve(o.ground); }

inline GroundRef instance(const Options& o, std::size_t n) {
  const Budget budget{o.budget};
  const auto g = generator(o);
  return GroundInstance::build(free_algebra(g, n, budget), ground(o, g), GroundMode::certify, budget);
}

inline ordered_json point_json(const GroundInstance& gi, std::size_t code) { return gi.point(code); }

inline ordered_json points_json(const GroundInstance& gi, const std::vector<std::size_t>& codes) {
  ordered_json arr = ordered_json::array();
  for (auto c : codes) arr.push_back(point_json(gi, c));
  return arr;
}

inline std::string points_text(const GroundInstance& gi, const std::vector<std::size_t>& codes) {
  std::string s = "{";
  for (std::size_t i = 0; i < codes.size(); ++i) s += (i ? ", " : "") + gi.point_string(codes[i]);
  return s + "}";
}

inline ordered_json partition_json(const FreeAlgebra& f, const Partition& theta) {
  ordered_json blocks = ordered_json::array();
  for (const auto& block : theta.blocks()) {
    ordered_json terms = ordered_json::array();
    for (Elem e : block) terms.push_back(f.term_string(e));
    blocks.push_back(terms);
  }
  return {{"block_count", theta.num_blocks()}, {"blocks", blocks}, {"block_indices", theta.blocks()}};
}

inline std::string partition_text(const FreeAlgebra& f, const Partition& theta) {
  std::string s;
  for (const auto& block : theta.blocks()) {
    s += s.empty() ? "{" : " {";
    for (std::size_t i = 0; i < block.size(); ++i) s += (i ? ", " : "") + f.term_string(block[i]);
    s += "}";
  }
  return s;
}

inline ordered_json relation_json(const Relation& r) {
  ordered_json arr = ordered_json::array();
  for (auto [p, q] : r.pairs) arr.push_back({p, q});
  return arr;
}

// The relation as given, or with --congruence the congruence it generates.
inline RObject relation_object(const Options& o, const FreeRef& f) {
  auto rel = parse_relation(o.relation, *f);
  if (!o.congruence) return RObject::make(f, std::move(rel));
  return RObject::make(f, generate_congruence(*f->algebra(), rel.pairs));
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

struct Report {
  ordered_json json;
  std::string text;
};

inline Report run_free(const Options& o) {
  const Budget budget{o.budget};
  const auto g = generator(o);
  const auto f = free_algebra(g, o.arity, budget);
  Report r;
  ordered_json elements = ordered_json::array();
  std::ostringstream text;
  text << f->algebra()->name() << ": " << f->size() << " elements\n";
  for (Elem i = 0; i < f->size(); ++i) {
    const auto& e = f->element(i);
    elements.push_back({{"index", i}, {"term", f->term_string(i)}, {"values", e.values}});
    text << "  " << i << "  " << f->term_string(i) << "  [";
    for (std::size_t x = 0; x < e.values.size(); ++x) text << (x ? "," : "") << e.values[x];
    text << "]\n";
  }
  std::vector<Elem> gens(f->generators().begin(), f->generators().end());
  r.json = {{"generator", g->name()}, {"arity", o.arity}, {"size", f->size()}, {"generators", gens}, {"elements", elements}};
  r.text = text.str();
  return r;
}

inline Report run_cop(const Options& o) {
  const auto gi = instance(o, o.arity);
  const auto s = parse_points(o.points, *gi);
  const auto theta = c_operator(*gi, s);
  Report r;
  r.json = {{"ground", gi->ground()->name()},
            {"arity", o.arity},
            {"points", points_json(*gi, s.points())},
            {"congruence", partition_json(gi->free(), theta)}};
  r.text = "C(" + points_text(*gi, s.points()) + ") has " + std::to_string(theta.num_blocks()) + " blocks: " +
           partition_text(gi->free(), theta) + "\n";
  return r;
}

inline Report run_vop(const Options& o) {
  const auto gi = instance(o, o.arity);
  const auto rel = parse_relation(o.relation, gi->free());
  const auto v = v_operator(*gi, rel).points();
  Report r;
  r.json = {{"ground", gi->ground()->name()},
            {"arity", o.arity},
            {"relation", relation_json(rel)},
            {"count", v.size()},
            {"points", points_json(*gi, v)}};
  r.text = "V(R) has " + std::to_string(v.size()) + " points: " + points_text(*gi, v) + "\n";
  return r;
}

inline Report run_closure(const Options& o) {
  const auto gi = instance(o, o.arity);
  const auto s = parse_points(o.points, *gi);
  const auto c = zariski_closure(*gi, s).points();
  Report r;
  r.json = {{"ground", gi->ground()->name()},
            {"arity", o.arity},
            {"points", points_json(*gi, s.points())},
            {"closure", points_json(*gi, c)},
            {"closed", c == s.points()}};
  r.text = "VC(" + points_text(*gi, s.points()) + ") = " + points_text(*gi, c) + "\n";
  return r;
}

inline Report run_radical(const Options& o) {
  const auto gi = instance(o, o.arity);
  const auto rel = parse_relation(o.relation, gi->free());
  const auto support = v_operator(*gi, rel).points();
  const auto rad = radical(*gi, rel);
  Report r;
  r.json = {{"ground", gi->ground()->name()},
            {"arity", o.arity},
            {"relation", relation_json(rel)},
            {"support", points_json(*gi, support)},
            {"radical", partition_json(gi->free(), rad)}};
  r.text = "support " + points_text(*gi, support) + "\nradical has " + std::to_string(rad.num_blocks()) +
           " blocks: " + partition_text(gi->free(), rad) + "\n";
  return r;
}

inline Report run_null(const Options& o) {
  const Budget budget{o.budget};
  const auto gi = instance(o, o.arity);
  std::vector<Partition> thetas;
  if (o.all) {
    thetas = congruence_lattice(*gi->free().algebra(), budget);
  } else {
    thetas.push_back(relation_object(o, gi->free_ref()).closure);
  }
  Report r;
  ordered_json rows = ordered_json::array();
  std::ostringstream text;
  std::size_t fixed = 0;
  for (const auto& theta : thetas) {
    const auto v = nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta));
    fixed += v.fixed;
    rows.push_back({{"congruence", partition_json(gi->free(), theta)},
                    {"fixed", v.fixed},
                    {"radical_equal", v.radical_equal},
                    {"subdirect", v.subdirect},
                    {"sigma_injective", v.sigma_injective},
                    {"sigma_onto_each_factor", v.sigma_onto_each_factor},
                    {"support", points_json(*gi, v.support)},
                    {"radical", partition_json(gi->free(), v.radical)}});
    text << (v.fixed ? "fixed      " : "not fixed  ") << partition_text(gi->free(), theta);
    if (!v.fixed) text << "  radical " << partition_text(gi->free(), v.radical);
    text << "\n";
  }
  text << fixed << " of " << thetas.size() << " fixed\n";
  r.json = {{"ground", gi->ground()->name()}, {"arity", o.arity}, {"total", thetas.size()}, {"fixed_count", fixed}, {"rows", rows}};
  r.text = text.str();
  return r;
}

inline Report run_zariski(const Options& o) {
  const auto gi = instance(o, o.arity);
  const auto z = zariski_report(*gi, Budget{o.budget});
  ordered_json sets = ordered_json::array();
  std::ostringstream text;
  text << z.closed_sets.size() << " closed sets (" << z.method << ")\n";
  for (const auto& s : z.closed_sets) {
    sets.push_back(points_json(*gi, s.points()));
    text << "  " << points_text(*gi, s.points()) << "\n";
  }
  text << "topology " << yes(z.is_topology) << ", union closed " << yes(z.union_closed) << ", discrete "
       << yes(z.matches_discrete) << "\n";
  Report r;
  r.json = {{"ground", gi->ground()->name()},
            {"arity", o.arity},
            {"method", z.method},
            {"count", z.closed_sets.size()},
            {"closed_sets", sets},
            {"has_empty", z.has_empty},
            {"has_full", z.has_full},
            {"union_closed", z.union_closed},
            {"intersection_closed", z.intersection_closed},
            {"is_topology", z.is_topology},
            {"matches_discrete", z.matches_discrete}};
  r.text = text.str();
  return r;
}

inline Report run_adjoint(const Options& o) {
  const auto g = generator(o);
  const AdjunctionContext ctx(g, ground(o, g), GroundMode::certify, Budget{o.budget});
  const std::size_t m = o.target_arity_set ? o.target_arity : o.arity;
  const auto& gs = ctx.at(o.arity);
  const auto s = parse_points(o.points, gs);
  const auto y = relation_object(o, ctx.free(m));
  const auto v = verify_adjunction(ctx, s, y);

  const auto rq = hom_set_rq(ctx, cq_functor(ctx, s), y);
  const auto dq = hom_set_dq(ctx, s, vq_functor(ctx, y));
  auto witness_terms = [&](const std::vector<Elem>& w) {
    ordered_json arr = ordered_json::array();
    for (Elem e : w) arr.push_back(gs.free().term_string(e));
    return arr;
  };
  ordered_json rq_json = ordered_json::array(), dq_json = ordered_json::array();
  for (const auto& a : rq) rq_json.push_back({{"witness", witness_terms(a.witness)}, {"factorized", a.factorized}});
  for (const auto& a : dq) {
    ordered_json graph = ordered_json::array();
    const auto src = s.points();
    const auto& gm = ctx.at(m);
    for (std::size_t i = 0; i < src.size(); ++i) graph.push_back({point_json(gs, src[i]), point_json(gm, a.graph[i])});
    dq_json.push_back({{"witness", witness_terms(a.witness)}, {"graph", graph}});
  }
  Report r;
  r.json = {{"ground", ctx.ground()->name()},
            {"arity", o.arity},
            {"target_arity", m},
            {"points", points_json(gs, s.points())},
            {"relation", relation_json(y.relation)},
            {"lhs", v.lhs},
            {"rhs", v.rhs},
            {"bijection_ok", v.bijection_ok},
            {"natural_ok", v.natural_ok},
            {"squares_checked", v.squares_checked},
            {"unit_ok", v.unit_ok},
            {"counit_ok", v.counit_ok},
            {"rq_arrows", rq_json},
            {"dq_arrows", dq_json}};
  r.text = "|hom_R(C S, y)| = " + std::to_string(v.lhs) + ", |hom_D(S, V y)| = " + std::to_string(v.rhs) +
           "\nbijection " + yes(v.bijection_ok) + ", natural " + yes(v.natural_ok) + " (" +
           std::to_string(v.squares_checked) + " squares), unit " + yes(v.unit_ok) + ", counit " + yes(v.counit_ok) + "\n";
  return r;
}

inline Report run_represent(const Options& o) {
  const auto g = generator(o);
  const AdjunctionContext ctx(g, ground(o, g), GroundMode::certify, Budget{o.budget});
  const auto x = relation_object(o, ctx.free(o.arity));
  const auto v = representability_check(ctx, x, o.stable);
  Report r;
  r.json = {{"arity", o.arity},
            {"relation", relation_json(x.relation)},
            {"hom_count", v.hom_count},
            {"quotient_size", v.quotient_size},
            {"stable", v.stable},
            {"match", v.match}};
  r.text = "|hom_R(x, (F(1), Δ))| = " + std::to_string(v.hom_count) + ", |F(n)/R| = " + std::to_string(v.quotient_size) +
           ", match " + yes(v.match) + "\n";
  return r;
}

inline Report run_stone(const Options& o) {
  const auto s = stone_demo(o.arity, Budget{o.budget});
  const auto f = free_algebra(builtins::bool2(), o.arity);
  const auto gi = GroundInstance::build(f, builtins::bool2());
  ordered_json pairs = ordered_json::array();
  for (std::size_t i = 0; i < s.congruences.size(); ++i)
    pairs.push_back({{"congruence", partition_json(*f, s.congruences[i])}, {"closed_set", points_json(*gi, s.images[i].points())}});
  Report r;
  r.json = {{"arity", o.arity},
            {"congruence_count", s.congruences.size()},
            {"closed_set_count", s.closed_sets.size()},
            {"all_fixed", s.all_fixed},
            {"all_subsets_closed", s.all_subsets_closed},
            {"bijection", s.bijection},
            {"inverse_ok", s.inverse_ok},
            {"order_reversing", s.order_reversing},
            {"pairs_checked", s.pairs_checked},
            {"correspondence", pairs}};
  r.text = std::to_string(s.congruences.size()) + " congruences <-> " + std::to_string(s.closed_sets.size()) +
           " closed sets\nall fixed " + yes(s.all_fixed) + ", all subsets closed " + yes(s.all_subsets_closed) +
           ", bijection " + yes(s.bijection) + ", inverse " + yes(s.inverse_ok) + ", order reversing " +
           yes(s.order_reversing) + "\n";
  return r;
}

inline Report run_classify(const Options& o) {
  const Budget budget{o.budget};
  const auto g = generator(o);
  const auto a = ground(o, g);
  const auto c = classify_fixed(g, a, o.arity, budget);
  const auto f = free_algebra(g, o.arity, budget);
  const auto gi = GroundInstance::build(f, a, GroundMode::certify, budget);
  ordered_json rows = ordered_json::array();
  std::ostringstream text;
  for (const auto& row : c.rows) {
    ordered_json j = {{"congruence", partition_json(*f, row.theta)}, {"fixed", row.fixed}, {"support", points_json(*gi, row.support)}};
    text << (row.fixed ? "fixed      " : "not fixed  ") << partition_text(*f, row.theta);
    if (row.radical) {
      j["radical"] = partition_json(*f, *row.radical);
      text << "  radical " << partition_text(*f, *row.radical);
    }
    text << "\n";
    rows.push_back(j);
  }
  text << c.fixed_count << " of " << c.rows.size() << " fixed\n";
  Report r;
  r.json = {{"generator", g->name()},
            {"ground", a->name()},
            {"arity", o.arity},
            {"total", c.rows.size()},
            {"fixed_count", c.fixed_count},
            {"all_fixed", c.all_fixed()},
            {"rows", rows}};
  r.text = text.str();
  return r;
}

inline Report run_builtins(const Options&) {
  ordered_json list = ordered_json::array();
  std::ostringstream text;
  for (const auto& name : builtins::names()) {
    const auto a = builtins::find(name);
    ordered_json sig = ordered_json::array();
    text << name << " (size " << a->size() << "):";
    for (const auto& s : a->signature()) {
      sig.push_back({{"name", s.name}, {"arity", s.arity}});
      text << " " << s.name << "/" << s.arity;
    }
    text << "\n";
    list.push_back({{"name", name}, {"size", a->size()}, {"signature", sig}});
  }
  return {{{"algebras", list}}, text.str()};
}

inline std::string document(const std::string& command, const ordered_json& body, bool ok) {
  ordered_json doc = {{"schema_version", schema_version}, {"command", command}};
  doc[ok ? "result" : "error"] = body;
  return doc.dump(2) + "\n";
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline CommandResult run_command(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Finite affine adjunction calculator", "affine"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    detail::Report (*run)(const Options&);
  };
  const std::vector<Entry> entries{
      {"free", "list the elements of F(n)", detail::run_free},
      {"cop", "C(S) for a point set S", detail::run_cop},
      {"vop", "V(R) for a relation R", detail::run_vop},
      {"closure", "the Zariski closure VC(S)", detail::run_closure},
      {"radical", "the radical of a relation", detail::run_radical},
      {"null", "Nullstellensatz verdicts for a congruence or, with --all, every congruence", detail::run_null},
      {"zariski", "closed sets of the V∘C closure", detail::run_zariski},
      {"adjoint", "verify hom_R(C S, y) ≅ hom_D(S, V y)", detail::run_adjoint},
      {"represent", "representability by (F(1), Δ)", detail::run_represent},
      {"stone", "finite Stone duality over bool2", detail::run_stone},
      {"classify", "fixed-point classification of all congruences", detail::run_classify},
      {"builtins", "list the built-in algebras", detail::run_builtins},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_flag("--json", o.json, "emit a JSON document");
    subs[e.name] = sub;
    if (std::string(e.name) == "builtins") continue;
    sub->add_option("--budget", o.budget, "step limit for exponential loops")->check(CLI::PositiveNumber);
    sub->add_option("--arity", o.arity, "arity n of F(n) and A^n");
    if (std::string(e.name) == "stone") continue;
    sub->add_option("--builtin", o.builtin, "generator algebra by name");
    sub->add_option("--algebra", o.algebra_file, "generator algebra from a JSON file");
    sub->add_option("--ground", o.ground, "ground algebra A (name or file; default: the generator)");
  }
  for (const char* name : {"cop", "closure", "adjoint"})
    subs[name]->add_option("--points", o.points, "point set, e.g. \"0,1;1,0\"");
  for (const char* name : {"vop", "radical", "null", "adjoint", "represent"})
    subs[name]->add_option("--relation", o.relation, "pairs \"p,q;...\" of element indices or \"s=t;...\" of terms");
  for (const char* name : {"null", "adjoint", "represent"})
    subs[name]->add_flag("--congruence", o.congruence, "use the congruence generated by --relation");
  subs["null"]->add_flag("--all", o.all, "check every congruence of F(n)");
  subs["adjoint"]->add_option("--target-arity", o.target_arity, "arity m of the relation object (default: --arity)");
  subs["represent"]->add_flag("--stable", o.stable, "assume the relation is Δ-stable instead of checking");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  CommandResult result;
  const bool wants_json = std::find(args.begin(), args.end(), "--json") != args.end();
  std::string command;
  if (!args.empty() && std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return args.front() == e.name; }))
    command = args.front();
  try {
    app.parse(reversed);
    o.target_arity_set = subs["adjoint"]->count("--target-arity") > 0;
    for (const auto& e : entries)
      if (subs[e.name]->parsed()) {
        command = e.name;
        const auto report = e.run(o);
        result.out = o.json ? detail::document(command, report.json, true) : report.text;
      }
    return result;
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) result.out = sub->help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.err = std::string("UsageError: ") + e.what() + "\n";
    if (wants_json) result.out = detail::document(command, {{"kind", "UsageError"}, {"exit_code", 2}, {"message", e.what()}}, false);
    return result;
  } catch (const Error& e) {
    result.exit_code = exit_code(e.kind());
    result.err = std::string(e.what()) + "\n";
    if (wants_json)
      result.out = detail::document(command, {{"kind", to_string(e.kind())}, {"exit_code", result.exit_code}, {"message", e.message()}}, false);
    return result;
  } catch (const std::bad_alloc&) {
    result.exit_code = exit_code(ErrorKind::budget_exceeded);
    result.err = "BudgetExceeded: out of memory\n";
    if (wants_json)
      result.out = detail::document(command, {{"kind", "BudgetExceeded"}, {"exit_code", result.exit_code}, {"message", "out of memory"}}, false);
    return result;
  }
}

}  // namespace affine::cli
