#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "parcoal/generators.hh"
#include "parcoal/product.hh"
#include "parcoal/synthesis.hh"
#include "parcoal/unfolding.hh"
#include "parcoal/verify.hh"

using namespace parcoal;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << content;
}

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v)
    return fallback;
  return std::strtoull(v, nullptr, 10);
}

SolveConfig config_from_env() {
  SolveConfig cfg;
  cfg.explicit_state_cap = env_or("PARCOAL_PRODUCT_STATE_CAP", cfg.explicit_state_cap);
  cfg.explicit_letter_cap =
      env_or("PARCOAL_PRODUCT_LETTER_CAP", cfg.explicit_letter_cap);
  cfg.lasso_budget = env_or("PARCOAL_LASSO_BUDGET", cfg.lasso_budget);
  cfg.lcm_cap = env_or("PARCOAL_LCM_CAP", cfg.lcm_cap);
  return cfg;
}

SafetyGame load_game(const std::string& path) {
  return normalize(build_game(parse_game_file(slurp(path))));
}

// with --json, stdout carries machine output only
std::ostream& human(bool json_mode) { return json_mode ? std::cerr : std::cout; }

int cmd_check(const std::string& arena_path, bool json_mode) {
  GameFile file = parse_game_file(slurp(arena_path));
  SafetyGame raw = build_game(file);
  SafetyGame game = normalize(raw);
  bool complete = completeness_check(game.arena);
  bool deterministic = determinism_check(game.arena);

  int num_edges = 0;
  int dfa_states = 0;
  for (int v = 0; v < game.arena.num_vertices(); ++v) {
    for (const ArenaEdge& e : game.arena.out(v)) {
      ++num_edges;
      dfa_states += e.dfa->num_states();
    }
  }

  if (json_mode) {
    json j;
    j["vertices"] = game.arena.num_vertices();
    j["edges"] = num_edges;
    j["dfa_states"] = dfa_states;
    j["complete"] = complete;
    j["deterministic"] = deterministic;
    std::cout << j.dump(2) << "\n";
  }
  human(json_mode) << "vertices: " << game.arena.num_vertices()
                   << " (input " << raw.arena.num_vertices() << ")\n"
                   << "edges: " << num_edges << ", component DFA states: "
                   << dfa_states << "\n"
                   << "complete: " << (complete ? "yes" : "no") << "\n"
                   << "deterministic: " << (deterministic ? "yes" : "no") << "\n";
  return 0;
}

int cmd_solve(const std::string& arena_path, const std::string& emit_strategy,
              const std::string& dot_tree, const std::string& dot_product,
              bool json_mode) {
  SafetyGame game = load_game(arena_path);
  UnfoldingTree tree = unfold(game);
  if (!dot_tree.empty())
    spit(dot_tree, tree_to_dot(tree));
  if (!dot_product.empty())
    spit(dot_product, product_to_dot(tree));

  SolveConfig cfg = config_from_env();
  auto lasso = solve(tree, cfg);

  json j;
  j["winnable"] = lasso.has_value();
  j["internal_nodes"] = tree.num_internal();
  j["tree_nodes"] = static_cast<int>(tree.nodes().size());

  if (!lasso) {
    if (json_mode)
      std::cout << j.dump(2) << "\n";
    human(json_mode) << "not winnable\n";
    return 1;
  }

  human(json_mode) << "winnable (stem " << lasso->stem.size() << ", cycle "
                   << lasso->cycle.size() << ")\n";
  TreeStrategy ts = extract_strategy(tree, *lasso);
  MemoryStrategy ms = build_memory(tree, ts);
  if (tree.num_internal() > 0) {
    const Alphabet& alphabet = game.arena.alphabet();
    human(json_mode) << "root word: " << alphabet.format(ms.word(ms.initial()).prefix)
                     << "(" << alphabet.format(ms.word(ms.initial()).period)
                     << ")^w\n";
  }
  if (!emit_strategy.empty()) {
    spit(emit_strategy, serialize_strategy(ms, game));
    human(json_mode) << "strategy written to " << emit_strategy << "\n";
  }
  if (json_mode) {
    j["stem_length"] = lasso->stem.size();
    j["cycle_length"] = lasso->cycle.size();
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& arena_path, const std::string& strategy_path,
               const std::string& agents, bool all, bool json_mode) {
  SafetyGame game = load_game(arena_path);
  MemoryStrategy ms = deserialize_strategy(slurp(strategy_path), game);
  SolveConfig cfg = config_from_env();

  VerificationReport report;
  if (all) {
    report = verify_all_k(game, ms, cfg.lcm_cap);
  } else if (!agents.empty()) {
    std::uint64_t lo, hi;
    auto dots = agents.find("..");
    if (dots == std::string::npos) {
      lo = hi = std::stoull(agents);
    } else {
      lo = std::stoull(agents.substr(0, dots));
      hi = std::stoull(agents.substr(dots + 2));
    }
    if (lo < 1 || hi < lo)
      throw validation_error("bad --agents range");
    report.verdict = Verdict::safe;
    for (std::uint64_t k = lo; k <= hi; ++k) {
      VerificationReport r = verify_fixed_k(game, ms, k);
      report.states_explored += r.states_explored;
      if (r.verdict == Verdict::unsafe) {
        r.states_explored = report.states_explored;
        report = r;
        break;
      }
    }
  } else {
    throw validation_error("verify needs --agents K, --agents A..B, or --all");
  }

  if (json_mode)
    std::cout << report_to_json(report, game);
  human(json_mode) << report_to_text(report, game);
  switch (report.verdict) {
    case Verdict::safe:
      return 0;
    case Verdict::unsafe:
      return 1;
    case Verdict::undecided:
      return 3;
  }
  return 2;
}

int cmd_simulate(const std::string& arena_path, const std::string& strategy_path,
                 std::uint64_t k, std::uint64_t steps, std::uint64_t seed,
                 const std::string& resolver_name, bool json_mode) {
  SafetyGame game = load_game(arena_path);
  MemoryStrategy ms = deserialize_strategy(slurp(strategy_path), game);
  Resolver resolver;
  if (resolver_name == "random")
    resolver = Resolver::random;
  else if (resolver_name == "first")
    resolver = Resolver::first;
  else if (resolver_name == "minimal")
    resolver = Resolver::minimal;
  else
    throw validation_error("resolver must be random, first, or minimal");

  History trace = simulate(game, ms, k, steps, seed, resolver);
  if (json_mode) {
    json j = json::array();
    for (int v : trace)
      j.push_back(game.arena.vertex_name(v));
    std::cout << j.dump() << "\n";
  }
  std::ostream& os = human(json_mode);
  for (std::size_t i = 0; i < trace.size(); ++i)
    os << (i ? " " : "") << game.arena.vertex_name(trace[i]);
  os << "\n";
  return 0;
}

int cmd_gen(const std::vector<std::string>& what, const std::string& out_path) {
  GeneratedGame gen = [&] {
    if (what.size() == 2 && what[0] == "example")
      return gen_example(what[1]);
    if (what.size() == 2 && what[0] == "worstcase")
      return gen_worstcase(std::stoi(what[1]));
    if (what.size() == 2 && what[0] == "qbf") {
      std::string text = slurp(what[1]);
      Qbf phi = text.find('{') != std::string::npos ? qbf_from_json(text)
                                                    : parse_qdimacs(text);
      return gen_qbf(phi);
    }
    throw validation_error(
        "gen expects: example fig1|fig2, worstcase N, or qbf FILE");
  }();
  std::string text = game_file_to_json(gen.file);
  if (out_path.empty())
    std::cout << text;
  else
    spit(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parcoal: safety coalition games with arbitrarily many agents"};
  app.require_subcommand(1);
  bool json_mode = false;

  std::string arena_path, strategy_path, emit_strategy, dot_tree, dot_product;
  std::string agents, resolver = "random", out_path;
  bool all = false;
  std::uint64_t k = 1, steps = 20, seed = 0;
  std::vector<std::string> gen_what;

  auto* check = app.add_subcommand("check", "validate and report arena statistics");
  check->add_option("arena", arena_path)->required();

  auto* solve_cmd = app.add_subcommand("solve", "decide the safety coalition problem");
  solve_cmd->add_option("arena", arena_path)->required();
  solve_cmd->add_option("--emit-strategy", emit_strategy, "write the winning strategy");
  solve_cmd->add_option("--dot-tree", dot_tree, "write the tree unfolding as DOT");
  solve_cmd->add_option("--dot-product", dot_product,
                        "write the explored product fragment as DOT");

  auto* verify_cmd = app.add_subcommand("verify", "verify a strategy");
  verify_cmd->add_option("arena", arena_path)->required();
  verify_cmd->add_option("strategy", strategy_path)->required();
  verify_cmd->add_option("--agents", agents, "a number K or a range A..B");
  verify_cmd->add_flag("--all", all, "verify for every number of agents");

  auto* sim_cmd = app.add_subcommand("simulate", "play the strategy for k agents");
  sim_cmd->add_option("arena", arena_path)->required();
  sim_cmd->add_option("strategy", strategy_path)->required();
  sim_cmd->add_option("--agents", k)->required();
  sim_cmd->add_option("--steps", steps);
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--resolver", resolver, "random | first | minimal");

  auto* gen_cmd = app.add_subcommand("gen", "generate built-in arenas");
  gen_cmd->add_option("what", gen_what,
                      "example fig1|fig2, worstcase N, or qbf FILE");
  gen_cmd->add_option("-o,--output", out_path, "output file (default stdout)");

  for (CLI::App* sub : {check, solve_cmd, verify_cmd, sim_cmd, gen_cmd})
    sub->add_flag("--json", json_mode, "machine-readable output on stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(arena_path, json_mode);
    if (solve_cmd->parsed())
      return cmd_solve(arena_path, emit_strategy, dot_tree, dot_product, json_mode);
    if (verify_cmd->parsed())
      return cmd_verify(arena_path, strategy_path, agents, all, json_mode);
    if (sim_cmd->parsed())
      return cmd_simulate(arena_path, strategy_path, k, steps, seed, resolver,
                          json_mode);
    if (gen_cmd->parsed())
      return cmd_gen(gen_what, out_path);
  } catch (const solver_undecided& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
