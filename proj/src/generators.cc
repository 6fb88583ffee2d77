#include "parcoal/generators.hh"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace parcoal {

void validate_qbf(const Qbf& phi) {
  if (phi.num_vars < 1)
    throw validation_error("qbf: at least one variable required (prefix starts with an existential)");
  for (const auto& clause : phi.clauses) {
    if (clause.size() > 3)
      throw validation_error("qbf: clauses hold at most three literals");
    for (int lit : clause) {
      int var = std::abs(lit);
      if (lit == 0 || var > static_cast<int>(phi.num_vars))
        throw validation_error("qbf: literal references an unquantified variable");
    }
  }
}

namespace {

bool qbf_eval_rec(const Qbf& phi, std::size_t next_var, std::vector<char>& value) {
  if (next_var > phi.num_vars) {
    for (const auto& clause : phi.clauses) {
      bool sat = false;
      for (int lit : clause)
        if ((lit > 0) == (value[std::abs(lit)] != 0)) {
          sat = true;
          break;
        }
      if (!sat)
        return false;
    }
    return true;
  }
  bool exists = phi.quantifier(next_var) == 'e';
  for (char bit : {1, 0}) {
    value[next_var] = bit;
    bool sub = qbf_eval_rec(phi, next_var + 1, value);
    if (exists && sub)
      return true;
    if (!exists && !sub)
      return false;
  }
  return !exists;
}

}  // namespace

bool qbf_eval(const Qbf& phi) {
  validate_qbf(phi);
  if (phi.num_vars > 12)
    throw budget_exceeded("qbf_eval: truth-table budget is 12 variables");
  std::vector<char> value(phi.num_vars + 1, 0);
  return qbf_eval_rec(phi, 1, value);
}

int prime(int i) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                               23, 29, 31, 37, 41, 43, 47, 53};
  if (i < 1 || i > 16)
    throw validation_error("prime index must be between 1 and 16");
  return primes[i - 1];
}

namespace {

std::string mod_expr(const std::string& letter, int p) {
  return "mod(" + letter + "," + std::to_string(p) + ",{0})";
}

std::string comod_expr(const std::string& letter, int p) {
  return letter + "+\\" + mod_expr(letter, p);
}

GeneratedGame finish(GameFile file) {
  SafetyGame game = normalize(build_game(file));
  return GeneratedGame{std::move(game), std::move(file)};
}

}  // namespace

GeneratedGame gen_example(const std::string& id) {
  GameFile f;
  if (id == "fig1") {
    f.alphabet = {"a", "b"};
    f.vertices = {"v0", "v1", "v2", "v3", "v4", "v5"};
    f.safe = {"v0", "v1", "v2", "v3", "v5"};
    f.initial = "v0";
    f.edges = {
        {"v0", "v1", "(..)+"},        {"v0", "v2", ".(..)*"},
        {"v1", "v3", ".+"},           {"v2", "v3", ".+"},
        {"v3", "v4", "(bb)+|a(aa)*"}, {"v3", "v5", "(aa)+|b(bb)*"},
        {"v4", "v4", ".+"},           {"v5", "v5", ".+"},
    };
    return finish(std::move(f));
  }
  if (id == "fig2") {
    f.alphabet = {"a", "b"};
    f.vertices = {"v0", "v1", "v2", "bot"};
    f.safe = {"v0", "v1", "v2"};
    f.initial = "v0";
    f.global_default = "bot";
    f.edges = {
        {"v0", "v0", "a*ba*"}, {"v0", "v1", "a*ba*"}, {"v0", "v2", "a"},
        {"v1", "v0", "b|aa+"}, {"v2", "v1", ".+"},
    };
    return finish(std::move(f));
  }
  throw validation_error("unknown example id: " + id);
}

GeneratedGame gen_worstcase(int n) {
  if (n < 1 || n > 6)
    throw validation_error("worstcase size must be between 1 and 6");
  GameFile f;
  f.alphabet = {"a", "b"};
  auto B = [](int i) { return "B" + std::to_string(i); };
  auto V = [](int i) { return "v" + std::to_string(i); };
  auto NV = [](int i) { return "nv" + std::to_string(i); };
  auto C = [](int i) { return "C" + std::to_string(i); };
  for (int i = 1; i <= n; ++i)
    f.vertices.push_back(B(i));
  for (int i = 1; i <= n; ++i) {
    f.vertices.push_back(V(i));
    f.vertices.push_back(NV(i));
  }
  for (int i = 1; i <= n; ++i)
    f.vertices.push_back(C(i));
  f.vertices.push_back("top");
  f.vertices.push_back("bot");
  for (const std::string& v : f.vertices)
    if (v != "bot")
      f.safe.push_back(v);
  f.initial = B(1);
  f.global_default = "bot";

  for (int i = 1; i <= n; ++i) {
    int p = prime(i);
    f.edges.push_back({B(i), V(i), mod_expr("a", p)});
    f.edges.push_back({B(i), NV(i), comod_expr("a", p)});
    std::string next = i < n ? B(i + 1) : C(1);
    f.edges.push_back({V(i), next, ".+"});
    f.edges.push_back({NV(i), next, ".+"});
    std::string cnext = i < n ? C(i + 1) : "top";
    f.edges.push_back(
        {C(i), cnext, mod_expr("a", p) + "|(" + comod_expr("b", p) + ")"});
  }
  f.edges.push_back({"top", "top", ".+"});
  return finish(std::move(f));
}

GeneratedGame gen_qbf(const Qbf& phi) {
  validate_qbf(phi);
  int q = static_cast<int>(phi.num_vars);
  int m = static_cast<int>(phi.clauses.size());

  GameFile f;
  f.alphabet = {"a", "b", "c"};
  for (int i = 1; i <= q; ++i)
    f.alphabet.push_back("a" + std::to_string(i));

  auto spine = [&](int s) { return "v" + std::to_string(s); };  // 0-based
  auto X = [](int i) { return "x" + std::to_string(i); };
  auto NX = [](int i) { return "nx" + std::to_string(i); };
  auto C = [](int h) { return "C" + std::to_string(h); };
  // identifications: the spine position after the last variable is C1 (or
  // directly top when there are no clauses), and C_{m+1} is top
  auto after_var = [&](int s) {
    if (s < q)
      return spine(s);
    return m > 0 ? C(1) : std::string("top");
  };
  auto after_clause = [&](int h) { return h <= m ? C(h) : std::string("top"); };

  for (int s = 0; s < q; ++s)
    f.vertices.push_back(spine(s));
  for (int i = 1; i <= q; ++i) {
    f.vertices.push_back(X(i));
    f.vertices.push_back(NX(i));
  }
  for (int h = 1; h <= m; ++h)
    f.vertices.push_back(C(h));
  f.vertices.push_back("top");
  f.vertices.push_back("bot");
  for (const std::string& v : f.vertices)
    if (v != "bot")
      f.safe.push_back(v);
  f.initial = spine(0);
  f.global_default = "bot";

  for (int s = 0; s < q; ++s) {
    int i = s + 1;  // variable index at spine position s
    int p = prime(i);
    if (phi.quantifier(i) == 'e') {
      f.edges.push_back({spine(s), X(i), mod_expr("a", p)});
      f.edges.push_back({spine(s), NX(i), comod_expr("b", p)});
      f.edges.push_back(
          {spine(s), "top", "(" + comod_expr("a", p) + ")|" + mod_expr("b", p)});
    } else {
      f.edges.push_back({spine(s), X(i), mod_expr("c", p)});
      f.edges.push_back({spine(s), NX(i), comod_expr("c", p)});
    }
    f.edges.push_back({X(i), after_var(s + 1), ".+"});
    f.edges.push_back({NX(i), after_var(s + 1), ".+"});
  }
  for (int h = 1; h <= m; ++h) {
    std::string lang;
    for (int lit : phi.clauses[h - 1]) {
      int i = std::abs(lit);
      std::string letter = "a" + std::to_string(i);
      std::string part = lit > 0 ? mod_expr(letter, prime(i))
                                 : "(" + comod_expr(letter, prime(i)) + ")";
      lang = lang.empty() ? part : lang + "|" + part;
    }
    if (!lang.empty())
      f.edges.push_back({C(h), after_clause(h + 1), lang});
    // an empty clause leaves C_h with the default only: unwinnable from there
  }
  f.edges.push_back({"top", "top", ".+"});
  return finish(std::move(f));
}

Qbf parse_qdimacs(const std::string& text) {
  Qbf phi;
  std::istringstream in(text);
  std::string line;
  int expected_var = 1;
  bool saw_clause = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head))
      continue;
    if (head == "c" || head == "p")
      continue;
    if (head == "e" || head == "a") {
      if (saw_clause)
        throw parse_error("qdimacs: quantifier line after clauses");
      char want = phi.quantifier(expected_var);
      int var;
      while (ls >> var && var != 0) {
        if (var != expected_var)
          throw parse_error("qdimacs: variables must be quantified in order 1,2,...");
        if (head[0] != want)
          throw parse_error(
              "qdimacs: prefix must alternate strictly starting with e");
        phi.num_vars = expected_var;
        ++expected_var;
        want = phi.quantifier(expected_var);
      }
      continue;
    }
    // clause line
    saw_clause = true;
    std::istringstream cs(line);
    std::vector<int> clause;
    int lit;
    while (cs >> lit && lit != 0)
      clause.push_back(lit);
    phi.clauses.push_back(std::move(clause));
  }
  validate_qbf(phi);
  return phi;
}

Qbf qbf_from_json(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("qbf file: ") + e.what());
  }
  Qbf phi;
  try {
    auto prefix = j.at("prefix").get<std::vector<std::string>>();
    phi.num_vars = prefix.size();
    for (std::size_t i = 1; i <= prefix.size(); ++i) {
      if (prefix[i - 1] != std::string(1, phi.quantifier(i)))
        throw validation_error(
            "qbf: prefix must alternate strictly starting with e");
    }
    for (const json& cj : j.at("clauses"))
      phi.clauses.push_back(cj.get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw parse_error(std::string("qbf file: ") + e.what());
  }
  validate_qbf(phi);
  return phi;
}

}  // namespace parcoal
