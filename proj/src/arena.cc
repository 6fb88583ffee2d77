#include "parcoal/arena.hh"

#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "json.hpp"

namespace parcoal {

Arena::Arena(Alphabet alphabet, std::vector<std::string> vertex_names, int initial)
    : alphabet_(std::move(alphabet)),
      vertex_names_(std::move(vertex_names)),
      initial_(initial),
      out_(vertex_names_.size()) {
  if (vertex_names_.empty())
    throw validation_error("arena needs at least one vertex");
  for (std::size_t i = 0; i < vertex_names_.size(); ++i)
    for (std::size_t j = i + 1; j < vertex_names_.size(); ++j)
      if (vertex_names_[i] == vertex_names_[j])
        throw validation_error("duplicate vertex name: " + vertex_names_[i]);
  if (initial_ < 0 || initial_ >= num_vertices())
    throw validation_error("initial vertex undeclared");
}

int Arena::vertex_index(const std::string& name) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (vertex_names_[i] == name)
      return i;
  throw validation_error("unknown vertex: " + name);
}

bool Arena::has_vertex(const std::string& name) const {
  return std::find(vertex_names_.begin(), vertex_names_.end(), name) !=
         vertex_names_.end();
}

const ArenaEdge* Arena::edge(int from, int to) const {
  for (const ArenaEdge& e : out_.at(from))
    if (e.to == to)
      return &e;
  return nullptr;
}

void Arena::set_edge(int from, int to, DfaPtr dfa, std::string expr_text) {
  for (ArenaEdge& e : out_.at(from)) {
    if (e.to == to) {
      e.dfa = std::move(dfa);
      e.expr_text = std::move(expr_text);
      return;
    }
  }
  ArenaEdge e{from, to, std::move(dfa), std::move(expr_text)};
  auto& vec = out_.at(from);
  auto pos = std::lower_bound(vec.begin(), vec.end(), to,
                              [](const ArenaEdge& a, int t) { return a.to < t; });
  vec.insert(pos, std::move(e));
}

void Arena::remove_edge(int from, int to) {
  auto& vec = out_.at(from);
  vec.erase(std::remove_if(vec.begin(), vec.end(),
                           [&](const ArenaEdge& e) { return e.to == to; }),
            vec.end());
}

void Arena::clear_out(int v) { out_.at(v).clear(); }

int Arena::add_vertex(const std::string& name) {
  if (has_vertex(name))
    throw validation_error("duplicate vertex name: " + name);
  vertex_names_.push_back(name);
  out_.emplace_back();
  return num_vertices() - 1;
}

bool is_history(const Arena& arena, const History& h) {
  if (h.empty())
    return false;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    if (arena.edge(h[i], h[i + 1]) == nullptr)
      return false;
  return true;
}

namespace {

std::string paren(const std::string& s) { return "(" + s + ")"; }

DfaPtr union_out_langs(const Arena& arena, int v, std::string* text_out) {
  const auto& edges = arena.out(v);
  if (edges.empty()) {
    if (text_out)
      *text_out = "";
    return std::make_shared<Dfa>(Dfa::empty_lang(arena.alphabet()));
  }
  Dfa u = *edges[0].dfa;
  std::string text = paren(edges[0].expr_text);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    u = Dfa::union_of(u, *edges[i].dfa);
    text += "|" + paren(edges[i].expr_text);
  }
  if (text_out)
    *text_out = text;
  return std::make_shared<Dfa>(std::move(u));
}

std::string fresh_vertex_name(const Arena& arena, std::string base) {
  std::string name = base;
  while (arena.has_vertex(name))
    name = "_" + name;
  return name;
}

}  // namespace

SafetyGame normalize(const SafetyGame& game) {
  SafetyGame g = game;
  Arena& arena = g.arena;
  const Alphabet& alphabet = arena.alphabet();
  DfaPtr sigma_plus = std::make_shared<Dfa>(Dfa::sigma_plus(alphabet));

  // drop empty-language edges: an empty set is the same as "undefined"
  for (int v = 0; v < arena.num_vertices(); ++v) {
    std::vector<int> drop;
    for (const ArenaEdge& e : arena.out(v))
      if (e.dfa->is_empty_lang())
        drop.push_back(e.to);
    for (int t : drop)
      arena.remove_edge(v, t);
  }

  // unsafe vertices are sinks: a single Sigma^+ self-loop
  for (int v = 0; v < arena.num_vertices(); ++v) {
    if (!g.is_safe(v)) {
      arena.clear_out(v);
      arena.set_edge(v, v, sigma_plus, ".+");
    }
  }

  // complete every safe vertex; remainders go to its default target or to a
  // fresh unsafe vertex
  int fresh_bot = -1;
  for (int v = 0; v < arena.num_vertices(); ++v) {
    if (!g.is_safe(v))
      continue;
    std::string union_text;
    DfaPtr covered = union_out_langs(arena, v, &union_text);
    Dfa remainder = Dfa::complement_sigma_plus(*covered);
    if (remainder.is_empty_lang())
      continue;
    std::string rem_text =
        union_text.empty() ? ".+" : "!(" + union_text + ")";
    int target = g.default_target.empty() ? -1 : g.default_target[v];
    if (target < 0) {
      if (fresh_bot < 0) {
        fresh_bot = arena.add_vertex(fresh_vertex_name(arena, "bot"));
        g.safe.push_back(0);
        g.default_target.push_back(-1);
        arena.set_edge(fresh_bot, fresh_bot, sigma_plus, ".+");
      }
      target = fresh_bot;
    }
    const ArenaEdge* existing = arena.edge(v, target);
    if (existing != nullptr) {
      Dfa merged = Dfa::union_of(*existing->dfa, remainder);
      std::string text = paren(existing->expr_text) + "|" + paren(rem_text);
      arena.set_edge(v, target, std::make_shared<Dfa>(std::move(merged)), text);
    } else {
      arena.set_edge(v, target, std::make_shared<Dfa>(std::move(remainder)),
                     rem_text);
    }
  }

  g.default_target.assign(arena.num_vertices(), -1);
  g.normalized = true;
  assert(completeness_check(arena));
  return g;
}

bool completeness_check(const Arena& arena) {
  Dfa sigma_plus = Dfa::sigma_plus(arena.alphabet());
  for (int v = 0; v < arena.num_vertices(); ++v) {
    DfaPtr covered = union_out_langs(arena, v, nullptr);
    if (!Dfa::equal_lang(*covered, sigma_plus))
      return false;
  }
  return true;
}

bool determinism_check(const Arena& arena) {
  for (int v = 0; v < arena.num_vertices(); ++v) {
    const auto& edges = arena.out(v);
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j)
        if (!Dfa::intersection(*edges[i].dfa, *edges[j].dfa).is_empty_lang())
          return false;
  }
  return true;
}

std::vector<int> successors(const Arena& arena, int v, const Word& u) {
  if (u.empty())
    throw validation_error("successor words must be nonempty");
  std::vector<int> out;
  for (const ArenaEdge& e : arena.out(v))
    if (e.dfa->member(u))
      out.push_back(e.to);
  return out;
}

bool k_realizable(const Arena& arena, const History& h, std::uint64_t k) {
  if (!is_history(arena, h))
    throw validation_error("not a history");
  if (k < 1)
    throw validation_error("k must be positive");
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const ArenaEdge* e = arena.edge(h[i], h[i + 1]);
    if (!e->dfa->length_set().membership(k))
      return false;
  }
  return true;
}

// --- file format ------------------------------------------------------------

using nlohmann::json;

GameFile parse_game_file(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("arena file: ") + e.what());
  }
  GameFile f;
  try {
    f.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    f.vertices = j.at("vertices").get<std::vector<std::string>>();
    f.safe = j.at("safe").get<std::vector<std::string>>();
    f.initial = j.at("initial").get<std::string>();
    if (j.contains("default_target")) {
      const json& d = j["default_target"];
      if (d.is_string()) {
        f.global_default = d.get<std::string>();
      } else if (d.is_object()) {
        for (auto it = d.begin(); it != d.end(); ++it)
          f.per_vertex_default.push_back({it.key(), it.value().get<std::string>()});
      } else if (!d.is_null()) {
        throw parse_error("default_target must be a vertex name or a map");
      }
    }
    for (const json& e : j.at("edges")) {
      f.edges.push_back({e.at("from").get<std::string>(),
                         e.at("to").get<std::string>(),
                         e.at("lang").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("arena file: ") + e.what());
  }
  return f;
}

std::string game_file_to_json(const GameFile& f) {
  json j;
  j["alphabet"] = f.alphabet;
  j["vertices"] = f.vertices;
  j["safe"] = f.safe;
  j["initial"] = f.initial;
  if (f.global_default) {
    j["default_target"] = *f.global_default;
  } else if (!f.per_vertex_default.empty()) {
    json d = json::object();
    for (const auto& [v, t] : f.per_vertex_default)
      d[v] = t;
    j["default_target"] = d;
  }
  j["edges"] = json::array();
  for (const auto& e : f.edges)
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"lang", e.lang}});
  return j.dump(2) + "\n";
}

SafetyGame build_game(const GameFile& file) {
  Alphabet alphabet(file.alphabet);
  std::unordered_map<std::string, int> vidx;
  for (std::size_t i = 0; i < file.vertices.size(); ++i)
    vidx[file.vertices[i]] = static_cast<int>(i);
  auto lookup = [&](const std::string& name) {
    auto it = vidx.find(name);
    if (it == vidx.end())
      throw validation_error("unknown vertex: " + name);
    return it->second;
  };
  if (vidx.count(file.initial) == 0)
    throw validation_error("initial vertex undeclared: " + file.initial);

  Arena arena(alphabet, file.vertices, vidx.at(file.initial));
  SafetyGame g{std::move(arena), std::vector<char>(file.vertices.size(), 0),
               std::vector<int>(file.vertices.size(), -1), false};
  for (const std::string& s : file.safe)
    g.safe[lookup(s)] = 1;
  if (file.global_default) {
    int t = lookup(*file.global_default);
    for (int v = 0; v < g.arena.num_vertices(); ++v)
      g.default_target[v] = t;
  }
  for (const auto& [v, t] : file.per_vertex_default)
    g.default_target[lookup(v)] = lookup(t);

  for (const auto& e : file.edges) {
    int from = lookup(e.from);
    int to = lookup(e.to);
    Dfa d = compile(parse_lang_expr(e.lang, alphabet), alphabet);
    const ArenaEdge* existing = g.arena.edge(from, to);
    if (existing != nullptr) {
      Dfa merged = Dfa::union_of(*existing->dfa, d);
      std::string text = "(" + existing->expr_text + ")|(" + e.lang + ")";
      g.arena.set_edge(from, to, std::make_shared<Dfa>(std::move(merged)), text);
    } else {
      g.arena.set_edge(from, to, std::make_shared<Dfa>(std::move(d)), e.lang);
    }
  }
  return g;
}

GameFile to_game_file(const SafetyGame& game) {
  GameFile f;
  f.alphabet = game.arena.alphabet().names();
  for (int v = 0; v < game.arena.num_vertices(); ++v) {
    f.vertices.push_back(game.arena.vertex_name(v));
    if (game.is_safe(v))
      f.safe.push_back(game.arena.vertex_name(v));
  }
  f.initial = game.arena.vertex_name(game.arena.initial());
  for (int v = 0; v < game.arena.num_vertices(); ++v) {
    if (!game.default_target.empty() && game.default_target[v] >= 0)
      f.per_vertex_default.push_back(
          {game.arena.vertex_name(v), game.arena.vertex_name(game.default_target[v])});
  }
  for (int v = 0; v < game.arena.num_vertices(); ++v)
    for (const ArenaEdge& e : game.arena.out(v))
      f.edges.push_back({game.arena.vertex_name(e.from), game.arena.vertex_name(e.to),
                         e.expr_text});
  return f;
}

}  // namespace parcoal
