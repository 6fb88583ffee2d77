#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parcoal/lang.hh"

namespace parcoal {

struct ArenaEdge {
  int from;
  int to;
  DfaPtr dfa;
  std::string expr_text;  // source expression, kept for DOT and file output
};

/// Parameterized arena: vertices, an alphabet, and a partial edge map
/// (v, v') -> regular language over Sigma^+.
class Arena {
public:
  Arena(Alphabet alphabet, std::vector<std::string> vertex_names, int initial);

  const Alphabet& alphabet() const { return alphabet_; }
  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  const std::string& vertex_name(int v) const { return vertex_names_.at(v); }
  int vertex_index(const std::string& name) const;
  bool has_vertex(const std::string& name) const;
  int initial() const { return initial_; }

  /// Outgoing edges of v, ordered by target-vertex declaration order.
  const std::vector<ArenaEdge>& out(int v) const { return out_.at(v); }
  const ArenaEdge* edge(int from, int to) const;

  void set_edge(int from, int to, DfaPtr dfa, std::string expr_text);
  void remove_edge(int from, int to);
  void clear_out(int v);
  int add_vertex(const std::string& name);

private:
  Alphabet alphabet_;
  std::vector<std::string> vertex_names_;
  int initial_;
  std::vector<std::vector<ArenaEdge>> out_;
};

/// Arena plus a safe-vertex set. `default_target[v]` (when >= 0) names the
/// vertex that receives all words unspecified at v, mirroring the usual
/// "all unspecified transitions lead to ..." convention; it is consumed by
/// normalize.
struct SafetyGame {
  Arena arena;
  std::vector<char> safe;
  std::vector<int> default_target;
  bool normalized = false;

  bool is_safe(int v) const { return safe[v] != 0; }
};

/// A history is a nonempty vertex sequence compatible with the edges.
using History = std::vector<int>;

bool is_history(const Arena& arena, const History& h);

/// Completes the arena (remainders go to the per-vertex default target or to
/// a fresh unsafe vertex), turns every unsafe vertex into a Sigma^+
/// self-loop sink, and drops empty-language edges. Idempotent.
SafetyGame normalize(const SafetyGame& game);

/// True iff every vertex's outgoing languages cover Sigma^+.
bool completeness_check(const Arena& arena);

/// True iff no word leads from any vertex to two distinct successors.
bool determinism_check(const Arena& arena);

/// { v' : u in Delta(v, v') }; u must be nonempty.
std::vector<int> successors(const Arena& arena, int v, const Word& u);

/// True iff each step of h can be taken with a word of length k.
bool k_realizable(const Arena& arena, const History& h, std::uint64_t k);

// --- file format ------------------------------------------------------------

struct GameFile {
  std::vector<std::string> alphabet;
  std::vector<std::string> vertices;
  std::vector<std::string> safe;
  std::string initial;
  std::optional<std::string> global_default;
  std::vector<std::pair<std::string, std::string>> per_vertex_default;
  struct RawEdge {
    std::string from, to, lang;
  };
  std::vector<RawEdge> edges;
};

GameFile parse_game_file(const std::string& json_text);
std::string game_file_to_json(const GameFile& file);

/// Compiles expressions and validates references; the result is not yet
/// normalized.
SafetyGame build_game(const GameFile& file);

/// Writes a (typically normalized) game back to the file format.
GameFile to_game_file(const SafetyGame& game);

}  // namespace parcoal
