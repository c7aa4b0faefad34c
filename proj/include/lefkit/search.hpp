#ifndef LEFKIT_SEARCH_HPP
#define LEFKIT_SEARCH_HPP

// Bounded breadth-first equivalence search over the diagram-level move
// alphabet. Sound but incomplete: every returned script replays and passes
// the certification gates, and a miss distinguishes "explored everything
// within the bounds" from "ran out of budget".

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "lefkit/invariants.hpp"

namespace lefkit {

struct SearchConfig {
  // Ops drawn from the script replayer's diagram-level vocabulary.
  std::vector<std::string> alphabet = {"S-", "P-", "slide", "S+", "P+"};
  int depth = 3;
  size_t node_budget = 20000;
  bool canonicalize = true;  // dedup by template reading, not spelling

  void check() const {
    if (alphabet.empty())
      throw std::invalid_argument("search: alphabet must be non-empty");
    if (depth < 0 || node_budget == 0)
      throw std::invalid_argument("search: bounds must be positive");
  }
  bool has(const std::string &op) const {
    for (const std::string &o : alphabet)
      if (o == op)
        return true;
    return false;
  }
};

// Structural key of a diagram. With `canonical`, bands recognized as
// monotonic are keyed by their template reading, which quotients away the
// spelling differences plane isotopy leaves behind; otherwise the verbatim
// word is used.
inline std::string diagram_key(const LineDiagram &ld, bool canonical = true) {
  std::ostringstream out;
  out << ld.degree << "|" << ld.sheets() << "|";
  for (const Perm &t : ld.labels)
    out << t.cycles() << ";";
  out << "#";
  for (const Band &b : ld.bands.bands) {
    if (canonical && b.mono) {
      out << "m" << b.mono->from << "," << b.mono->to << ","
          << (b.mono->sign > 0 ? '+' : '-') << ",";
      for (int e : b.mono->pattern)
        out << (e > 0 ? 't' : 'f');
    } else {
      out << "w";
      for (int l : b.w.letters)
        out << l << ",";
    }
    out << ";";
  }
  return out.str();
}

struct SearchResult {
  std::optional<MoveScript> script;
  bool budget_exceeded = false;
  size_t nodes = 0;  // states generated (including the root)

  bool found() const { return script.has_value(); }
};

namespace search_detail {

struct Node {
  LineDiagram ld;
  MoveScript script;
};

struct Candidate {
  Move mv;
  LineDiagram ld;
  int rank;  // shrinking moves first
  std::string key;
};

// All single-move successors, ordered shrink-first and then by the
// lexicographic form of the resulting diagram (the fixed tie-break).
inline std::vector<Candidate> successors(const LineDiagram &ld,
                                         const SearchConfig &cfg) {
  std::vector<Candidate> out;
  // the moves are applied directly at the diagram level here; certification
  // (which rebuilds the fibration presentation per step) runs only on the
  // winning script
  auto offer = [&](Move mv, int rank) {
    try {
      LineDiagram next;
      if (mv.op == "S+")
        next = move_S(ld, mv.args[0], mv.args[1]);
      else if (mv.op == "S-")
        next = move_S_inverse(ld, mv.args[0], mv.args[1]);
      else if (mv.op == "P+")
        next = move_P(ld, mv.args[0]);
      else if (mv.op == "P-")
        next = move_P_inverse(ld, mv.args[0]);
      else
        next = slide(ld, mv.args[0],
                     mv.args[1] ? SlideDir::left : SlideDir::right);
      out.push_back(Candidate{std::move(mv), std::move(next), rank, ""});
    } catch (const std::exception &) {
      // move not applicable here
    }
  };
  int m = ld.sheets();
  int n = (int)ld.bands.size();
  if (cfg.has("S-"))
    for (int i = 1; i <= n; i++) {
      int a = 0, b = 0;
      if (ld.bands.bands[i - 1].w.perm().is_transposition(&a, &b)) {
        offer(Move{"S-", {i, a}}, 0);
        offer(Move{"S-", {i, b}}, 0);
      }
    }
  if (cfg.has("P-"))
    for (int v : {1, -1})
      offer(Move{"P-", {v}}, 0);
  if (cfg.has("slide"))
    for (int i = 1; i < n; i++)
      for (int dir : {0, 1})
        offer(Move{"slide", {i, dir}}, 1);
  if (cfg.has("S+"))
    for (int src = 1; src <= m; src++)
      for (int sign : {1, -1})
        offer(Move{"S+", {src, sign}}, 2);
  if (cfg.has("P+"))
    for (int v : {1, -1})
      offer(Move{"P+", {v}}, 2);
  for (Candidate &c : out)
    c.key = diagram_key(c.ld, cfg.canonicalize);
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate &x, const Candidate &y) {
                     if (x.rank != y.rank)
                       return x.rank < y.rank;
                     return x.key < y.key;
                   });
  return out;
}

}  // namespace search_detail

inline SearchResult search_equivalence(const LineDiagram &a,
                                       const LineDiagram &b,
                                       const SearchConfig &cfg = {}) {
  using namespace search_detail;
  cfg.check();
  a.check();
  b.check();

  std::string goal = diagram_key(b, cfg.canonicalize);
  SearchResult res;
  res.nodes = 1;
  if (diagram_key(a, cfg.canonicalize) == goal) {
    res.script = MoveScript{};
    return res;
  }

  std::deque<Node> frontier;
  std::unordered_set<std::string> seen;
  frontier.push_back(Node{a, MoveScript{}});
  seen.insert(diagram_key(a, cfg.canonicalize));

  while (!frontier.empty()) {
    Node cur = std::move(frontier.front());
    frontier.pop_front();
    if ((int)cur.script.size() >= cfg.depth)
      continue;
    for (Candidate &c : successors(cur.ld, cfg)) {
      if (res.nodes >= cfg.node_budget) {
        res.budget_exceeded = true;
        return res;
      }
      if (c.key == goal) {
        // soundness gate: only certified scripts that land on the target
        // leave the search. A failing hit is dropped without marking the
        // key as seen, so other routes to the target stay open.
        res.nodes++;
        MoveScript script = cur.script;
        script.moves.push_back(c.mv);
        if (certify(a, b, script).ok) {
          res.script = std::move(script);
          return res;
        }
        continue;
      }
      if (!seen.insert(c.key).second)
        continue;
      res.nodes++;
      MoveScript script = cur.script;
      script.moves.push_back(c.mv);
      frontier.push_back(Node{std::move(c.ld), std::move(script)});
    }
  }
  return res;  // exhausted within the bounds; no budget pressure
}

}  // namespace lefkit

#endif
