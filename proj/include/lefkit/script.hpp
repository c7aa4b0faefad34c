#ifndef LEFKIT_SCRIPT_HPP
#define LEFKIT_SCRIPT_HPP

// Move scripts: the trail of rewrites an algorithm performed, kept as plain
// data so a caller can audit it, replay it on the source, or undo it. Each
// entry is an op name with integer arguments; the module defining a move
// documents its argument layout and provides the apply function.

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lefkit {

struct Move {
  std::string op;
  std::vector<int> args;

  bool operator==(const Move &o) const { return op == o.op && args == o.args; }

  std::string str() const {
    std::string s = op;
    for (int a : args)
      s += " " + std::to_string(a);
    return s;
  }
};

struct MoveScript {
  std::vector<Move> moves;

  size_t size() const { return moves.size(); }
  bool empty() const { return moves.empty(); }

  void add(std::string op, std::vector<int> args) {
    moves.push_back({std::move(op), std::move(args)});
  }

  bool operator==(const MoveScript &o) const { return moves == o.moves; }

  std::string str() const {
    std::string s;
    for (const Move &m : moves)
      s += m.str() + "\n";
    return s;
  }

  static MoveScript parse(std::istream &in) {
    MoveScript s;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      Move m;
      if (!(ls >> m.op) || m.op[0] == '#')
        continue;
      int a;
      while (ls >> a)
        m.args.push_back(a);
      if (!ls.eof())
        throw std::invalid_argument("move script: non-integer argument in '" +
                                    line + "'");
      s.moves.push_back(std::move(m));
    }
    return s;
  }

  static MoveScript parse(const std::string &text) {
    std::istringstream in(text);
    return parse(in);
  }
};

}  // namespace lefkit

#endif
