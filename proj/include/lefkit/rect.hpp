#ifndef LEFKIT_RECT_HPP
#define LEFKIT_RECT_HPP

// Rectangular diagrams: labeled flat pictures of a braided surface built
// from grid cells. Horizontal runs are the sheets, vertical runs the bands;
// a vertical band may cross a horizontal run in front (e) or through it
// (f, or g/h at a capped end), and only through-crossings cut the label
// regions. y grows downward, so the topmost sheet has the smallest y.

#include <map>
#include <set>

#include "lefkit/braid.hpp"

namespace lefkit {

enum class CellKind { a, b, c, d, e, f, g, h };

// Port directions, clockwise from north.
enum : int { DIR_N = 0, DIR_E = 1, DIR_S = 2, DIR_W = 3 };

inline const char *cell_name(CellKind k) {
  switch (k) {
    case CellKind::a: return "a";
    case CellKind::b: return "b";
    case CellKind::c: return "c";
    case CellKind::d: return "d";
    case CellKind::e: return "e";
    case CellKind::f: return "f";
    case CellKind::g: return "g";
    case CellKind::h: return "h";
  }
  return "?";
}

inline CellKind cell_kind_of(const std::string &s) {
  static const char *names = "abcdefgh";
  if (s.size() == 1)
    for (int i = 0; i < 8; i++)
      if (s[0] == names[i])
        return (CellKind)i;
  throw std::invalid_argument("rect: unknown cell kind '" + s + "'");
}

struct Cell {
  CellKind kind = CellKind::a;
  int rot = 0;  // quarter turns counterclockwise

  bool operator==(const Cell &o) const { return kind == o.kind && rot == o.rot; }
};

// Ports of the unrotated cell, grouped by internal connection: ports in one
// group belong to the same strand of surface inside the cell.
inline std::vector<std::vector<int>> base_port_groups(CellKind k) {
  switch (k) {
    case CellKind::a: return {{DIR_E, DIR_W}};
    case CellKind::b: return {{DIR_N, DIR_E}};
    case CellKind::c: return {{DIR_W}};
    case CellKind::d: return {{DIR_E, DIR_W, DIR_S}};
    // e: the vertical band passes in front, both strands run through whole
    case CellKind::e: return {{DIR_N, DIR_S}, {DIR_E, DIR_W}};
    // f: the vertical band passes through the sheet and its label region
    // is cut there; the sheet itself continues
    case CellKind::f: return {{DIR_E, DIR_W}, {DIR_N}, {DIR_S}};
    case CellKind::g: return {{DIR_W}, {DIR_N}, {DIR_S}};
    case CellKind::h: return {{DIR_E}, {DIR_N}, {DIR_S}};
  }
  return {};
}

inline int rotate_dir(int dir, int rot) {  // ccw quarter turns
  return ((dir - rot) % 4 + 4) % 4;
}

inline std::vector<std::vector<int>> port_groups(const Cell &c) {
  auto groups = base_port_groups(c.kind);
  for (auto &g : groups)
    for (int &d : g)
      d = rotate_dir(d, c.rot);
  return groups;
}

inline std::vector<int> ports(const Cell &c) {
  std::vector<int> p;
  for (const auto &g : port_groups(c))
    p.insert(p.end(), g.begin(), g.end());
  return p;
}

// Is this cell a through-crossing (cuts the vertical band's label region)?
inline bool is_through(CellKind k) {
  return k == CellKind::f || k == CellKind::g || k == CellKind::h;
}
inline bool is_crossing(CellKind k) { return k == CellKind::e || is_through(k); }

struct XY {
  int x = 0, y = 0;
  bool operator<(const XY &o) const {
    return y != o.y ? y < o.y : x < o.x;  // row-major
  }
  bool operator==(const XY &o) const { return x == o.x && y == o.y; }
};

inline XY step_xy(XY p, int dir) {
  switch (dir) {
    case DIR_N: return {p.x, p.y - 1};
    case DIR_E: return {p.x + 1, p.y};
    case DIR_S: return {p.x, p.y + 1};
    case DIR_W: return {p.x - 1, p.y};
  }
  throw std::invalid_argument("rect: bad direction");
}

inline int opposite_dir(int dir) { return (dir + 2) % 4; }

struct RectDiagram {
  int degree = 2;
  std::map<XY, Cell> cells;
  std::map<int, Perm> labels;  // region id -> transposition

  // ---- region decomposition ----------------------------------------------

  // Deterministic region ids: scan cells row-major, flood filling each
  // unassigned port group through matching neighbor ports. Both sides of a
  // through-crossing get distinct regions; everything else merges.
  std::map<std::pair<XY, int>, int> port_regions() const {
    std::map<std::pair<XY, int>, int> reg;
    int next = 0;
    for (const auto &[pos, cell] : cells) {
      for (const auto &group : port_groups(cell)) {
        if (reg.count({pos, group[0]}))
          continue;
        int id = next++;
        std::vector<std::pair<XY, int>> stack;
        for (int d : group)
          stack.push_back({pos, d});
        while (!stack.empty()) {
          auto [p, d] = stack.back();
          stack.pop_back();
          if (reg.count({p, d}))
            continue;
          // mark the whole port group of this cell containing (p, d)
          auto it = cells.find(p);
          if (it == cells.end())
            throw std::runtime_error("rect: dangling port during fill");
          for (const auto &g : port_groups(it->second)) {
            if (std::find(g.begin(), g.end(), d) == g.end())
              continue;
            for (int dd : g) {
              reg[{p, dd}] = id;
              XY q = step_xy(p, dd);
              int back = opposite_dir(dd);
              if (cells.count(q) && !reg.count({q, back}))
                stack.push_back({q, back});
            }
          }
        }
      }
    }
    return reg;
  }

  int region_count() const {
    auto reg = port_regions();
    int m = -1;
    for (const auto &[k, v] : reg)
      m = std::max(m, v);
    return m + 1;
  }

  // ---- validation ---------------------------------------------------------

  void check() const {
    if (degree < 2)
      throw std::runtime_error("rect: degree must be at least 2");
    for (const auto &[pos, cell] : cells) {
      if (cell.rot < 0 || cell.rot > 3)
        throw std::runtime_error("rect: rotation out of range");
      for (int d : ports(cell)) {
        XY q = step_xy(pos, d);
        auto it = cells.find(q);
        if (it == cells.end())
          throw std::runtime_error("rect: open port at (" +
                                   std::to_string(pos.x) + "," +
                                   std::to_string(pos.y) + ")");
        auto np = ports(it->second);
        if (std::find(np.begin(), np.end(), opposite_dir(d)) == np.end())
          throw std::runtime_error("rect: mismatched ports between (" +
                                   std::to_string(pos.x) + "," +
                                   std::to_string(pos.y) + ") and (" +
                                   std::to_string(q.x) + "," +
                                   std::to_string(q.y) + ")");
      }
    }
    check_label_consistency();
  }

  // Every region needs a transposition label; at a through-crossing the
  // band labels on the two sides differ by conjugation with the label of
  // the sheet being passed through.
  void check_label_consistency() const {
    auto reg = port_regions();
    int n = region_count();
    if ((int)labels.size() != n)
      throw std::runtime_error("rect: expected " + std::to_string(n) +
                               " region labels, have " +
                               std::to_string(labels.size()));
    for (const auto &[id, t] : labels) {
      if (id < 0 || id >= n)
        throw std::runtime_error("rect: label for unknown region " +
                                 std::to_string(id));
      if (t.deg() != degree || !t.is_transposition())
        throw std::runtime_error("rect: region label is not a transposition");
    }
    for (const auto &[pos, cell] : cells) {
      if (!is_through(cell.kind))
        continue;
      // after rotation: which ports are the vertical band, which the sheet
      int up = rotate_dir(DIR_N, cell.rot), down = rotate_dir(DIR_S, cell.rot);
      const Perm &above = labels.at(reg.at({pos, up}));
      const Perm &below = labels.at(reg.at({pos, down}));
      int sheet_dir = rotate_dir(cell.kind == CellKind::h ? DIR_E : DIR_W,
                                 cell.rot);
      const Perm &sheet = labels.at(reg.at({pos, sheet_dir}));
      Perm want = sheet.then(above).then(sheet);  // conjugation, involution
      if (below != want)
        throw std::runtime_error(
            "rect: labels at through-crossing (" + std::to_string(pos.x) +
            "," + std::to_string(pos.y) + ") do not match: have " +
            below.cycles() + ", transport requires " + want.cycles());
    }
  }

  // The restricted repertoire: horizontal sheets, vertical bands, and the
  // one-run-per-line rule that keeps the picture braidable.
  void check_restricted() const {
    check();
    for (const auto &[pos, cell] : cells) {
      bool ok = false;
      switch (cell.kind) {
        case CellKind::a: ok = cell.rot == 0 || cell.rot == 1; break;
        case CellKind::b: ok = true; break;
        case CellKind::c: ok = cell.rot == 0 || cell.rot == 2; break;
        default: ok = cell.rot == 0; break;
      }
      if (!ok)
        throw std::runtime_error("rect: cell (" + std::to_string(pos.x) + "," +
                                 std::to_string(pos.y) +
                                 ") is not in restricted form");
    }
    // at most one horizontal run per row and one vertical run per column
    std::map<int, std::vector<std::pair<int, int>>> rows, cols;
    for (const auto &[pos, cell] : cells) {
      auto p = ports(cell);
      bool east = std::find(p.begin(), p.end(), DIR_E) != p.end();
      bool west = std::find(p.begin(), p.end(), DIR_W) != p.end();
      bool north = std::find(p.begin(), p.end(), DIR_N) != p.end();
      bool south = std::find(p.begin(), p.end(), DIR_S) != p.end();
      if (east || west)
        rows[pos.y].push_back({pos.x, (east ? 1 : 0) | (west ? 2 : 0)});
      if (north || south)
        cols[pos.x].push_back({pos.y, (south ? 1 : 0) | (north ? 2 : 0)});
    }
    // cells of one line must form a single chain of mutually open ports
    auto one_run = [](std::vector<std::pair<int, int>> &line, const char *what) {
      std::sort(line.begin(), line.end());
      for (size_t i = 1; i < line.size(); i++)
        if (line[i].first != line[i - 1].first + 1 ||
            !(line[i - 1].second & 1) || !(line[i].second & 2))
          throw std::runtime_error(std::string("rect: more than one ") + what +
                                   " run on a line");
    };
    for (auto &[y, line] : rows)
      one_run(line, "horizontal");
    for (auto &[x, line] : cols)
      one_run(line, "vertical");
  }

  // ---- isotopy normalization ---------------------------------------------

  // Translate to the origin and drop empty grid lines (nothing can cross a
  // line without occupying a cell on it, so deleting them is an isotopy).
  RectDiagram normalize_isotopy() const {
    RectDiagram r;
    r.degree = degree;
    r.labels = labels;
    std::set<int> xs, ys;
    for (const auto &[pos, cell] : cells) {
      xs.insert(pos.x);
      ys.insert(pos.y);
    }
    std::map<int, int> xmap, ymap;
    int i = 0;
    for (int x : xs)
      xmap[x] = i++;
    i = 0;
    for (int y : ys)
      ymap[y] = i++;
    for (const auto &[pos, cell] : cells)
      r.cells[{xmap[pos.x], ymap[pos.y]}] = cell;
    return r;
  }

  // Report-style validation for user-facing tooling; check() throws on the
  // first problem, this collects what it can.
  std::vector<std::string> validate() const {
    std::vector<std::string> report;
    try {
      check();
    } catch (const std::exception &e) {
      report.push_back(e.what());
    }
    return report;
  }

  std::string fingerprint() const;  // canonical text, defined below

  bool operator==(const RectDiagram &o) const {
    return degree == o.degree && cells == o.cells && labels == o.labels;
  }
};

// ---------------------------------------------------------------------------
// .rect text format.
//
//   rect 1
//   degree 3
//   cell 0 0 a 0
//   ...
//   label 0 (1 2)

inline void save_rect(const RectDiagram &rd, std::ostream &out) {
  out << "rect 1\n";
  out << "degree " << rd.degree << "\n";
  for (const auto &[pos, cell] : rd.cells)
    out << "cell " << pos.x << " " << pos.y << " " << cell_name(cell.kind)
        << " " << cell.rot << "\n";
  for (const auto &[id, t] : rd.labels)
    out << "label " << id << " " << t.cycles() << "\n";
}

inline std::string to_rect(const RectDiagram &rd) {
  std::ostringstream out;
  save_rect(rd, out);
  return out.str();
}

inline std::string RectDiagram::fingerprint() const {
  return to_rect(normalize_isotopy());
}

inline RectDiagram load_rect(std::istream &in) {
  RectDiagram rd;
  rd.degree = 0;
  std::string line;
  int lineno = 0;
  bool magic = false;
  auto fail = [&](const std::string &msg) -> void {
    throw std::invalid_argument("rect line " + std::to_string(lineno) + ": " +
                                msg);
  };
  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#')
      continue;
    if (key == "rect") {
      int version = 0;
      if (!(ls >> version) || version != 1)
        fail("unsupported version");
      magic = true;
    } else if (key == "degree") {
      if (!(ls >> rd.degree) || rd.degree < 2)
        fail("bad degree");
    } else if (key == "cell") {
      int x, y, rot;
      std::string kind;
      if (!(ls >> x >> y >> kind >> rot))
        fail("cell needs: x y kind rot");
      if (rot < 0 || rot > 3)
        fail("cell rotation out of range");
      if (rd.cells.count({x, y}))
        fail("duplicate cell");
      rd.cells[{x, y}] = Cell{cell_kind_of(kind), rot};
    } else if (key == "label") {
      int id;
      std::string rest;
      if (!rd.degree)
        fail("label before degree");
      if (!(ls >> id))
        fail("bad label region id");
      std::getline(ls, rest);
      rd.labels[id] = Perm::parse_cycles(rd.degree, rest);
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!magic)
    throw std::invalid_argument("rect: missing 'rect 1' header");
  if (!rd.degree)
    throw std::invalid_argument("rect: missing degree");
  return rd;
}

inline RectDiagram from_rect(const std::string &text) {
  std::istringstream in(text);
  return load_rect(in);
}

}  // namespace lefkit

#endif
