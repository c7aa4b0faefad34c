#ifndef LEFKIT_RECTMOVES_HPP
#define LEFKIT_RECTMOVES_HPP

// The executable move alphabet on rectangular diagrams. Most moves are
// template pairs: two small cell patches with identical boundary ports, so
// either side can replace the other wherever it occurs. The remaining moves
// are parametric (band swaps, stabilization, component insertion). Every
// application re-derives the region labels from the unchanged surroundings
// and re-validates the whole diagram, so a template can never smuggle in an
// inconsistent picture; see docs/templates-audit.md for the catalog and the
// confidence notes per template.

#include <climits>

#include "lefkit/braider.hpp"
#include "lefkit/lf.hpp"

namespace lefkit {

// ---------------------------------------------------------------------------
// Surface Euler characteristic straight off the cells: crossing cells hold
// two strips of surface, every other cell one, and each matched port pair
// glues two strips along an arc.

inline long long rect_chi_surface(const RectDiagram &rd) {
  long long pieces = 0, port_count = 0;
  for (const auto &[pos, cell] : rd.cells) {
    pieces += is_crossing(cell.kind) ? 2 : 1;
    port_count += (long long)ports(cell).size();
  }
  return pieces - port_count / 2;
}

// Cover Euler characteristic of the 4-dimensional 2-handlebody presented by
// a labeled diagram of degree d: d - chi(surface)... with the opposite sign
// convention folded in so it matches the handle count d - #disks + #bands.
inline long long rect_euler_w(const RectDiagram &rd) {
  return rd.degree - rect_chi_surface(rd);
}

struct MoveInstance {
  std::string move_id;      // r1..r31, k1, k2, stab, destab
  XY site{0, 0};            // template anchor / parametric position
  int rot = 0;              // whole-template quarter turns
  bool reverse = false;     // apply right-to-left
  std::vector<int> params;  // move-specific integers (documented per move)
};

namespace rectmoves_detail {

// Cells that draw the same local picture compare equal.
inline Cell canon_cell(Cell c) {
  switch (c.kind) {
    case CellKind::a:
    case CellKind::e:
    case CellKind::f:
      c.rot %= 2;
      break;
    case CellKind::g:
      if (c.rot >= 2) {
        c.kind = CellKind::h;
        c.rot -= 2;
      }
      break;
    case CellKind::h:
      if (c.rot >= 2) {
        c.kind = CellKind::g;
        c.rot -= 2;
      }
      break;
    default:
      break;
  }
  return c;
}

inline bool same_cell(const Cell &x, const Cell &y) {
  return canon_cell(x) == canon_cell(y);
}

struct Patch {
  std::map<XY, Cell> cells;
};

struct PatchCell {
  int x, y;
  CellKind kind;
  int rot;
};

inline Patch make_patch(std::initializer_list<PatchCell> cs) {
  Patch p;
  for (const PatchCell &c : cs)
    p.cells[{c.x, c.y}] = Cell{c.kind, c.rot};
  return p;
}

// Quarter turn consistent with cell rotation: port N becomes port W, so the
// position step for N must become the step for W.
inline XY rotate_xy(XY p, int k) {
  for (int i = 0; i < k; i++)
    p = XY{p.y, -p.x};
  return p;
}

inline Patch transform(const Patch &p, int rot, XY site) {
  Patch r;
  for (const auto &[pos, cell] : p.cells) {
    XY q = rotate_xy(pos, rot);
    r.cells[{q.x + site.x, q.y + site.y}] =
        canon_cell(Cell{cell.kind, (cell.rot + rot) % 4});
  }
  return r;
}

// External ports of a patch: ports whose neighbor cell is not in the patch.
inline std::set<std::pair<XY, int>> interface_of(const Patch &p) {
  std::set<std::pair<XY, int>> out;
  for (const auto &[pos, cell] : p.cells)
    for (int d : ports(cell))
      if (!p.cells.count(step_xy(pos, d)))
        out.insert({step_xy(pos, d), opposite_dir(d)});
  // keyed by the neighbor position and the port it would need, so the two
  // sides of a move can be compared directly
  return out;
}

// Relative Euler characteristic of a patch (strips minus internal glue).
inline long long patch_chi(const Patch &p) {
  long long pieces = 0, internal = 0;
  for (const auto &[pos, cell] : p.cells) {
    pieces += is_crossing(cell.kind) ? 2 : 1;
    for (int d : ports(cell))
      if (p.cells.count(step_xy(pos, d)))
        internal++;
  }
  return pieces - internal / 2;
}

struct Template {
  const char *id;
  Patch a, b;
  const char *note;
};

// Registry self-check: the two sides must agree on their boundary ports and
// on the surface they spend, and internal ports must pair up; anything else
// is a transcription bug, caught the first time the catalog is touched.
inline void validate_template(const Template &t) {
  auto check_side = [&](const Patch &p) {
    for (const auto &[pos, cell] : p.cells)
      for (int d : ports(cell)) {
        auto it = p.cells.find(step_xy(pos, d));
        if (it == p.cells.end())
          continue;
        auto np = ports(it->second);
        if (std::find(np.begin(), np.end(), opposite_dir(d)) == np.end())
          throw std::logic_error(std::string("template ") + t.id +
                                 ": internal port mismatch");
      }
  };
  check_side(t.a);
  check_side(t.b);
  if (interface_of(t.a) != interface_of(t.b))
    throw std::logic_error(std::string("template ") + t.id +
                           ": boundary interfaces differ");
  if (patch_chi(t.a) != patch_chi(t.b))
    throw std::logic_error(std::string("template ") + t.id +
                           ": sides spend different surface");
}

inline const std::vector<Template> &catalog() {
  using K = CellKind;
  static const std::vector<Template> reg = [] {
    std::vector<Template> v;
    auto add = [&](const char *id, Patch a, Patch b, const char *note) {
      v.push_back({id, std::move(a), std::move(b), note});
    };
    // -- plane isotopy ----------------------------------------------------
    add("r2", make_patch({{0, 0, K::a, 0}, {1, 0, K::c, 0}}),
        make_patch({{0, 0, K::c, 0}}),
        "terminal band retraction along its own direction");
    add("r3",
        make_patch({{0, 1, K::b, 1},
                    {0, 0, K::b, 3},
                    {1, 0, K::a, 0},
                    {2, 0, K::b, 2},
                    {2, 1, K::b, 0}}),
        make_patch({{0, 1, K::a, 0}, {1, 1, K::a, 0}, {2, 1, K::a, 0}}),
        "flattening a jog in a band");
    add("r4", make_patch({{0, 0, K::b, 0}, {1, 0, K::c, 0}}),
        make_patch({{0, 0, K::c, 3}}), "terminal band retraction at a bend");
    add("r5", make_patch({{0, 0, K::c, 2}, {1, 0, K::b, 1}}),
        make_patch({{1, 0, K::c, 3}}),
        "terminal band retraction at the mirror bend");
    add("r6", make_patch({{0, 0, K::c, 1}}),
        make_patch({{0, 0, K::b, 3}, {1, 0, K::c, 0}}),
        "folding a vertical band end sideways");
    add("r7",
        make_patch({{0, 0, K::b, 0}, {1, 0, K::b, 2}, {1, 1, K::a, 1}}),
        make_patch({{0, 0, K::a, 1}, {0, 1, K::b, 0}, {1, 1, K::b, 2}}),
        "migrating a step of a band by one cell");
    // -- 3-dimensional isotopy --------------------------------------------
    add("r8",
        make_patch({{0, 0, K::c, 1}, {0, 1, K::e, 0}, {0, 2, K::a, 1}}),
        make_patch({{0, 1, K::a, 0}, {0, 2, K::c, 1}}),
        "band end retracted across the front of a band");
    add("r9",
        make_patch({{0, 0, K::c, 1}, {0, 1, K::e, 1}, {0, 2, K::a, 1}}),
        make_patch({{0, 1, K::a, 0}, {0, 2, K::c, 1}}),
        "band end retracted across the back of a band");
    add("r10",
        make_patch({{-1, 0, K::a, 0}, {0, 0, K::e, 1}, {1, 0, K::c, 0}}),
        make_patch({{-1, 0, K::c, 0}, {0, 0, K::a, 1}}),
        "sideways band end retracted across the front of a band");
    add("r11",
        make_patch({{-1, 0, K::a, 0}, {0, 0, K::e, 0}, {1, 0, K::c, 0}}),
        make_patch({{-1, 0, K::c, 0}, {0, 0, K::a, 1}}),
        "sideways band end retracted across the back of a band");
    add("r12",
        make_patch({{0, 0, K::a, 1},
                    {1, 0, K::a, 1},
                    {0, 1, K::e, 0},
                    {1, 1, K::e, 0},
                    {0, 2, K::b, 0},
                    {1, 2, K::b, 1}}),
        make_patch({{0, 0, K::b, 0},
                    {1, 0, K::b, 1},
                    {0, 1, K::a, 0},
                    {1, 1, K::a, 0}}),
        "retracting a dip across the front of a band");
    add("r14",
        make_patch({{0, 0, K::a, 1},
                    {1, 0, K::a, 1},
                    {0, 1, K::e, 1},
                    {1, 1, K::e, 1},
                    {0, 2, K::b, 0},
                    {1, 2, K::b, 1}}),
        make_patch({{0, 0, K::b, 0},
                    {1, 0, K::b, 1},
                    {0, 1, K::a, 0},
                    {1, 1, K::a, 0}}),
        "retracting a dip across the back of a band");
    add("r15",
        make_patch({{0, 0, K::a, 0},
                    {1, 0, K::e, 1},
                    {2, 0, K::b, 2},
                    {2, 1, K::b, 1},
                    {1, 1, K::e, 1},
                    {0, 1, K::a, 0}}),
        make_patch({{0, 0, K::b, 2},
                    {0, 1, K::b, 1},
                    {1, 0, K::a, 1},
                    {1, 1, K::a, 1}}),
        "retracting a sideways dip across the front of a band");
    add("r16",
        make_patch({{0, 0, K::a, 0},
                    {1, 0, K::e, 0},
                    {2, 0, K::b, 2},
                    {2, 1, K::b, 1},
                    {1, 1, K::e, 0},
                    {0, 1, K::a, 0}}),
        make_patch({{0, 0, K::b, 2},
                    {0, 1, K::b, 1},
                    {1, 0, K::a, 1},
                    {1, 1, K::a, 1}}),
        "retracting a sideways dip across the back of a band");
    add("r17", make_patch({{0, 0, K::f, 0}, {1, 0, K::c, 0}}),
        make_patch({{0, 0, K::g, 0}}),
        "ribbon intersection absorbing the capped band end to its east");
    add("r18", make_patch({{0, 0, K::c, 2}, {1, 0, K::f, 0}}),
        make_patch({{1, 0, K::h, 0}}),
        "ribbon intersection absorbing the capped band end to its west");
    add("r19",
        make_patch({{0, 0, K::a, 1},
                    {0, 1, K::e, 0},
                    {1, 1, K::a, 0},
                    {0, 2, K::b, 0},
                    {1, 2, K::b, 2}}),
        make_patch({{0, 0, K::b, 0},
                    {1, 0, K::b, 2},
                    {0, 1, K::a, 0},
                    {1, 1, K::e, 0},
                    {1, 2, K::a, 1}}),
        "sliding a crossing past a bend of the crossing band");
    add("r13",
        make_patch({{0, 0, K::a, 1},
                    {0, 1, K::f, 0},
                    {1, 1, K::a, 0},
                    {0, 2, K::b, 0},
                    {1, 2, K::b, 2}}),
        make_patch({{0, 0, K::b, 0},
                    {1, 0, K::b, 2},
                    {0, 1, K::a, 0},
                    {1, 1, K::f, 0},
                    {1, 2, K::a, 1}}),
        "sliding a ribbon intersection past a bend of the piercing band");
    // -- 1-isotopy ---------------------------------------------------------
    add("r20",
        make_patch({{0, 0, K::c, 1}, {0, 1, K::f, 0}, {0, 2, K::a, 1}}),
        make_patch({{0, 1, K::a, 0}, {0, 2, K::c, 1}}),
        "band end pushed through a band from above");
    add("r21",
        make_patch({{-1, 0, K::a, 0}, {0, 0, K::f, 1}, {1, 0, K::c, 0}}),
        make_patch({{-1, 0, K::c, 0}, {0, 0, K::a, 1}}),
        "band end pushed through a band sideways");
    add("r22",
        make_patch({{0, 0, K::a, 1},
                    {1, 0, K::a, 1},
                    {0, 1, K::f, 0},
                    {1, 1, K::f, 0},
                    {0, 2, K::b, 0},
                    {1, 2, K::b, 1}}),
        make_patch({{0, 0, K::b, 0},
                    {1, 0, K::b, 1},
                    {0, 1, K::a, 0},
                    {1, 1, K::a, 0}}),
        "finger of a band pushed through another band and back");
    add("r23",
        make_patch({{0, 0, K::a, 0},
                    {1, 0, K::f, 1},
                    {2, 0, K::b, 2},
                    {2, 1, K::b, 1},
                    {1, 1, K::f, 1},
                    {0, 1, K::a, 0}}),
        make_patch({{0, 0, K::b, 2},
                    {0, 1, K::b, 1},
                    {1, 0, K::a, 1},
                    {1, 1, K::a, 1}}),
        "sideways finger pushed through another band and back");
    // -- covering moves ----------------------------------------------------
    add("r24", make_patch({{0, 0, K::f, 0}}), make_patch({{0, 0, K::e, 0}}),
        "through/front exchange; legitimate only when the labels commute, "
        "which the relabeling pass enforces");
    add("r25",
        make_patch({{0, 0, K::f, 0}, {0, 1, K::c, 3}}),
        make_patch({{0, 0, K::e, 0}, {0, 1, K::c, 3}}),
        "through/front exchange at a terminal band end; the short stub "
        "between crossing and cap is relabeled by transport");
    // -- edge breaking -----------------------------------------------------
    add("r26",
        make_patch({{0, 0, K::a, 1},
                    {0, 1, K::a, 1},
                    {0, 2, K::b, 0},
                    {1, 2, K::a, 0},
                    {2, 2, K::b, 2},
                    {2, 3, K::a, 1}}),
        make_patch({{0, 0, K::a, 1},
                    {-1, 1, K::c, 2},
                    {0, 1, K::d, 2},
                    {1, 1, K::d, 0},
                    {2, 1, K::c, 0},
                    {1, 2, K::a, 1},
                    {1, 3, K::b, 0},
                    {2, 3, K::b, 2}}),
        "breaking a band by interposing a transverse disk");
    add("r27",
        make_patch({{0, 0, K::a, 1},
                    {0, 1, K::a, 1},
                    {0, 2, K::b, 1},
                    {-1, 2, K::a, 0},
                    {-2, 2, K::b, 3},
                    {-2, 3, K::a, 1}}),
        make_patch({{0, 0, K::a, 1},
                    {-2, 1, K::c, 2},
                    {-1, 1, K::d, 0},
                    {0, 1, K::d, 2},
                    {1, 1, K::c, 0},
                    {-1, 2, K::a, 1},
                    {-1, 3, K::b, 1},
                    {-2, 3, K::b, 3}}),
        "breaking a band by interposing a transverse disk, mirror jog");
    // -- auxiliary ---------------------------------------------------------
    add("r28",
        make_patch({{0, 0, K::a, 1}, {0, 1, K::f, 0}, {0, 2, K::c, 3}}),
        make_patch({{0, 0, K::c, 3}, {0, 1, K::a, 0}}),
        "band end pushed through a band from below");
    add("r29",
        make_patch({{0, 0, K::c, 2}, {1, 0, K::f, 1}, {2, 0, K::a, 0}}),
        make_patch({{1, 0, K::a, 1}, {2, 0, K::c, 2}}),
        "band end pushed through a band sideways, mirror");
    add("r30",
        make_patch({{0, 0, K::b, 3},
                    {1, 0, K::b, 2},
                    {0, 1, K::f, 0},
                    {1, 1, K::f, 0},
                    {0, 2, K::a, 1},
                    {1, 2, K::a, 1}}),
        make_patch({{0, 1, K::a, 0},
                    {1, 1, K::a, 0},
                    {0, 2, K::b, 3},
                    {1, 2, K::b, 2}}),
        "upward finger pushed through another band and back");
    add("r31",
        make_patch({{0, 0, K::b, 3},
                    {1, 0, K::b, 2},
                    {0, 1, K::e, 0},
                    {1, 1, K::e, 0},
                    {0, 2, K::a, 1},
                    {1, 2, K::a, 1}}),
        make_patch({{0, 1, K::a, 0},
                    {1, 1, K::a, 0},
                    {0, 2, K::b, 3},
                    {1, 2, K::b, 2}}),
        "retracting an upward dip across the front of a band");
    // -- twist-pair insertion ---------------------------------------------
    add("k1",
        make_patch({{0, 0, K::a, 1},
                    {0, 1, K::a, 1},
                    {0, 2, K::b, 0},
                    {1, 2, K::a, 0},
                    {2, 2, K::b, 2},
                    {2, 3, K::a, 1}}),
        make_patch({{0, 0, K::e, 0},
                    {0, 1, K::b, 0},
                    {1, 1, K::b, 1},
                    {1, 0, K::b, 2},
                    {-1, 0, K::b, 3},
                    {-1, 1, K::a, 1},
                    {-1, 2, K::e, 0},
                    {-1, 3, K::b, 1},
                    {-2, 3, K::b, 0},
                    {-2, 2, K::b, 3},
                    {0, 2, K::a, 0},
                    {1, 2, K::a, 0},
                    {2, 2, K::b, 2},
                    {2, 3, K::a, 1}}),
        "inserting a pair of opposite full curls on a band; braids into a "
        "cancelling pair of opposite twists along the band's cycle");
    for (const Template &t : v)
      validate_template(t);
    return v;
  }();
  return reg;
}

inline const Template &find_template(const std::string &id) {
  for (const Template &t : catalog())
    if (id == t.id)
      return t;
  throw std::invalid_argument("rect move: no template named '" + id + "'");
}

// ---------------------------------------------------------------------------
// Relabeling after a rewrite: labels are pinned wherever the picture did not
// change, then pushed through the ribbon intersections until every region
// has one. A pin conflict or an unreachable region rejects the move.

inline void relabel(RectDiagram &rd,
                    const std::map<std::pair<XY, int>, Perm> &pins) {
  auto reg = rd.port_regions();
  std::map<int, Perm> labels;
  for (const auto &[pd, want] : pins) {
    auto it = reg.find(pd);
    if (it == reg.end())
      continue;
    auto [cur, fresh] = labels.emplace(it->second, want);
    if (!fresh && cur->second != want)
      throw std::runtime_error(
          "rect move: label mismatch (regions with labels " +
          cur->second.cycles() + " and " + want.cycles() +
          " would have to merge)");
  }
  for (bool again = true; again;) {
    again = false;
    for (const auto &[pos, cell] : rd.cells) {
      if (!is_through(cell.kind))
        continue;
      int up = rotate_dir(DIR_N, cell.rot), down = rotate_dir(DIR_S, cell.rot);
      int host = rotate_dir(cell.kind == CellKind::h ? DIR_E : DIR_W, cell.rot);
      auto s = labels.find(reg.at({pos, host}));
      if (s == labels.end())
        continue;
      int ra = reg.at({pos, up}), rb = reg.at({pos, down});
      auto a = labels.find(ra), b = labels.find(rb);
      if (a != labels.end() && b == labels.end()) {
        labels[rb] = s->second.then(a->second).then(s->second);
        again = true;
      } else if (b != labels.end() && a == labels.end()) {
        labels[ra] = s->second.then(b->second).then(s->second);
        again = true;
      }
    }
  }
  int n = rd.region_count();
  if ((int)labels.size() != n)
    throw std::runtime_error("rect move: a rewritten region cannot be "
                             "labeled from the surroundings");
  rd.labels = std::move(labels);
}

// Pins from every port of the cells outside the rewritten footprint.
inline std::map<std::pair<XY, int>, Perm> outside_pins(
    const RectDiagram &rd, const std::set<XY> &footprint) {
  auto reg = rd.port_regions();
  std::map<std::pair<XY, int>, Perm> pins;
  for (const auto &[pos, cell] : rd.cells) {
    if (footprint.count(pos))
      continue;
    for (int d : ports(cell))
      pins[{pos, d}] = rd.labels.at(reg.at({pos, d}));
  }
  return pins;
}

}  // namespace rectmoves_detail

// ---------------------------------------------------------------------------
// The k2 move plumbs the blow-up payload — two sheets carrying the first
// sheet's label, three bands — onto the diagram. It is implemented through
// the band presentation: lift the whole diagram, apply the payload insertion
// there, and flatten back, so the rectangular and braided forms of the move
// agree exactly by the round-trip identity. Unlike the template moves it
// re-renders the whole diagram (one payload band has to reach back up to
// the first existing sheet).

// ---------------------------------------------------------------------------
// apply_rect_move.

inline RectDiagram apply_rect_move(const RectDiagram &rd,
                                   const MoveInstance &m) {
  using namespace rectmoves_detail;
  rd.check();
  long long chi_before = rect_chi_surface(rd);
  long long chi_delta = 0;  // all catalog moves preserve the surface
  RectDiagram out;

  if (m.move_id == "r1") {
    // Swap two contiguous lines whose band spans do not overlap. rot 0
    // swaps rows site.y and site.y+1; rot 1 swaps columns site.x, site.x+1.
    bool cols = m.rot % 2 == 1;
    int l1 = cols ? m.site.x : m.site.y, l2 = l1 + 1;
    auto line_of = [&](XY p) { return cols ? p.x : p.y; };
    auto across = [&](XY p) { return cols ? p.y : p.x; };
    int d1 = cols ? DIR_N : DIR_E, d2 = cols ? DIR_S : DIR_W;
    std::set<int> span1, span2;
    for (const auto &[pos, cell] : rd.cells) {
      if (line_of(pos) != l1 && line_of(pos) != l2)
        continue;
      auto p = ports(cell);
      bool banded = std::find(p.begin(), p.end(), d1) != p.end() ||
                    std::find(p.begin(), p.end(), d2) != p.end();
      if (banded)
        (line_of(pos) == l1 ? span1 : span2).insert(across(pos));
    }
    for (int x : span1)
      if (span2.count(x))
        throw std::runtime_error("r1: the band spans overlap");
    out = rd;
    out.cells.clear();
    for (const auto &[pos, cell] : rd.cells) {
      XY q = pos;
      if (line_of(pos) == l1)
        (cols ? q.x : q.y) = l2;
      else if (line_of(pos) == l2)
        (cols ? q.x : q.y) = l1;
      out.cells[q] = cell;
    }
    // pins: everything off the two lines, plus the in-line ports of the
    // moved cells (those stay within the same stretch of surface)
    std::set<XY> lines;
    for (const auto &[pos, cell] : rd.cells)
      if (line_of(pos) == l1 || line_of(pos) == l2)
        lines.insert(pos);
    auto pins = outside_pins(rd, lines);
    auto reg = rd.port_regions();
    for (const XY &pos : lines) {
      XY q = pos;
      (cols ? q.x : q.y) = line_of(pos) == l1 ? l2 : l1;
      for (int d : ports(rd.cells.at(pos)))
        if (d == d1 || d == d2)
          pins[{q, d}] = rd.labels.at(reg.at({pos, d}));
    }
    relabel(out, pins);
  } else if (m.move_id == "stab" || m.move_id == "destab") {
    bool fwd = (m.move_id == "stab") != m.reverse;
    if (m.params.size() != 1)
      throw std::invalid_argument("stab: params must be {cover sheet i}");
    int i = m.params[0];
    if (fwd) {
      if (i < 1 || i > rd.degree)
        throw std::invalid_argument("stab: bad cover sheet");
      out = rd;
      out.degree = rd.degree + 1;
      XY at = m.site;
      if (out.cells.count(at) || out.cells.count({at.x + 1, at.y}))
        throw std::runtime_error("stab: site is not free");
      out.cells[at] = Cell{CellKind::c, 2};
      out.cells[{at.x + 1, at.y}] = Cell{CellKind::c, 0};
      auto pins = outside_pins(rd, {});
      for (auto &[pd, lab] : pins)
        lab.img.push_back(out.degree);
      pins[{at, DIR_E}] = Perm::transposition(out.degree, i, out.degree);
      relabel(out, pins);
      chi_delta = 1;  // one more disk; the cover degree rises with it
    } else {
      XY at = m.site;
      auto w = rd.cells.find(at), e = rd.cells.find({at.x + 1, at.y});
      if (w == rd.cells.end() || e == rd.cells.end() ||
          !same_cell(w->second, Cell{CellKind::c, 2}) ||
          !same_cell(e->second, Cell{CellKind::c, 0}))
        throw std::runtime_error("destab: site is not a separate disk");
      int d = rd.degree;
      auto reg = rd.port_regions();
      Perm t = rd.labels.at(reg.at({at, DIR_E}));
      if (t != Perm::transposition(d, i, d))
        throw std::runtime_error("destab: the disk is not labeled (i d)");
      for (const auto &[id, lab] : rd.labels)
        if (id != reg.at({at, DIR_E}) && lab(d) != d)
          throw std::runtime_error(
              "destab: the top cover sheet is still branched elsewhere");
      out = rd;
      out.degree = d - 1;
      out.cells.erase(at);
      out.cells.erase({at.x + 1, at.y});
      std::set<XY> foot{at, {at.x + 1, at.y}};
      auto pins = outside_pins(rd, foot);
      for (auto &[pd, lab] : pins) {
        lab.img.pop_back();
        lab.check();
      }
      relabel(out, pins);
      chi_delta = -1;
    }
  } else if (m.move_id == "k2") {
    if (m.params.size() != 1)
      throw std::invalid_argument("k2: params must be {variant}");
    LineDiagram up = braid_up(rd);
    out = flatten(m.reverse ? move_P_inverse(up, m.params[0])
                            : move_P(up, m.params[0]));
    chi_delta = m.reverse ? 1 : -1;  // two disks, three bands
  } else {
    const Template &t = find_template(m.move_id);
    Patch src = transform(m.reverse ? t.b : t.a, m.rot, m.site);
    Patch dst = transform(m.reverse ? t.a : t.b, m.rot, m.site);
    for (const auto &[pos, cell] : src.cells) {
      auto it = rd.cells.find(pos);
      if (it == rd.cells.end() || !same_cell(it->second, cell))
        throw std::runtime_error(
            m.move_id + ": pattern mismatch at (" + std::to_string(pos.x) +
            "," + std::to_string(pos.y) + "): expected " +
            cell_name(cell.kind) + "/" + std::to_string(cell.rot) +
            (it == rd.cells.end()
                 ? ", found nothing"
                 : ", found " + std::string(cell_name(it->second.kind)) + "/" +
                       std::to_string(it->second.rot)));
    }
    std::set<XY> foot;
    for (const auto &[pos, cell] : src.cells)
      foot.insert(pos);
    for (const auto &[pos, cell] : dst.cells) {
      foot.insert(pos);
      if (!src.cells.count(pos) && rd.cells.count(pos))
        throw std::runtime_error(m.move_id + ": cells in the way at (" +
                                 std::to_string(pos.x) + "," +
                                 std::to_string(pos.y) + ")");
    }
    auto pins = outside_pins(rd, foot);
    out = rd;
    for (const auto &[pos, cell] : src.cells)
      out.cells.erase(pos);
    for (const auto &[pos, cell] : dst.cells)
      out.cells[pos] = cell;
    relabel(out, pins);
  }

  out.check();
  if (rect_chi_surface(out) != chi_before + chi_delta)
    throw std::logic_error(m.move_id +
                           ": surface accounting violated; move rejected");
  return out;
}

// All sites (with rotations and directions) where a template move applies,
// in deterministic order. Parametric moves are not enumerated here.
inline std::vector<MoveInstance> find_rect_sites(const RectDiagram &rd,
                                                 const std::string &move_id) {
  using namespace rectmoves_detail;
  const Template &t = find_template(move_id);
  std::vector<MoveInstance> hits;
  for (bool reverse : {false, true})
    for (int rot = 0; rot < 4; rot++) {
      const Patch &side = reverse ? t.b : t.a;
      Patch probe = transform(side, rot, {0, 0});
      XY anchor = probe.cells.begin()->first;  // row-major least cell
      for (const auto &[pos, cell] : rd.cells) {
        XY site{pos.x - anchor.x, pos.y - anchor.y};
        MoveInstance m{move_id, site, rot, reverse, {}};
        try {
          apply_rect_move(rd, m);
        } catch (const std::exception &) {
          continue;
        }
        hits.push_back(m);
      }
    }
  return hits;
}

// ---------------------------------------------------------------------------
// Canonical representative under plane repositioning: translate to the
// origin, drop empty grid lines, and bubble neighboring lines with disjoint
// spans into a fixed order (leftmost span first for rows, topmost first for
// columns). Everything used here is an r1 move or a translation, so two
// pictures differing only by those normalize identically.

inline RectDiagram rect_canonical(const RectDiagram &input) {
  RectDiagram rd = input.normalize_isotopy();
  auto span_key = [&](bool cols, int line) {
    int lo = INT_MAX, hi = INT_MIN;
    for (const auto &[pos, cell] : rd.cells) {
      if ((cols ? pos.x : pos.y) != line)
        continue;
      auto p = ports(cell);
      int d1 = cols ? DIR_N : DIR_E, d2 = cols ? DIR_S : DIR_W;
      if (std::find(p.begin(), p.end(), d1) != p.end() ||
          std::find(p.begin(), p.end(), d2) != p.end()) {
        lo = std::min(lo, cols ? pos.y : pos.x);
        hi = std::max(hi, cols ? pos.y : pos.x);
      }
    }
    return std::pair<int, int>(lo, hi);
  };
  int extent = (int)rd.cells.size() + 2;
  for (int round = 0; round < extent; round++) {
    bool moved = false;
    for (int cols = 0; cols < 2; cols++) {
      for (int line = 0; line < extent; line++) {
        auto k1 = span_key(cols, line), k2 = span_key(cols, line + 1);
        if (k1.first == INT_MAX || k2.first == INT_MAX)
          continue;
        if (k1.second < k2.first || k2.second < k1.first) {
          if (k2 < k1) {
            MoveInstance m{"r1",
                           cols ? XY{line, 0} : XY{0, line},
                           cols ? 1 : 0,
                           false,
                           {}};
            try {
              rd = apply_rect_move(rd, m).normalize_isotopy();
              moved = true;
            } catch (const std::exception &) {
            }
          }
        }
      }
    }
    if (!moved)
      break;
  }
  return rd;
}

}  // namespace lefkit

#endif
