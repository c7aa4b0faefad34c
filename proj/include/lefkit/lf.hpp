#ifndef LEFKIT_LF_HPP
#define LEFKIT_LF_HPP

// Lefschetz fibrations over the disk, presented by their regular fiber (a
// ribbon graph) and the ordered sequence of vanishing cycles with twist
// signs. Provides the fibration-level move alphabet: twist sliding, the
// Hopf stabilization S on labeled line diagrams, the handle-slide move T,
// the hole-pair move U, the blow-up move P, the twist-pair move Q, and the
// boundary open book with its homological total monodromy.

#include <algorithm>
#include <optional>

#include "lefkit/fiber.hpp"

namespace lefkit {

// ---------------------------------------------------------------------------
// Loop utilities.

inline Loop loop_rotate(const Loop &l, size_t start) {
  Loop r;
  for (size_t i = 0; i < l.size(); i++)
    r.push_back(l[(start + i) % l.size()]);
  return r;
}

// Cyclic free reduction: cancel adjacent back-and-forth edge traversals.
inline Loop loop_reduce(Loop l) {
  bool changed = true;
  while (changed && l.size() >= 2) {
    changed = false;
    for (size_t i = 0; i < l.size(); i++) {
      size_t j = (i + 1) % l.size();
      if (l[i].edge == l[j].edge && l[i].fwd != l[j].fwd) {
        if (j > i) {
          l.erase(l.begin() + j);
          l.erase(l.begin() + i);
        } else {
          l.erase(l.begin() + i);
          l.erase(l.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }
  return l;
}

// Canonical representative of a loop up to rotation and reversal, for
// comparisons (a twist does not depend on either choice).
inline Loop loop_canonical(const Loop &l) {
  auto key_less = [](const Loop &a, const Loop &b) {
    for (size_t i = 0; i < std::min(a.size(), b.size()); i++) {
      if (a[i].edge != b[i].edge)
        return a[i].edge < b[i].edge;
      if (a[i].fwd != b[i].fwd)
        return a[i].fwd && !b[i].fwd;
    }
    return a.size() < b.size();
  };
  Loop best = l;
  for (const Loop &base : {l, reverse_loop(l)})
    for (size_t s = 0; s < base.size(); s++) {
      Loop cand = loop_rotate(base, s);
      if (key_less(cand, best))
        best = cand;
    }
  return best;
}

inline bool loops_same(const Loop &a, const Loop &b) {
  return loop_canonical(loop_reduce(a)) == loop_canonical(loop_reduce(b));
}

// ---------------------------------------------------------------------------
// The presentation.

struct LFPresentation {
  FiberSurface fiber;
  std::vector<Loop> cycles;  // vanishing cycles, in monodromy order
  std::vector<int> signs;    // twist signs, +-1
  int degree = 0;            // cover degree when built from a labeled diagram

  size_t size() const { return cycles.size(); }

  void check() const {
    if (cycles.size() != signs.size())
      throw std::runtime_error("presentation: one sign per cycle required");
    for (int s : signs)
      if (s != 1 && s != -1)
        throw std::runtime_error("presentation: signs must be +-1");
    for (const Loop &l : cycles)
      for (size_t i = 0; i < l.size(); i++) {
        const EdgeStep &in = l[i];
        const EdgeStep &out = l[(i + 1) % l.size()];
        if (in.edge < 1 || (size_t)in.edge > fiber.edges.size())
          throw std::runtime_error("presentation: cycle leaves the fiber");
        FiberSurface::End a{in.edge, in.fwd ? 1 : 0};
        FiberSurface::End b{out.edge, out.fwd ? 0 : 1};
        if (fiber.end_vertex(a) != fiber.end_vertex(b))
          throw std::runtime_error("presentation: cycle is not closed");
      }
  }

  // Homology classes of the cycles as columns, in the H1 basis of `f`.
  IMat cycle_matrix(const FiberSurface::Forest &f) const {
    size_t rank = f.basis_edges.size();
    IMat m(rank, std::vector<long long>(cycles.size(), 0));
    for (size_t k = 0; k < cycles.size(); k++) {
      auto c = fiber.loop_class(f, cycles[k]);
      for (size_t r = 0; r < rank; r++)
        m[r][k] = c[r];
    }
    return m;
  }

  bool allowable() const {
    auto f = fiber.forest();
    for (const Loop &l : cycles) {
      auto c = fiber.loop_class(f, l);
      if (std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; }))
        return false;
    }
    return true;
  }

  bool operator==(const LFPresentation &o) const {
    if (fiber.vertices != o.fiber.vertices || fiber.rot != o.fiber.rot ||
        cycles != o.cycles || signs != o.signs || degree != o.degree)
      return false;
    if (fiber.edges.size() != o.fiber.edges.size())
      return false;
    for (size_t r = 0; r < fiber.edges.size(); r++)
      if (fiber.edges[r].v[0] != o.fiber.edges[r].v[0] ||
          fiber.edges[r].v[1] != o.fiber.edges[r].v[1])
        return false;
    return true;
  }
  bool operator!=(const LFPresentation &o) const { return !(*this == o); }
};

// The fibration presented by a labeled line diagram: the branched-cover
// fiber with one lifted vanishing cycle per band.
inline LFPresentation lf_from_linediagram(const LineDiagram &ld) {
  ld.check();
  if (!ld.check_labels())
    throw std::runtime_error("presentation: labels are inconsistent");
  LFPresentation p;
  p.fiber = FiberSurface::from_linediagram(ld);
  p.degree = ld.degree;
  for (size_t i = 0; i < ld.bands.size(); i++) {
    p.cycles.push_back(vanishing_cycle(ld, (int)i + 1));
    p.signs.push_back(ld.bands.bands[i].mono->sign);
  }
  p.check();
  return p;
}

// ---------------------------------------------------------------------------
// The boundary open book: the fiber together with the homological total
// monodromy. In this model the lift of a band word concatenation w1 w2
// composes as M_1 M_2 on column vectors (the later band acts first), so
// the composite of the whole sequence is M_1 M_2 ... M_n. This is the
// order under which the total matrix is a Hurwitz-slide invariant of the
// derived vanishing cycles; the opposite order is not.

struct OpenBook {
  FiberSurface fiber;
  IMat total_matrix;

  bool operator==(const OpenBook &o) const {
    return fiber.vertices == o.fiber.vertices && fiber.rot == o.fiber.rot &&
           total_matrix == o.total_matrix;
  }
  bool operator!=(const OpenBook &o) const { return !(*this == o); }
};

inline OpenBook boundary_openbook(const LFPresentation &p) {
  auto f = p.fiber.forest();
  IMat j = p.fiber.form(f);
  IMat total = mat_identity(f.basis_edges.size());
  for (size_t k = 0; k < p.size(); k++) {
    auto c = p.fiber.loop_class(f, p.cycles[k]);
    total = mat_mul(total, twist_matrix(c, p.signs[k], j));
  }
  return OpenBook{p.fiber, total};
}

// ---------------------------------------------------------------------------
// The geometric Dehn twist of loop b along loop a with sign s: at every
// transverse crossing (an interleaved chord pair on a vertex disk) the
// image picks up a copy of a, oriented by the crossing sign times s, then
// reduces freely. The homology class transforms by the twist matrix.

inline Loop twist_loop(const FiberSurface &f, const Loop &b, const Loop &a,
                       int s) {
  if (a.empty() || b.empty())
    return b;
  struct Point {
    long long slot, within;
    bool operator<(const Point &o) const {
      return slot != o.slot ? slot < o.slot : within < o.within;
    }
  };
  auto place = [&](const FiberSurface::End &e, long long u) -> Point {
    return Point{f.rot_index(e), e.side == 0 ? u : -u};
  };
  struct Chord {
    int vertex;
    Point in, out;
  };
  auto chords_of = [&](const Loop &l, long long base) {
    std::vector<Chord> cs;
    for (size_t i = 0; i < l.size(); i++) {
      const EdgeStep &in = l[i];
      const EdgeStep &out = l[(i + 1) % l.size()];
      FiberSurface::End ein{in.edge, in.fwd ? 1 : 0};
      FiberSurface::End eout{out.edge, out.fwd ? 0 : 1};
      cs.push_back({f.end_vertex(ein), place(ein, base + (long long)i + 1),
                    place(eout, base + (long long)((i + 1) % l.size()) + 1)});
    }
    return cs;
  };
  auto cb = chords_of(b, 0);
  auto ca = chords_of(a, (long long)b.size());
  auto between = [](const Point &a2, const Point &b2, const Point &x) {
    // is x strictly inside the ccw arc from a2 to b2?
    if (a2 < b2)
      return a2 < x && x < b2;
    return a2 < x || x < b2;
  };

  Loop out;
  for (size_t i = 0; i < b.size(); i++) {
    out.push_back(b[i]);
    // detours for crossings on the transit after step i
    for (size_t k = 0; k < a.size(); k++) {
      if (ca[k].vertex != cb[i].vertex)
        continue;
      bool pin = between(cb[i].in, cb[i].out, ca[k].in);
      bool qin = between(cb[i].in, cb[i].out, ca[k].out);
      if (pin == qin)
        continue;
      int sigma = pin ? 1 : -1;
      Loop piece = loop_rotate(a, k + 1);
      if (s * sigma < 0)
        piece = reverse_loop(piece);
      out.insert(out.end(), piece.begin(), piece.end());
    }
  }
  return loop_reduce(out);
}

// ---------------------------------------------------------------------------
// Twist sliding: interchange twists i, i+1, conjugating one cycle by the
// other's twist so the total monodromy is unchanged.

enum class SlideDirection { right, left };

inline LFPresentation twist_slide(const LFPresentation &p, int i,
                                  SlideDirection dir) {
  if (i < 1 || (size_t)i >= p.size())
    throw std::runtime_error("twist slide: position out of range");
  LFPresentation r = p;
  Loop a = p.cycles[i - 1], b = p.cycles[i];
  int sa = p.signs[i - 1], sb = p.signs[i];
  // The word-level Hurwitz action b_i b_{i+1} = (b_i b_{i+1} b_i^-1) b_i
  // moves the conjugated band into position i; at the cycle level the
  // conjugation by b_i acts as the twist itself (and the left slide by the
  // inverse twist), matching the arcs the rewritten words denote. With the
  // composite M_1 ... M_n this keeps the total matrix on the nose:
  // T(T1 c2) T(c1) = T1 T2 T1^-1 T1 = T1 T2.
  if (dir == SlideDirection::right) {
    r.cycles[i - 1] = twist_loop(p.fiber, b, a, sa);
    r.signs[i - 1] = sb;
    r.cycles[i] = a;
    r.signs[i] = sa;
  } else {
    r.cycles[i - 1] = b;
    r.signs[i - 1] = sb;
    r.cycles[i] = twist_loop(p.fiber, a, b, -sb);
    r.signs[i] = sa;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Move S: Hopf stabilization on labeled line diagrams — a new sheet with a
// single new band of the given sign. The inverse demands a sheet traversed
// by no other band, which braid_destabilize enforces.

inline LineDiagram move_S(const LineDiagram &ld, int source, int sign) {
  return braid_stabilize(ld, source, sign);
}

inline LineDiagram move_S_inverse(const LineDiagram &ld, int band, int sheet) {
  return braid_destabilize(ld, band, sheet);
}

// ---------------------------------------------------------------------------
// Move T. Twists i, i+1 of opposite signs whose cycles both run exactly
// once over a common edge that no other cycle touches: the edge is
// re-attached on the other side of the two parallel strands, by moving its
// ends in the rotation lists so that each cycle's transit flips at both
// endpoints or at neither (which keeps every Euler-cocycle shift even).
// The rewrite is accepted only if sliding twist i+1 over twist i and then
// cancelling the edge reduces source and target to identical presentations.

namespace lf_detail {

// The end paired with `x` in the unique transit of `l` that uses `x`.
inline FiberSurface::End transit_partner(const FiberSurface &f, const Loop &l,
                                         const FiberSurface::End &x) {
  for (size_t i = 0; i < l.size(); i++) {
    FiberSurface::End ain{l[i].edge, l[i].fwd ? 1 : 0};
    FiberSurface::End aout{l[(i + 1) % l.size()].edge,
                           l[(i + 1) % l.size()].fwd ? 0 : 1};
    if (ain == x)
      return aout;
    if (aout == x)
      return ain;
  }
  throw std::runtime_error("T: cycle does not attach where expected");
  (void)f;
}

// Reinsert `x` into its vertex's rotation list so that exactly the partner
// ends selected by want1/want2 change sides. Returns the new list, or
// nothing if no position works.
inline std::optional<std::vector<FiberSurface::End>> reposition(
    const std::vector<FiberSurface::End> &list, const FiberSurface::End &x,
    const FiberSurface::End &p1, const FiberSurface::End &p2, bool want1,
    bool want2, bool *moved) {
  std::vector<FiberSurface::End> rest;
  size_t old_pos = 0;
  for (const auto &e : list) {
    if (e == x) {
      old_pos = rest.size();
      continue;
    }
    rest.push_back(e);
  }
  for (size_t pos = 0; pos <= rest.size(); pos++) {
    bool f1 = false, f2 = false;
    for (size_t k = std::min(pos, old_pos); k < std::max(pos, old_pos); k++) {
      if (rest[k] == p1)
        f1 = true;
      if (rest[k] == p2)
        f2 = true;
    }
    if (f1 != want1 || f2 != want2)
      continue;
    std::vector<FiberSurface::End> out(rest.begin(), rest.begin() + pos);
    out.push_back(x);
    out.insert(out.end(), rest.begin() + pos, rest.end());
    *moved = pos != old_pos;
    return out;
  }
  return std::nullopt;
}

// Slide twist i+1 over twist i and cancel their common edge e: the
// reduction both sides of a T move must agree on.
inline LFPresentation slide_and_cancel(const LFPresentation &p, int i, int e) {
  auto rotate_to_edge = [&](Loop l) {
    for (size_t k = 0; k < l.size(); k++)
      if (l[k].edge == e)
        return loop_rotate(l, k);
    throw std::runtime_error("T: cycle does not traverse the common edge");
  };
  Loop a = rotate_to_edge(p.cycles[i - 1]);
  Loop b = p.cycles[i];
  Loop b0 = rotate_to_edge(b);
  if (b0[0].fwd != a[0].fwd)
    b0 = rotate_to_edge(reverse_loop(b));
  Loop slid;
  slid.insert(slid.end(), b0.begin() + 1, b0.end());
  Loop back = reverse_loop(Loop(a.begin() + 1, a.end()));
  slid.insert(slid.end(), back.begin(), back.end());
  slid = loop_reduce(slid);
  for (const EdgeStep &s : slid)
    if (s.edge == e)
      throw std::runtime_error("T: sliding failed to free the common edge");

  LFPresentation r;
  r.degree = p.degree;
  r.fiber.vertices = p.fiber.vertices;
  r.fiber.canonical = false;
  for (size_t k = 0; k < p.fiber.edges.size(); k++)
    if ((int)k + 1 != e)
      r.fiber.edges.push_back(p.fiber.edges[k]);
  auto renum = [&](int edge) { return edge > e ? edge - 1 : edge; };
  for (const auto &list : p.fiber.rot) {
    std::vector<FiberSurface::End> nl;
    for (const auto &end : list)
      if (end.edge != e)
        nl.push_back({renum(end.edge), end.side});
    r.fiber.rot.push_back(nl);
  }
  auto renum_loop = [&](const Loop &l) {
    Loop nl;
    for (const EdgeStep &s : l)
      nl.push_back({renum(s.edge), s.fwd});
    return nl;
  };
  for (size_t k = 0; k < p.size(); k++) {
    if ((int)k == i - 1)
      continue;  // cancelled
    r.cycles.push_back(renum_loop((int)k == i ? slid : p.cycles[k]));
    r.signs.push_back(p.signs[k]);
  }
  return r;
}

}  // namespace lf_detail

inline LFPresentation move_T(const LFPresentation &p, int i) {
  using namespace lf_detail;
  if (i < 1 || (size_t)i >= p.size())
    throw std::runtime_error("T: position out of range");
  if (p.signs[i - 1] * p.signs[i] != -1)
    throw std::runtime_error("T: twists must have opposite signs");

  // the common edge: traversed once by each of the two cycles, untouched
  // by every other cycle
  int e = 0;
  for (size_t r = 1; r <= p.fiber.edges.size() && !e; r++) {
    long long mine[2] = {0, 0}, others = 0;
    for (size_t k = 0; k < p.size(); k++)
      for (const EdgeStep &s : p.cycles[k])
        if (s.edge == (int)r) {
          if ((int)k == i - 1)
            mine[0]++;
          else if ((int)k == i)
            mine[1]++;
          else
            others++;
        }
    if (mine[0] == 1 && mine[1] == 1 && others == 0)
      e = (int)r;
  }
  if (!e)
    throw std::runtime_error("T: no common edge traversed once by exactly "
                             "the two twists");
  const auto &edge = p.fiber.edges[e - 1];
  if (edge.v[0] == edge.v[1])
    throw std::runtime_error("T: the common edge is a loop; unsupported");

  // partner ends of the two cycles' transits at each endpoint
  FiberSurface::End ends[2] = {{e, 0}, {e, 1}};
  FiberSurface::End part[2][2];
  for (int side = 0; side < 2; side++) {
    part[side][0] = transit_partner(p.fiber, p.cycles[i - 1], ends[side]);
    part[side][1] = transit_partner(p.fiber, p.cycles[i], ends[side]);
  }

  // per-cycle flips must agree across the two endpoints; try both cycles
  // first, then each alone
  LFPresentation r = p;
  bool done = false;
  for (auto [w1, w2] : {std::pair<bool, bool>{true, true},
                        {true, false},
                        {false, true}}) {
    bool moved0 = false, moved1 = false;
    auto l0 = reposition(p.fiber.rot[edge.v[0] - 1], ends[0], part[0][0],
                         part[0][1], w1, w2, &moved0);
    auto l1 = reposition(p.fiber.rot[edge.v[1] - 1], ends[1], part[1][0],
                         part[1][1], w1, w2, &moved1);
    if (!l0 || !l1 || !(moved0 || moved1))
      continue;
    r.fiber.rot[edge.v[0] - 1] = *l0;
    r.fiber.rot[edge.v[1] - 1] = *l1;
    r.fiber.canonical = false;
    done = true;
    break;
  }
  if (!done)
    throw std::runtime_error("T: no valid re-attachment of the common edge");

#ifdef LEFKIT_T_ALTERNATE_SIGNS
  std::swap(r.signs[i - 1], r.signs[i]);
#endif

  // the arbiter: both sides must reduce to the same presentation
  if (slide_and_cancel(p, i, e) != slide_and_cancel(r, i, e))
    throw std::logic_error("T: reduction self-check failed; move rejected");
  return r;
}

// ---------------------------------------------------------------------------
// Move U: punch two holes in the fiber next to a vertex — two new vertex
// disks, each tied to `vertex` by a parallel pair of bands — and insert a
// positive and a negative twist around the two new boundary circles.

inline LFPresentation move_U(const LFPresentation &p, int vertex,
                             int pos = -1) {
  if (vertex < 1 || vertex > p.fiber.vertices)
    throw std::runtime_error("U: bad vertex");
  if (pos < 0)
    pos = (int)p.size() + 1;
  if (pos < 1 || (size_t)pos > p.size() + 1)
    throw std::runtime_error("U: bad insertion position");
  LFPresentation r = p;
  int n = (int)p.fiber.edges.size();
  int w1 = p.fiber.vertices + 1, w2 = p.fiber.vertices + 2;
  r.fiber.vertices += 2;
  for (int k = 0; k < 2; k++) {
    int w = k == 0 ? w1 : w2;
    r.fiber.edges.push_back({{vertex, w}});
    r.fiber.edges.push_back({{vertex, w}});
    int e1 = n + 2 * k + 1, e2 = n + 2 * k + 2;
    r.fiber.rot[vertex - 1].push_back({e1, 0});
    r.fiber.rot[vertex - 1].push_back({e2, 0});
    r.fiber.rot.push_back({{e1, 1}, {e2, 1}});
  }
  Loop plus{{n + 1, true}, {n + 2, false}};
  Loop minus{{n + 3, true}, {n + 4, false}};
  r.cycles.insert(r.cycles.begin() + (pos - 1), {plus, minus});
  r.signs.insert(r.signs.begin() + (pos - 1), {1, -1});
  return r;
}

inline LFPresentation move_U_inverse(const LFPresentation &p, int pos) {
  if (pos < 1 || (size_t)pos + 1 > p.size())
    throw std::runtime_error("U: bad position");
  if (p.signs[pos - 1] * p.signs[pos] != -1)
    throw std::runtime_error("U: twists do not have opposite signs");
  // each cycle must be a bigon around its own two-band vertex
  std::vector<int> doomed_edges, doomed_vertices;
  for (int k = 0; k < 2; k++) {
    const Loop &l = p.cycles[pos - 1 + k];
    if (l.size() != 2 || !l[0].fwd || l[1].fwd)
      throw std::runtime_error("U: cycle is not a hole bigon");
    int e1 = l[0].edge, e2 = l[1].edge;
    const auto &a = p.fiber.edges[e1 - 1], &b = p.fiber.edges[e2 - 1];
    if (a.v[0] != b.v[0] || a.v[1] != b.v[1] || a.v[0] == a.v[1])
      throw std::runtime_error("U: cycle is not a parallel band pair");
    if (p.fiber.rot[a.v[1] - 1].size() != 2)
      throw std::runtime_error("U: hole vertex has other attachments");
    for (size_t c = 0; c < p.size(); c++)
      if (c != (size_t)pos - 1 && c != (size_t)pos)
        for (const EdgeStep &s : p.cycles[c])
          if (s.edge == e1 || s.edge == e2)
            throw std::runtime_error("U: hole bands used by another cycle");
    doomed_edges.push_back(e1);
    doomed_edges.push_back(e2);
    doomed_vertices.push_back(a.v[1]);
  }
  if (doomed_vertices[0] == doomed_vertices[1])
    throw std::runtime_error("U: the two cycles circle the same hole");

  LFPresentation r;
  r.degree = p.degree;
  r.fiber.canonical = false;
  std::vector<int> vmap(p.fiber.vertices + 1, 0), emap(p.fiber.edges.size() + 1, 0);
  int nv = 0;
  for (int v = 1; v <= p.fiber.vertices; v++)
    if (v != doomed_vertices[0] && v != doomed_vertices[1])
      vmap[v] = ++nv;
  r.fiber.vertices = nv;
  int ne = 0;
  for (int eidx = 1; eidx <= (int)p.fiber.edges.size(); eidx++) {
    if (std::count(doomed_edges.begin(), doomed_edges.end(), eidx))
      continue;
    emap[eidx] = ++ne;
    const auto &ed = p.fiber.edges[eidx - 1];
    if (!vmap[ed.v[0]] || !vmap[ed.v[1]])
      throw std::runtime_error("U: hole vertex has other attachments");
    r.fiber.edges.push_back({{vmap[ed.v[0]], vmap[ed.v[1]]}});
  }
  for (int v = 1; v <= p.fiber.vertices; v++) {
    if (!vmap[v])
      continue;
    std::vector<FiberSurface::End> nl;
    for (const auto &end : p.fiber.rot[v - 1])
      if (emap[end.edge])
        nl.push_back({emap[end.edge], end.side});
    r.fiber.rot.push_back(nl);
  }
  for (size_t k = 0; k < p.size(); k++) {
    if (k == (size_t)pos - 1 || k == (size_t)pos)
      continue;
    Loop nl;
    for (const EdgeStep &s : p.cycles[k])
      nl.push_back({emap[s.edge], s.fwd});
    r.cycles.push_back(nl);
    r.signs.push_back(p.signs[k]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Move Q: insert (or delete) a contiguous pair of opposite twists along a
// homologically non-trivial cycle. The homological total monodromy is
// exactly unchanged.

inline LFPresentation move_Q(const LFPresentation &p, int pos, const Loop &c,
                             int sign = 1) {
  if (pos < 1 || (size_t)pos > p.size() + 1)
    throw std::runtime_error("Q: bad insertion position");
  if (sign != 1 && sign != -1)
    throw std::runtime_error("Q: sign must be +-1");
  auto f = p.fiber.forest();
  auto cls = p.fiber.loop_class(f, c);
  if (std::all_of(cls.begin(), cls.end(), [](long long x) { return x == 0; }))
    throw std::runtime_error("Q: cycle class is homologically trivial");
  LFPresentation r = p;
  r.cycles.insert(r.cycles.begin() + (pos - 1), {c, c});
  r.signs.insert(r.signs.begin() + (pos - 1), {sign, -sign});
  r.check();
  return r;
}

inline LFPresentation move_Q_inverse(const LFPresentation &p, int pos) {
  if (pos < 1 || (size_t)pos + 1 > p.size())
    throw std::runtime_error("Q: bad position");
  if (p.signs[pos - 1] + p.signs[pos] != 0)
    throw std::runtime_error("Q: twists do not have opposite signs");
  if (!loops_same(p.cycles[pos - 1], p.cycles[pos]))
    throw std::runtime_error("Q: twists are not along the same cycle");
  LFPresentation r = p;
  r.cycles.erase(r.cycles.begin() + (pos - 1), r.cycles.begin() + (pos + 1));
  r.signs.erase(r.signs.begin() + (pos - 1), r.signs.begin() + (pos + 1));
  return r;
}

// ---------------------------------------------------------------------------
// Move P: the blow-up. Plumbs two new sheets below the diagram, both
// copying the first sheet's label: one band joins the two new sheets with
// the variant's sign, one joins the first new sheet back up to sheet 1
// negatively (running in front of everything between), and one more joins
// the two new sheets positively — the through-both twist followed by the
// two stabilization twists. The fiber gains two bands, the monodromy three
// twists whose classes span the two new homology directions unimodularly,
// so H1 of the boundary and of the total space are untouched while chi(W)
// rises by one. The band order within the payload is part of the frozen
// move; it is pinned by the boundary-invariance suite.

inline std::vector<Band> p_payload_bands(int old_sheets, int variant) {
  if (variant != 1 && variant != -1)
    throw std::invalid_argument("P: variant must be +-1");
  int m = old_sheets, s = m + 2;  // strand count after the insertion
  return {Band(MonotonicBand(m + 1, m + 2, variant, {}), s),
          Band(MonotonicBand(1, m + 1, -1, std::vector<int>(m - 1, -1)), s),
          Band(MonotonicBand(m + 1, m + 2, 1, {}), s)};
}

inline LineDiagram move_P(const LineDiagram &ld, int variant) {
  if (ld.sheets() == 0)
    throw std::runtime_error("P: need a sheet to plumb onto");
  LineDiagram r;
  r.degree = ld.degree;
  r.bands.strands = ld.sheets() + 2;
  r.labels = ld.labels;
  r.labels.push_back(ld.labels[0]);
  r.labels.push_back(ld.labels[0]);
  for (const Band &b : ld.bands.bands) {
    Band nb = b;
    nb.w.strands = r.bands.strands;
    r.bands.bands.push_back(nb);
  }
  for (Band &b : p_payload_bands(ld.sheets(), variant))
    r.bands.bands.push_back(b);
  r.check();
  if (!r.check_labels())
    throw std::logic_error("P: payload broke label consistency");
  return r;
}

inline LineDiagram move_P_inverse(const LineDiagram &ld, int variant) {
  if (ld.sheets() < 3 || ld.bands.size() < 3)
    throw std::runtime_error("P: no payload to delete");
  int m = ld.sheets() - 2;
  if (ld.labels[m] != ld.labels[0] || ld.labels[m + 1] != ld.labels[0])
    throw std::runtime_error("P: last sheets are not the payload's");
  std::vector<Band> want = p_payload_bands(m, variant);
  size_t n = ld.bands.size();
  for (size_t k = 0; k < 3; k++)
    if (!(ld.bands.bands[n - 3 + k] == want[k]))
      throw std::runtime_error("P: last bands are not the payload's");
  LineDiagram r;
  r.degree = ld.degree;
  r.bands.strands = m;
  r.labels.assign(ld.labels.begin(), ld.labels.begin() + m);
  for (size_t k = 0; k + 3 < n; k++) {
    const Band &b = ld.bands.bands[k];
    if (word_touches_sheet(b.w, m + 1) || word_touches_sheet(b.w, m + 2))
      throw std::runtime_error("P: a band still touches the payload sheets");
    Band nb = b;
    nb.w.strands = m;
    r.bands.bands.push_back(nb);
  }
  r.check();
  return r;
}

}  // namespace lefkit

#endif
