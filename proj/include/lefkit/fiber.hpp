#ifndef LEFKIT_FIBER_HPP
#define LEFKIT_FIBER_HPP

// The fiber surface of a labeled line diagram, modeled as a ribbon graph:
// one vertex per cover sheet, one edge per labeled sheet joining the two
// cover sheets its transposition swaps, with the rotation system induced by
// the left-to-right sheet order. Provides Euler characteristic, boundary
// count, genus, an H1 basis with its intersection form, lifted vanishing
// cycles, homological Dehn-twist matrices, and rotation numbers of cycles
// in the canonical rectilinear drawing.

#include <map>

#include "lefkit/linediagram.hpp"
#include "lefkit/snf.hpp"

namespace lefkit {

// A directed traversal of one edge; fwd means from end 0 towards end 1.
struct EdgeStep {
  int edge = 0;  // 1-based
  bool fwd = true;
  bool operator==(const EdgeStep &o) const {
    return edge == o.edge && fwd == o.fwd;
  }
};
using Loop = std::vector<EdgeStep>;  // closed, cyclic

inline Loop reverse_loop(const Loop &l) {
  Loop r;
  for (auto it = l.rbegin(); it != l.rend(); ++it)
    r.push_back({it->edge, !it->fwd});
  return r;
}

struct FiberSurface {
  struct Edge {
    int v[2];  // endpoint vertices of end 0 / end 1 (may coincide: a loop)
  };
  struct End {
    int edge;  // 1-based
    int side;  // 0 or 1
    bool operator==(const End &o) const {
      return edge == o.edge && side == o.side;
    }
  };

  int vertices = 0;
  std::vector<Edge> edges;            // 1-based via edges[r-1]
  std::vector<std::vector<End>> rot;  // rot[v-1] = ends ccw around vertex v
  bool canonical = true;  // rotation still matches the drawing x = edge index

  // ---- construction -------------------------------------------------------

  // Canonical rotation for a branched cover: every cover sheet is a disk
  // with the branch cuts leaving through its bottom boundary, so at each
  // vertex ALL band ends attach from below, in increasing branch-point
  // order (and end 0 just before end 1 when an edge is a loop). This is
  // what makes the boundary count match the cycles of the total monodromy.
  static FiberSurface from_labels(int degree, const std::vector<Perm> &labels) {
    FiberSurface f;
    f.vertices = degree;
    f.rot.assign(degree, {});
    for (size_t r = 0; r < labels.size(); r++) {
      int a, b;
      if (!labels[r].is_transposition(&a, &b))
        throw std::runtime_error("fiber: label is not a transposition");
      f.edges.push_back({{a, b}});
    }
    for (int v = 1; v <= degree; v++)
      for (size_t r = 0; r < f.edges.size(); r++)
        for (int side = 0; side < 2; side++)
          if (f.edges[r].v[side] == v)
            f.rot[v - 1].push_back({(int)r + 1, side});
    return f;
  }

  static FiberSurface from_linediagram(const LineDiagram &ld) {
    return from_labels(ld.degree, ld.labels);
  }

  int end_vertex(const End &e) const { return edges[e.edge - 1].v[e.side]; }

  int rot_index(const End &e) const {
    const auto &list = rot[end_vertex(e) - 1];
    for (size_t i = 0; i < list.size(); i++)
      if (list[i] == e)
        return (int)i;
    throw std::runtime_error("fiber: end missing from rotation system");
  }

  // ---- basic topology -----------------------------------------------------

  long long chi() const { return (long long)vertices - (long long)edges.size(); }

  std::vector<int> components() const {  // component id per vertex, from 0
    std::vector<int> comp(vertices, -1);
    int next = 0;
    for (int s = 1; s <= vertices; s++) {
      if (comp[s - 1] >= 0)
        continue;
      comp[s - 1] = next;
      std::vector<int> stack{s};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const Edge &e : edges)
          for (int side = 0; side < 2; side++)
            if (e.v[side] == v && comp[e.v[1 - side] - 1] < 0) {
              comp[e.v[1 - side] - 1] = next;
              stack.push_back(e.v[1 - side]);
            }
      }
      next++;
    }
    return comp;
  }

  int component_count() const {
    auto c = components();
    return c.empty() ? 0 : 1 + *std::max_element(c.begin(), c.end());
  }

  // Boundary components: orbits of end -> ccw-next(other end), plus one
  // circle per isolated vertex.
  int boundary_components() const {
    std::map<std::pair<int, int>, int> index;
    std::vector<End> all;
    for (size_t r = 0; r < edges.size(); r++)
      for (int side = 0; side < 2; side++) {
        index[{(int)r + 1, side}] = (int)all.size();
        all.push_back({(int)r + 1, side});
      }
    std::vector<char> seen(all.size(), 0);
    int count = 0;
    for (size_t start = 0; start < all.size(); start++) {
      if (seen[start])
        continue;
      count++;
      size_t cur = start;
      while (!seen[cur]) {
        seen[cur] = 1;
        End other{all[cur].edge, 1 - all[cur].side};
        const auto &list = rot[end_vertex(other) - 1];
        End next = list[(rot_index(other) + 1) % list.size()];
        cur = index.at({next.edge, next.side});
      }
    }
    for (int v = 1; v <= vertices; v++)
      if (rot[v - 1].empty())
        count++;
    return count;
  }

  long long genus() const {
    long long g2 = 2LL * component_count() - boundary_components() - chi();
    if (g2 < 0 || g2 % 2)
      throw std::runtime_error("fiber: inconsistent genus accounting");
    return g2 / 2;
  }

  // ---- H1 basis -----------------------------------------------------------

  // BFS spanning forest rooted at the lowest vertex of each component,
  // taking edges in position order; each non-tree edge closes one basis
  // cycle (the edge forward, then the tree path back).
  struct Forest {
    std::vector<int> parent;       // per vertex: tree edge to parent, 0 at roots
    std::vector<char> in_tree;     // per edge
    std::vector<int> basis_edges;  // non-tree edges, in position order
  };

  Forest forest() const {
    Forest f;
    f.parent.assign(vertices, 0);
    f.in_tree.assign(edges.size(), 0);
    std::vector<char> visited(vertices, 0);
    for (int s = 1; s <= vertices; s++) {
      if (visited[s - 1])
        continue;
      visited[s - 1] = 1;
      std::vector<int> frontier{s};
      while (!frontier.empty()) {
        std::vector<int> next;
        for (size_t r = 0; r < edges.size(); r++) {
          // scan in position order so ties resolve deterministically
          for (int side = 0; side < 2; side++) {
            int u = edges[r].v[side], w = edges[r].v[1 - side];
            if (visited[u - 1] && !visited[w - 1] &&
                std::find(frontier.begin(), frontier.end(), u) !=
                    frontier.end()) {
              visited[w - 1] = 1;
              f.parent[w - 1] = (int)r + 1;
              f.in_tree[r] = 1;
              next.push_back(w);
            }
          }
        }
        frontier = std::move(next);
      }
    }
    for (size_t r = 0; r < edges.size(); r++)
      if (!f.in_tree[r])
        f.basis_edges.push_back((int)r + 1);
    return f;
  }

  // Tree path from vertex x up to the forest root, as steps away from x.
  Loop path_to_root(const Forest &f, int x) const {
    Loop p;
    while (f.parent[x - 1]) {
      int r = f.parent[x - 1];
      const Edge &e = edges[r - 1];
      int other = e.v[0] == x ? e.v[1] : e.v[0];
      p.push_back({r, e.v[0] == x});
      x = other;
    }
    return p;
  }

  Loop tree_path(const Forest &f, int from, int to) const {
    Loop up = path_to_root(f, from);
    Loop down = path_to_root(f, to);
    // strip the common tail
    while (!up.empty() && !down.empty() && up.back().edge == down.back().edge) {
      up.pop_back();
      down.pop_back();
    }
    Loop r = up;
    Loop back = reverse_loop(down);
    r.insert(r.end(), back.begin(), back.end());
    return r;
  }

  Loop basis_loop(const Forest &f, int which) const {
    int r = f.basis_edges[which];
    Loop l{{r, true}};
    Loop back = tree_path(f, edges[r - 1].v[1], edges[r - 1].v[0]);
    l.insert(l.end(), back.begin(), back.end());
    return l;
  }

  // Coordinates of a loop's homology class in the non-tree-edge basis.
  std::vector<long long> loop_class(const Forest &f, const Loop &l) const {
    std::vector<long long> c(f.basis_edges.size(), 0);
    for (const EdgeStep &s : l) {
      auto it = std::find(f.basis_edges.begin(), f.basis_edges.end(), s.edge);
      if (it != f.basis_edges.end())
        c[it - f.basis_edges.begin()] += s.fwd ? 1 : -1;
    }
    return c;
  }

  // ---- intersection numbers ----------------------------------------------

  // Algebraic intersection of two loops, computed on a generic realization:
  // every edge traversal becomes a parallel strand in its band (no
  // crossings inside bands), and every vertex transit becomes a chord of
  // the vertex disk; signed crossings are interleaved chord pairs. The
  // result is a homology invariant, so the strand order is irrelevant.
  long long intersect(const Loop &la, const Loop &lb) const {
    struct Point {
      long long slot, within;
      bool operator<(const Point &o) const {
        return slot != o.slot ? slot < o.slot : within < o.within;
      }
    };
    struct Chord {
      int vertex;
      Point in, out;
      int loop;
    };
    std::vector<Chord> chords;
    long long counter = 0;
    auto place = [&](const End &e, long long u) -> Point {
      // strand u at end 0 meets the other vertex disk at position 1-u:
      // encode "1-u" as -u so comparisons work without a denominator
      return Point{rot_index(e), e.side == 0 ? u : -u};
    };
    auto add_loop = [&](const Loop &l, int id) {
      if (l.empty())
        return;
      std::vector<long long> strand(l.size());
      for (size_t i = 0; i < l.size(); i++)
        strand[i] = ++counter;
      for (size_t i = 0; i < l.size(); i++) {
        const EdgeStep &in = l[i];
        const EdgeStep &out = l[(i + 1) % l.size()];
        End ein{in.edge, in.fwd ? 1 : 0};    // arrival end
        End eout{out.edge, out.fwd ? 0 : 1};  // departure end
        int v = end_vertex(ein);
        if (end_vertex(eout) != v)
          throw std::runtime_error("fiber: loop is not connected");
        chords.push_back(
            {v, place(ein, strand[i]), place(eout, strand[(i + 1) % l.size()]),
             id});
      }
    };
    add_loop(la, 0);
    add_loop(lb, 1);

    auto between = [](const Point &a, const Point &b, const Point &x) {
      // is x strictly inside the ccw arc from a to b?
      if (a < b)
        return a < x && x < b;
      return a < x || x < b;
    };
    long long total = 0;
    for (const Chord &c1 : chords) {
      if (c1.loop != 0)
        continue;
      for (const Chord &c2 : chords) {
        if (c2.loop != 1 || c2.vertex != c1.vertex)
          continue;
        bool p2in = between(c1.in, c1.out, c2.in);
        bool q2in = between(c1.in, c1.out, c2.out);
        if (p2in != q2in)
          total += p2in ? 1 : -1;
      }
    }
    return total;
  }

  // The intersection form on the H1 basis (skew-symmetric).
  IMat form(const Forest &f) const {
    size_t n = f.basis_edges.size();
    std::vector<Loop> loops(n);
    for (size_t i = 0; i < n; i++)
      loops[i] = basis_loop(f, (int)i);
    IMat j(n, std::vector<long long>(n, 0));
    for (size_t a = 0; a < n; a++)
      for (size_t b = a + 1; b < n; b++) {
        j[a][b] = intersect(loops[a], loops[b]);
        j[b][a] = -j[a][b];
      }
    return j;
  }

  // ---- rotation numbers ---------------------------------------------------

  // Turning number of a loop in the standard immersion of the thickened
  // graph: vertex strips with all band ends attaching from below, ordered
  // along the strip bottom by their position in the rotation list, and each
  // edge drawn as a J-hook (straight down from its end-0 attachment, around
  // to the right, back up to the underside of its end-1 attachment).
  // Crossings between hooks are irrelevant to turning. A forward edge
  // traversal turns left twice in the hook (+2 quarter turns), a backward
  // one right twice (-2); a vertex transit always arrives going up and
  // leaves going down, contributing -2 quarters when moving right (by
  // attachment position) and +2 when moving left. On the canonical rotation
  // this matches the drawing with edge r hung at x = r.
  long long rotation_number(const Loop &l) const {
    if (l.empty())
      return 0;
    long long quarters = 0;
    for (size_t i = 0; i < l.size(); i++) {
      const EdgeStep &in = l[i];
      const EdgeStep &out = l[(i + 1) % l.size()];
      quarters += in.fwd ? 2 : -2;
      End ein{in.edge, in.fwd ? 1 : 0};
      End eout{out.edge, out.fwd ? 0 : 1};
      if (end_vertex(ein) != end_vertex(eout))
        throw std::runtime_error("fiber: loop is not connected");
      long long pos_in = rot_index(ein), pos_out = rot_index(eout);
      if (pos_in == pos_out)
        throw std::runtime_error("fiber: loop backtracks");
      quarters += pos_out > pos_in ? -2 : 2;
    }
    if (quarters % 4)
      throw std::runtime_error("fiber: open rectilinear curve");
    return quarters / 4;
  }
};

// ---------------------------------------------------------------------------
// Vanishing cycles: the lift of a monotonic band's core arc, run out along
// the through-sheets and back. Closes up exactly when the labels satisfy
// the transport relation.

inline Loop vanishing_cycle(const LineDiagram &ld, int band_index) {
  if (band_index < 1 || (size_t)band_index > ld.bands.size())
    throw std::runtime_error("vanishing cycle: bad band index");
  const Band &bd = ld.bands.bands[band_index - 1];
  if (!bd.mono)
    throw std::runtime_error(
        "vanishing cycle: band is not monotonic (monotonize first)");
  const MonotonicBand &b = *bd.mono;
  auto step_through = [&](Loop &l, int &cur, int h) {
    const Perm &t = ld.labels[h - 1];
    int img = t(cur);
    if (img == cur)
      return;  // this lift misses the branch cut
    int a, bb;
    t.is_transposition(&a, &bb);
    l.push_back({h, cur == a});
    cur = img;
  };
  int a0, b0;
  ld.labels[b.from - 1].is_transposition(&a0, &b0);
  int cur = a0;
  Loop l;
  step_through(l, cur, b.from);
  for (int h = b.from + 1; h < b.to; h++)
    if (b.eps(h) == +1)
      step_through(l, cur, h);
  step_through(l, cur, b.to);
  for (int h = b.to - 1; h > b.from; h--)
    if (b.eps(h) == +1)
      step_through(l, cur, h);
  if (cur != a0)
    throw std::runtime_error(
        "vanishing cycle: labels violate the transport relation");
  return l;
}

// ---------------------------------------------------------------------------
// The homological action of a Dehn twist along class c: x -> x + s<x,c>c.
// With J the intersection form on the basis, M = I + s c (Jc)^T.

inline IMat twist_matrix(const std::vector<long long> &c, int sign,
                         const IMat &J) {
  size_t n = c.size();
  if (mat_rows(J) != n || mat_cols(J) != n)
    throw std::invalid_argument("twist_matrix: form size mismatch");
  std::vector<long long> jc(n, 0);
  for (size_t i = 0; i < n; i++)
    for (size_t k = 0; k < n; k++)
      jc[i] += J[i][k] * c[k];
  IMat m = mat_identity(n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++)
      m[i][j] += sign * c[i] * jc[j];
  return m;
}

}  // namespace lefkit

#endif
