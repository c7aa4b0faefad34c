#ifndef LEFKIT_INVARIANTS_HPP
#define LEFKIT_INVARIANTS_HPP

// The certification engine: invariants of the 2-handlebody built from a
// fibration presentation (Euler characteristic, first homology, Euler
// class of the fibration) and of its boundary open book (homological total
// monodromy, first homology of the boundary), plus the script replayer
// that re-applies a move sequence while checking every step's documented
// invariant deltas.
//
// Move scripts use these ops and argument layouts (all integers):
//   S+ source sign          braid stabilization (diagram level)
//   S- band sheet           braid destabilization (diagram level)
//   P+ variant              blow-up payload insertion (diagram level)
//   P- variant              blow-up payload deletion (diagram level)
//   slide i dir             twist slide at i; dir 0 = right, 1 = left
//   T i                     edge re-attachment across twists i, i+1
//   U+ vertex pos           hole-pair insertion
//   U- pos                  hole-pair deletion
//   Q+ pos sign e1 f1 ...   twist-pair insertion along the given loop
//   Q- pos                  twist-pair deletion

#include <optional>
#include <sstream>

#include "lefkit/lf.hpp"
#include "lefkit/script.hpp"

namespace lefkit {

// ---------------------------------------------------------------------------
// Plain invariants.

// Euler characteristic of the total space: one 0-handle per cover sheet,
// one 1-handle per band sheet, one 2-handle per twist.
inline long long euler_char_W(const LineDiagram &ld) {
  return (long long)ld.degree - ld.sheets() + (long long)ld.bands.size();
}

inline long long euler_char_W(const LFPresentation &p) {
  return p.fiber.chi() + (long long)p.size();
}

inline long long h1_rank_F(const LFPresentation &p) {
  return (long long)p.fiber.forest().basis_edges.size();
}

// H1 of the total space: H1 of the fiber modulo the twist cycles.
inline AbelianGroup h1_W(const LFPresentation &p) {
  auto f = p.fiber.forest();
  return cokernel(p.cycle_matrix(f), f.basis_edges.size());
}

// H1 of the fiber sum along the boundary open book, page-classes-only
// version: H1(F) modulo the image of (total action - identity). Blind to
// the binding, so e.g. the Hopf boundary comes out as Z; prefer the
// presentation-level overload below.
inline AbelianGroup h1_boundary(const OpenBook &ob) {
  size_t n = mat_rows(ob.total_matrix);
  IMat rel = ob.total_matrix;
  for (size_t i = 0; i < n; i++)
    rel[i][i] -= 1;
  return cokernel(rel, n);
}

// Relation matrix of the boundary's H1 with the binding taken into
// account: the monodromy fixes the boundary pointwise, so (total - id) is
// defined on relative H1(F, dF), which pairs perfectly with the loop
// basis. In the dual coordinates a twist contributes s c c^T, transported
// by the later twists acting on H1(F) and the earlier ones acting on
// relative classes (I - s (Jc) c^T), and (total - id) telescopes into the
// sum of those contributions. The cokernel is H1 of the boundary.
inline IMat boundary_relations(const LFPresentation &p) {
  auto f = p.fiber.forest();
  IMat j = p.fiber.form(f);
  size_t b1 = f.basis_edges.size();
  size_t n = p.size();
  // The total monodromy composes as M_1 ... M_n (the last twist acts
  // first), so the telescoping below walks the twists in application
  // order: reversed presentation order.
  std::vector<std::vector<long long>> cls(n);
  std::vector<int> sg(n);
  for (size_t k = 0; k < n; k++) {
    cls[k] = p.fiber.loop_class(f, p.cycles[n - 1 - k]);
    sg[k] = p.signs[n - 1 - k];
  }

  std::vector<IMat> after(n + 1);  // after[k] = action of twists applied later
  after[n] = mat_identity(b1);
  for (size_t k = n; k-- > 0;)
    after[k] = mat_mul(after[k + 1], twist_matrix(cls[k], sg[k], j));

  IMat b(b1, std::vector<long long>(b1, 0));
  IMat rel = mat_identity(b1);  // relative action of twists applied earlier
  for (size_t k = 0; k < n; k++) {
    const auto &c = cls[k];
    std::vector<long long> jc(b1, 0);
    for (size_t r = 0; r < b1; r++)
      for (size_t t = 0; t < b1; t++)
        jc[r] += j[r][t] * c[t];
    IMat nk(b1, std::vector<long long>(b1, 0));
    for (size_t r = 0; r < b1; r++)
      for (size_t t = 0; t < b1; t++)
        nk[r][t] = sg[k] * c[r] * c[t];
    IMat term = mat_mul(after[k + 1], mat_mul(nk, rel));
    for (size_t r = 0; r < b1; r++)
      for (size_t t = 0; t < b1; t++)
        b[r][t] += term[r][t];
    IMat rk = mat_identity(b1);
    for (size_t r = 0; r < b1; r++)
      for (size_t t = 0; t < b1; t++)
        rk[r][t] -= sg[k] * jc[r] * c[t];
    rel = mat_mul(rk, rel);
  }
  return b;
}

inline AbelianGroup h1_boundary(const LFPresentation &p) {
  return cokernel(boundary_relations(p),
                  p.fiber.forest().basis_edges.size());
}

// The Euler cocycle: the turning number of each vanishing cycle, one
// coordinate per twist.
inline std::vector<long long> euler_cocycle(const LFPresentation &p) {
  std::vector<long long> e;
  for (const Loop &c : p.cycles)
    e.push_back(p.fiber.rotation_number(c));
  return e;
}

// Relation lattice of H2 of the handlebody in the per-twist coordinates:
// the columns of the transposed cycle matrix span the coboundary image.
inline IMat euler_lattice(const LFPresentation &p) {
  auto f = p.fiber.forest();
  return mat_transpose(p.cycle_matrix(f));
}

struct EulerClassValue {
  std::vector<long long> coords;  // canonical representative mod the lattice
  std::vector<long long> mod2;    // canonical representative mod lattice + 2Z^n
};

inline EulerClassValue euler_class(const LFPresentation &p) {
  EulerClassValue v;
  if (p.size() == 0)
    return v;
  std::vector<long long> eps = euler_cocycle(p);
  IMat lat = euler_lattice(p);
  v.coords = lattice_reduce(lat, eps);
  IMat lat2 = lat;
  for (size_t i = 0; i < p.size(); i++) {
    std::vector<long long> unit(p.size(), 0);
    unit[i] = 2;
    for (size_t r = 0; r < p.size(); r++)
      lat2[r].push_back(unit[r]);
  }
  v.mod2 = lattice_reduce(lat2, eps);
  return v;
}

// ---------------------------------------------------------------------------
// The report.

struct InvariantReport {
  long long euler_W = 0;
  AbelianGroup h1_W;
  long long h1_F = 0;
  AbelianGroup h1_boundary;
  IMat total_matrix;
  std::vector<long long> euler_class;
  std::vector<long long> euler_mod2;
  bool allowable = false;

  // Stable key-value text, one field per line, for golden-file testing.
  std::string str() const {
    std::ostringstream out;
    out << "euler_W " << euler_W << "\n";
    out << "h1_W " << h1_W.str() << "\n";
    out << "h1_F " << h1_F << "\n";
    out << "h1_boundary " << h1_boundary.str() << "\n";
    out << "total_matrix " << mat_rows(total_matrix) << "x"
        << mat_cols(total_matrix);
    for (const auto &row : total_matrix)
      for (long long v : row)
        out << " " << v;
    out << "\n";
    out << "euler_class";
    for (long long v : euler_class)
      out << " " << v;
    out << "\n";
    out << "euler_mod2";
    for (long long v : euler_mod2)
      out << " " << v;
    out << "\n";
    out << "allowable " << (allowable ? "true" : "false") << "\n";
    return out.str();
  }
};

inline InvariantReport invariant_report(const LFPresentation &p) {
  InvariantReport r;
  r.euler_W = euler_char_W(p);
  r.h1_W = h1_W(p);
  r.h1_F = h1_rank_F(p);
  OpenBook ob = boundary_openbook(p);
  r.total_matrix = ob.total_matrix;
  r.h1_boundary = h1_boundary(p);
  EulerClassValue e = euler_class(p);
  r.euler_class = e.coords;
  r.euler_mod2 = e.mod2;
  r.allowable = p.allowable();
  return r;
}

inline InvariantReport invariant_report(const LineDiagram &ld) {
  return invariant_report(lf_from_linediagram(ld));
}

// ---------------------------------------------------------------------------
// Euler-class comparison across a move. A move supplies the correspondence
// of twist indices (0-based, from the side with fewer twists into the side
// with more). Coordinates outside the image belong to handles the move
// created or consumed; they are quotiented away, which is exact because
// those handle pairs cancel. With allow2 the classes need only agree
// modulo 2H2.

inline bool euler_cosets_match(const LFPresentation &small,
                               const std::vector<int> &map,
                               const LFPresentation &big, bool allow2) {
  std::vector<long long> es = euler_cocycle(small);
  std::vector<long long> eb = euler_cocycle(big);
  size_t n = eb.size();
  std::vector<long long> diff(n, 0);
  std::vector<char> mapped(n, 0);
  for (size_t k = 0; k < es.size(); k++) {
    int idx = map[k];
    if (idx < 0 || (size_t)idx >= n)
      throw std::logic_error("euler comparison: bad index map");
    diff[idx] += es[k];
    mapped[idx] = 1;
  }
  for (size_t i = 0; i < n; i++)
    diff[i] -= eb[i];
  IMat gens = euler_lattice(big);
  auto add_unit = [&](size_t i, long long v) {
    for (size_t r = 0; r < n; r++)
      gens[r].push_back(r == i ? v : 0);
  };
  for (size_t i = 0; i < n; i++)
    if (!mapped[i])
      add_unit(i, 1);
  if (allow2)
    for (size_t i = 0; i < n; i++)
      add_unit(i, 2);
  auto z = lattice_reduce(gens, diff);
  return std::all_of(z.begin(), z.end(), [](long long v) { return v == 0; });
}

// ---------------------------------------------------------------------------
// Script replay with certification.

// The running value of a replay: fibration moves forget the diagram form,
// diagram-level moves require it.
struct ReplayState {
  std::optional<LineDiagram> diagram;
  LFPresentation p;

  static ReplayState of(const LineDiagram &ld) {
    return ReplayState{ld, lf_from_linediagram(ld)};
  }
  static ReplayState of(const LFPresentation &p) {
    return ReplayState{std::nullopt, p};
  }
};

namespace inv_detail {

inline std::vector<int> identity_map(size_t n) {
  std::vector<int> m(n);
  for (size_t k = 0; k < n; k++)
    m[k] = (int)k;
  return m;
}

// old index -> new index when a contiguous block [at, at+count) appears
inline std::vector<int> insert_map(size_t n_old, size_t at, size_t count) {
  std::vector<int> m(n_old);
  for (size_t k = 0; k < n_old; k++)
    m[k] = (int)(k < at ? k : k + count);
  return m;
}

inline void need(bool cond, const std::string &what) {
  if (!cond)
    throw std::runtime_error(what);
}

}  // namespace inv_detail

// One replayed step: the new state plus the twist-index correspondence,
// oriented from the smaller twist set into the larger (grown = the move
// added twists, so the map goes old -> new; otherwise new -> old).
struct StepResult {
  ReplayState state;
  std::vector<int> map;
  bool grown = true;
};

inline StepResult replay_move(const ReplayState &s, const Move &mv) {
  using namespace inv_detail;
  StepResult out;
  size_t n = s.p.size();
  const std::vector<int> &a = mv.args;

  auto from_diagram = [&](const LineDiagram &ld) {
    out.state.diagram = ld;
    out.state.p = lf_from_linediagram(ld);
  };

  if (mv.op == "S+") {
    need(a.size() == 2, "S+ needs: source sign");
    need(s.diagram.has_value(), "S+ needs a diagram-level value");
    from_diagram(move_S(*s.diagram, a[0], a[1]));
    out.map = identity_map(n);
  } else if (mv.op == "S-") {
    need(a.size() == 2, "S- needs: band sheet");
    need(s.diagram.has_value(), "S- needs a diagram-level value");
    from_diagram(move_S_inverse(*s.diagram, a[0], a[1]));
    out.grown = false;
    for (size_t k = 0; k < n; k++)  // new index -> surviving old index
      if ((int)k != a[0] - 1)
        out.map.push_back((int)k);
  } else if (mv.op == "P+") {
    need(a.size() == 1, "P+ needs: variant");
    need(s.diagram.has_value(), "P+ needs a diagram-level value");
    from_diagram(move_P(*s.diagram, a[0]));
    out.map = identity_map(n);  // the payload is appended after the old twists
  } else if (mv.op == "P-") {
    need(a.size() == 1, "P- needs: variant");
    need(s.diagram.has_value(), "P- needs a diagram-level value");
    from_diagram(move_P_inverse(*s.diagram, a[0]));
    out.grown = false;
    out.map = identity_map(out.state.p.size());
  } else if (mv.op == "slide") {
    need(a.size() == 2, "slide needs: i dir");
    if (s.diagram) {  // keep the diagram form alive for later diagram ops
      LineDiagram sld =
          slide(*s.diagram, a[0], a[1] ? SlideDir::left : SlideDir::right);
      if (sld.all_monotonic()) {
        from_diagram(sld);
      } else {
        // the slid band has no template reading, so the presentation is
        // carried by the equivalent cycle-level slide instead of re-derived
        out.state.diagram = std::move(sld);
        out.state.p = twist_slide(
            s.p, a[0], a[1] ? SlideDirection::left : SlideDirection::right);
      }
    } else {
      out.state.p = twist_slide(
          s.p, a[0], a[1] ? SlideDirection::left : SlideDirection::right);
    }
    out.map = identity_map(n);
    std::swap(out.map[a[0] - 1], out.map[a[0]]);
  } else if (mv.op == "T") {
    need(a.size() == 1, "T needs: i");
    out.state.p = move_T(s.p, a[0]);
    out.map = identity_map(n);
  } else if (mv.op == "U+") {
    need(a.size() == 2, "U+ needs: vertex pos");
    out.state.p = move_U(s.p, a[0], a[1]);
    out.map = insert_map(n, (size_t)(a[1] - 1), 2);
  } else if (mv.op == "U-") {
    need(a.size() == 1, "U- needs: pos");
    out.state.p = move_U_inverse(s.p, a[0]);
    out.grown = false;
    out.map = insert_map(out.state.p.size(), (size_t)(a[0] - 1), 2);
  } else if (mv.op == "Q+") {
    need(a.size() >= 2 && a.size() % 2 == 0, "Q+ needs: pos sign e1 f1 ...");
    Loop c;
    for (size_t k = 2; k + 1 < a.size(); k += 2)
      c.push_back({a[k], a[k + 1] != 0});
    out.state.p = move_Q(s.p, a[0], c, a[1]);
    out.map = insert_map(n, (size_t)(a[0] - 1), 2);
  } else if (mv.op == "Q-") {
    need(a.size() == 1, "Q- needs: pos");
    out.state.p = move_Q_inverse(s.p, a[0]);
    out.grown = false;
    out.map = insert_map(out.state.p.size(), (size_t)(a[0] - 1), 2);
  } else {
    throw std::runtime_error("unknown move op '" + mv.op + "'");
  }
  return out;
}

struct CertReport {
  bool ok = false;
  std::string failure;              // names the failing step when not ok
  std::vector<std::string> ledger;  // one line per step
  ReplayState result;

  std::string str() const {
    std::string s;
    for (const auto &l : ledger)
      s += l + "\n";
    s += ok ? "certified\n" : "FAILED: " + failure + "\n";
    return s;
  }
};

// Replay a script, checking each step's documented invariant deltas:
//   S, T, U:  euler_W and h1_W unchanged
//   S:        Euler class unchanged (under the index map); allowability kept
//   T, U:     Euler class moves within its 2H2 coset; T keeps allowability
//   Q:        euler_W +-2, open book identical, h1_boundary unchanged
//   P:        euler_W +-1, h1_boundary unchanged
//   slide:    everything homological unchanged (total matrix exactly)
inline CertReport certify(const ReplayState &start, const MoveScript &script) {
  CertReport rep;
  ReplayState cur = start;
  for (size_t step = 0; step < script.size(); step++) {
    const Move &mv = script.moves[step];
    std::string tag = "step " + std::to_string(step + 1) + " (" + mv.str() +
                      ")";
    StepResult next;
    try {
      next = replay_move(cur, mv);
    } catch (const std::exception &ex) {
      rep.failure = tag + ": " + ex.what();
      return rep;
    }
    const LFPresentation &p0 = cur.p;
    const LFPresentation &p1 = next.state.p;
    const LFPresentation &small = next.grown ? p0 : p1;
    const LFPresentation &big = next.grown ? p1 : p0;

    long long d_chi = euler_char_W(p1) - euler_char_W(p0);
    std::ostringstream line;
    line << tag << ": d_euler_W=" << d_chi;
    auto fail = [&](const std::string &what) {
      rep.ledger.push_back(line.str());
      rep.failure = tag + ": " + what;
    };

    char kind = mv.op[0];
    try {
      if (kind == 'S' || kind == 'T' || kind == 'U' || mv.op == "slide") {
        if (d_chi != 0)
          return fail("euler_W changed"), rep;
        if (h1_W(p0) != h1_W(p1))
          return fail("h1_W changed"), rep;
        line << " h1_W=ok";
        if (mv.op != "slide") {
          // sliding changes the cycle representatives, so its Euler gate is
          // the exact total matrix below, not the per-handle cocycle
          bool allow2 = kind == 'T' || kind == 'U';
          if (!euler_cosets_match(small, next.map, big, allow2))
            return fail(allow2 ? "Euler class left its 2H2 coset"
                               : "Euler class changed"),
                   rep;
          line << " euler=" << (allow2 ? "2H2-ok" : "ok");
        }
        if (kind == 'S' || kind == 'T') {
          if (p0.allowable() != p1.allowable())
            return fail("allowability changed"), rep;
          line << " allowable=kept";
        }
        if (mv.op == "slide") {
          OpenBook b0 = boundary_openbook(p0), b1 = boundary_openbook(p1);
          if (b0.total_matrix != b1.total_matrix)
            return fail("total matrix changed"), rep;
          line << " total=ok";
        }
      } else if (kind == 'Q') {
        long long want = mv.op == "Q+" ? 2 : -2;
        if (d_chi != want)
          return fail("euler_W delta is not " + std::to_string(want)), rep;
        if (!(boundary_openbook(p0) == boundary_openbook(p1)))
          return fail("open book changed"), rep;
        if (h1_boundary(p1) != h1_boundary(p0))
          return fail("h1_boundary changed"), rep;
        if (!euler_cosets_match(small, next.map, big, false))
          return fail("Euler class changed"), rep;
        line << " openbook=ok euler=ok";
      } else if (kind == 'P') {
        long long want = mv.op == "P+" ? 1 : -1;
        if (d_chi != want)
          return fail("euler_W delta is not " + std::to_string(want)), rep;
        if (h1_boundary(p0) != h1_boundary(p1))
          return fail("h1_boundary changed"), rep;
        line << " h1_boundary=ok";
      }
    } catch (const std::exception &ex) {
      return fail(std::string("invariant computation failed: ") + ex.what()),
             rep;
    }
    rep.ledger.push_back(line.str());
    cur = std::move(next.state);
  }
  rep.ok = true;
  rep.result = std::move(cur);
  return rep;
}

inline CertReport certify(const LineDiagram &from, const MoveScript &script) {
  return certify(ReplayState::of(from), script);
}

// Replay and additionally require the script to land on the given target.
inline CertReport certify(const LineDiagram &from, const LineDiagram &to,
                          const MoveScript &script) {
  CertReport rep = certify(from, script);
  if (!rep.ok)
    return rep;
  bool same;
  if (rep.result.diagram) {
    const LineDiagram &got = *rep.result.diagram;
    same = got.degree == to.degree && got.labels == to.labels &&
           got.bands.strands == to.bands.strands &&
           got.bands.bands == to.bands.bands;
  } else {
    same = rep.result.p == lf_from_linediagram(to);
  }
  if (!same) {
    rep.ok = false;
    rep.failure = "script does not reach the target";
  }
  return rep;
}

}  // namespace lefkit

#endif
