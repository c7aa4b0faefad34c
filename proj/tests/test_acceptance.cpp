// Acceptance suite: one pass/fail line per criterion, plain exit status.
// Unlike the Catch2 suites, this binary exercises the advertised end-to-end
// guarantees at their full advertised scale; each criterion prints exactly
// one line, and the process fails when any criterion does.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lefkit/braider.hpp"
#include "lefkit/gen.hpp"
#include "lefkit/invariants.hpp"
#include "lefkit/search.hpp"

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace lefkit;

namespace {

int failures = 0;

void report(int criterion, const char *name, bool ok, const std::string &detail) {
  std::printf("[criterion %d] %s — %s (%s)\n", criterion, ok ? "PASS" : "FAIL",
              name, detail.c_str());
  if (!ok)
    failures++;
}

void report_skip(int criterion, const char *name, const std::string &detail) {
  std::printf("[criterion %d] SKIP — %s (%s)\n", criterion, name,
              detail.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool same_diagram(const LineDiagram &a, const LineDiagram &b) {
  return a.degree == b.degree && a.labels == b.labels &&
         a.bands.strands == b.bands.strands && a.bands.bands == b.bands.bands;
}

// ---------------------------------------------------------------------------
// 1. Round-trip: flattening a monotonic diagram and braiding the picture
//    back up reproduces the diagram exactly.

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  GenBounds bounds{4, 8, 10};
  int n = 0;
  std::string err;
  for (std::uint64_t seed = 1; seed <= 200 && err.empty(); seed++) {
    try {
      LineDiagram ld = gen_random(seed, bounds);
      LineDiagram back = braid_up(flatten(ld));
      if (!same_diagram(ld, back))
        err = "seed " + std::to_string(seed) + ": round-trip changed the diagram";
      n++;
    } catch (const std::exception &ex) {
      err = "seed " + std::to_string(seed) + ": " + ex.what();
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << n << " diagrams, " << dt << "s";
  if (!err.empty())
    d << "; " << err;
  report(1, "monotonic round-trip braid_up(flatten(L)) = L", err.empty() && dt < 30.0,
         d.str());
}

// ---------------------------------------------------------------------------
// 2. The four-band worked example on six sheets: template recognition of
//    the first three bands, the fourth stays non-monotonic, and the two
//    destabilizations only work in one order.

void criterion2() {
  std::string err;
  try {
    LineDiagram ld = fx::example6();
    const char *words[4] = {"s1", "S3 S2 s3", "S5 s4 s3 S4 s5",
                            "S3 S2 S2 S3 S4 s3 s2 s2 s3"};
    for (int k = 0; k < 4 && err.empty(); k++) {
      Band parsed(BraidWord::parse(6, words[k]));
      if (!(parsed == ld.bands.bands[k]))
        err = "band " + std::to_string(k + 1) + " word does not match the fixture";
    }
    bool mono_want[4] = {true, true, true, false};
    for (int k = 0; k < 4 && err.empty(); k++)
      if (ld.bands.bands[k].mono.has_value() != mono_want[k])
        err = "band " + std::to_string(k + 1) + ": wrong monotonicity verdict";

    if (err.empty()) {
      // removing the fourth band's sheet must fail while the third band
      // still passes through sheet 5 ...
      bool threw = false;
      try {
        braid_destabilize(ld, 4, 5);
      } catch (const std::exception &) {
        threw = true;
      }
      if (!threw)
        err = "destabilizing band 4 at sheet 5 succeeded too early";
    }
    if (err.empty()) {
      // ... but works once band 3 has been destabilized with sheet 6
      LineDiagram ld5 = braid_destabilize(ld, 3, 6);
      LineDiagram ld4 = braid_destabilize(ld5, 3, 5);
      if (ld4.sheets() != 4 || ld4.bands.size() != 2)
        err = "double destabilization left the wrong shape";
    }
  } catch (const std::exception &ex) {
    err = ex.what();
  }
  report(2, "four-band example: recognition and destabilization order",
         err.empty(), err.empty() ? "4 bands, both orders checked" : err);
}

// ---------------------------------------------------------------------------
// 3. Sliding suite: left undoes right, the total braid's permutation is
//    invariant, and every band's permutation is a transposition of its ends.

void criterion3() {
  std::mt19937_64 rng(7);
  GenBounds bounds{4, 6, 6};
  std::string err;
  int pairs = 0;
  std::uint64_t seed = 1;
  while (pairs < 10000 && err.empty()) {
    LineDiagram ld = gen_random(seed++, bounds);
    if (ld.bands.size() < 2)
      continue;
    Perm total = total_braid(ld.bands).perm();
    int rounds = std::min<int>(20, 4 * (int)ld.bands.size());
    HalfTwistSequence s = ld.bands;
    for (int t = 0; t < rounds && pairs < 10000 && err.empty(); t++) {
      int i = 1 + (int)(rng() % (s.size() - 1));
      HalfTwistSequence slid = hurwitz_slide(s, i, SlideDir::right);
      HalfTwistSequence back = hurwitz_slide(slid, i, SlideDir::left);
      if (!(back.bands == s.bands)) {
        err = "slide-left did not undo slide-right";
        break;
      }
      if (total_braid(slid).perm() != total) {
        err = "total braid permutation changed under sliding";
        break;
      }
      for (const Band &b : slid.bands) {
        int a = 0, c = 0;
        if (!b.w.perm().is_transposition(&a, &c)) {
          err = "a slid band is not a transposition";
          break;
        }
        if (b.mono && !(a == b.mono->from && c == b.mono->to)) {
          err = "a monotonic band's permutation misses its own ends";
          break;
        }
      }
      pairs++;
      s = slid;  // walk the orbit, not just the first shell
    }
  }
  std::ostringstream d;
  d << pairs << " (sequence, slide) pairs";
  if (!err.empty())
    d << "; " << err;
  report(3, "Hurwitz sliding suite", err.empty(), d.str());
}

// ---------------------------------------------------------------------------
// Shared enumeration of all labelings: degree d in {2, 3}, every tuple of
// transpositions on m sheets.

template <typename F>
void for_all_labelings(int max_sheets, F &&body) {
  for (int d = 2; d <= 3; d++) {
    std::vector<Perm> ts;
    for (int a = 1; a <= d; a++)
      for (int b = a + 1; b <= d; b++)
        ts.push_back(Perm::transposition(d, a, b));
    for (int m = 1; m <= max_sheets; m++) {
      std::vector<int> pick(m, 0);
      for (;;) {
        std::vector<Perm> labels;
        for (int k = 0; k < m; k++)
          labels.push_back(ts[pick[k]]);
        body(d, labels);
        int k = 0;
        while (k < m && ++pick[k] == (int)ts.size())
          pick[k++] = 0;
        if (k == m)
          break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Fiber topology: Euler characteristic, genus accounting, skewness of the
//    intersection form, and symplecticity of every twist transvection.

void criterion4() {
  std::mt19937_64 rng(11);
  std::string err;
  int fibers = 0;
  for_all_labelings(5, [&](int d, const std::vector<Perm> &labels) {
    if (!err.empty())
      return;
    int m = (int)labels.size();
    try {
      FiberSurface f = FiberSurface::from_labels(d, labels);
      if (f.chi() != d - m) {
        err = "chi != d - m";
        return;
      }
      if (f.genus() < 0) {  // genus() itself throws on inconsistent counts
        err = "negative genus";
        return;
      }
      auto fo = f.forest();
      IMat j = f.form(fo);
      size_t b1 = fo.basis_edges.size();
      for (size_t a = 0; a < b1; a++)
        for (size_t b = 0; b < b1; b++)
          if (j[a][b] != -j[b][a]) {
            err = "intersection form is not skew";
            return;
          }
      std::vector<std::vector<long long>> classes;
      for (size_t i = 0; i < b1; i++)
        classes.push_back(f.loop_class(fo, f.basis_loop(fo, (int)i)));
      for (int t = 0; t < 2 && b1 > 0; t++) {
        std::vector<long long> c(b1);
        for (auto &v : c)
          v = (long long)(rng() % 5) - 2;
        classes.push_back(c);
      }
      for (const auto &c : classes)
        for (int sign : {1, -1}) {
          IMat mt = twist_matrix(c, sign, j);
          if (mat_mul(mat_mul(mat_transpose(mt), j), mt) != j) {
            err = "twist matrix is not symplectic";
            return;
          }
        }
      fibers++;
    } catch (const std::exception &ex) {
      err = ex.what();
    }
  });
  std::ostringstream d;
  d << fibers << " labelings";
  if (!err.empty())
    d << "; " << err;
  report(4, "fiber topology and transvection suite", err.empty(), d.str());
}

// ---------------------------------------------------------------------------
// 5. Intersection numbers agree with the independent slit-picture oracle on
//    every pair of basis loops.

void criterion5() {
  std::string err;
  long long pairs = 0;
  for_all_labelings(4, [&](int d, const std::vector<Perm> &labels) {
    if (!err.empty())
      return;
    try {
      FiberSurface f = FiberSurface::from_labels(d, labels);
      auto fo = f.forest();
      size_t b1 = fo.basis_edges.size();
      std::vector<Loop> loops;
      for (size_t i = 0; i < b1; i++)
        loops.push_back(f.basis_loop(fo, (int)i));
      for (size_t a = 0; a < b1 && err.empty(); a++)
        for (size_t b = 0; b < b1 && err.empty(); b++) {
          if (a == b)
            continue;
          long long fast = f.intersect(loops[a], loops[b]);
          long long slow = oracle::oracle_intersect(f, loops[a], loops[b]);
          if (fast != slow)
            err = "disagreement at degree " + std::to_string(d);
          pairs++;
        }
    } catch (const std::exception &ex) {
      err = ex.what();
    }
  });
  std::ostringstream d;
  d << pairs << " loop pairs";
  if (!err.empty())
    d << "; " << err;
  report(5, "intersection oracle equivalence", err.empty(), d.str());
}

// ---------------------------------------------------------------------------
// 6. Move invariance at scale: every applicable instance of every move in
//    the alphabet passes the per-step certification gates.

struct MoveCount {
  int total = 0;
  std::map<std::string, int> by_kind;
  std::string err;

  // Pre-checked applicable instance: certification must succeed.
  void run(const std::string &kind, const ReplayState &from, Move mv) {
    if (!err.empty())
      return;
    CertReport rep = certify(from, MoveScript{{mv}});
    if (!rep.ok) {
      err = kind + ": " + rep.failure;
      return;
    }
    total++;
    by_kind[kind]++;
  }
};

void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(29);
  MoveCount mc;
  GenBounds bounds{3, 5, 5};

  for (std::uint64_t seed = 1; seed <= 45 && mc.err.empty(); seed++) {
    LineDiagram ld = gen_random(seed, bounds);
    int m = ld.sheets();
    int n = (int)ld.bands.size();
    ReplayState st = ReplayState::of(ld);

    // S+ and its inverse from the stabilized diagram
    int src = 1 + (int)(rng() % m);
    int sign = rng() % 2 ? 1 : -1;
    mc.run("S+", st, Move{"S+", {src, sign}});
    LineDiagram up = move_S(ld, src, sign);
    mc.run("S-", ReplayState::of(up), Move{"S-", {n + 1, m + 1}});

    // P+ and its inverse from the blown-up diagram
    int variant = rng() % 2 ? 1 : -1;
    mc.run("P+", st, Move{"P+", {variant}});
    mc.run("P-", ReplayState::of(move_P(ld, variant)), Move{"P-", {variant}});

    // sliding, both directions
    if (n >= 2) {
      int i = 1 + (int)(rng() % (n - 1));
      mc.run("slide", st, Move{"slide", {i, 0}});
      mc.run("slide", st, Move{"slide", {i, 1}});
    }

    // fibration-level moves
    LFPresentation p = lf_from_linediagram(ld);
    ReplayState sp = ReplayState::of(p);
    int vert = 1 + (int)(rng() % p.fiber.vertices);
    int pos = 1 + (int)(rng() % (p.size() + 1));
    mc.run("U+", sp, Move{"U+", {vert, pos}});
    mc.run("U-", ReplayState::of(move_U(p, vert, pos)), Move{"U-", {pos}});

    auto fo = p.fiber.forest();
    if (!fo.basis_edges.empty()) {
      Loop c = p.fiber.basis_loop(fo, (int)(rng() % fo.basis_edges.size()));
      int qsign = rng() % 2 ? 1 : -1;
      std::vector<int> qa{pos, qsign};
      for (const EdgeStep &s : c) {
        qa.push_back(s.edge);
        qa.push_back(s.fwd ? 1 : 0);
      }
      mc.run("Q+", sp, Move{"Q+", qa});
      LFPresentation q = move_Q(p, pos, c, qsign);
      mc.run("Q-", ReplayState::of(q), Move{"Q-", {pos}});

      // opportunistic T instances on the freshly inserted opposite pair
      for (int i = 1; (size_t)i < q.size() && mc.by_kind["T"] < 60; i++) {
        try {
          move_T(q, i);
        } catch (const std::exception &) {
          continue;
        }
        mc.run("T", ReplayState::of(q), Move{"T", {i}});
      }
    }
  }

  // guaranteed T family: two opposite twists on a two-sheet ladder fiber
  // sharing exactly one band
  for (int m = 3; m <= 7 && mc.err.empty(); m++) {
    LFPresentation p;
    p.degree = 2;
    Perm t = Perm::transposition(2, 1, 2);
    p.fiber = FiberSurface::from_labels(2, std::vector<Perm>((size_t)m, t));
    for (int j = 2; j <= m; j++)
      for (int k = 2; k <= m; k++) {
        if (j == k)
          continue;
        p.cycles = {{{1, true}, {j, false}}, {{1, true}, {k, false}}};
        p.signs = {1, -1};
        p.check();
        try {
          move_T(p, 1);
        } catch (const std::exception &) {
          continue;
        }
        mc.run("T", ReplayState::of(p), Move{"T", {1}});
      }
  }

  double dt = seconds_since(t0);
  std::ostringstream d;
  d << mc.total << " certified instances in " << dt << "s:";
  bool covered = true;
  for (const char *k : {"S+", "S-", "T", "U+", "U-", "P+", "P-", "Q+", "Q-",
                        "slide"}) {
    d << " " << k << "=" << mc.by_kind[k];
    if (mc.by_kind[k] == 0)
      covered = false;
  }
  if (!mc.err.empty())
    d << "; " << mc.err;
  report(6, "move certification at scale",
         mc.err.empty() && mc.total >= 500 && covered && dt < 120.0, d.str());
}

// ---------------------------------------------------------------------------
// 7. Search recovery: hidden scripts of length up to three are recovered
//    within depth three, and every recovered script certifies.

void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2027);
  GenBounds bounds{3, 4, 3};
  std::string err;
  int trials = 0;
  for (std::uint64_t seed = 1000; trials < 100 && err.empty(); seed++) {
    LineDiagram a = gen_random(seed, bounds);
    LineDiagram b = a;
    int len = 1 + (int)(rng() % 3);
    for (int k = 0; k < len; k++) {
      switch (rng() % 3) {
        case 0:
          b = move_S(b, 1 + (int)(rng() % b.sheets()), rng() % 2 ? 1 : -1);
          break;
        case 1:
          b = move_P(b, rng() % 2 ? 1 : -1);
          break;
        default:
          if (b.bands.size() >= 2)
            b = slide(b, 1 + (int)(rng() % (b.bands.size() - 1)),
                      rng() % 2 ? SlideDir::left : SlideDir::right);
          else
            b = move_S(b, 1, 1);
          break;
      }
    }
    SearchConfig cfg;
    cfg.depth = 3;
    cfg.node_budget = 150000;
    SearchResult res = search_equivalence(a, b, cfg);
    if (!res.found()) {
      err = "seed " + std::to_string(seed) + ": no script recovered";
      break;
    }
    if (!certify(a, b, *res.script).ok) {
      err = "seed " + std::to_string(seed) + ": recovered script fails to certify";
      break;
    }
    trials++;
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << trials << "/100 hidden scripts recovered and certified, " << dt << "s";
  if (!err.empty())
    d << "; " << err;
  report(7, "bounded search soundness and recovery", err.empty(), d.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  report_skip(8,
              "completeness of the move calculus",
              "excluded by design: no effective bound on relating-script "
              "length exists, so the completeness direction cannot be tested "
              "at this scale; its practical content is exercised indirectly "
              "by criteria 6 and 7");
  std::printf("%s\n", failures ? "ACCEPTANCE: FAILED" : "ACCEPTANCE: OK");
  return failures ? 1 : 0;
}
