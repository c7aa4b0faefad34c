#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lefkit/fiber.hpp"

#include "oracle.hpp"

using namespace lefkit;

using oracle::oracle_intersect;

namespace {

FiberSurface ladder(int m) {  // degree 2, all labels (1 2)
  std::vector<Perm> labels(m, Perm::transposition(2, 1, 2));
  return FiberSurface::from_labels(2, labels);
}

}  // namespace

TEST_CASE("two-sheet covers have the classical topology") {
  // The double cover of the disk branched at m points: one or two boundary
  // circles by parity, genus growing every second branch point.
  for (int m = 1; m <= 6; m++) {
    FiberSurface f = ladder(m);
    CHECK(f.chi() == 2 - m);
    CHECK(f.component_count() == 1);
    int b = m % 2 ? 1 : 2;
    CHECK(f.boundary_components() == b);
    CHECK(f.genus() == (m - b) / 2);
    auto fo = f.forest();
    CHECK((int)fo.basis_edges.size() == m - 1);
    IMat j = f.form(fo);
    for (size_t a = 0; a < j.size(); a++)
      for (size_t c = 0; c < j.size(); c++)
        CHECK(j[a][c] == -j[c][a]);
  }
  // Branched at 3 points: the one-holed torus, with unimodular pairing.
  IMat j3 = ladder(3).form(ladder(3).forest());
  CHECK(std::llabs(j3[0][1]) == 1);
}

TEST_CASE("boundary circles match the cycles of the total monodromy") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 200; trial++) {
    int degree = 2 + (int)(rng() % 3);
    int m = 1 + (int)(rng() % 6);
    std::vector<Perm> labels;
    for (int r = 0; r < m; r++) {
      int a = 1 + (int)(rng() % degree), b = 1 + (int)(rng() % degree);
      while (b == a)
        b = 1 + (int)(rng() % degree);
      labels.push_back(
          Perm::transposition(degree, std::min(a, b), std::max(a, b)));
    }
    Perm total(degree);
    for (const Perm &t : labels)
      total = total.then(t);
    int cycles = 0;
    std::vector<char> seen(degree, 0);
    for (int x = 1; x <= degree; x++) {
      if (seen[x - 1])
        continue;
      cycles++;
      for (int y = x; !seen[y - 1]; y = total(y))
        seen[y - 1] = 1;
    }
    FiberSurface f = FiberSurface::from_labels(degree, labels);
    CHECK(f.boundary_components() == cycles);
    CHECK(f.genus() >= 0);  // throws on inconsistent accounting
  }
}

TEST_CASE("the alternating chain gives a one-holed torus") {
  std::vector<Perm> labels = {
      Perm::transposition(3, 1, 2), Perm::transposition(3, 2, 3),
      Perm::transposition(3, 1, 2), Perm::transposition(3, 2, 3)};
  FiberSurface f = FiberSurface::from_labels(3, labels);
  CHECK(f.chi() == -1);
  CHECK(f.boundary_components() == 1);
  CHECK(f.genus() == 1);
  auto fo = f.forest();
  REQUIRE(fo.basis_edges.size() == 2);
  IMat j = f.form(fo);
  CHECK(j[0][1] != 0);
  CHECK(std::llabs(j[0][1]) == 1);
  CHECK(j[1][0] == -j[0][1]);
}

TEST_CASE("isolated cover sheets contribute disk components") {
  std::vector<Perm> labels = {Perm::transposition(3, 1, 2)};
  FiberSurface f = FiberSurface::from_labels(3, labels);
  CHECK(f.chi() == 2);
  CHECK(f.component_count() == 2);
  CHECK(f.boundary_components() == 2);
  CHECK(f.genus() == 0);
  CHECK(f.forest().basis_edges.empty());
}

static LineDiagram random_diagram(std::mt19937_64 &rng, int degree,
                                  int sheets) {
  LineDiagram ld;
  ld.degree = degree;
  ld.bands.strands = sheets;
  for (int r = 0; r < sheets; r++) {
    int a = 1 + (int)(rng() % degree);
    int b = 1 + (int)(rng() % degree);
    while (b == a)
      b = 1 + (int)(rng() % degree);
    ld.labels.push_back(Perm::transposition(degree, std::min(a, b),
                                            std::max(a, b)));
  }
  // Walk the sheets left to right, attaching at most one band ending at
  // each sheet; its label is then forced by transport over sheets already
  // labeled, so the whole diagram lifts by construction.
  for (int k = 2; k <= sheets; k++) {
    if (rng() % 2)
      continue;
    int j = 1 + (int)(rng() % (k - 1));
    std::vector<int> pat;
    for (int h = j + 1; h < k; h++)
      pat.push_back(rng() % 2 ? 1 : -1);
    MonotonicBand b(j, k, rng() % 2 ? 1 : -1, std::move(pat));
    Perm T = ld.transport(b);
    ld.labels[k - 1] = T.inv().then(ld.labels[j - 1]).then(T);
    ld.bands.bands.emplace_back(b, sheets);
  }
  ld.check();
  if (!ld.check_labels())
    throw std::runtime_error("random diagram construction is broken");
  return ld;
}

TEST_CASE("chord crossings agree with the drawn-curve oracle") {
  std::mt19937_64 rng(5150);
  int compared = 0;
  for (int trial = 0; trial < 150; trial++) {
    int degree = 2 + (int)(rng() % 2);
    int sheets = 2 + (int)(rng() % 3);
    LineDiagram ld = random_diagram(rng, degree, sheets);
    FiberSurface f = FiberSurface::from_linediagram(ld);
    auto fo = f.forest();

    std::vector<Loop> loops;
    for (size_t i = 0; i < fo.basis_edges.size(); i++)
      loops.push_back(f.basis_loop(fo, (int)i));
    for (size_t i = 1; i <= ld.bands.size(); i++)
      loops.push_back(vanishing_cycle(ld, (int)i));

    for (size_t a = 0; a < loops.size(); a++)
      for (size_t b = 0; b < loops.size(); b++) {
        if (a == b)
          continue;
        long long got = f.intersect(loops[a], loops[b]);
        long long want = oracle_intersect(f, loops[a], loops[b]);
        CHECK(got == want);
        compared++;
      }
  }
  CHECK(compared > 500);
}

TEST_CASE("intersection is bilinear over the class coordinates") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; trial++) {
    LineDiagram ld = random_diagram(rng, 3, 4);
    FiberSurface f = FiberSurface::from_linediagram(ld);
    auto fo = f.forest();
    IMat j = f.form(fo);
    for (size_t a = 1; a <= ld.bands.size(); a++)
      for (size_t b = 1; b <= ld.bands.size(); b++) {
        if (a == b)
          continue;
        Loop la = vanishing_cycle(ld, (int)a);
        Loop lb = vanishing_cycle(ld, (int)b);
        auto ca = f.loop_class(fo, la);
        auto cb = f.loop_class(fo, lb);
        long long viaj = 0;
        for (size_t p = 0; p < ca.size(); p++)
          for (size_t q = 0; q < cb.size(); q++)
            viaj += ca[p] * j[p][q] * cb[q];
        CHECK(f.intersect(la, lb) == viaj);
      }
  }
}

TEST_CASE("twist matrices are symplectic for the form") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; trial++) {
    LineDiagram ld = random_diagram(rng, 3, 5);
    FiberSurface f = FiberSurface::from_linediagram(ld);
    auto fo = f.forest();
    IMat j = f.form(fo);
    size_t n = fo.basis_edges.size();
    if (!n)
      continue;
    // vanishing-cycle classes and arbitrary classes alike
    std::vector<std::vector<long long>> cs;
    for (size_t i = 1; i <= ld.bands.size(); i++)
      cs.push_back(f.loop_class(fo, vanishing_cycle(ld, (int)i)));
    std::vector<long long> rnd(n);
    for (auto &v : rnd)
      v = (long long)(rng() % 7) - 3;
    cs.push_back(rnd);
    for (const auto &c : cs)
      for (int sign : {+1, -1}) {
        IMat m = twist_matrix(c, sign, j);
        CHECK(mat_mul(mat_transpose(m), mat_mul(j, m)) == j);
      }
  }
}

TEST_CASE("rotation numbers in the canonical immersion") {
  // The out-and-back annulus core is flat.
  FiberSurface f = ladder(2);
  Loop rect = {{1, true}, {2, false}};
  CHECK(f.rotation_number(rect) == 0);
  CHECK(f.rotation_number(reverse_loop(rect)) == 0);

  // A loop that winds once around the hooks picks up a full turn.
  FiberSurface f3 = ladder(3);
  Loop wind = {{1, true},  {2, false}, {3, true},
               {1, false}, {2, true},  {3, false}};
  CHECK(f3.rotation_number(wind) == -1);
  CHECK(f3.rotation_number(reverse_loop(wind)) == 1);

  // Reversal negates the turning of arbitrary valid loops.
  auto fo = f3.forest();
  for (size_t i = 0; i < fo.basis_edges.size(); i++) {
    Loop l = f3.basis_loop(fo, (int)i);
    CHECK(f3.rotation_number(reverse_loop(l)) == -f3.rotation_number(l));
  }

  CHECK_THROWS(f.rotation_number(Loop{{1, true}, {1, false}}));
}

TEST_CASE("vanishing cycles respect the labels") {
  // degree 2, two sheets labeled (1 2), one band joining them
  LineDiagram ld;
  ld.degree = 2;
  ld.bands.strands = 2;
  ld.labels = {Perm::transposition(2, 1, 2), Perm::transposition(2, 1, 2)};
  ld.bands.bands = {Band(MonotonicBand(1, 2, +1, {}), 2)};
  Loop l = vanishing_cycle(ld, 1);
  REQUIRE(l.size() == 2);
  CHECK(l[0].edge == 1);
  CHECK(l[1].edge == 2);

  // through-sheets in the support get traversed on the way out and back
  LineDiagram ld2;
  ld2.degree = 2;
  ld2.bands.strands = 3;
  ld2.labels = {Perm::transposition(2, 1, 2), Perm::transposition(2, 1, 2),
                Perm::transposition(2, 1, 2)};
  ld2.bands.bands = {Band(MonotonicBand(1, 3, +1, {+1}), 3)};
  REQUIRE(ld2.check_labels());
  Loop l2 = vanishing_cycle(ld2, 1);
  CHECK(l2.size() == 4);  // e1, e2, e3, e2

  // a mislabeled diagram cannot lift
  ld2.labels[2] = Perm::transposition(2, 1, 2);
  ld2.labels[1] = Perm::transposition(2, 1, 2);
  LineDiagram bad = ld2;
  bad.degree = 3;
  for (auto &t : bad.labels)
    t = Perm::transposition(3, 1, 2);
  bad.labels[2] = Perm::transposition(3, 2, 3);
  CHECK_THROWS(vanishing_cycle(bad, 1));
}
