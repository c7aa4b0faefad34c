// Handlebody and boundary invariants, the Euler class machinery, and the
// certifying script replayer.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "lefkit/invariants.hpp"

using namespace lefkit;

namespace {

LineDiagram hopf() {
  LineDiagram ld;
  ld.degree = 2;
  ld.bands.strands = 2;
  ld.labels = {Perm::transposition(2, 1, 2), Perm::transposition(2, 1, 2)};
  ld.bands.bands = {Band(MonotonicBand(1, 2, +1, {}), 2)};
  return ld;
}

LineDiagram random_with_bands(std::mt19937_64 &rng, int degree, int sheets,
                              size_t min_bands) {
  for (;;) {
    LineDiagram ld = fx::random_diagram(rng, degree, sheets);
    if (ld.bands.size() >= min_bands)
      return ld;
  }
}

}  // namespace

TEST_CASE("lattice reduction") {
  // lattice spanned by (2,0) and (0,3) in Z^2
  IMat gens{{2, 0}, {0, 3}};
  CHECK(lattice_reduce(gens, {4, 9}) == std::vector<long long>{0, 0});
  CHECK(lattice_reduce(gens, {5, 9}) != std::vector<long long>{0, 0});
  CHECK(lattice_reduce(gens, {1, 1}) == lattice_reduce(gens, {3, 4}));
  CHECK(lattice_reduce(gens, {1, 1}) != lattice_reduce(gens, {1, 2}));
  // no generators: identity
  CHECK(lattice_reduce(IMat{}, {7, -3}) == std::vector<long long>{7, -3});
}

TEST_CASE("the Hopf diagram's invariants") {
  InvariantReport r = invariant_report(hopf());
  CHECK(r.euler_W == 1);          // the total space is the 4-ball
  CHECK(r.h1_W.is_trivial());     // the annulus core bounds
  CHECK(r.h1_F == 1);
  CHECK(r.total_matrix == mat_identity(1));  // degenerate pairing: identity
  CHECK(r.allowable);
  // The boundary is the 3-sphere; the binding-aware relation matrix sees
  // it even though the total action on page classes is the identity. The
  // page-classes-only overload is blind to the binding and reports Z.
  CHECK(r.h1_boundary.is_trivial());
  CHECK(h1_boundary(boundary_openbook(lf_from_linediagram(hopf()))) ==
        AbelianGroup{1, {}});

  // stable text output
  std::string text = r.str();
  CHECK(text.find("euler_W 1\n") != std::string::npos);
  CHECK(text.find("h1_W 0\n") != std::string::npos);
  CHECK(text.find("allowable true\n") != std::string::npos);
  CHECK(invariant_report(hopf()).str() == text);
}

TEST_CASE("the two Euler characteristic formulas agree") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 15; rep++) {
    LineDiagram ld = fx::random_diagram(rng, 4, 7);
    LFPresentation p = lf_from_linediagram(ld);
    CHECK(euler_char_W(ld) == euler_char_W(p));
    CHECK(euler_char_W(ld) ==
          (long long)ld.degree - ld.sheets() + (long long)ld.bands.size());
  }
}

TEST_CASE("no twists: free homology, empty Euler class") {
  LineDiagram ld;
  ld.degree = 3;
  ld.bands.strands = 2;
  ld.labels = {Perm::transposition(3, 1, 2), Perm::transposition(3, 2, 3)};
  LFPresentation p = lf_from_linediagram(ld);
  CHECK(euler_char_W(p) == p.fiber.chi());
  CHECK(h1_W(p) == AbelianGroup{h1_rank_F(p), {}});
  CHECK(euler_class(p).coords.empty());
  InvariantReport r = invariant_report(p);
  CHECK(r.total_matrix == mat_identity((size_t)r.h1_F));
}

TEST_CASE("duplicate relations change nothing") {
  LFPresentation p = lf_from_linediagram(fx::line_three_sheet());
  LFPresentation doubled = p;
  doubled.cycles.push_back(p.cycles[0]);
  doubled.signs.push_back(p.signs[0]);
  CHECK(h1_W(p) == h1_W(doubled));
}

TEST_CASE("certify: a mixed script passes with a full ledger") {
  LineDiagram ld = fx::line_three_sheet();
  MoveScript sc;
  sc.add("S+", {2, -1});        // diagram level
  sc.add("P+", {-1});           // diagram level, chi +1
  sc.add("slide", {1, 0});      // fibration level from here on
  sc.add("slide", {1, 1});
  sc.add("U+", {1, 1});
  sc.add("U-", {1});

  CertReport rep = certify(ld, sc);
  INFO(rep.str());
  REQUIRE(rep.ok);
  CHECK(rep.ledger.size() == sc.size());
  CHECK_FALSE(rep.result.diagram.has_value());  // forgotten at the slide
  CHECK(euler_char_W(rep.result.p) == euler_char_W(ld) + 1);
}

TEST_CASE("certify: Q and T steps") {
  std::mt19937_64 rng(33);
  LineDiagram ld = random_with_bands(rng, 3, 6, 2);
  LFPresentation p = lf_from_linediagram(ld);

  MoveScript sc;
  Move q{"Q+", {1, 1}};
  for (const EdgeStep &s : p.cycles[0]) {
    q.args.push_back(s.edge);
    q.args.push_back(s.fwd ? 1 : 0);
  }
  sc.moves.push_back(q);
  sc.add("Q-", {1});
  CertReport rep = certify(ReplayState::of(p), sc);
  INFO(rep.str());
  REQUIRE(rep.ok);
  CHECK(rep.result.p == p);

  // T on the hand-built opposite pair
  LFPresentation theta;
  Perm t = Perm::transposition(2, 1, 2);
  theta.fiber = FiberSurface::from_labels(2, {t, t, t});
  theta.degree = 2;
  theta.cycles = {{{1, true}, {2, false}}, {{1, true}, {3, false}}};
  theta.signs = {1, -1};
  MoveScript tsc;
  tsc.add("T", {1});
  CertReport trep = certify(ReplayState::of(theta), tsc);
  INFO(trep.str());
  CHECK(trep.ok);
}

TEST_CASE("certify: failures name the step") {
  LineDiagram ld = fx::line_three_sheet();
  MoveScript sc;
  sc.add("S+", {1, 1});
  sc.add("Q-", {1});  // nothing to delete here
  CertReport rep = certify(ld, sc);
  CHECK_FALSE(rep.ok);
  CHECK(rep.failure.find("step 2") != std::string::npos);
  CHECK(rep.ledger.size() == 1);  // first step was fine

  MoveScript bad;
  bad.add("warp", {1});
  CHECK_FALSE(certify(ld, bad).ok);
}

TEST_CASE("certify with a target diagram") {
  LineDiagram ld = fx::line_three_sheet();
  LineDiagram bigger = move_S(ld, 1, 1);
  MoveScript sc;
  sc.add("S+", {1, 1});
  CHECK(certify(ld, bigger, sc).ok);
  CHECK_FALSE(certify(ld, ld, sc).ok);  // lands elsewhere

  MoveScript back;
  back.add("S+", {1, 1});
  back.add("S-", {(int)bigger.bands.size(), bigger.sheets()});
  CHECK(certify(ld, ld, back).ok);
}

TEST_CASE("random move scripts keep their documented invariants") {
  std::mt19937_64 rng(55);
  int certified = 0;
  for (int rep = 0; rep < 20; rep++) {
    LineDiagram ld = random_with_bands(rng, 3, 6, 2);
    LFPresentation p = lf_from_linediagram(ld);
    MoveScript sc;
    sc.add("S+", {1 + (int)(rng() % ld.sheets()), rng() % 2 ? 1 : -1});
    sc.add("P+", {rng() % 2 ? 1 : -1});
    int slides = 1 + (int)(rng() % 3);
    for (int s = 0; s < slides; s++)
      sc.add("slide",
             {1 + (int)(rng() % (p.size() + 3)), (int)(rng() % 2)});
    sc.add("U+", {1, 1});
    CertReport r = certify(ld, sc);
    INFO(r.str());
    REQUIRE(r.ok);
    certified++;
  }
  CHECK(certified == 20);
}
