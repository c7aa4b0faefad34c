// lefkit — command-line front end for the labeled-diagram calculus.
//
// Subcommands: validate, braid, flatten, monotonize, move, invariants,
// certify, search, gen, selftest. Exit codes: 0 success, 1 semantic
// failure, 2 syntax/usage error. The environment variable LEFKIT_SEED
// overrides the generator seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lefkit/braider.hpp"
#include "lefkit/gen.hpp"
#include "lefkit/invariants.hpp"
#include "lefkit/rectmoves.hpp"
#include "lefkit/search.hpp"

namespace {

using namespace lefkit;

constexpr int kOk = 0, kSemantic = 1, kSyntax = 2;

// Thrown for malformed input text; everything else that escapes a command
// is reported as a semantic failure.
struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

enum class Format { lfd, rect };

Format sniff(const std::string &text, const std::string &path) {
  std::istringstream in(text);
  std::string word;
  if (in >> word) {
    if (word == "lfd")
      return Format::lfd;
    if (word == "rect")
      return Format::rect;
  }
  throw SyntaxError(path + ": unrecognized format (expected an 'lfd 1' or "
                           "'rect 1' header)");
}

// Wrap the parser so malformed text maps to the syntax exit code.
template <typename F>
auto parsed(const std::string &path, F f) {
  try {
    return f();
  } catch (const std::invalid_argument &e) {
    throw SyntaxError(path + ": " + e.what());
  }
}

// Load as a line diagram, braiding rectangular pictures up on the fly.
LineDiagram load_line(const std::string &path) {
  std::string text = read_file(path);
  if (sniff(text, path) == Format::lfd)
    return parsed(path, [&] { return from_lfd(text); });
  return braid_up(parsed(path, [&] { return from_rect(text); }));
}

MoveScript load_script(const std::string &path) {
  std::string text = read_file(path);
  return parsed(path, [&] { return MoveScript::parse(text); });
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string &path) {
  std::string text = read_file(path);
  if (sniff(text, path) == Format::lfd) {
    LineDiagram ld = parsed(path, [&] { return from_lfd(text); });
    std::string why;
    if (!ld.check_labels(&why)) {
      std::cout << "invalid: " << why << "\n";
      return kSemantic;
    }
    std::cout << "ok: line diagram, degree " << ld.degree << ", "
              << ld.sheets() << " sheets, " << ld.bands.size() << " bands\n";
    return kOk;
  }
  RectDiagram rd = parsed(path, [&] { return from_rect(text); });
  auto report = rd.validate();
  if (!report.empty()) {
    for (const std::string &r : report)
      std::cout << "invalid: " << r << "\n";
    return kSemantic;
  }
  std::cout << "ok: rectangular diagram, degree " << rd.degree << ", "
            << rd.cells.size() << " cells\n";
  return kOk;
}

int cmd_braid(const std::string &path, const std::string &out) {
  std::string text = read_file(path);
  if (sniff(text, path) != Format::rect)
    throw std::runtime_error(path + ": braid expects a rectangular diagram");
  LineDiagram ld = braid_up(parsed(path, [&] { return from_rect(text); }));
  write_output(out, to_lfd(ld));
  return kOk;
}

int cmd_flatten(const std::string &path, const std::string &out) {
  std::string text = read_file(path);
  if (sniff(text, path) != Format::lfd)
    throw std::runtime_error(path + ": flatten expects a line diagram");
  LineDiagram ld = parsed(path, [&] { return from_lfd(text); });
  write_output(out, to_rect(flatten(ld)));
  return kOk;
}

int cmd_monotonize(const std::string &path, const std::string &out,
                   const std::string &script_out) {
  LineDiagram ld = load_line(path);
  auto [mono, script] = monotonize(ld);
  write_output(out, to_lfd(mono));
  std::string s = script.empty() ? "# already monotonic\n" : script.str();
  if (script_out.empty())
    std::cerr << s;
  else
    write_output(script_out, s);
  return kOk;
}

int cmd_move(const std::string &path, const std::string &op,
             const std::vector<int> &args, const std::string &out) {
  LineDiagram ld = load_line(path);
  MoveScript script;
  script.add(op, args);
  CertReport rep = certify(ld, script);
  std::cerr << rep.str();
  if (!rep.ok)
    return kSemantic;
  if (rep.result.diagram) {
    write_output(out, to_lfd(*rep.result.diagram));
  } else {
    std::cerr << "note: the move acts on the fibration presentation; no "
                 "diagram text to emit\n";
  }
  return kOk;
}

int cmd_invariants(const std::string &path) {
  std::cout << invariant_report(load_line(path)).str();
  return kOk;
}

int cmd_certify(const std::string &path, const std::string &script_path,
                const std::string &target_path) {
  LineDiagram ld = load_line(path);
  MoveScript script = load_script(script_path);
  CertReport rep = target_path.empty()
                       ? certify(ld, script)
                       : certify(ld, load_line(target_path), script);
  std::cout << rep.str();
  return rep.ok ? kOk : kSemantic;
}

int cmd_search(const std::string &a_path, const std::string &b_path,
               const SearchConfig &cfg) {
  SearchResult res = search_equivalence(load_line(a_path), load_line(b_path),
                                        cfg);
  std::cerr << "explored " << res.nodes << " states\n";
  if (res.found()) {
    std::cout << (res.script->empty() ? std::string("# already equal\n")
                                      : res.script->str());
    return kOk;
  }
  std::cout << (res.budget_exceeded ? "budget exceeded\n"
                                    : "no script within the bounds\n");
  return kSemantic;
}

int cmd_gen(std::uint64_t seed, const GenBounds &bounds,
            const std::string &out) {
  if (const char *env = std::getenv("LEFKIT_SEED"))
    seed = std::strtoull(env, nullptr, 10);
  write_output(out, to_lfd(gen_random(seed, bounds)));
  return kOk;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](const std::string &what, bool ok) {
    std::cout << (ok ? "pass" : "FAIL") << ": " << what << "\n";
    if (!ok)
      failures++;
  };
  // text formats round-trip bit-exactly on generator output
  bool roundtrip = true, braidtrip = true, certok = true;
  for (std::uint64_t seed = 1; seed <= 25 && (roundtrip || braidtrip);
       seed++) {
    LineDiagram ld = gen_random(seed, GenBounds{4, 6, 6});
    if (to_lfd(from_lfd(to_lfd(ld))) != to_lfd(ld))
      roundtrip = false;
    RectDiagram rd = flatten(ld);
    if (to_rect(from_rect(to_rect(rd))) != to_rect(rd))
      roundtrip = false;
    LineDiagram back = braid_up(rd);
    if (!(back.degree == ld.degree && back.labels == ld.labels &&
          back.bands.strands == ld.bands.strands &&
          back.bands.bands == ld.bands.bands))
      braidtrip = false;
  }
  check("text formats round-trip", roundtrip);
  check("braiding a flattened diagram restores it", braidtrip);
  {
    LineDiagram ld = gen_random(7, GenBounds{3, 4, 3});
    MoveScript s;
    s.add("S+", {1, 1});
    s.add("P+", {-1});
    s.add("slide", {1, 0});
    certok = certify(ld, s).ok;
  }
  check("a stabilize/blow-up/slide script certifies", certok);
  return failures ? kSemantic : kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"calculus of labeled braided and rectangular surface "
               "diagrams"};
  app.require_subcommand(1);

  std::string in_path, in_path_b, out_path, script_path, target_path;
  std::string move_op;
  std::vector<int> move_args;
  std::uint64_t seed = 1;
  GenBounds bounds;
  SearchConfig cfg;
  std::vector<std::string> alphabet;
  bool verbatim = false;

  auto *validate = app.add_subcommand("validate", "parse and check a file");
  validate->add_option("file", in_path)->required();

  auto *braid = app.add_subcommand(
      "braid", "braid a rectangular diagram up to a line diagram");
  braid->add_option("file", in_path)->required();
  braid->add_option("-o,--output", out_path);

  auto *flat = app.add_subcommand(
      "flatten", "render a line diagram as a rectangular diagram");
  flat->add_option("file", in_path)->required();
  flat->add_option("-o,--output", out_path);

  auto *mono = app.add_subcommand(
      "monotonize", "rewrite every band into monotonic position");
  mono->add_option("file", in_path)->required();
  mono->add_option("-o,--output", out_path);
  mono->add_option("--script-out", script_path,
                   "where to write the stabilize/slide trail");

  auto *mv = app.add_subcommand("move", "apply one move and certify it");
  mv->add_option("file", in_path)->required();
  mv->add_option("op", move_op, "S+ S- P+ P- slide T U+ U- Q+ Q-")
      ->required();
  mv->add_option("args", move_args, "integer arguments of the op");
  mv->add_option("-o,--output", out_path);

  auto *inv = app.add_subcommand("invariants",
                                 "print the invariant report of a file");
  inv->add_option("file", in_path)->required();

  auto *cert = app.add_subcommand("certify",
                                  "replay a move script with all gates on");
  cert->add_option("file", in_path)->required();
  cert->add_option("script", script_path)->required();
  cert->add_option("--target", target_path,
                   "require the script to land on this diagram");

  auto *sea = app.add_subcommand(
      "search", "breadth-first search for a relating move script");
  sea->add_option("a", in_path)->required();
  sea->add_option("b", in_path_b)->required();
  sea->add_option("--depth", cfg.depth);
  sea->add_option("--nodes", cfg.node_budget);
  sea->add_option("--alphabet", alphabet, "subset of: S+ S- P+ P- slide");
  sea->add_flag("--verbatim-dedup", verbatim,
                "deduplicate by verbatim words instead of template readings");

  auto *gen = app.add_subcommand("gen", "generate a seeded random diagram");
  gen->add_option("--seed", seed);
  gen->add_option("--degree", bounds.max_degree);
  gen->add_option("--sheets", bounds.max_sheets);
  gen->add_option("--bands", bounds.max_bands);
  gen->add_option("-o,--output", out_path);

  auto *self = app.add_subcommand("selftest", "run the built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kSyntax;
  }

  try {
    if (validate->parsed())
      return cmd_validate(in_path);
    if (braid->parsed())
      return cmd_braid(in_path, out_path);
    if (flat->parsed())
      return cmd_flatten(in_path, out_path);
    if (mono->parsed())
      return cmd_monotonize(in_path, out_path, script_path);
    if (mv->parsed())
      return cmd_move(in_path, move_op, move_args, out_path);
    if (inv->parsed())
      return cmd_invariants(in_path);
    if (cert->parsed())
      return cmd_certify(in_path, script_path, target_path);
    if (sea->parsed()) {
      if (!alphabet.empty())
        cfg.alphabet = alphabet;
      cfg.canonicalize = !verbatim;
      return cmd_search(in_path, in_path_b, cfg);
    }
    if (gen->parsed())
      return cmd_gen(seed, bounds, out_path);
    if (self->parsed())
      return cmd_selftest();
  } catch (const SyntaxError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSyntax;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kSyntax;
}
