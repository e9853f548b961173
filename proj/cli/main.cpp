// Command-line front end: parse, translate, distribute, solve, check and
// render the game models the library implements. Exit codes: 0 on success or
// a positive verdict, 1 on a negative verdict (not winning, bisimulation
// fail, nothing found), 2 on usage or processing errors.
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gamebridge/distribution.hpp"
#include "gamebridge/errors.hpp"
#include "gamebridge/games.hpp"
#include "gamebridge/io.hpp"
#include "gamebridge/translate.hpp"
#include "gamebridge/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

using nlohmann::json;

gb::PetriGame load_pg(const std::string& path) {
  gb::GameFile f = gb::parse_game_file(path);
  if (f.kind != gb::FileKind::petri_game)
    throw gb::error(path + " holds a " + gb::to_string(f.kind) + ", expected petri_game");
  return std::get<gb::PetriGame>(std::move(f.body));
}

gb::ControlGame load_cg(const std::string& path) {
  gb::GameFile f = gb::parse_game_file(path);
  if (f.kind != gb::FileKind::control_game)
    throw gb::error(path + " holds a " + gb::to_string(f.kind) + ", expected control_game");
  return std::get<gb::ControlGame>(std::move(f.body));
}

gb::Strategy load_strategy(const std::string& path) {
  gb::GameFile f = gb::parse_game_file(path);
  if (f.kind != gb::FileKind::strategy)
    throw gb::error(path + " holds a " + gb::to_string(f.kind) + ", expected strategy");
  return std::get<gb::Strategy>(std::move(f.body));
}

gb::Controller load_controller(const std::string& path) {
  gb::GameFile f = gb::parse_game_file(path);
  if (f.kind != gb::FileKind::controller)
    throw gb::error(path + " holds a " + gb::to_string(f.kind) + ", expected controller");
  return std::get<gb::Controller>(std::move(f.body));
}

gb::SliceDistribution load_distribution(const std::string& path) {
  gb::GameFile f = gb::parse_game_file(path);
  if (f.kind != gb::FileKind::distribution)
    throw gb::error(path + " holds a " + gb::to_string(f.kind) + ", expected distribution");
  return std::get<gb::SliceDistribution>(std::move(f.body));
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gb::error("cannot write " + path);
  out << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string::npos) j = s.size();
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

gb::ThreeSatFormula parse_formula(const std::string& text, int vars) {
  gb::ThreeSatFormula f;
  std::string compact;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') compact += ch;
  std::size_t i = 0;
  while (i < compact.size()) {
    if (compact[i] == ';') {
      ++i;
      continue;
    }
    if (compact[i] != '(') throw gb::error("clause list must look like (1,-2,3);(2,3,-1)");
    std::size_t close = compact.find(')', i);
    if (close == std::string::npos) throw gb::error("unterminated clause in --clauses");
    std::string inner = compact.substr(i + 1, close - i - 1);
    std::array<int, 3> lits{};
    std::size_t k = 0, pos = 0;
    while (k < 3) {
      std::size_t comma = inner.find(',', pos);
      std::string item =
          comma == std::string::npos ? inner.substr(pos) : inner.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        lits[k] = std::stoi(item, &used);
        if (used != item.size() || item.empty()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw gb::error("bad literal '" + item + "' in --clauses");
      }
      ++k;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (k != 3) throw gb::error("each clause needs exactly three literals");
    f.clauses.push_back(lits);
    i = close + 1;
  }
  int max_var = 0;
  for (const auto& cl : f.clauses)
    for (int lit : cl) max_var = std::max(max_var, lit < 0 ? -lit : lit);
  f.variables = vars > 0 ? vars : max_var;
  return f;
}

json jr_json(const gb::JrReport& r) {
  return json{{"ok", r.ok}, {"violations", r.violations}};
}

json win_json(const gb::WinReport& r) {
  return json{{"verdict", gb::to_string(r.verdict)}, {"detail", r.detail}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petri game / control game translation toolkit"};
  app.require_subcommand(1);
  int rc = kOk;

  // translate ---------------------------------------------------------------
  auto* tr = app.add_subcommand("translate", "Translate a game across the two models");
  struct TrOpts {
    std::string dir, variant, input, out, dist;
    bool via_snd = false;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto tro = std::make_shared<TrOpts>();
  tr->add_option("--dir", tro->dir, "translation direction")
      ->required()
      ->check(CLI::IsMember({"pg2cg", "cg2pg"}));
  tr->add_option("--variant", tro->variant,
                 "pg2cg: plain|hatted (default plain); cg2pg: base|deadlock|challenge (default "
                 "base)");
  tr->add_option("--dist", tro->dist, "slice distribution file (pg2cg only)");
  tr->add_flag("--via-snd", tro->via_snd, "distribute through a singular-net family (pg2cg only)");
  tr->add_option("--state-cap", tro->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  tr->add_option("-o,--out", tro->out, "output file (default stdout)");
  tr->add_option("input", tro->input, "input game file")->required();
  tr->callback([tro, &rc] {
    if (tro->dir == "pg2cg") {
      gb::PetriGame g = load_pg(tro->input);
      gb::PgToCgVariant var = gb::PgToCgVariant::plain;
      if (tro->variant == "hatted")
        var = gb::PgToCgVariant::hatted;
      else if (!tro->variant.empty() && tro->variant != "plain")
        throw gb::error("pg2cg variant must be plain or hatted");
      gb::PgToCgResult res;
      if (tro->via_snd) {
        res = gb::pg_to_cg(g, gb::build_snd(g.net, tro->state_cap), var);
      } else if (!tro->dist.empty()) {
        gb::SliceDistribution blocks = load_distribution(tro->dist);
        res = gb::pg_to_cg(g, gb::materialize_distribution(g.net, blocks), var);
      } else {
        auto found = gb::find_slice_distribution(g.net);
        if (!found) {
          std::fprintf(stderr, "no slice distribution exists; try --via-snd\n");
          rc = kNegative;
          return;
        }
        res = gb::pg_to_cg(g, *found, var);
      }
      write_out(tro->out, gb::emit(res.control_game));
    } else {
      gb::ControlGame c = load_cg(tro->input);
      gb::CgToPgVariant var = gb::CgToPgVariant::base;
      if (tro->variant == "deadlock")
        var = gb::CgToPgVariant::with_deadlock_detection;
      else if (tro->variant == "challenge")
        var = gb::CgToPgVariant::with_challenge;
      else if (!tro->variant.empty() && tro->variant != "base")
        throw gb::error("cg2pg variant must be base, deadlock or challenge");
      gb::CgToPgResult res = gb::cg_to_pg(c, var, tro->state_cap);
      write_out(tro->out, gb::emit(res.petri_game));
      std::fprintf(stderr, "artificial deadlocks: %zu\n", res.artificial_deadlocks.size());
    }
  });

  // distribute --------------------------------------------------------------
  auto* di = app.add_subcommand("distribute", "Find a slice distribution of a net");
  struct DiOpts {
    std::string input, out;
    bool check_acyclic = false;
  };
  auto dio = std::make_shared<DiOpts>();
  di->add_option("input", dio->input, "petri_game file")->required();
  di->add_option("-o,--out", dio->out, "output file (default stdout)");
  di->add_flag("--check-acyclic", dio->check_acyclic,
               "also decide whether some distribution has an acyclic communication graph");
  di->callback([dio, &rc] {
    gb::PetriGame g = load_pg(dio->input);
    auto found = gb::find_slice_distribution(g.net);
    if (!found) {
      std::fprintf(stderr, "no slice distribution exists\n");
      rc = kNegative;
      return;
    }
    write_out(dio->out, gb::emit(*found));
    if (dio->check_acyclic) {
      bool ok = gb::acyclic_distribution_exists(g.net);
      std::fprintf(stderr, "acyclic distribution exists: %s\n", ok ? "yes" : "no");
      if (!ok) rc = kNegative;
    }
  });

  // snd ---------------------------------------------------------------------
  auto* sn = app.add_subcommand("snd", "Build and validate a singular-net family");
  struct SnOpts {
    std::string input, out;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto sno = std::make_shared<SnOpts>();
  sn->add_option("input", sno->input, "petri_game file")->required();
  sn->add_option("-o,--out", sno->out, "report file (default stdout)");
  sn->add_option("--state-cap", sno->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  sn->callback([sno, &rc] {
    gb::PetriGame g = load_pg(sno->input);
    gb::SingularNetDistribution snd = gb::build_snd(g.net, sno->state_cap);
    gb::SndReport rep = gb::validate_snd(g.net, snd, sno->state_cap);
    json members = json::array();
    for (const gb::SingularNet& m : snd.nets)
      members.push_back(json{{"places", m.net.places.size()},
                             {"transitions", m.net.transitions.size()}});
    json out{{"members", snd.nets.size()},
             {"member_sizes", members},
             {"composition",
              json{{"places", snd.composition.places.size()},
                   {"transitions", snd.composition.transitions.size()}}},
             {"valid", rep.problems.empty()},
             {"complete", rep.complete},
             {"problems", rep.problems}};
    write_out(sno->out, out.dump(2) + "\n");
    if (!rep.problems.empty() || !rep.complete) rc = kNegative;
  });

  // commgraph ---------------------------------------------------------------
  auto* cgr = app.add_subcommand("commgraph", "Communication graph of a distribution");
  struct CgOpts {
    std::string input, out, dist;
    bool via_snd = false;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto cgo = std::make_shared<CgOpts>();
  cgr->add_option("input", cgo->input, "petri_game file")->required();
  cgr->add_option("--dist", cgo->dist, "slice distribution file (default: search)");
  cgr->add_flag("--via-snd", cgo->via_snd, "use a singular-net family instead of slices");
  cgr->add_option("--state-cap", cgo->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  cgr->add_option("-o,--out", cgo->out, "output file (default stdout)");
  cgr->callback([cgo, &rc] {
    gb::PetriGame g = load_pg(cgo->input);
    gb::CommunicationGraph graph;
    if (cgo->via_snd) {
      graph = gb::communication_graph(gb::build_snd(g.net, cgo->state_cap));
    } else if (!cgo->dist.empty()) {
      graph = gb::communication_graph(
          gb::materialize_distribution(g.net, load_distribution(cgo->dist)));
    } else {
      auto found = gb::find_slice_distribution(g.net);
      if (!found) {
        std::fprintf(stderr, "no slice distribution exists\n");
        rc = kNegative;
        return;
      }
      graph = gb::communication_graph(*found);
    }
    bool acyclic = gb::is_acyclic(graph);
    std::string dot = "// acyclic: " + std::string(acyclic ? "yes" : "no") + "\n";
    dot += "graph communication {\n";
    for (const gb::Id& v : graph.vertices) dot += "  \"" + v + "\";\n";
    for (const auto& [a, b] : graph.edges) dot += "  \"" + a + "\" -- \"" + b + "\";\n";
    dot += "}\n";
    write_out(cgo->out, dot);
    if (!acyclic) rc = kNegative;
  });

  // gen-3sat ----------------------------------------------------------------
  auto* g3 = app.add_subcommand("gen-3sat", "Net whose slice distributions encode 3-SAT");
  struct G3Opts {
    std::string clauses, out;
    int vars = 0;
  };
  auto g3o = std::make_shared<G3Opts>();
  g3->add_option("--clauses", g3o->clauses, "clause list, e.g. \"(1,-2,3);(2,3,-1)\"")->required();
  g3->add_option("--vars", g3o->vars, "variable count (default: largest index used)");
  g3->add_option("-o,--out", g3o->out, "output file (default stdout)");
  g3->callback([g3o] {
    gb::ThreeSatFormula f = parse_formula(g3o->clauses, g3o->vars);
    gb::PetriGame g;
    g.net = gb::gen_3sat_net(f);
    g.environment_places = g.net.places;
    g.objective = gb::Objective::safety;
    write_out(g3o->out, gb::emit(g));
  });

  // gen-lb ------------------------------------------------------------------
  auto* gl = app.add_subcommand("gen-lb", "Lower-bound family generators");
  struct GlOpts {
    std::string kind, out;
    int n = 1;
  };
  auto glo = std::make_shared<GlOpts>();
  gl->add_option("--kind", glo->kind, "pg or cg")
      ->required()
      ->check(CLI::IsMember({"pg", "cg"}));
  gl->add_option("-n", glo->n, "family parameter")->required();
  gl->add_option("-o,--out", glo->out, "output file (default stdout)");
  gl->callback([glo] {
    if (glo->kind == "pg")
      write_out(glo->out, gb::emit(gb::gen_lower_bound_pg(glo->n)));
    else
      write_out(glo->out, gb::emit(gb::gen_lower_bound_cg(glo->n)));
  });

  // check-strategy ----------------------------------------------------------
  auto* cs = app.add_subcommand("check-strategy", "Validate a strategy against its game");
  struct CsOpts {
    std::string game, input, out;
    std::size_t depth = 12;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto cso = std::make_shared<CsOpts>();
  cs->add_option("--game", cso->game, "petri_game file")->required();
  cs->add_option("input", cso->input, "strategy file")->required();
  cs->add_option("--depth", cso->depth, "verification horizon")->envname("GB_DEPTH");
  cs->add_option("--state-cap", cso->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  cs->add_option("-o,--out", cso->out, "report file (default stdout)");
  cs->callback([cso, &rc] {
    gb::PetriGame g = load_pg(cso->game);
    gb::Strategy s = load_strategy(cso->input);
    std::vector<std::string> problems = gb::validate_strategy(g, s, cso->depth);
    gb::JrReport jr = gb::check_justified_refusal(g, s, cso->depth);
    bool det = gb::check_deterministic(g, s, cso->depth);
    gb::WinReport win = gb::strategy_winning(g, s, cso->depth, cso->state_cap);
    json out{{"valid", problems.empty()},
             {"problems", problems},
             {"justified_refusal", jr_json(jr)},
             {"deterministic", det},
             {"winning", win_json(win)}};
    write_out(cso->out, out.dump(2) + "\n");
    if (!problems.empty() || !jr.ok || win.verdict != gb::Verdict::winning) rc = kNegative;
  });

  // check-controller --------------------------------------------------------
  auto* cc = app.add_subcommand("check-controller", "Evaluate a controller on its game");
  struct CcOpts {
    std::string game, input, out;
    std::size_t bound = 12;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto cco = std::make_shared<CcOpts>();
  cc->add_option("--game", cco->game, "control_game file")->required();
  cc->add_option("input", cco->input, "controller file")->required();
  cc->add_option("--bound", cco->bound, "play-length bound")->envname("GB_DEPTH");
  cc->add_option("--state-cap", cco->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  cc->add_option("-o,--out", cco->out, "report file (default stdout)");
  cc->callback([cco, &rc] {
    gb::ControlGame c = load_cg(cco->game);
    gb::Controller ctrl = load_controller(cco->input);
    gb::WinReport win = gb::controller_winning_bounded(c, ctrl, cco->bound, cco->state_cap);
    write_out(cco->out, win_json(win).dump(2) + "\n");
    if (win.verdict != gb::Verdict::winning) rc = kNegative;
  });

  // bisim -------------------------------------------------------------------
  auto* bi = app.add_subcommand("bisim", "Weak bisimulation between a strategy and a controller");
  struct BiOpts {
    std::string strategy, controller, cg, pg, shared, out;
    std::size_t depth = 8;
  };
  auto bio = std::make_shared<BiOpts>();
  bi->add_option("strategy", bio->strategy, "strategy file")->required();
  bi->add_option("controller", bio->controller, "controller file")->required();
  bi->add_option("--cg", bio->cg, "control_game file the controller plays on")->required();
  bi->add_option("--pg", bio->pg, "petri_game file the strategy plays on (optional)");
  bi->add_option("--shared", bio->shared,
                 "comma-separated observable actions (default: the strategy's base transitions)");
  bi->add_option("--depth", bio->depth, "bisimulation horizon")->envname("GB_DEPTH");
  bi->add_option("-o,--out", bio->out, "witness file (default stdout)");
  bi->callback([bio, &rc] {
    gb::Strategy s = load_strategy(bio->strategy);
    gb::Controller ctrl = load_controller(bio->controller);
    gb::ControlGame c = load_cg(bio->cg);
    gb::PetriGame g;
    if (!bio->pg.empty()) {
      g = load_pg(bio->pg);
    } else {
      g.net = s.bp.base;
      g.environment_places = g.net.places;
    }
    std::set<gb::Id> shared;
    if (!bio->shared.empty())
      for (const std::string& a : split_list(bio->shared)) shared.insert(a);
    else
      shared = s.bp.base.transitions;
    gb::BisimWitness wit = gb::weak_bisim_check(g, s, c, ctrl, shared, bio->depth);
    json out{{"verdict", gb::to_string(wit.verdict)},
             {"depth", wit.depth},
             {"relation_size", wit.relation.size()},
             {"counterexample", wit.counterexample},
             {"detail", wit.detail}};
    write_out(bio->out, out.dump(2) + "\n");
    if (wit.verdict != gb::BisimVerdict::pass) rc = kNegative;
  });

  // solve -------------------------------------------------------------------
  auto* so = app.add_subcommand("solve", "Search for a winning strategy or controller");
  struct SoOpts {
    std::string pg, cg, out;
    std::size_t depth = 10;
    int memory = -2;
    std::size_t state_cap = gb::kDefaultStateCap;
  };
  auto soo = std::make_shared<SoOpts>();
  so->add_option("--pg", soo->pg, "petri_game file");
  so->add_option("--cg", soo->cg, "control_game file");
  so->add_option("--depth", soo->depth, "search horizon / play bound")->envname("GB_DEPTH");
  so->add_option("--memory", soo->memory,
                 "decision memory (pg, default 0) or view memory (cg, default -1 = full views)");
  so->add_option("--state-cap", soo->state_cap, "exploration cap")->envname("GB_STATE_CAP");
  so->add_option("-o,--out", soo->out, "output file (default stdout)");
  so->callback([soo, &rc] {
    if (soo->pg.empty() == soo->cg.empty())
      throw gb::error("solve needs exactly one of --pg or --cg");
    if (!soo->pg.empty()) {
      gb::PetriGame g = load_pg(soo->pg);
      int memory = soo->memory == -2 ? 0 : soo->memory;
      auto s = gb::solve_pg(g, soo->depth, memory, soo->state_cap);
      if (!s) {
        std::fprintf(stderr, "no winning strategy within the bounds\n");
        rc = kNegative;
        return;
      }
      write_out(soo->out, gb::emit(*s));
    } else {
      gb::ControlGame c = load_cg(soo->cg);
      int memory = soo->memory == -2 ? -1 : soo->memory;
      auto ctrl = gb::solve_cg(c, soo->depth, memory, soo->state_cap);
      if (!ctrl) {
        std::fprintf(stderr, "no winning controller within the bounds\n");
        rc = kNegative;
        return;
      }
      write_out(soo->out, gb::emit(*ctrl));
    }
  });

  // dot ---------------------------------------------------------------------
  auto* dt = app.add_subcommand("dot", "Render a game file as DOT");
  struct DtOpts {
    std::string input, out;
  };
  auto dto = std::make_shared<DtOpts>();
  dt->add_option("input", dto->input, "petri_game, control_game or strategy file")->required();
  dt->add_option("-o,--out", dto->out, "output file (default stdout)");
  dt->callback([dto] {
    gb::GameFile f = gb::parse_game_file(dto->input);
    switch (f.kind) {
      case gb::FileKind::petri_game:
        write_out(dto->out, gb::to_dot(std::get<gb::PetriGame>(f.body)));
        break;
      case gb::FileKind::control_game:
        write_out(dto->out, gb::to_dot(std::get<gb::ControlGame>(f.body)));
        break;
      case gb::FileKind::strategy:
        write_out(dto->out, gb::to_dot(std::get<gb::Strategy>(f.body)));
        break;
      default:
        throw gb::error("dot supports petri_game, control_game and strategy files");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return rc;
}
