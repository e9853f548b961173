#include "gamebridge/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gamebridge/automata.hpp"
#include "gamebridge/errors.hpp"
#include "gamebridge/unfolding.hpp"

namespace gb {

std::string to_string(FileKind k) {
  switch (k) {
    case FileKind::petri_game:
      return "petri_game";
    case FileKind::control_game:
      return "control_game";
    case FileKind::strategy:
      return "strategy";
    case FileKind::controller:
      return "controller";
    case FileKind::distribution:
      return "distribution";
  }
  return "petri_game";
}

namespace {

struct Tok {
  std::string text;
  std::size_t col;  // 1-based
};

struct Line {
  std::size_t no = 0;  // 1-based
  bool indented = false;
  std::vector<Tok> toks;
};

std::vector<Line> scan(const std::string& text) {
  std::vector<Line> out;
  std::size_t no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++no;
    std::string body = raw;
    auto hash = body.find('#');
    if (hash != std::string::npos) body.resize(hash);
    Line line;
    line.no = no;
    line.indented = !body.empty() && (body[0] == ' ' || body[0] == '\t');
    std::size_t i = 0;
    while (i < body.size()) {
      if (body[i] == ' ' || body[i] == '\t' || body[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < body.size() && body[j] != ' ' && body[j] != '\t' && body[j] != '\r') ++j;
      line.toks.push_back({body.substr(i, j - i), i + 1});
      i = j;
    }
    if (!line.toks.empty()) out.push_back(std::move(line));
  }
  return out;
}

// Sections in file order: header token plus the indented entry lines below it.
struct Section {
  Tok name;
  std::size_t line = 0;
  std::vector<Line> entries;
};

std::vector<Section> split_sections(const std::vector<Line>& lines, std::size_t start) {
  std::vector<Section> out;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (!l.indented) {
      if (l.toks.size() != 1)
        throw ParseError(l.no, l.toks[1].col, "section header takes no arguments");
      out.push_back({l.toks[0], l.no, {}});
    } else {
      if (out.empty()) throw ParseError(l.no, l.toks[0].col, "entry before any section");
      out.back().entries.push_back(l);
    }
  }
  return out;
}

// Groups sections by name against an allowed list; duplicates and unknown
// names are structural errors.
std::map<std::string, const Section*> index_sections(const std::vector<Section>& sections,
                                                     const std::set<std::string>& allowed) {
  std::map<std::string, const Section*> out;
  for (const Section& s : sections) {
    if (!allowed.count(s.name.text))
      throw ParseError(s.line, s.name.col, "unknown section '" + s.name.text + "'");
    if (!out.emplace(s.name.text, &s).second)
      throw ParseError(s.line, s.name.col, "duplicate section '" + s.name.text + "'");
  }
  return out;
}

const Section* find(const std::map<std::string, const Section*>& ix, const std::string& name) {
  auto it = ix.find(name);
  return it == ix.end() ? nullptr : it->second;
}

void expect_width(const Line& l, std::size_t lo, std::size_t hi, const std::string& what) {
  if (l.toks.size() < lo) throw ParseError(l.no, what);
  if (l.toks.size() > hi) throw ParseError(l.no, l.toks[hi].col, what);
}

long long parse_count(const Line& l, std::size_t i) {
  const Tok& t = l.toks[i];
  try {
    std::size_t used = 0;
    long long v = std::stoll(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(l.no, t.col, "expected an integer, got '" + t.text + "'");
  }
}

// -- net bodies --------------------------------------------------------------

// Reads the four net sections (optionally prefixed, e.g. base_flow) into
// `net`. Flow endpoints must already be declared; direction is inferred from
// which endpoint is the place.
void parse_net_sections(const std::map<std::string, const Section*>& ix, const std::string& prefix,
                        PetriNet& net) {
  if (const Section* s = find(ix, prefix + "places"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "place entry is a single name");
      if (net.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "duplicate place '" + l.toks[0].text + "'");
      net.add_place(l.toks[0].text);
    }
  if (const Section* s = find(ix, prefix + "transitions"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "transition entry is a single name");
      if (net.is_transition(l.toks[0].text) || net.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "duplicate node '" + l.toks[0].text + "'");
      net.add_transition(l.toks[0].text);
    }
  if (const Section* s = find(ix, prefix + "flow"))
    for (const Line& l : s->entries) {
      expect_width(l, 2, 3, "flow entry is: from to [multiplicity]");
      const std::string& a = l.toks[0].text;
      const std::string& b = l.toks[1].text;
      long long k = l.toks.size() == 3 ? parse_count(l, 2) : 1;
      if (k <= 0) throw ParseError(l.no, l.toks[2].col, "multiplicity must be positive");
      bool ap = net.is_place(a), at = net.is_transition(a);
      bool bp = net.is_place(b), bt = net.is_transition(b);
      if (!ap && !at) throw ParseError(l.no, l.toks[0].col, "unknown node '" + a + "'");
      if (!bp && !bt) throw ParseError(l.no, l.toks[1].col, "unknown node '" + b + "'");
      if (ap == bp)
        throw ParseError(l.no, l.toks[0].col, "flow must connect a place and a transition");
      net.arc(a, b, k);
    }
  if (const Section* s = find(ix, prefix + "init"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 2, "init entry is: place [tokens]");
      if (!net.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "unknown place '" + l.toks[0].text + "'");
      long long k = l.toks.size() == 2 ? parse_count(l, 1) : 1;
      if (k <= 0) throw ParseError(l.no, l.toks[1].col, "token count must be positive");
      net.initial_marking.add(l.toks[0].text, k);
    }
}

Objective parse_objective(const std::map<std::string, const Section*>& ix) {
  const Section* s = find(ix, "objective");
  if (!s || s->entries.empty()) return Objective::safety;
  if (s->entries.size() > 1) throw ParseError(s->entries[1].no, "objective takes a single entry");
  const Line& l = s->entries[0];
  expect_width(l, 1, 1, "objective entry is one of: safety, reachability");
  if (l.toks[0].text == "safety") return Objective::safety;
  if (l.toks[0].text == "reachability") return Objective::reachability;
  throw ParseError(l.no, l.toks[0].col, "objective must be 'safety' or 'reachability'");
}

PetriGame parse_petri_game(const std::vector<Section>& sections) {
  auto ix = index_sections(
      sections, {"places", "transitions", "flow", "init", "system", "special", "objective"});
  PetriGame g;
  parse_net_sections(ix, "", g.net);
  if (const Section* s = find(ix, "system"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "system entry is a single place");
      if (!g.net.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "unknown place '" + l.toks[0].text + "'");
      g.system_places.insert(l.toks[0].text);
    }
  if (const Section* s = find(ix, "special"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "special entry is a single place");
      if (!g.net.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "unknown place '" + l.toks[0].text + "'");
      g.special.insert(l.toks[0].text);
    }
  g.objective = parse_objective(ix);
  for (const Id& q : g.net.places)
    if (!g.system_places.count(q)) g.environment_places.insert(q);
  auto problems = validate_petri_game(g);
  if (!problems.empty()) throw ValidationError("petri_game", problems.front());
  return g;
}

ControlGame parse_control_game(const std::vector<Section>& sections) {
  auto ix = index_sections(
      sections, {"processes", "states", "delta", "controllable", "special", "objective"});
  ControlGame c;
  AsyncAutomaton& aut = c.automaton;
  if (const Section* s = find(ix, "processes"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "process entry is a single name");
      if (!aut.processes.insert(l.toks[0].text).second)
        throw ParseError(l.no, l.toks[0].col, "duplicate process '" + l.toks[0].text + "'");
      aut.local_states[l.toks[0].text];
    }
  if (const Section* s = find(ix, "states"))
    for (const Line& l : s->entries) {
      expect_width(l, 2, 3, "state entry is: process state [init]");
      const std::string& p = l.toks[0].text;
      if (!aut.processes.count(p))
        throw ParseError(l.no, l.toks[0].col, "unknown process '" + p + "'");
      aut.local_states[p].insert(l.toks[1].text);
      if (l.toks.size() == 3) {
        if (l.toks[2].text != "init")
          throw ParseError(l.no, l.toks[2].col, "trailing token must be 'init'");
        if (!aut.initial.emplace(p, l.toks[1].text).second)
          throw ParseError(l.no, l.toks[1].col, "second initial state for '" + p + "'");
      }
    }
  if (const Section* s = find(ix, "delta"))
    for (const Line& l : s->entries) {
      if (l.toks.size() < 4) throw ParseError(l.no, "delta entry is: action p=s ... -> p=s ...");
      DeltaEntry e;
      e.action = l.toks[0].text;
      bool after_arrow = false;
      for (std::size_t i = 1; i < l.toks.size(); ++i) {
        const Tok& t = l.toks[i];
        if (t.text == "->") {
          if (after_arrow) throw ParseError(l.no, t.col, "second '->' in delta entry");
          after_arrow = true;
          continue;
        }
        auto eq = t.text.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
          throw ParseError(l.no, t.col, "expected process=state, got '" + t.text + "'");
        std::string p = t.text.substr(0, eq), st = t.text.substr(eq + 1);
        if (!aut.processes.count(p))
          throw ParseError(l.no, t.col, "unknown process '" + p + "'");
        if (!aut.local_states.at(p).count(st))
          throw ParseError(l.no, t.col, "unknown state '" + st + "' of '" + p + "'");
        auto& side = after_arrow ? e.to : e.from;
        if (!side.emplace(p, st).second)
          throw ParseError(l.no, t.col, "process '" + p + "' repeated");
      }
      if (!after_arrow) throw ParseError(l.no, "delta entry lacks '->'");
      if (e.from.empty()) throw ParseError(l.no, "delta entry lacks source states");
      {
        std::set<Id> fp, tp;
        for (const auto& [p, st] : e.from) fp.insert(p);
        for (const auto& [p, st] : e.to) tp.insert(p);
        if (fp != tp) throw ParseError(l.no, "delta entry sides involve different processes");
        auto it = aut.alphabet.dom.find(e.action);
        if (it != aut.alphabet.dom.end() && it->second != fp)
          throw ParseError(l.no, l.toks[0].col,
                           "action '" + e.action + "' used with two different domains");
        aut.alphabet.actions.insert(e.action);
        aut.alphabet.dom[e.action] = fp;
      }
      aut.delta.push_back(std::move(e));
    }
  if (const Section* s = find(ix, "controllable"))
    for (const Line& l : s->entries) {
      expect_width(l, 1, 1, "controllable entry is a single action");
      if (!aut.alphabet.contains(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "unknown action '" + l.toks[0].text + "'");
      c.controllable.insert(l.toks[0].text);
    }
  for (const Id& a : aut.alphabet.actions)
    if (!c.controllable.count(a)) c.uncontrollable.insert(a);
  if (const Section* s = find(ix, "special"))
    for (const Line& l : s->entries) {
      expect_width(l, 2, 2, "special entry is: process state");
      const std::string& p = l.toks[0].text;
      if (!aut.processes.count(p))
        throw ParseError(l.no, l.toks[0].col, "unknown process '" + p + "'");
      if (!aut.local_states.at(p).count(l.toks[1].text))
        throw ParseError(l.no, l.toks[1].col, "unknown state '" + l.toks[1].text + "'");
      c.special_states[p].insert(l.toks[1].text);
    }
  c.objective = parse_objective(ix);
  auto problems = validate_control_game(c);
  if (!problems.empty()) throw ValidationError("control_game", problems.front());
  return c;
}

Strategy parse_strategy(const std::vector<Section>& sections) {
  auto ix = index_sections(sections, {"base_places", "base_transitions", "base_flow", "base_init",
                                      "conditions", "events", "arcs", "decision", "memory"});
  Strategy s;
  PetriNet base;
  parse_net_sections(ix, "base_", base);
  PetriNet occ;
  std::map<Id, Id> lambda;
  if (const Section* sec = find(ix, "conditions"))
    for (const Line& l : sec->entries) {
      expect_width(l, 2, 2, "condition entry is: id base-place");
      if (occ.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "duplicate condition '" + l.toks[0].text + "'");
      if (!base.is_place(l.toks[1].text))
        throw ParseError(l.no, l.toks[1].col, "unknown base place '" + l.toks[1].text + "'");
      occ.add_place(l.toks[0].text);
      lambda[l.toks[0].text] = l.toks[1].text;
    }
  if (const Section* sec = find(ix, "events"))
    for (const Line& l : sec->entries) {
      expect_width(l, 2, 2, "event entry is: id base-transition");
      if (occ.is_transition(l.toks[0].text) || occ.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "duplicate node '" + l.toks[0].text + "'");
      if (!base.is_transition(l.toks[1].text))
        throw ParseError(l.no, l.toks[1].col, "unknown base transition '" + l.toks[1].text + "'");
      occ.add_transition(l.toks[0].text);
      lambda[l.toks[0].text] = l.toks[1].text;
    }
  if (const Section* sec = find(ix, "arcs"))
    for (const Line& l : sec->entries) {
      expect_width(l, 2, 2, "arc entry is: from to");
      const std::string& a = l.toks[0].text;
      const std::string& b = l.toks[1].text;
      bool ap = occ.is_place(a), at = occ.is_transition(a);
      if (!ap && !at) throw ParseError(l.no, l.toks[0].col, "unknown node '" + a + "'");
      if (!occ.is_place(b) && !occ.is_transition(b))
        throw ParseError(l.no, l.toks[1].col, "unknown node '" + b + "'");
      if (ap == occ.is_place(b))
        throw ParseError(l.no, l.toks[0].col, "arc must connect a condition and an event");
      occ.arc(a, b, 1);
    }
  // Initial conditions are the ones no event produces.
  {
    std::set<Id> produced;
    for (const auto& [arc, k] : occ.flow.entries()) {
      (void)k;
      if (occ.is_transition(arc.first)) produced.insert(arc.second);
    }
    for (const Id& q : occ.places)
      if (!produced.count(q)) occ.initial_marking.add(q);
  }
  if (const Section* sec = find(ix, "decision"))
    for (const Line& l : sec->entries) {
      expect_width(l, 1, 64, "decision entry is: condition [transitions...]");
      if (!occ.is_place(l.toks[0].text))
        throw ParseError(l.no, l.toks[0].col, "unknown condition '" + l.toks[0].text + "'");
      std::set<Id> allowed;
      for (std::size_t i = 1; i < l.toks.size(); ++i) {
        if (!base.is_transition(l.toks[i].text))
          throw ParseError(l.no, l.toks[i].col,
                           "unknown base transition '" + l.toks[i].text + "'");
        allowed.insert(l.toks[i].text);
      }
      if (!s.decision.emplace(l.toks[0].text, std::move(allowed)).second)
        throw ParseError(l.no, l.toks[0].col, "duplicate decision for '" + l.toks[0].text + "'");
    }
  if (const Section* sec = find(ix, "memory")) {
    if (sec->entries.size() != 1 || sec->entries[0].toks.size() != 1)
      throw ParseError(sec->line, "memory takes a single integer entry");
    s.decision_memory = static_cast<int>(parse_count(sec->entries[0], 0));
  }
  s.bp = BranchingProcess{std::move(occ), std::move(lambda), std::move(base)};
  auto problems = validate_branching_process(s.bp);
  if (!problems.empty()) throw ValidationError("branching_process", problems.front());
  return s;
}

Controller parse_controller(const std::vector<Section>& sections) {
  auto ix = index_sections(sections, {"memory", "table"});
  Controller c;
  if (const Section* sec = find(ix, "memory")) {
    if (sec->entries.size() != 1 || sec->entries[0].toks.size() != 1)
      throw ParseError(sec->line, "memory takes a single integer entry");
    c.memory = static_cast<int>(parse_count(sec->entries[0], 0));
  }
  if (const Section* sec = find(ix, "table"))
    for (const Line& l : sec->entries) {
      if (l.toks.size() < 3 || l.toks[1].text != "|")
        throw ParseError(l.no, "table entry is: process | view... -> actions...");
      std::vector<Id> view;
      std::set<Id> answer;
      bool after_arrow = false;
      for (std::size_t i = 2; i < l.toks.size(); ++i) {
        if (l.toks[i].text == "->") {
          if (after_arrow) throw ParseError(l.no, l.toks[i].col, "second '->' in table entry");
          after_arrow = true;
        } else if (after_arrow) {
          answer.insert(l.toks[i].text);
        } else {
          view.push_back(l.toks[i].text);
        }
      }
      if (!after_arrow) throw ParseError(l.no, "table entry lacks '->'");
      if (!c.table.emplace(std::make_pair(l.toks[0].text, std::move(view)), std::move(answer))
               .second)
        throw ParseError(l.no, l.toks[0].col, "duplicate table entry");
    }
  return c;
}

SliceDistribution parse_distribution(const std::vector<Section>& sections) {
  auto ix = index_sections(sections, {"slices"});
  SliceDistribution d;
  if (const Section* sec = find(ix, "slices"))
    for (const Line& l : sec->entries) {
      PetriNet block;
      for (const Tok& t : l.toks) {
        if (block.is_place(t.text))
          throw ParseError(l.no, t.col, "place '" + t.text + "' repeated in slice");
        block.add_place(t.text);
      }
      d.slices.push_back(std::move(block));
    }
  return d;
}

// -- emission ----------------------------------------------------------------

void emit_net_sections(std::string& out, const std::string& prefix, const PetriNet& net) {
  out += prefix + "places\n";
  for (const Id& q : net.places) out += "  " + q + "\n";
  out += prefix + "transitions\n";
  for (const Id& t : net.transitions) out += "  " + t + "\n";
  out += prefix + "flow\n";
  for (const auto& [arc, k] : net.flow.entries())
    out += "  " + arc.first + " " + arc.second + " " + std::to_string(k) + "\n";
  out += prefix + "init\n";
  for (const auto& [q, k] : net.initial_marking.entries())
    out += "  " + q + " " + std::to_string(k) + "\n";
}

void emit_objective(std::string& out, Objective o) {
  out += "objective\n";
  out += o == Objective::safety ? "  safety\n" : "  reachability\n";
}

}  // namespace

std::string emit(const PetriGame& g) {
  std::string out = "gamebridge petri_game\n";
  emit_net_sections(out, "", g.net);
  out += "system\n";
  for (const Id& q : g.system_places) out += "  " + q + "\n";
  out += "special\n";
  for (const Id& q : g.special) out += "  " + q + "\n";
  emit_objective(out, g.objective);
  return out;
}

std::string emit(const ControlGame& c) {
  const AsyncAutomaton& aut = c.automaton;
  std::string out = "gamebridge control_game\n";
  out += "processes\n";
  for (const Id& p : aut.processes) out += "  " + p + "\n";
  out += "states\n";
  for (const Id& p : aut.processes) {
    auto it = aut.local_states.find(p);
    if (it == aut.local_states.end()) continue;
    auto init = aut.initial.find(p);
    for (const Id& s : it->second) {
      out += "  " + p + " " + s;
      if (init != aut.initial.end() && init->second == s) out += " init";
      out += "\n";
    }
  }
  out += "delta\n";
  for (const DeltaEntry& e : aut.delta) {
    out += "  " + e.action;
    for (const auto& [p, s] : e.from) out += " " + p + "=" + s;
    out += " ->";
    for (const auto& [p, s] : e.to) out += " " + p + "=" + s;
    out += "\n";
  }
  out += "controllable\n";
  for (const Id& a : c.controllable) out += "  " + a + "\n";
  out += "special\n";
  for (const auto& [p, states] : c.special_states)
    for (const Id& s : states) out += "  " + p + " " + s + "\n";
  emit_objective(out, c.objective);
  return out;
}

std::string emit(const Strategy& s) {
  std::string out = "gamebridge strategy\n";
  emit_net_sections(out, "base_", s.bp.base);
  out += "conditions\n";
  for (const Id& q : s.bp.occ_net.places) out += "  " + q + " " + s.bp.lambda.at(q) + "\n";
  out += "events\n";
  for (const Id& e : s.bp.occ_net.transitions) out += "  " + e + " " + s.bp.lambda.at(e) + "\n";
  out += "arcs\n";
  for (const auto& [arc, k] : s.bp.occ_net.flow.entries()) {
    (void)k;
    out += "  " + arc.first + " " + arc.second + "\n";
  }
  out += "decision\n";
  for (const auto& [cond, allowed] : s.decision) {
    out += "  " + cond;
    for (const Id& t : allowed) out += " " + t;
    out += "\n";
  }
  out += "memory\n";
  out += "  " + std::to_string(s.decision_memory) + "\n";
  return out;
}

std::string emit(const Controller& c) {
  std::string out = "gamebridge controller\n";
  out += "memory\n";
  out += "  " + std::to_string(c.memory) + "\n";
  out += "table\n";
  for (const auto& [key, answer] : c.table) {
    out += "  " + key.first + " |";
    for (const Id& a : key.second) out += " " + a;
    out += " ->";
    for (const Id& a : answer) out += " " + a;
    out += "\n";
  }
  return out;
}

std::string emit(const SliceDistribution& d) {
  std::string out = "gamebridge distribution\n";
  out += "slices\n";
  for (const PetriNet& slice : d.slices) {
    out += " ";
    for (const Id& q : slice.places) out += " " + q;
    out += "\n";
  }
  return out;
}

std::string emit(const GameFile& f) {
  switch (f.kind) {
    case FileKind::petri_game:
      return emit(std::get<PetriGame>(f.body));
    case FileKind::control_game:
      return emit(std::get<ControlGame>(f.body));
    case FileKind::strategy:
      return emit(std::get<Strategy>(f.body));
    case FileKind::controller:
      return emit(std::get<Controller>(f.body));
    case FileKind::distribution:
      return emit(std::get<SliceDistribution>(f.body));
  }
  throw error("unreachable file kind");
}

GameFile parse_game_text(const std::string& text, const std::string& origin) {
  std::vector<Line> lines = scan(text);
  if (lines.empty()) throw ParseError(1, "empty input in " + origin);
  const Line& header = lines[0];
  if (header.indented || header.toks.size() != 2 || header.toks[0].text != "gamebridge")
    throw ParseError(header.no, header.toks[0].col,
                     "expected header: gamebridge <kind> in " + origin);
  const std::string& kind = header.toks[1].text;
  std::vector<Section> sections = split_sections(lines, 1);
  GameFile out;
  if (kind == "petri_game") {
    out.kind = FileKind::petri_game;
    out.body = parse_petri_game(sections);
  } else if (kind == "control_game") {
    out.kind = FileKind::control_game;
    out.body = parse_control_game(sections);
  } else if (kind == "strategy") {
    out.kind = FileKind::strategy;
    out.body = parse_strategy(sections);
  } else if (kind == "controller") {
    out.kind = FileKind::controller;
    out.body = parse_controller(sections);
  } else if (kind == "distribution") {
    out.kind = FileKind::distribution;
    out.body = parse_distribution(sections);
  } else {
    throw ParseError(header.no, header.toks[1].col, "unknown file kind '" + kind + "'");
  }
  return out;
}

GameFile parse_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str(), path);
}

SliceDistribution materialize_distribution(const PetriNet& base, const SliceDistribution& blocks) {
  SliceDistribution out;
  for (const PetriNet& block : blocks.slices) {
    for (const Id& q : block.places)
      if (!base.is_place(q))
        throw ValidationError("distribution", "unknown place '" + q + "' in slice");
    out.slices.push_back(induced_subnet(base, block.places));
  }
  return out;
}

// -- DOT ---------------------------------------------------------------------

namespace {

std::string dq(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string to_dot(const PetriGame& g) {
  std::string out = "digraph petri_game {\n  rankdir=LR;\n";
  for (const Id& q : g.net.places) {
    std::string attrs = "shape=circle";
    if (g.is_system(q)) attrs += ", style=filled, fillcolor=lightgray";
    if (g.special.count(q)) attrs += ", peripheries=2";
    long long k = g.net.initial_marking.count(q);
    std::string label = q;
    if (k > 0) label += " [" + std::to_string(k) + "]";
    out += "  " + dq(q) + " [" + attrs + ", label=" + dq(label) + "];\n";
  }
  for (const Id& t : g.net.transitions) out += "  " + dq(t) + " [shape=box];\n";
  for (const auto& [arc, k] : g.net.flow.entries()) {
    out += "  " + dq(arc.first) + " -> " + dq(arc.second);
    if (k > 1) out += " [label=" + dq(std::to_string(k)) + "]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::string to_dot(const ControlGame& c) {
  const AsyncAutomaton& aut = c.automaton;
  std::string out = "digraph control_game {\n  rankdir=LR;\n";
  std::size_t idx = 0;
  for (const Id& p : aut.processes) {
    out += "  subgraph cluster_" + std::to_string(idx++) + " {\n";
    out += "    label=" + dq(p) + ";\n";
    auto node = [&](const Id& s) { return dq(p + "::" + s); };
    auto special = c.special_states.find(p);
    auto states = aut.local_states.find(p);
    if (states != aut.local_states.end())
      for (const Id& s : states->second) {
        std::string attrs = "shape=circle, label=" + dq(s);
        if (special != c.special_states.end() && special->second.count(s))
          attrs += ", peripheries=2";
        out += "    " + node(s) + " [" + attrs + "];\n";
      }
    auto init = aut.initial.find(p);
    if (init != aut.initial.end()) {
      out += "    " + dq(p + "::__init") + " [shape=point];\n";
      out += "    " + dq(p + "::__init") + " -> " + node(init->second) + ";\n";
    }
    for (const DeltaEntry& e : aut.delta) {
      auto from = e.from.find(p);
      if (from == e.from.end()) continue;
      std::string attrs = "label=" + dq(e.action);
      if (!c.is_controllable(e.action)) attrs += ", style=dashed";
      out += "    " + node(from->second) + " -> " + node(e.to.at(p)) + " [" + attrs + "];\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

std::string to_dot(const Strategy& s) {
  std::string out = "digraph strategy {\n  rankdir=LR;\n";
  for (const Id& q : s.bp.occ_net.places) {
    std::string label = q + " : " + s.bp.lambda.at(q);
    auto dec = s.decision.find(q);
    if (dec != s.decision.end()) {
      label += " {";
      bool first = true;
      for (const Id& t : dec->second) {
        if (!first) label += ",";
        first = false;
        label += t;
      }
      label += "}";
    }
    out += "  " + dq(q) + " [shape=ellipse, label=" + dq(label) + "];\n";
  }
  for (const Id& e : s.bp.occ_net.transitions)
    out += "  " + dq(e) + " [shape=box, label=" + dq(e + " : " + s.bp.lambda.at(e)) + "];\n";
  for (const auto& [arc, k] : s.bp.occ_net.flow.entries()) {
    (void)k;
    out += "  " + dq(arc.first) + " -> " + dq(arc.second) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace gb
