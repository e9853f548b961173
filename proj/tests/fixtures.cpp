#include "fixtures.hpp"

#include <algorithm>
#include <stdexcept>

#include "gamebridge/traces.hpp"

namespace fx {

using namespace gb;

// --- handshake ---------------------------------------------------------------

PetriGame handshake_game() {
  PetriGame g;
  g.net.add_place("A", 1);
  g.net.add_place("B");
  g.net.add_place("C", 1);
  g.net.add_place("D");
  for (const Id t : {"e1", "e2", "i", "a", "b"}) g.net.add_transition(t);
  g.net.arc("A", "e1");
  g.net.arc("e1", "B");
  g.net.arc("A", "e2");
  g.net.arc("e2", "B");
  g.net.arc("C", "i");
  g.net.arc("i", "D");
  g.net.arc("B", "a");
  g.net.arc("D", "a");
  g.net.arc("a", "A");
  g.net.arc("a", "C");
  g.net.arc("B", "b");
  g.net.arc("D", "b");
  g.net.arc("b", "B");
  g.net.arc("b", "D");
  g.system_places = {"C", "D"};
  g.environment_places = {"A", "B"};
  g.special = {"B", "D"};
  g.objective = Objective::reachability;
  return g;
}

SliceDistribution handshake_distribution() {
  const PetriGame g = handshake_game();
  SliceDistribution d;
  d.slices.push_back(induced_subnet(g.net, {"A", "B"}));
  d.slices.push_back(induced_subnet(g.net, {"C", "D"}));
  return d;
}

int add_event(BpBuilder& b, const Id& transition, std::vector<int> cut) {
  std::sort(cut.begin(), cut.end());
  return b.add_event(BpBuilder::Extension{transition, cut});
}

int output_condition(const BpBuilder& b, int e, const Id& place) {
  for (int c : b.post(e))
    if (b.label_of(c) == place) return c;
  throw std::logic_error("event has no output condition labelled " + place);
}

Strategy handshake_strategy() {
  const PetriGame g = handshake_game();
  BpBuilder b(g.net);

  int cA = -1, cC = -1;
  for (int c : b.initial_cut()) (b.label_of(c) == "A" ? cA : cC) = c;

  const int t1 = add_event(b, "e1", {cA});
  const int bE1 = output_condition(b, t1, "B");
  const int t2 = add_event(b, "e2", {cA});
  const int bE2 = output_condition(b, t2, "B");
  const int t3 = add_event(b, "i", {cC});
  const int d0 = output_condition(b, t3, "D");

  // After the first i the system keeps both joint moves open.
  const int tb1 = add_event(b, "b", {bE1, d0});
  const int bB1 = output_condition(b, tb1, "B");
  const int dB1 = output_condition(b, tb1, "D");
  const int ta1 = add_event(b, "a", {bE1, d0});
  const int aA1 = output_condition(b, ta1, "A");
  const int cA1 = output_condition(b, ta1, "C");
  const int ta2 = add_event(b, "a", {bE2, d0});
  const int aA2 = output_condition(b, ta2, "A");
  const int cA2 = output_condition(b, ta2, "C");
  const int tb2 = add_event(b, "b", {bE2, d0});
  const int dB2 = output_condition(b, tb2, "D");

  // Reset branch reached through e1: restart, then stop after the next i.
  (void)add_event(b, "e1", {aA1});
  const int i1 = add_event(b, "i", {cA1});
  const int dI1 = output_condition(b, i1, "D");
  (void)add_event(b, "e2", {aA1});

  // Reset branch reached through e2: restart and play one more b round.
  const int t12 = add_event(b, "e1", {aA2});
  const int bR1 = output_condition(b, t12, "B");
  const int i2 = add_event(b, "i", {cA2});
  const int dI2 = output_condition(b, i2, "D");
  const int t14 = add_event(b, "e2", {aA2});
  const int bR2 = output_condition(b, t14, "B");
  const int t15 = add_event(b, "b", {bR1, dI2});
  const int dL1 = output_condition(b, t15, "D");
  const int t16 = add_event(b, "b", {bR2, dI2});
  const int dL2 = output_condition(b, t16, "D");

  // Loop branch: one more b, then stop.
  const int tt1 = add_event(b, "b", {bB1, dB1});
  const int dL3 = output_condition(b, tt1, "D");

  Strategy s;
  auto allow = [&](int cond, std::set<Id> ts) { s.decision[b.id_of(cond)] = std::move(ts); };
  allow(cC, {"i"});
  allow(d0, {"a", "b"});
  allow(dB1, {"b"});
  allow(cA1, {"i"});
  allow(cA2, {"i"});
  allow(dI2, {"b"});
  allow(dB2, {});
  allow(dI1, {});
  allow(dL1, {});
  allow(dL2, {});
  allow(dL3, {});
  s.bp = b.finish();
  return s;
}

std::vector<std::pair<std::vector<Id>, std::set<Id>>> handshake_view_answers() {
  const Id tC = tau_name("C", {"i"});
  const Id tAB = tau_name("D", {"a", "b"});
  const Id tB = tau_name("D", {"b"});
  const Id t0 = tau_name("D", {});
  return {
      {{}, {tC}},
      {{tC}, {}},
      {{tC, "i"}, {tAB}},
      {{tC, "i", tAB}, {}},
      {{tC, "i", tAB, "e1", "a"}, {tC}},
      {{tC, "i", tAB, "e1", "b"}, {tB}},
      {{tC, "i", tAB, "e2", "a"}, {tC}},
      {{tC, "i", tAB, "e2", "b"}, {t0}},
      {{tC, "i", tAB, "e2", "a", tC, "i"}, {tB}},
  };
}

Controller handshake_controller(const PgToCgResult& res) {
  const Id p2 = res.process_of_slice.at(1);
  const DistributedAlphabet& al = res.control_game.automaton.alphabet;
  const Id tC = tau_name("C", {"i"});
  const Id tA = tau_name("D", {"a"});
  const Id tB = tau_name("D", {"b"});
  const Id t0 = tau_name("D", {});

  const std::vector<std::pair<std::vector<Id>, std::set<Id>>> rows = {
      {{}, {tC}},
      {{tC}, {}},
      {{tC, "i"}, {tB}},
      {{tC, "i", tB}, {}},
      {{tC, "i", tB, "e1", "b"}, {tB}},
      {{tC, "i", tB, "e2", "b"}, {tA}},
      {{tC, "i", tB, "e1", "b", tB}, {}},
      {{tC, "i", tB, "e2", "b", tA}, {}},
      {{tC, "i", tB, "e1", "b", tB, "b"}, {t0}},
      {{tC, "i", tB, "e2", "b", tA, "a"}, {tC}},
      {{tC, "i", tB, "e2", "b", tA, "a", tC}, {}},
      {{tC, "i", tB, "e2", "b", tA, "a", tC, "i"}, {t0}},
  };

  Controller ctrl;
  ctrl.memory = -1;
  for (const auto& [word, answer] : rows)
    ctrl.table[{p2, normalize(al, word).normal_form}] = answer;
  return ctrl;
}

std::vector<ExpectedDecision> handshake_expected_decisions() {
  return {
      {{}, "C", {"i"}},
      {{"i"}, "D", {"b"}},
      {{"e1", "i", "b"}, "D", {"b"}},
      {{"e2", "i", "b"}, "D", {"a"}},
      {{"e1", "i", "b", "b"}, "D", {}},
      {{"e2", "i", "b", "a"}, "C", {"i"}},
      {{"e2", "i", "b", "a", "i"}, "D", {}},
  };
}

// --- sting -------------------------------------------------------------------

PetriGame sting_game() {
  PetriGame g;
  for (const Id q : {"B", "bu", "bd", "T", "Hd", "H", "Lu", "Ld", "Wu", "Wd"})
    g.net.add_place(q);
  for (const Id q : {"U", "Hu", "C", "D", "S"}) g.net.add_place(q);
  for (const Id q : {"B", "U", "T", "C"}) g.net.initial_marking.add(q);
  for (const Id t : {"u", "d", "iu", "id", "i", "su", "sd", "cu", "cd"})
    g.net.add_transition(t);
  auto move = [&](const Id& t, std::initializer_list<Id> pre, std::initializer_list<Id> post) {
    for (const Id& q : pre) g.net.arc(q, t);
    for (const Id& q : post) g.net.arc(t, q);
  };
  move("u", {"B"}, {"bu"});
  move("d", {"B"}, {"bd"});
  move("iu", {"bu", "U"}, {"H", "Hu"});
  move("id", {"bd", "T"}, {"H", "Hd"});
  move("i", {"H", "C"}, {"H", "D"});
  move("su", {"D", "H"}, {"S", "Lu"});
  move("sd", {"D", "H"}, {"S", "Ld"});
  move("cu", {"Lu", "Hu"}, {"Wu", "Hu"});
  move("cd", {"Ld", "Hd"}, {"Wd", "Hd"});
  g.system_places = {"U", "Hu", "C", "D", "S"};
  for (const Id& q : g.net.places)
    if (!g.system_places.count(q)) g.environment_places.insert(q);
  g.special = {"U", "T", "Hu", "Hd", "S", "Wu", "Wd"};
  g.objective = Objective::reachability;
  return g;
}

SliceDistribution sting_distribution() {
  const PetriGame g = sting_game();
  SliceDistribution d;
  d.slices.push_back(induced_subnet(g.net, {"B", "bu", "bd", "H", "Lu", "Ld", "Wu", "Wd"}));
  d.slices.push_back(induced_subnet(g.net, {"U", "Hu"}));
  d.slices.push_back(induced_subnet(g.net, {"T", "Hd"}));
  d.slices.push_back(induced_subnet(g.net, {"C", "D", "S"}));
  return d;
}

// --- copycat -----------------------------------------------------------------

PetriGame copycat_game() {
  PetriGame g;
  for (const Id q : {"E", "A", "B", "X", "Y", "meet", "wx_e", "wy_e"}) g.net.add_place(q);
  for (const Id q : {"P", "D", "Dx", "Dy", "wx_p", "wy_p"}) g.net.add_place(q);
  for (const Id q : {"E", "A", "B", "P"}) g.net.initial_marking.add(q);
  for (const Id t : {"mx", "my", "join", "i", "cx", "cy", "checkx", "checky"})
    g.net.add_transition(t);
  auto move = [&](const Id& t, std::initializer_list<Id> pre, std::initializer_list<Id> post) {
    for (const Id& q : pre) g.net.arc(q, t);
    for (const Id& q : post) g.net.arc(t, q);
  };
  move("mx", {"E", "A"}, {"X", "meet"});
  move("my", {"E", "A"}, {"Y", "meet"});
  move("join", {"B"}, {"meet"});
  move("i", {"meet", "P"}, {"meet", "D"});
  move("cx", {"D"}, {"Dx"});
  move("cy", {"D"}, {"Dy"});
  move("checkx", {"X", "Dx"}, {"wx_e", "wx_p"});
  move("checky", {"Y", "Dy"}, {"wy_e", "wy_p"});
  g.system_places = {"P", "D", "Dx", "Dy", "wx_p", "wy_p"};
  for (const Id& q : g.net.places)
    if (!g.system_places.count(q)) g.environment_places.insert(q);
  g.special = {"meet", "wx_e", "wx_p", "wy_e", "wy_p"};
  g.objective = Objective::reachability;
  return g;
}

SingularNetDistribution copycat_snd() {
  auto member = [](std::initializer_list<std::pair<Id, long long>> places,
                   std::initializer_list<std::array<Id, 3>> moves,
                   std::initializer_list<std::pair<Id, Id>> relabel) {
    SingularNet sn;
    for (const auto& [q, k] : places) {
      sn.net.add_place(q, k);
      sn.pi[q] = q;
    }
    for (const auto& [t, from, to] : moves) {
      if (!sn.net.is_transition(t)) {
        sn.net.add_transition(t);
        sn.pi[t] = t;
      }
      sn.net.arc(from, t);
      sn.net.arc(t, to);
    }
    for (const auto& [node, base] : relabel) sn.pi[node] = base;
    return sn;
  };

  std::vector<SingularNet> family;
  family.push_back(member({{"E", 1}, {"X", 0}, {"Y", 0}, {"wx_e", 0}, {"wy_e", 0}},
                          {{{"mx", "E", "X"}},
                           {{"my", "E", "Y"}},
                           {{"checkx", "X", "wx_e"}},
                           {{"checky", "Y", "wy_e"}}},
                          {}));
  family.push_back(member({{"A", 1}, {"meet1", 0}},
                          {{{"mx", "A", "meet1"}},
                           {{"my", "A", "meet1"}},
                           {{"i1", "meet1", "meet1"}}},
                          {{"meet1", "meet"}, {"i1", "i"}}));
  family.push_back(member({{"B", 1}, {"meet2", 0}},
                          {{{"join", "B", "meet2"}}, {{"i2", "meet2", "meet2"}}},
                          {{"meet2", "meet"}, {"i2", "i"}}));
  family.push_back(member({{"P", 1}, {"D", 0}, {"Dx", 0}, {"Dy", 0}, {"wx_p", 0}, {"wy_p", 0}},
                          {{{"i1", "P", "D"}},
                           {{"i2", "P", "D"}},
                           {{"cx", "D", "Dx"}},
                           {{"cy", "D", "Dy"}},
                           {{"checkx", "Dx", "wx_p"}},
                           {{"checky", "Dy", "wy_p"}}},
                          {{"i1", "i"}, {"i2", "i"}}));

  SingularNetDistribution snd;
  snd.nets = family;
  auto [comp, pi] = compose_snd(family);
  snd.composition = std::move(comp);
  snd.pi = std::move(pi);
  return snd;
}

PetriGame copycat_composition_game() {
  const SingularNetDistribution snd = copycat_snd();
  PetriGame g;
  g.net = snd.composition;
  g.system_places = {"P", "D", "Dx", "Dy", "wx_p", "wy_p"};
  for (const Id& q : g.net.places)
    if (!g.system_places.count(q)) g.environment_places.insert(q);
  g.special = {"meet1", "meet2", "wx_e", "wx_p", "wy_e", "wy_p"};
  g.objective = Objective::reachability;
  return g;
}

std::map<Id, Id> copycat_pi() { return copycat_snd().pi; }

// --- manager -----------------------------------------------------------------

ControlGame manager_game() {
  DistributedAlphabet al;
  auto act = [&](const Id& a, std::set<Id> dom) {
    al.actions.insert(a);
    al.dom[a] = std::move(dom);
  };
  act("idle", {"T"});
  act("rX", {"T", "N"});
  act("rY", {"T", "N"});
  act("acc", {"T", "N"});
  act("uX", {"T", "M"});
  act("uY", {"T", "M"});
  act("c", {"N", "M"});
  act("ret", {"N"});
  act("idlep", {"T2"});
  act("rXp", {"T2", "N2"});
  act("rYp", {"T2", "N2"});
  act("accp", {"T2", "N2"});
  act("uXp", {"T2", "M"});
  act("uYp", {"T2", "M"});
  act("cp", {"N2", "M"});
  act("retp", {"N2"});
  act("gX", {"M"});
  act("gY", {"M"});

  // A thread cycles request -> acknowledged -> release; releasing the wrong
  // resource is always possible once the manager granted the wrong one, and
  // lands in the losing state.
  auto thread = [](const Id& s0, const Id& sX, const Id& sY, const Id& sXa, const Id& sYa,
                   const Id& bad, const Id& idle, const Id& rX, const Id& rY, const Id& acc,
                   const Id& uX, const Id& uY) {
    LocalProcess p;
    p.states = {s0, sX, sY, sXa, sYa, bad};
    p.initial = s0;
    p.add(s0, idle, s0);
    p.add(s0, rX, sX);
    p.add(s0, rY, sY);
    p.add(sX, acc, sXa);
    p.add(sY, acc, sYa);
    p.add(sXa, uX, s0);
    p.add(sXa, uY, bad);
    p.add(sYa, uY, s0);
    p.add(sYa, uX, bad);
    return p;
  };
  // The network forwards a request to the manager and acknowledges; it does
  // not remember which resource was asked for.
  auto network = [](const Id& n0, const Id& n1, const Id& n2, const Id& n3, const Id& rX,
                    const Id& rY, const Id& c, const Id& acc, const Id& ret) {
    LocalProcess p;
    p.states = {n0, n1, n2, n3};
    p.initial = n0;
    p.add(n0, rX, n1);
    p.add(n0, rY, n1);
    p.add(n1, c, n2);
    p.add(n2, acc, n3);
    p.add(n3, ret, n0);
    return p;
  };

  LocalProcess m;
  m.states = {"m0", "mC", "mX", "mY"};
  m.initial = "m0";
  m.add("m0", "c", "mC");
  m.add("m0", "cp", "mC");
  m.add("mC", "gX", "mX");
  m.add("mC", "gY", "mY");
  m.add("mX", "uX", "m0");
  m.add("mX", "uXp", "m0");
  m.add("mY", "uY", "m0");
  m.add("mY", "uYp", "m0");

  std::map<Id, LocalProcess> procs;
  procs["M"] = m;
  procs["T"] = thread("t0", "tX", "tY", "tXa", "tYa", "tBad", "idle", "rX", "rY", "acc",
                      "uX", "uY");
  procs["N"] = network("n0", "n1", "n2", "n3", "rX", "rY", "c", "acc", "ret");
  procs["T2"] = thread("s0", "sX", "sY", "sXa", "sYa", "sBad", "idlep", "rXp", "rYp",
                       "accp", "uXp", "uYp");
  procs["N2"] = network("k0", "k1", "k2", "k3", "rXp", "rYp", "cp", "accp", "retp");

  ControlGame c;
  c.automaton = compose_local(procs, al);
  c.controllable = {"gX", "gY"};
  for (const Id& a : al.actions)
    if (!c.controllable.count(a)) c.uncontrollable.insert(a);
  c.special_states = {{"T", {"tBad"}}, {"T2", {"sBad"}}};
  c.objective = Objective::safety;
  return c;
}

// --- trap --------------------------------------------------------------------

ControlGame trap_game() {
  DistributedAlphabet al;
  al.actions = {"a", "b", "c", "d"};
  al.dom["a"] = {"p1"};
  al.dom["b"] = {"p1"};
  al.dom["c"] = {"p1", "p2"};
  al.dom["d"] = {"p1", "p2"};

  LocalProcess p1;
  p1.states = {"A", "B", "C", "D"};
  p1.initial = "A";
  p1.add("A", "a", "B");
  p1.add("A", "b", "C");
  p1.add("C", "c", "D");
  p1.add("B", "d", "B");

  LocalProcess p2;
  p2.states = {"E", "F"};
  p2.initial = "E";
  p2.add("E", "c", "F");
  p2.add("E", "d", "E");

  ControlGame c;
  c.automaton = compose_local({{"p1", p1}, {"p2", p2}}, al);
  c.controllable = {"a", "c"};
  c.uncontrollable = {"b", "d"};
  c.special_states = {{"p1", {"D"}}};
  c.objective = Objective::safety;
  return c;
}

// --- bystander ---------------------------------------------------------------

ControlGame bystander_game() {
  DistributedAlphabet al;
  al.actions = {"a", "b", "c"};
  al.dom["a"] = {"p1"};
  al.dom["b"] = {"p1"};
  al.dom["c"] = {"p2"};

  LocalProcess p1;
  p1.states = {"A", "B", "C"};
  p1.initial = "A";
  p1.add("A", "a", "B");
  p1.add("A", "b", "C");

  LocalProcess p2;
  p2.states = {"D"};
  p2.initial = "D";
  p2.add("D", "c", "D");

  ControlGame c;
  c.automaton = compose_local({{"p1", p1}, {"p2", p2}}, al);
  c.controllable = {"b", "c"};
  c.uncontrollable = {"a"};
  c.special_states = {{"p1", {"B"}}};
  c.objective = Objective::safety;
  return c;
}

// --- twin tokens -------------------------------------------------------------

PetriNet twin_token_net() {
  PetriNet n;
  n.add_place("A", 2);
  n.add_place("B", 1);
  n.add_place("C");
  n.add_place("D");
  n.add_transition("a");
  n.add_transition("b");
  n.arc("A", "a");
  n.arc("B", "a");
  n.arc("a", "C");
  n.arc("a", "D");
  n.arc("D", "b");
  n.arc("b", "B");
  return n;
}

// --- random structures -------------------------------------------------------

namespace {
int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
}  // namespace

PetriNet random_cp_net(std::mt19937& rng) {
  PetriNet n;
  const int places = pick(rng, 2, 8);
  for (int i = 0; i < places; ++i) n.add_place("q" + std::to_string(i));
  const int tokens = pick(rng, 1, 3);
  for (int i = 0; i < tokens; ++i)
    n.initial_marking.add("q" + std::to_string(pick(rng, 0, places - 1)));

  const int trans = pick(rng, 1, 4);
  for (int i = 0; i < trans; ++i) {
    const Id t = "t" + std::to_string(i);
    n.add_transition(t);
    const int arity = pick(rng, 1, std::min(2, places));
    std::set<int> pre, post;
    while (static_cast<int>(pre.size()) < arity) pre.insert(pick(rng, 0, places - 1));
    while (static_cast<int>(post.size()) < arity) post.insert(pick(rng, 0, places - 1));
    for (int q : pre) n.arc("q" + std::to_string(q), t);
    for (int q : post) n.arc(t, "q" + std::to_string(q));
  }
  return n;
}

RandomGame random_sliceable_game(std::mt19937& rng) {
  const int slices = pick(rng, 1, 2);
  std::vector<std::vector<Id>> block(slices);
  PetriGame g;
  for (int s = 0; s < slices; ++s) {
    const int len = pick(rng, 2, 6);
    for (int i = 0; i < len; ++i) {
      const Id q = "q" + std::to_string(s) + "_" + std::to_string(i);
      block[s].push_back(q);
      g.net.add_place(q, i == 0 ? 1 : 0);
      if (pick(rng, 0, 1)) g.system_places.insert(q);
      else g.environment_places.insert(q);
      if (pick(rng, 0, 2)) g.special.insert(q);  // generous winning set
    }
  }
  const int trans = pick(rng, 1, 5);
  for (int i = 0; i < trans; ++i) {
    const Id t = "t" + std::to_string(i);
    g.net.add_transition(t);
    std::vector<int> touched;
    if (slices == 2 && pick(rng, 0, 1)) touched = {0, 1};
    else touched = {pick(rng, 0, slices - 1)};
    // one consumed and one produced place inside each touched slice
    for (int s : touched) {
      const auto& bb = block[s];
      g.net.arc(bb[pick(rng, 0, static_cast<int>(bb.size()) - 1)], t);
      g.net.arc(t, bb[pick(rng, 0, static_cast<int>(bb.size()) - 1)]);
    }
  }
  g.objective = Objective::reachability;

  RandomGame out;
  out.game = g;
  for (int s = 0; s < slices; ++s)
    out.dist.slices.push_back(
        induced_subnet(g.net, std::set<Id>(block[s].begin(), block[s].end())));
  return out;
}

ThreeSatFormula random_formula(std::mt19937& rng) {
  ThreeSatFormula f;
  f.variables = pick(rng, 1, 3);
  const int m = pick(rng, 1, 3);
  for (int j = 0; j < m; ++j) {
    std::array<int, 3> cl;
    for (int k = 0; k < 3; ++k) {
      const int v = pick(rng, 1, f.variables);
      cl[k] = pick(rng, 0, 1) ? v : -v;
    }
    f.clauses.push_back(cl);
  }
  return f;
}

bool brute_force_sat(const ThreeSatFormula& f) {
  for (int bits = 0; bits < (1 << f.variables); ++bits) {
    bool all = true;
    for (const auto& cl : f.clauses) {
      bool sat = false;
      for (int lit : cl) {
        const bool val = (bits >> (std::abs(lit) - 1)) & 1;
        if (lit > 0 ? val : !val) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

DistributedAlphabet random_alphabet(std::mt19937& rng) {
  DistributedAlphabet al;
  const int procs = pick(rng, 1, 4);
  const int n = pick(rng, 2, 6);
  for (int i = 0; i < n; ++i) {
    const Id a(1, static_cast<char>('a' + i));
    al.actions.insert(a);
    std::set<Id> dom;
    dom.insert("P" + std::to_string(pick(rng, 0, procs - 1)));
    while (pick(rng, 0, 2) == 0) dom.insert("P" + std::to_string(pick(rng, 0, procs - 1)));
    al.dom[a] = dom;
  }
  return al;
}

std::vector<Id> random_word(std::mt19937& rng, const DistributedAlphabet& al,
                            std::size_t maxlen) {
  std::vector<Id> pool(al.actions.begin(), al.actions.end());
  std::vector<Id> w;
  const int len = pick(rng, 0, static_cast<int>(maxlen));
  for (int i = 0; i < len; ++i) w.push_back(pool[pick(rng, 0, static_cast<int>(pool.size()) - 1)]);
  return w;
}

Controller tabulate_controller(const ControlGame& c, const Controller& ctrl,
                               std::size_t bound) {
  std::set<Id> owners;
  for (const Id& p : c.automaton.processes)
    for (const Id& a : c.controllable)
      if (c.automaton.alphabet.domain_of(a).count(p)) owners.insert(p);

  Controller out;
  out.memory = -1;
  for (const Trace& u : controller_compatible_plays(c, ctrl, bound))
    for (const Id& p : owners) {
      const Trace v = local_view(u, p);
      out.table[{p, v.normal_form}] = ctrl.lookup(p, v);
    }
  return out;
}

}  // namespace fx
