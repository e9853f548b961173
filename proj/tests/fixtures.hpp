#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gamebridge/distribution.hpp"
#include "gamebridge/games.hpp"
#include "gamebridge/translate.hpp"
#include "gamebridge/unfolding.hpp"

// Hand-built games, strategies and controllers shared by the test suites,
// plus seeded random generators for the property-based checks. Everything
// here is deterministic: equal seeds give equal structures.
namespace fx {

// --- handshake: a two-slice reachability game -------------------------------
// Environment token loops A -e1/e2-> B, system token C -i-> D; the joint
// moves a (reset to {A,C}) and b (stay at {B,D}) synchronize both tokens.
// Winning set {B,D}. The unique slice split is {A,B} | {C,D}.
gb::PetriGame handshake_game();
gb::SliceDistribution handshake_distribution();

// A winning, justified-refusal strategy for the handshake game that commits
// to {a,b} after the first i and is therefore not deterministic.
gb::Strategy handshake_strategy();

// The sequence of (local view word, expected answer) pairs that reading a
// controller off handshake_strategy() must produce for the system process.
// Words are written in causal order; normalize before lookup.
std::vector<std::pair<std::vector<gb::Id>, std::set<gb::Id>>> handshake_view_answers();

// A deterministic winning controller for the translated handshake game,
// materialized as a view table over the alphabet of `res`. It commits to at
// most one transition at a time, so the clash actions of the hatted variant
// can never fire under it.
gb::Controller handshake_controller(const gb::PgToCgResult& res);

// Label paths (fired from the initial cut) to the system conditions of the
// strategy rebuilt from handshake_controller(), with the decision expected
// at the condition the path reveals.
struct ExpectedDecision {
  std::vector<gb::Id> path;   // base transitions to fire
  gb::Id place;               // system place of the condition to inspect
  std::set<gb::Id> allowed;   // expected decision there
};
std::vector<ExpectedDecision> handshake_expected_decisions();

// --- sting: a four-player reachability game the system wins -----------------
// A boss token picks one of two routes and instructs either the undercover
// agent (system) or a thug (environment); a cop interrogates the boss and
// must send the intercept to the route it learned. All information the cop
// needs travels through the interrogation synchronization.
gb::PetriGame sting_game();
gb::SliceDistribution sting_distribution();

// --- copycat: a correlation game without a winning strategy -----------------
// The system player must repeat an environment choice, but the meeting
// place it synchronizes on can also be filled by an uninformed bystander
// token, and refusal cannot tell the two apart. The composition of the
// singular-net distribution splits that meeting place and becomes winnable,
// though not by any labelling-insensitive strategy.
gb::PetriGame copycat_game();
gb::SingularNetDistribution copycat_snd();
gb::PetriGame copycat_composition_game();   // composition dressed as a game
std::map<gb::Id, gb::Id> copycat_pi();      // composition node -> base node

// --- manager: a five-process safety control game the system wins ------------
// Two threads request resources through two network processes; the manager
// must grant the resource that was actually requested, which it can only
// learn from the causal past of the communication. Wrong grants let an
// uncontrollable misuse action reach the losing thread states.
gb::ControlGame manager_game();

// --- trap: a two-process safety control game the system loses ---------------
// An uncontrollable action forces a state whose only continuation is a
// controllable action into the losing state; refusing it deadlocks.
gb::ControlGame trap_game();

// --- bystander: local deadlock hidden behind a live second process ----------
// The first process survives only by never committing, which stays winning
// as long as the second process keeps the game alive. The challenge variant
// of the translation removes that cover.
gb::ControlGame bystander_game();

// --- twin tokens: a plain concurrency-preserving net, three tokens ----------
// Two tokens share a place, so its singular-net distribution must duplicate
// places; the family has exactly three members.
gb::PetriNet twin_token_net();

// --- random structure generators -------------------------------------------
// Concurrency-preserving net with at most 8 places and 3 initial tokens.
gb::PetriNet random_cp_net(std::mt19937& rng);

// Game built from one or two slices (at most 6 places each) joined by shared
// transitions; reachability objective; every transition consumes at most one
// place per slice, so it translates directly.
struct RandomGame {
  gb::PetriGame game;
  gb::SliceDistribution dist;
};
RandomGame random_sliceable_game(std::mt19937& rng);

// 3-CNF with at most 3 variables and 3 clauses, and its truth-table oracle.
gb::ThreeSatFormula random_formula(std::mt19937& rng);
bool brute_force_sat(const gb::ThreeSatFormula& f);

// Alphabet over at most 6 actions and 4 processes, and words over it.
gb::DistributedAlphabet random_alphabet(std::mt19937& rng);
std::vector<gb::Id> random_word(std::mt19937& rng, const gb::DistributedAlphabet& al,
                                std::size_t maxlen);

// --- small construction helpers ---------------------------------------------
// Add the event for `transition` consuming exactly `cut` and return its index.
int add_event(gb::BpBuilder& b, const gb::Id& transition, std::vector<int> cut);

// Index of the condition labelled `place` among the outputs of event `e`.
int output_condition(const gb::BpBuilder& b, int e, const gb::Id& place);

// Tabulates a functional controller into a plain view table by enumerating
// its compatible plays up to `bound` and recording every looked-up view of
// processes that own at least one controllable action.
gb::Controller tabulate_controller(const gb::ControlGame& c, const gb::Controller& ctrl,
                                   std::size_t bound);

}  // namespace fx
