#pragma once

#include <string>
#include <variant>

#include "gamebridge/distribution.hpp"
#include "gamebridge/games.hpp"

namespace gb {

// Serialized object kinds. Files are line-oriented: a `gamebridge <kind>`
// header followed by sections whose entries are indented, whitespace-split
// lines. Emission is canonical, so emit ∘ parse ∘ emit is byte-identical.
enum class FileKind { petri_game, control_game, strategy, controller, distribution };

std::string to_string(FileKind k);

struct GameFile {
  FileKind kind = FileKind::petri_game;
  std::variant<PetriGame, ControlGame, Strategy, Controller, SliceDistribution> body;
};

// Parses and validates one file (resp. in-memory text; `origin` only flavors
// messages). Structural problems throw ParseError with line/column; semantic
// problems found by the per-type validators throw ValidationError.
GameFile parse_game_file(const std::string& path);
GameFile parse_game_text(const std::string& text, const std::string& origin = "<text>");

std::string emit(const PetriGame& g);
std::string emit(const ControlGame& c);
std::string emit(const Strategy& s);
std::string emit(const Controller& c);
// Distributions serialize as place blocks only; use materialize_distribution
// to rebuild the induced subnets against a base net after parsing.
std::string emit(const SliceDistribution& d);
std::string emit(const GameFile& f);

SliceDistribution materialize_distribution(const PetriNet& base, const SliceDistribution& blocks);

// DOT renderings: system nodes filled, environment nodes unfilled, special
// nodes double-bordered; transitions and synchronized moves are boxes/edges.
std::string to_dot(const PetriGame& g);
std::string to_dot(const ControlGame& c);
std::string to_dot(const Strategy& s);

}  // namespace gb
