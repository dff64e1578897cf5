#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paritylab/bet_program.hpp"

namespace paritylab {

enum class Engine { N, D };
enum class SettleMode { Parity, Sided };
enum class DiagMode { Greedy, Settle };

/// Capital 5, wager 1 on outcome 1 at every state; frozen at 0.
BetProgram builtin_N();
/// Capital 5, wager 1 on 0 at even-length states and on 1 at odd-length states; frozen at 0.
BetProgram builtin_D();
BetProgram builtin(Engine e);

// Outcome the engine wagers on at a state of the given length.
int engine_favored(Engine e, std::size_t length);

// Integer-valued check used by diagonalize: integer unit, or a table with integer values.
bool is_integer_valued(const BetProgram& p);

/// Proof that a finite-state integer program is constant on the whole cone
/// above `at`: either its capital is 0, or `closure` is the set of
/// (automaton state, length parity) pairs reachable from there and none bets.
struct ConeCertificate {
  BitString at;
  Capital capital;
  std::size_t automaton_state = 0;
  bool zero_capital = false;
  std::vector<std::pair<std::size_t, int>> closure;
};

// Re-derives the certificate's claim from the program alone.
bool check_certificate(const BetProgram& p, const ConeCertificate& cert);

// Brute force: capital equals cert.capital on every extension up to `depth` more bits.
bool probe_cone(const BetProgram& p, const BitString& at, std::size_t depth);

struct SettleStep {
  std::string rule;  // navigate | punish | pump | finish
  std::size_t start = 0;
  std::size_t length = 0;
};

struct SettleResult {
  BitString tau;
  ConeCertificate certificate;
  std::vector<SettleStep> steps;
};

/// Extends rho until the adversary is provably constant on the cone, then
/// adds c engine-favored bits. Parity mode plays against engine N, sided mode
/// against engine D.
SettleResult find_settling_extension(const BetProgram& adversary, const BitString& rho, long c, SettleMode mode);

struct BitRecord {
  int bit = 0;
  Capital engine;
  std::vector<Capital> adversaries;
  std::string rule;  // favored | deviate | navigate | punish | pump | finish | block | align
};

struct Checkpoint {
  std::size_t length = 0;
  std::size_t block_positions = 0;
  Rational fraction;
  Capital engine;
};

struct DiagOptions {
  DiagMode mode = DiagMode::Greedy;
  long target = 100;
  bool dim0 = false;
  std::size_t blocks = 12;  // total (01)^{2^i} blocks with dim0
  long settle_margin = 3;   // c passed to each settling search
  std::size_t max_length = 1u << 22;
};

struct DiagTrace {
  Engine engine = Engine::N;
  BitString z;
  std::vector<BitRecord> records;  // records[i] is the state after z↾(i+1)
  Capital engine_initial;
  std::vector<Capital> adversary_initial;
  std::vector<ConeCertificate> certificates;  // settle mode, one per adversary
  std::vector<Checkpoint> checkpoints;         // dim0 block ends
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [start, end) of (01) blocks
  std::size_t deviations = 0;
  bool reached_target = false;
};

DiagTrace diagonalize(const std::vector<BetProgram>& adversaries, Engine engine, const DiagOptions& options);

/// Recomputes every record from the programs; returns the first mismatching bit index.
std::optional<std::size_t> replay_mismatch(const DiagTrace& trace, const std::vector<BetProgram>& adversaries);

}  // namespace paritylab
