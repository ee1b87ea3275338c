// End-to-end concentration procedures with classical-communication
// transcripts.
//
// Photon layout for a round over N parties: slots [0, N) hold each party's
// retained photon (party p keeps slot p−1), slots [N, 2N) hold the photons
// that will be sacrificed (party p measures slot N+p−1). The two-system
// recycling round doubles this to [0, 4N) with the second system in the upper
// half. Party 2 operates the QND; party 1 applies the corrective phase on its
// retained photon.
//
// All QND readouts run in TwoClass mode (per-photon probe shift π): the merged
// readout is what leaves the discarded branch in the coherent residual
// superposition that recycling consumes. The success class is identical to the
// ThreeClass one for every state reachable here.
//
// Residuals are carried between rounds as effective source coefficients
// (α², β²)/√(|α|⁴+|β|⁴); the FullState strategy materializes the two-system
// state explicitly for one extra level each round, the MeasureAndReduce
// strategy first measures the sacrificed photons down to effective pairs.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qconc/optics.hpp"
#include "qconc/qnd.hpp"
#include "qconc/qstate.hpp"

namespace qconc::protocol {

enum class Strategy { FullState, MeasureAndReduce };

/// One entry of the classical transcript. `party` is the 1-based sender.
struct ClassicalMessage {
  enum class Kind { ParityResult, Instruction, MeasuredOutcome };

  Kind kind = Kind::ParityResult;
  int party = 0;
  std::optional<qnd::ParityOutcome> parity;  // Kind::ParityResult
  bool keep = false;                         // Kind::Instruction
  std::optional<MeasurementRecord> record;   // Kind::MeasuredOutcome
};

/// Outcome of one concentration round. Exactly one of output/residual is
/// present: success yields the canonical φ⁺/GHZ⁺ state, failure yields the
/// effective source for the next iteration.
struct RoundResult {
  bool success = false;
  std::optional<TaggedState> output;
  std::optional<PairSource> residual;
  std::vector<ClassicalMessage> transcript;
};

/// Effective source left by one failed round: (α², β²)/√(|α|⁴+|β|⁴).
PairSource next_residual(const PairSource& src);
/// next_residual iterated `failed_rounds` times.
PairSource residual_after(const PairSource& src, int failed_rounds);

/// The N-photon source ket α|H…H⟩ + β|V…V⟩ (N = 2 is the photon pair).
TaggedState ghz_class_state(const PairSource& src, int parties);

/// One primary round on two fresh source pairs.
RoundResult concentrate_once(const PairSource& src, RngStream& rng);

/// One primary round on two fresh N-party source states. parties = 2 is
/// exactly concentrate_once.
RoundResult concentrate_ghz(const PairSource& src, int parties, RngStream& rng);

/// One recycling round on two residual systems characterized by `residual`.
RoundResult recycle_once(const PairSource& residual, RngStream& rng, Strategy strategy);

/// N-party recycling round; success statistics are independent of N.
RoundResult ghz_recycle_once(const PairSource& residual, int parties, RngStream& rng,
                             Strategy strategy);

// --- Exact enumeration -----------------------------------------------------
// Walks every readout branch of a round (parity class × all detector
// outcomes) and returns the post-correction outputs of the success subtree
// with their exact probabilities. Total probability of the returned branches
// is the round's success probability.

struct BranchOutcome {
  double probability = 0.0;
  TaggedState output;
};

std::vector<BranchOutcome> enumerate_primary_outputs(const PairSource& src, int parties = 2);
std::vector<BranchOutcome> enumerate_recycle_outputs(const PairSource& residual, int parties,
                                                     Strategy strategy);
double enumerate_primary_success(const PairSource& src, int parties = 2);
double enumerate_recycle_success(const PairSource& residual, int parties, Strategy strategy);

// --- Sessions ----------------------------------------------------------------

struct SessionConfig {
  PairSource source;
  int parties = 2;
  long initial_pairs = 0;  // number of source states shared up front
  int max_rounds = 1;
  Strategy strategy = Strategy::FullState;
  std::uint64_t seed = 0;
};

struct RoundStats {
  int round = 0;
  long trials = 0;
  long successes = 0;
  long discarded_leftover = 0;  // odd residual dropped when pairing up
  double empirical_rate = 0.0;
  double analytic_rate = 0.0;  // P_n
  std::optional<double> min_output_fidelity;  // vs canonical target; absent if no successes
};

struct SessionReport {
  int parties = 2;
  long initial_pairs = 0;
  long pairs_consumed = 0;
  long maximal_pairs = 0;
  long discarded_residuals = 0;
  double empirical_yield = 0.0;  // maximal_pairs / initial_pairs
  double analytic_yield = 0.0;   // Σ Y_n, n ≤ max_rounds
  std::vector<RoundStats> rounds;
};

/// Iterated concentration over a pool of initial source states: round 1
/// consumes them two at a time, each later round pairs up the surviving
/// residual systems. Odd leftovers are discarded and counted. Trial k of the
/// session draws its randomness from (seed, k) regardless of round.
SessionReport run_session(const SessionConfig& config);

}  // namespace qconc::protocol
