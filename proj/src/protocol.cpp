#include "qconc/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qconc/analytics.hpp"

namespace qconc::protocol {

namespace {

// Slot layout of one post-selection round. Slots [0, parties) are retained,
// slots [first_sacrificed, total_slots) are rotated by 45° and read out.
struct RoundShape {
  int parties;
  int total_slots;
  int qnd_i;
  int qnd_j;
  int first_sacrificed;
};

RoundShape primary_shape(int parties) {
  return {parties, 2 * parties, 1, parties + 1, parties};
}

RoundShape recycle_shape(int parties) {
  return {parties, 4 * parties, parties + 1, 3 * parties + 1, parties};
}

int party_of_slot(int slot, int parties) { return slot % parties + 1; }

void check_parties(int parties) {
  if (parties < 2) throw std::invalid_argument("protocol: need at least two parties");
}

ClassicalMessage parity_message(const qnd::ParityOutcome& outcome) {
  ClassicalMessage msg;
  msg.kind = ClassicalMessage::Kind::ParityResult;
  msg.party = 2;
  msg.parity = outcome;
  return msg;
}

ClassicalMessage instruction_message(bool keep) {
  ClassicalMessage msg;
  msg.kind = ClassicalMessage::Kind::Instruction;
  msg.party = 2;
  msg.keep = keep;
  return msg;
}

ClassicalMessage outcome_message(int party, const MeasurementRecord& record) {
  ClassicalMessage msg;
  msg.kind = ClassicalMessage::Kind::MeasuredOutcome;
  msg.party = party;
  msg.record = record;
  return msg;
}

// Two fresh source states with every second photon rotated by 90°.
TaggedState build_primary_state(const PairSource& src, int parties) {
  const TaggedState one = ghz_class_state(src, parties);
  TaggedState s = tensor(one, one);
  for (int slot = parties; slot < 2 * parties; ++slot) {
    s = apply_single(s, slot, optics::r90());
  }
  return s;
}

// One residual system: a|H…H V…V⟩ + b|V…V H…H⟩ over [retained | sacrificed].
// This is exactly the state a failed round leaves behind, rebuilt from the
// effective coefficients.
TaggedState residual_block(const PairSource& eff, int parties) {
  TaggedState::AmplitudeMap m;
  const std::uint64_t ones = (std::uint64_t{1} << parties) - 1;
  m.emplace(BranchKey{BasisLabel(2 * parties, ones << parties), 0}, eff.alpha());
  m.emplace(BranchKey{BasisLabel(2 * parties, ones), 0}, eff.beta());
  return TaggedState::unchecked(2 * parties, std::move(m));
}

// Two residual systems, the second one flipped photon-wise by 90°.
TaggedState build_recycle_state(const PairSource& eff, int parties) {
  const TaggedState block = residual_block(eff, parties);
  TaggedState s = tensor(block, block);
  for (int slot = 2 * parties; slot < 4 * parties; ++slot) {
    s = apply_single(s, slot, optics::r90());
  }
  return s;
}

// Parity check, detection of the sacrificed photons, sign classification,
// phase correction and slot removal. `round_src` characterizes the systems
// entering this round; its squared coefficients form the failure residual.
RoundResult run_round(const TaggedState& input, const RoundShape& shape,
                      const PairSource& round_src, RngStream& rng,
                      std::vector<ClassicalMessage> transcript) {
  auto [outcome, state] =
      qnd::parity_check(input, shape.qnd_i, shape.qnd_j, qnd::ParityMode::TwoClass, rng);
  transcript.push_back(parity_message(outcome));
  if (!outcome.even_parity()) {
    transcript.push_back(instruction_message(false));
    RoundResult result;
    result.success = false;
    result.residual = next_residual(round_src);
    result.transcript = std::move(transcript);
    return result;
  }
  transcript.push_back(instruction_message(true));

  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(shape.total_slots - shape.first_sacrificed));
  for (int slot = shape.first_sacrificed; slot < shape.total_slots; ++slot) {
    state = apply_single(state, slot, optics::r45());
    auto [record, collapsed] = measure(state, slot, Basis::HV, rng);
    transcript.push_back(outcome_message(party_of_slot(slot, shape.parties), record));
    records.push_back(record);
    state = std::move(collapsed);
  }

  state = optics::correct_phase(state, 0, optics::classify_sign(records));
  for (int slot = shape.total_slots - 1; slot >= shape.first_sacrificed; --slot) {
    state = drop_definite(state, slot);
  }

  RoundResult result;
  result.success = true;
  result.output = std::move(state);
  result.transcript = std::move(transcript);
  return result;
}

// Measures one residual system down to its retained photons: 45° rotation and
// HV readout of every sacrificed slot, then a phase fix when the outcome
// parity is odd. The result equals ghz_class_state(eff, parties) up to a
// global sign.
TaggedState reduce_residual_system(const PairSource& eff, int parties, RngStream& rng,
                                   std::vector<ClassicalMessage>& transcript) {
  TaggedState state = residual_block(eff, parties);
  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(parties));
  for (int slot = parties; slot < 2 * parties; ++slot) {
    state = apply_single(state, slot, optics::r45());
    auto [record, collapsed] = measure(state, slot, Basis::HV, rng);
    transcript.push_back(outcome_message(party_of_slot(slot, parties), record));
    records.push_back(record);
    state = std::move(collapsed);
  }
  state = optics::correct_phase(state, 0, optics::classify_sign(records));
  for (int slot = 2 * parties - 1; slot >= parties; --slot) {
    state = drop_definite(state, slot);
  }
  return state;
}

RoundResult run_recycle(const PairSource& residual, int parties, RngStream& rng,
                        Strategy strategy) {
  if (strategy == Strategy::FullState) {
    return run_round(build_recycle_state(residual, parties), recycle_shape(parties), residual,
                     rng, {});
  }
  std::vector<ClassicalMessage> transcript;
  const TaggedState first = reduce_residual_system(residual, parties, rng, transcript);
  const TaggedState second = reduce_residual_system(residual, parties, rng, transcript);
  TaggedState s = tensor(first, second);
  for (int slot = parties; slot < 2 * parties; ++slot) {
    s = apply_single(s, slot, optics::r90());
  }
  return run_round(s, primary_shape(parties), residual, rng, std::move(transcript));
}

}  // namespace

PairSource next_residual(const PairSource& src) {
  const Cplx a2 = src.alpha() * src.alpha();
  const Cplx b2 = src.beta() * src.beta();
  const double norm = std::sqrt(std::norm(a2) + std::norm(b2));
  if (norm == 0.0) throw std::invalid_argument("next_residual: degenerate source");
  return PairSource(a2 / norm, b2 / norm);
}

PairSource residual_after(const PairSource& src, int failed_rounds) {
  if (failed_rounds < 0) throw std::invalid_argument("residual_after: negative round count");
  PairSource out = src;
  for (int i = 0; i < failed_rounds; ++i) out = next_residual(out);
  return out;
}

TaggedState ghz_class_state(const PairSource& src, int parties) {
  if (parties < 1) throw std::invalid_argument("ghz_class_state: need at least one photon");
  TaggedState::AmplitudeMap m;
  m.emplace(BranchKey{BasisLabel(parties, 0), 0}, src.alpha());
  m.emplace(BranchKey{BasisLabel(parties, (std::uint64_t{1} << parties) - 1), 0}, src.beta());
  return TaggedState::unchecked(parties, std::move(m));
}

RoundResult concentrate_once(const PairSource& src, RngStream& rng) {
  return concentrate_ghz(src, 2, rng);
}

RoundResult concentrate_ghz(const PairSource& src, int parties, RngStream& rng) {
  check_parties(parties);
  return run_round(build_primary_state(src, parties), primary_shape(parties), src, rng, {});
}

RoundResult recycle_once(const PairSource& residual, RngStream& rng, Strategy strategy) {
  return ghz_recycle_once(residual, 2, rng, strategy);
}

RoundResult ghz_recycle_once(const PairSource& residual, int parties, RngStream& rng,
                             Strategy strategy) {
  check_parties(parties);
  return run_recycle(residual, parties, rng, strategy);
}

// ---------------------------------------------------------------------------
// Exact enumeration

namespace {

// Depth-first walk of the detection cascade below one kept parity branch.
void enumerate_detection(const TaggedState& state, const RoundShape& shape, int slot,
                         double probability, std::vector<MeasurementRecord>& records,
                         std::vector<BranchOutcome>& out) {
  if (slot == shape.total_slots) {
    TaggedState finished =
        optics::correct_phase(state, 0, optics::classify_sign(records));
    for (int s = shape.total_slots - 1; s >= shape.first_sacrificed; --s) {
      finished = drop_definite(finished, s);
    }
    out.push_back({probability, std::move(finished)});
    return;
  }
  const TaggedState rotated = apply_single(state, slot, optics::r45());
  for (const auto& branch : enumerate_measurement(rotated, slot, Basis::HV)) {
    records.push_back(branch.record);
    enumerate_detection(branch.collapsed, shape, slot + 1,
                        probability * branch.record.probability, records, out);
    records.pop_back();
  }
}

void enumerate_round_outputs(const TaggedState& input, const RoundShape& shape, double weight,
                             std::vector<BranchOutcome>& out) {
  for (const auto& cls :
       qnd::enumerate_parity(input, shape.qnd_i, shape.qnd_j, qnd::ParityMode::TwoClass)) {
    if (!cls.outcome.even_parity()) continue;
    std::vector<MeasurementRecord> records;
    enumerate_detection(cls.collapsed, shape, shape.first_sacrificed,
                        weight * cls.probability, records, out);
  }
}

// All (probability, reduced state) branches of measuring one residual system
// down to its retained photons.
void enumerate_reductions(const PairSource& eff, int parties,
                          std::vector<std::pair<double, TaggedState>>& out) {
  struct Walker {
    int parties;
    std::vector<std::pair<double, TaggedState>>* out;
    std::vector<MeasurementRecord> records;

    void walk(const TaggedState& state, int slot, double probability) {
      if (slot == 2 * parties) {
        TaggedState finished =
            optics::correct_phase(state, 0, optics::classify_sign(records));
        for (int s = 2 * parties - 1; s >= parties; --s) finished = drop_definite(finished, s);
        out->push_back({probability, std::move(finished)});
        return;
      }
      const TaggedState rotated = apply_single(state, slot, optics::r45());
      for (const auto& branch : enumerate_measurement(rotated, slot, Basis::HV)) {
        records.push_back(branch.record);
        walk(branch.collapsed, slot + 1, probability * branch.record.probability);
        records.pop_back();
      }
    }
  };
  Walker walker{parties, &out, {}};
  walker.walk(residual_block(eff, parties), parties, 1.0);
}

}  // namespace

std::vector<BranchOutcome> enumerate_primary_outputs(const PairSource& src, int parties) {
  check_parties(parties);
  std::vector<BranchOutcome> out;
  enumerate_round_outputs(build_primary_state(src, parties), primary_shape(parties), 1.0, out);
  return out;
}

std::vector<BranchOutcome> enumerate_recycle_outputs(const PairSource& residual, int parties,
                                                     Strategy strategy) {
  check_parties(parties);
  std::vector<BranchOutcome> out;
  if (strategy == Strategy::FullState) {
    enumerate_round_outputs(build_recycle_state(residual, parties), recycle_shape(parties), 1.0,
                            out);
    return out;
  }
  std::vector<std::pair<double, TaggedState>> first;
  enumerate_reductions(residual, parties, first);
  for (const auto& [p1, reduced1] : first) {
    for (const auto& [p2, reduced2] : first) {
      TaggedState s = tensor(reduced1, reduced2);
      for (int slot = parties; slot < 2 * parties; ++slot) {
        s = apply_single(s, slot, optics::r90());
      }
      enumerate_round_outputs(s, primary_shape(parties), p1 * p2, out);
    }
  }
  return out;
}

double enumerate_primary_success(const PairSource& src, int parties) {
  double total = 0.0;
  for (const auto& branch : enumerate_primary_outputs(src, parties)) {
    total += branch.probability;
  }
  return total;
}

double enumerate_recycle_success(const PairSource& residual, int parties, Strategy strategy) {
  double total = 0.0;
  for (const auto& branch : enumerate_recycle_outputs(residual, parties, strategy)) {
    total += branch.probability;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Sessions

SessionReport run_session(const SessionConfig& config) {
  check_parties(config.parties);
  if (config.initial_pairs < 2) {
    throw std::invalid_argument("run_session: need at least two initial source states");
  }
  if (config.max_rounds < 1) {
    throw std::invalid_argument("run_session: need at least one round");
  }

  SessionReport report;
  report.parties = config.parties;
  report.initial_pairs = config.initial_pairs;
  const TaggedState target = ghz_plus(config.parties);

  std::uint64_t trial_counter = 0;
  long carried = config.initial_pairs;  // systems available to the coming round
  for (int round = 1; round <= config.max_rounds; ++round) {
    RoundStats stats;
    stats.round = round;
    stats.discarded_leftover = carried % 2;
    stats.trials = carried / 2;
    stats.analytic_rate = analytics::p_success(round, config.source);
    if (round == 1) {
      report.pairs_consumed = 2 * stats.trials;
    } else {
      report.discarded_residuals += stats.discarded_leftover;
    }

    const PairSource round_src = residual_after(config.source, round - 1);
    long failures = 0;
    double min_fidelity = 2.0;
    for (long t = 0; t < stats.trials; ++t) {
      RngStream rng = RngStream::for_trial(config.seed, trial_counter++);
      const RoundResult result =
          round == 1 ? concentrate_ghz(config.source, config.parties, rng)
                     : ghz_recycle_once(round_src, config.parties, rng, config.strategy);
      if (result.success) {
        ++stats.successes;
        const double f = fidelity(*result.output, target);
        if (f < min_fidelity) min_fidelity = f;
      } else {
        ++failures;
      }
    }
    stats.empirical_rate =
        stats.trials > 0 ? static_cast<double>(stats.successes) / static_cast<double>(stats.trials)
                         : 0.0;
    if (stats.successes > 0) stats.min_output_fidelity = min_fidelity;
    report.maximal_pairs += stats.successes;
    report.rounds.push_back(stats);
    carried = failures;
  }

  report.empirical_yield =
      static_cast<double>(report.maximal_pairs) / static_cast<double>(report.initial_pairs);
  report.analytic_yield = analytics::yield_terms(config.max_rounds, config.source).total;
  return report;
}

}  // namespace qconc::protocol
