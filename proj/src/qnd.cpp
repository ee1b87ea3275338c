#include "qconc/qnd.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qconc::qnd {

namespace {

constexpr double kProbFloor = kPruneThreshold * kPruneThreshold;

}  // namespace

const char* to_string(ParityClass cls) {
  switch (cls) {
    case ParityClass::Shift1: return "shift1";
    case ParityClass::Shift2: return "shift2";
    case ParityClass::Shift0: return "shift0";
    case ParityClass::ShiftPi: return "shift-pi";
    case ParityClass::NoShift: return "no-shift";
  }
  return "?";
}

TaggedState kerr_tag(const TaggedState& s, int photon, Pol pol) {
  if (photon < 0 || photon >= s.photon_count()) {
    throw std::out_of_range("kerr_tag: photon index out of range");
  }
  TaggedState::AmplitudeMap m;
  for (const auto& [key, amp] : s.branches()) {
    const int tag = key.label.pol(photon) == pol ? key.tag + 1 : key.tag;
    m.emplace(BranchKey{key.label, tag}, amp);
  }
  return TaggedState::unchecked(s.photon_count(), std::move(m));
}

std::vector<ParityBranch> enumerate_parity(const TaggedState& s, int i, int j, ParityMode mode) {
  if (i == j) throw std::invalid_argument("enumerate_parity: slots must differ");
  if (i < 0 || i >= s.photon_count() || j < 0 || j >= s.photon_count()) {
    throw std::out_of_range("enumerate_parity: photon index out of range");
  }
  if (!s.all_tags_zero()) {
    throw std::invalid_argument("enumerate_parity: entry state carries unread tags");
  }

  const TaggedState tagged = kerr_tag(kerr_tag(s, i, Pol::H), j, Pol::V);

  // Entry tags are zero and exactly two passes happen, so tags are 0, 1 or 2.
  std::array<double, 3> prob{0.0, 0.0, 0.0};
  for (const auto& [key, amp] : tagged.branches()) {
    prob[static_cast<std::size_t>(key.tag)] += std::norm(amp);
  }

  struct ClassSpec {
    ParityClass cls;
    bool tags[3];  // which tag values fall in this class
  };
  std::vector<ClassSpec> classes;
  if (mode == ParityMode::ThreeClass) {
    classes = {{ParityClass::Shift1, {false, true, false}},
               {ParityClass::Shift2, {false, false, true}},
               {ParityClass::Shift0, {true, false, false}}};
  } else {
    classes = {{ParityClass::ShiftPi, {false, true, false}},
               {ParityClass::NoShift, {true, false, true}}};
  }

  std::vector<ParityBranch> out;
  for (const auto& spec : classes) {
    double p = 0.0;
    for (int t = 0; t < 3; ++t) {
      if (spec.tags[t]) p += prob[static_cast<std::size_t>(t)];
    }
    if (p <= kProbFloor) continue;
    const double scale = 1.0 / std::sqrt(p);
    TaggedState::AmplitudeMap m;
    for (const auto& [key, amp] : tagged.branches()) {
      if (!spec.tags[key.tag]) continue;
      m[BranchKey{key.label, 0}] += amp * scale;  // readout consumes the tag
    }
    out.push_back(
        {ParityOutcome{mode, spec.cls}, p, TaggedState::unchecked(s.photon_count(), std::move(m))});
  }
  return out;
}

std::pair<ParityOutcome, TaggedState> parity_check(const TaggedState& s, int i, int j,
                                                   ParityMode mode, RngStream& rng) {
  auto branches = enumerate_parity(s, i, j, mode);
  std::vector<double> probs;
  probs.reserve(branches.size());
  for (const auto& b : branches) probs.push_back(b.probability);
  auto& picked = branches[rng.pick(probs)];
  return {picked.outcome, std::move(picked.collapsed)};
}

}  // namespace qconc::qnd
