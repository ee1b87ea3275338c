// Two-photon polarization parity QND: cross-Kerr probe tagging plus ideal
// homodyne readout.
//
// Passing photons i and j through the device tags every branch once for an H
// at slot i and once for a V at slot j, so the probe accumulates
//   |H_i H_j⟩, |V_i V_j⟩ → one unit,  |H_i V_j⟩ → two units,  |V_i H_j⟩ → none.
// The even-parity subspace is the *shifted* class, so "two photons present,
// same parity" is distinguishable from an empty device: a vacuum mode would
// leave the probe unshifted.
//
// Readout modes:
//   ThreeClass — the three shift classes are separately distinguishable.
//   TwoClass   — the per-photon shift equals π, so two units and zero units
//                are the same probe phase; only tag parity is read out. This
//                is the mode that keeps the discarded branch coherent for
//                recycling.
//
// Readout is ideal: classes are perfectly distinguishable discrete outcomes,
// and tags reset to zero afterwards (a fresh probe per use). The probe's
// physical parameters (coherent amplitude, χ, interaction time) play no
// computational role under this model and are deliberately not represented.

#pragma once

#include <utility>
#include <vector>

#include "qconc/qstate.hpp"

namespace qconc::qnd {

enum class ParityMode { ThreeClass, TwoClass };

enum class ParityClass {
  Shift1,   // one unit: even polarization parity {|HH⟩, |VV⟩}
  Shift2,   // two units: |HV⟩
  Shift0,   // no shift: |VH⟩
  ShiftPi,  // odd tag at θ=π: even polarization parity
  NoShift,  // even tag at θ=π: odd polarization parity
};

struct ParityOutcome {
  ParityMode mode = ParityMode::ThreeClass;
  ParityClass cls = ParityClass::Shift0;

  /// True for the classes that project onto span{|HH⟩, |VV⟩} at the checked
  /// slots (Shift1 / ShiftPi) — the "keep" signal of the protocol.
  bool even_parity() const { return cls == ParityClass::Shift1 || cls == ParityClass::ShiftPi; }

  friend bool operator==(const ParityOutcome&, const ParityOutcome&) = default;
};

const char* to_string(ParityClass cls);

/// One pass of a photon through a Kerr medium gated on `pol`: every branch
/// whose slot `photon` holds `pol` gets its tag incremented. Amplitudes are
/// untouched.
TaggedState kerr_tag(const TaggedState& s, int photon, Pol pol);

struct ParityBranch {
  ParityOutcome outcome;
  double probability;
  TaggedState collapsed;  // renormalized, tags reset to 0
};

/// Tags slots i (on H) and j (on V), then groups branches by tag class.
/// Returns each nonempty class with its exact probability and collapsed
/// state; probabilities sum to 1 within kEpsExact.
/// Requires i ≠ j, valid indices, and all tags zero on entry.
std::vector<ParityBranch> enumerate_parity(const TaggedState& s, int i, int j, ParityMode mode);

/// Samples one readout class with its Born probability.
std::pair<ParityOutcome, TaggedState> parity_check(const TaggedState& s, int i, int j,
                                                   ParityMode mode, RngStream& rng);

}  // namespace qconc::qnd
