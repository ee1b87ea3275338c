// Named optical elements and detector-coincidence classification.
//
// The physical detection stage (PBS fan-out onto detector pairs) is modeled
// as: rotate the sacrificed photons by 45°, read them out in the HV basis,
// then classify the outcome list by minus-count parity. This reproduces the
// detector coincidence table without tracking spatial modes.

#pragma once

#include <span>

#include "qconc/qstate.hpp"

namespace qconc::optics {

/// Which maximally entangled family a post-selected run landed in.
enum class BellSign { Plus, Minus };

/// Half-wave plate: |H⟩ ↔ |V⟩.
Mat2 r90();

/// Quarter-wave plate rotation by 45°: |H⟩ → (|H⟩+|V⟩)/√2,
/// |V⟩ → (|H⟩−|V⟩)/√2. Involution.
Mat2 r45();

/// Parity of minus outcomes over the sacrificed photons: even → Plus
/// (φ⁺/GHZ⁺ family), odd → Minus. The empty list counts as even.
/// Equivalent to the pairwise antiparallel-count rule for two parties and to
/// the even-number-of-V rule for GHZ outputs.
BellSign classify_sign(std::span<const MeasurementRecord> outcomes);

/// Applies diag(1, −1) to one photon when sign is Minus (maps the φ⁻/GHZ⁻
/// family onto φ⁺/GHZ⁺); identity when Plus.
TaggedState correct_phase(const TaggedState& s, int photon, BellSign sign);

}  // namespace qconc::optics
