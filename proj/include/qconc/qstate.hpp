// Exact pure-state algebra for n polarization photons.
//
// States are sparse superpositions over computational basis kets |H/V...⟩.
// Each branch additionally carries an integer probe tag: the bookkeeping for
// accumulated cross-Kerr phase shifts on a shared coherent probe, counted in
// units of the per-photon shift. Tags are written by the QND layer and
// consumed (reset to zero) by its homodyne readout; the physical magnitude of
// the shift never enters the math here.
//
// All values are immutable: every operation returns a new state, so branch
// enumeration and parallel trials can share states freely.

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qconc/rng.hpp"

namespace qconc {

using Cplx = std::complex<double>;

/// Tolerance for normalization invariants (state and source norms).
inline constexpr double kEpsNorm = 1e-9;
/// Tolerance for exact-math assertions (enumeration sums, fidelities).
inline constexpr double kEpsExact = 1e-12;
/// Branches with |amplitude| below this are dropped. Keeps maps free of
/// numerical dust so branch counts stay exact at protocol scale.
inline constexpr double kPruneThreshold = 1e-15;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

enum class Pol : std::uint8_t { H = 0, V = 1 };
enum class Basis : std::uint8_t { HV, X };
/// Measurement outcome. HV basis: plus ≡ H, minus ≡ V.
/// X basis: plus ≡ |+x⟩ = (|H⟩+|V⟩)/√2, minus ≡ |−x⟩ = (|H⟩−|V⟩)/√2.
enum class Outcome : std::uint8_t { Plus, Minus };

/// Polarization pattern of one basis ket, one entry per photon slot.
/// Packed as a bit per slot (V = 1), slot 0 in the lowest bit.
class BasisLabel {
 public:
  BasisLabel() : count_(0), bits_(0) {}
  BasisLabel(int photon_count, std::uint64_t bits);

  /// Parses a pattern such as "HVH"; character i names slot i.
  static BasisLabel parse(std::string_view pattern);

  int size() const { return count_; }
  Pol pol(int slot) const;
  BasisLabel with_pol(int slot, Pol p) const;
  /// Label with slot `slot` removed and higher slots shifted down.
  BasisLabel erased(int slot) const;
  /// This label's slots followed by `rhs`'s.
  BasisLabel concat(const BasisLabel& rhs) const;

  std::uint64_t bits() const { return bits_; }
  std::string to_string() const;

  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;

 private:
  void check_slot(int slot) const;

  int count_;
  std::uint64_t bits_;
};

/// Branch key: basis pattern plus the accumulated probe tag.
struct BranchKey {
  BasisLabel label;
  int tag = 0;

  friend auto operator<=>(const BranchKey&, const BranchKey&) = default;
};

/// Coefficients (α, β) of a partially entangled source α|H…H⟩ + β|V…V⟩.
/// Requires |α|² + |β|² = 1 within kEpsNorm.
class PairSource {
 public:
  PairSource(Cplx alpha, Cplx beta);

  Cplx alpha() const { return alpha_; }
  Cplx beta() const { return beta_; }

  /// Real-coefficient source with β = √(1 − α²); requires α ∈ [0, 1].
  static PairSource from_alpha(double alpha);

 private:
  Cplx alpha_;
  Cplx beta_;
};

struct MeasurementRecord {
  int photon_index = 0;
  Basis basis = Basis::HV;
  Outcome outcome = Outcome::Plus;
  double probability = 0.0;  // Born probability of this outcome
};

/// 2×2 complex matrix acting on one polarization slot, rows/cols in (H, V)
/// order: |H⟩ ↦ m00|H⟩ + m10|V⟩.
struct Mat2 {
  Cplx m00, m01, m10, m11;

  bool is_unitary(double eps = 1e-12) const;
  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// Pure state over photon_count polarization slots with per-branch tags.
///
/// Invariants: Σ|amplitude|² = 1 within kEpsNorm; no stored branch has
/// |amplitude| < kPruneThreshold; freshly created states and post-readout
/// states have tag 0 everywhere.
class TaggedState {
 public:
  using AmplitudeMap = std::map<BranchKey, Cplx>;

  /// The empty-photon identity state (photon_count 0, amplitude 1).
  static TaggedState scalar();
  /// Single basis ket |pattern⟩, tag 0.
  static TaggedState basis(const BasisLabel& label);
  /// Single basis ket from a pattern string, e.g. "HV" → |HV⟩.
  static TaggedState from_kets(std::string_view pattern);
  /// Normalized superposition of tag-0 kets. All patterns must have equal
  /// length; amplitudes must be normalized within kEpsNorm.
  static TaggedState from_terms(std::initializer_list<std::pair<std::string_view, Cplx>> terms);

  int photon_count() const { return photon_count_; }
  const AmplitudeMap& branches() const { return branches_; }
  std::size_t branch_count() const { return branches_.size(); }

  /// Amplitude of (label, tag), zero when absent.
  Cplx amplitude(const BasisLabel& label, int tag = 0) const;
  double norm_sq() const;
  bool all_tags_zero() const;

  std::string to_string() const;

  friend TaggedState from_pair(const PairSource& src);
  friend TaggedState tensor(const TaggedState& s, const TaggedState& t);
  friend TaggedState apply_single(const TaggedState& s, int photon, const Mat2& u);
  friend TaggedState drop_definite(const TaggedState& s, int photon);

  /// Unchecked constructor for internal use by the operation layer; prunes
  /// dust but does not renormalize.
  static TaggedState unchecked(int photon_count, AmplitudeMap branches);

 private:
  TaggedState(int photon_count, AmplitudeMap branches);

  int photon_count_;
  AmplitudeMap branches_;
};

/// The 2-photon source state α|HH⟩ + β|VV⟩, all tags 0.
TaggedState from_pair(const PairSource& src);

/// Tensor product. Slots of `t` follow the slots of `s`; amplitudes multiply
/// and tags add.
TaggedState tensor(const TaggedState& s, const TaggedState& t);

/// Applies a 2×2 unitary to one slot in every branch.
/// Throws std::out_of_range for a bad index, std::invalid_argument when `u`
/// is not unitary within 1e-12.
TaggedState apply_single(const TaggedState& s, int photon, const Mat2& u);

struct MeasurementBranch {
  MeasurementRecord record;
  TaggedState collapsed;  // renormalized, measured slot retained
};

/// All realizable outcomes of measuring one photon, with exact Born
/// probabilities and renormalized collapsed states. Probabilities sum to 1
/// within kEpsExact. Plus is listed before minus.
std::vector<MeasurementBranch> enumerate_measurement(const TaggedState& s, int photon, Basis basis);

/// Samples one measurement outcome with its Born probability.
std::pair<MeasurementRecord, TaggedState> measure(const TaggedState& s, int photon, Basis basis,
                                                  RngStream& rng);

/// |⟨s|t⟩|². Requires equal photon counts and all tags zero in both states.
double fidelity(const TaggedState& s, const TaggedState& t);

/// Removes a slot whose polarization is the same in every branch (as it is
/// after an HV readout of that photon). Throws std::invalid_argument when the
/// slot is still in superposition or entangled.
TaggedState drop_definite(const TaggedState& s, int photon);

/// Canonical maximally entangled targets.
TaggedState bell_plus();                // (|HH⟩ + |VV⟩)/√2
TaggedState bell_minus();               // (|HH⟩ − |VV⟩)/√2
TaggedState ghz_plus(int photon_count);   // (|H…H⟩ + |V…V⟩)/√2
TaggedState ghz_minus(int photon_count);  // (|H…H⟩ − |V…V⟩)/√2

char to_char(Pol p);
char to_char(Outcome o);

}  // namespace qconc
