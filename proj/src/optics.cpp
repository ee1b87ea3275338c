#include "qconc/optics.hpp"

namespace qconc::optics {

Mat2 r90() { return {0.0, 1.0, 1.0, 0.0}; }

Mat2 r45() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }

BellSign classify_sign(std::span<const MeasurementRecord> outcomes) {
  int minus_count = 0;
  for (const auto& rec : outcomes) {
    if (rec.outcome == Outcome::Minus) ++minus_count;
  }
  return minus_count % 2 == 0 ? BellSign::Plus : BellSign::Minus;
}

TaggedState correct_phase(const TaggedState& s, int photon, BellSign sign) {
  if (photon < 0 || photon >= s.photon_count()) {
    throw std::out_of_range("correct_phase: photon index out of range");
  }
  if (sign == BellSign::Plus) return s;
  return apply_single(s, photon, Mat2{1.0, 0.0, 0.0, -1.0});
}

}  // namespace qconc::optics
