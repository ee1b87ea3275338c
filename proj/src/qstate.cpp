#include "qconc/qstate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qconc {

namespace {

constexpr double kProbFloor = kPruneThreshold * kPruneThreshold;

// Basis-change matrix for X-basis readout, |±x⟩ ↦ |H/V⟩. Self-inverse.
Mat2 hadamard() {
  return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
}

}  // namespace

char to_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }
char to_char(Outcome o) { return o == Outcome::Plus ? '+' : '-'; }

// ---------------------------------------------------------------------------
// BasisLabel

BasisLabel::BasisLabel(int photon_count, std::uint64_t bits) : count_(photon_count), bits_(bits) {
  if (photon_count < 0 || photon_count > 63) {
    throw std::invalid_argument("BasisLabel: photon count out of range");
  }
  if (photon_count < 64 && (bits >> photon_count) != 0) {
    throw std::invalid_argument("BasisLabel: bits exceed photon count");
  }
}

BasisLabel BasisLabel::parse(std::string_view pattern) {
  std::uint64_t bits = 0;
  int i = 0;
  for (char c : pattern) {
    if (c == 'V' || c == 'v') {
      bits |= std::uint64_t{1} << i;
    } else if (c != 'H' && c != 'h') {
      throw std::invalid_argument("BasisLabel: pattern must contain only H and V");
    }
    ++i;
  }
  return BasisLabel(i, bits);
}

void BasisLabel::check_slot(int slot) const {
  if (slot < 0 || slot >= count_) throw std::out_of_range("BasisLabel: slot out of range");
}

Pol BasisLabel::pol(int slot) const {
  check_slot(slot);
  return (bits_ >> slot) & 1 ? Pol::V : Pol::H;
}

BasisLabel BasisLabel::with_pol(int slot, Pol p) const {
  check_slot(slot);
  std::uint64_t bits = bits_;
  if (p == Pol::V) {
    bits |= std::uint64_t{1} << slot;
  } else {
    bits &= ~(std::uint64_t{1} << slot);
  }
  return BasisLabel(count_, bits);
}

BasisLabel BasisLabel::erased(int slot) const {
  check_slot(slot);
  const std::uint64_t low = bits_ & ((std::uint64_t{1} << slot) - 1);
  const std::uint64_t high = (bits_ >> (slot + 1)) << slot;
  return BasisLabel(count_ - 1, low | high);
}

BasisLabel BasisLabel::concat(const BasisLabel& rhs) const {
  if (count_ + rhs.count_ > 63) {
    throw std::invalid_argument("BasisLabel: combined photon count too large");
  }
  return BasisLabel(count_ + rhs.count_, bits_ | (rhs.bits_ << count_));
}

std::string BasisLabel::to_string() const {
  std::string s(static_cast<std::size_t>(count_), 'H');
  for (int i = 0; i < count_; ++i) {
    if ((bits_ >> i) & 1) s[static_cast<std::size_t>(i)] = 'V';
  }
  return s;
}

// ---------------------------------------------------------------------------
// PairSource

PairSource::PairSource(Cplx alpha, Cplx beta) : alpha_(alpha), beta_(beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > kEpsNorm) {
    throw std::invalid_argument("PairSource: |alpha|^2 + |beta|^2 must be 1");
  }
}

PairSource PairSource::from_alpha(double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("PairSource: alpha must lie in [0, 1]");
  }
  return PairSource(alpha, std::sqrt(1.0 - alpha * alpha));
}

// ---------------------------------------------------------------------------
// Mat2

bool Mat2::is_unitary(double eps) const {
  // u * u^dagger == I
  const Cplx a = m00 * std::conj(m00) + m01 * std::conj(m01);
  const Cplx b = m00 * std::conj(m10) + m01 * std::conj(m11);
  const Cplx c = m10 * std::conj(m00) + m11 * std::conj(m01);
  const Cplx d = m10 * std::conj(m10) + m11 * std::conj(m11);
  return std::abs(a - 1.0) <= eps && std::abs(b) <= eps && std::abs(c) <= eps &&
         std::abs(d - 1.0) <= eps;
}

// ---------------------------------------------------------------------------
// TaggedState

TaggedState::TaggedState(int photon_count, AmplitudeMap branches)
    : photon_count_(photon_count), branches_(std::move(branches)) {
  for (auto it = branches_.begin(); it != branches_.end();) {
    if (std::abs(it->second) < kPruneThreshold) {
      it = branches_.erase(it);
    } else {
      ++it;
    }
  }
}

TaggedState TaggedState::unchecked(int photon_count, AmplitudeMap branches) {
  return TaggedState(photon_count, std::move(branches));
}

TaggedState TaggedState::scalar() {
  AmplitudeMap m;
  m.emplace(BranchKey{BasisLabel(0, 0), 0}, Cplx{1.0, 0.0});
  return TaggedState(0, std::move(m));
}

TaggedState TaggedState::basis(const BasisLabel& label) {
  AmplitudeMap m;
  m.emplace(BranchKey{label, 0}, Cplx{1.0, 0.0});
  return TaggedState(label.size(), std::move(m));
}

TaggedState TaggedState::from_kets(std::string_view pattern) {
  return basis(BasisLabel::parse(pattern));
}

TaggedState TaggedState::from_terms(
    std::initializer_list<std::pair<std::string_view, Cplx>> terms) {
  if (terms.size() == 0) throw std::invalid_argument("from_terms: no terms");
  AmplitudeMap m;
  int count = -1;
  for (const auto& [pattern, amp] : terms) {
    BasisLabel label = BasisLabel::parse(pattern);
    if (count < 0) count = label.size();
    if (label.size() != count) {
      throw std::invalid_argument("from_terms: patterns of unequal length");
    }
    m[BranchKey{label, 0}] += amp;
  }
  TaggedState s(count, std::move(m));
  if (std::abs(s.norm_sq() - 1.0) > kEpsNorm) {
    throw std::invalid_argument("from_terms: amplitudes are not normalized");
  }
  return s;
}

Cplx TaggedState::amplitude(const BasisLabel& label, int tag) const {
  auto it = branches_.find(BranchKey{label, tag});
  return it == branches_.end() ? Cplx{0.0, 0.0} : it->second;
}

double TaggedState::norm_sq() const {
  double n = 0.0;
  for (const auto& [key, amp] : branches_) n += std::norm(amp);
  return n;
}

bool TaggedState::all_tags_zero() const {
  for (const auto& [key, amp] : branches_) {
    if (key.tag != 0) return false;
  }
  return true;
}

std::string TaggedState::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, amp] : branches_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << amp.real() << (amp.imag() < 0 ? "-" : "+") << std::abs(amp.imag()) << "i)|"
        << key.label.to_string() << ">";
    if (key.tag != 0) out << "@" << key.tag;
  }
  if (first) out << "0";
  return out.str();
}

// ---------------------------------------------------------------------------
// Operations

TaggedState from_pair(const PairSource& src) {
  TaggedState::AmplitudeMap m;
  m.emplace(BranchKey{BasisLabel::parse("HH"), 0}, src.alpha());
  m.emplace(BranchKey{BasisLabel::parse("VV"), 0}, src.beta());
  return TaggedState(2, std::move(m));
}

TaggedState tensor(const TaggedState& s, const TaggedState& t) {
  TaggedState::AmplitudeMap m;
  for (const auto& [ks, as] : s.branches_) {
    for (const auto& [kt, at] : t.branches_) {
      m[BranchKey{ks.label.concat(kt.label), ks.tag + kt.tag}] += as * at;
    }
  }
  return TaggedState(s.photon_count_ + t.photon_count_, std::move(m));
}

TaggedState apply_single(const TaggedState& s, int photon, const Mat2& u) {
  if (photon < 0 || photon >= s.photon_count_) {
    throw std::out_of_range("apply_single: photon index out of range");
  }
  if (!u.is_unitary()) {
    throw std::invalid_argument("apply_single: matrix is not unitary");
  }
  TaggedState::AmplitudeMap m;
  for (const auto& [key, amp] : s.branches_) {
    const bool is_v = key.label.pol(photon) == Pol::V;
    const Cplx to_h = is_v ? u.m01 : u.m00;
    const Cplx to_v = is_v ? u.m11 : u.m10;
    if (to_h != 0.0) m[BranchKey{key.label.with_pol(photon, Pol::H), key.tag}] += to_h * amp;
    if (to_v != 0.0) m[BranchKey{key.label.with_pol(photon, Pol::V), key.tag}] += to_v * amp;
  }
  return TaggedState(s.photon_count_, std::move(m));
}

namespace {

// HV-basis outcome split: probability of each polarization and the
// renormalized collapsed map for a chosen polarization.
double hv_probability(const TaggedState& s, int photon, Pol pol) {
  double p = 0.0;
  for (const auto& [key, amp] : s.branches()) {
    if (key.label.pol(photon) == pol) p += std::norm(amp);
  }
  return p;
}

TaggedState hv_collapse(const TaggedState& s, int photon, Pol pol, double probability) {
  TaggedState::AmplitudeMap m;
  const double scale = 1.0 / std::sqrt(probability);
  for (const auto& [key, amp] : s.branches()) {
    if (key.label.pol(photon) == pol) m.emplace(key, amp * scale);
  }
  return TaggedState::unchecked(s.photon_count(), std::move(m));
}

}  // namespace

std::vector<MeasurementBranch> enumerate_measurement(const TaggedState& s, int photon,
                                                     Basis basis) {
  if (photon < 0 || photon >= s.photon_count()) {
    throw std::out_of_range("enumerate_measurement: photon index out of range");
  }
  const TaggedState* working = &s;
  TaggedState rotated = TaggedState::scalar();
  if (basis == Basis::X) {
    rotated = apply_single(s, photon, hadamard());
    working = &rotated;
  }
  std::vector<MeasurementBranch> out;
  for (Outcome outcome : {Outcome::Plus, Outcome::Minus}) {
    const Pol pol = outcome == Outcome::Plus ? Pol::H : Pol::V;
    const double p = hv_probability(*working, photon, pol);
    if (p <= kProbFloor) continue;
    TaggedState collapsed = hv_collapse(*working, photon, pol, p);
    if (basis == Basis::X) collapsed = apply_single(collapsed, photon, hadamard());
    out.push_back({MeasurementRecord{photon, basis, outcome, p}, std::move(collapsed)});
  }
  return out;
}

std::pair<MeasurementRecord, TaggedState> measure(const TaggedState& s, int photon, Basis basis,
                                                  RngStream& rng) {
  auto branches = enumerate_measurement(s, photon, basis);
  std::vector<double> probs;
  probs.reserve(branches.size());
  for (const auto& b : branches) probs.push_back(b.record.probability);
  auto& picked = branches[rng.pick(probs)];
  return {picked.record, std::move(picked.collapsed)};
}

double fidelity(const TaggedState& s, const TaggedState& t) {
  if (s.photon_count() != t.photon_count()) {
    throw std::invalid_argument("fidelity: photon counts differ");
  }
  if (!s.all_tags_zero() || !t.all_tags_zero()) {
    throw std::invalid_argument("fidelity: states carry unread probe tags");
  }
  Cplx overlap{0.0, 0.0};
  for (const auto& [key, amp] : s.branches()) {
    overlap += std::conj(amp) * t.amplitude(key.label, key.tag);
  }
  return std::norm(overlap);
}

TaggedState drop_definite(const TaggedState& s, int photon) {
  if (photon < 0 || photon >= s.photon_count()) {
    throw std::out_of_range("drop_definite: photon index out of range");
  }
  if (s.branches().empty()) throw std::invalid_argument("drop_definite: empty state");
  const Pol pol = s.branches().begin()->first.label.pol(photon);
  TaggedState::AmplitudeMap m;
  for (const auto& [key, amp] : s.branches()) {
    if (key.label.pol(photon) != pol) {
      throw std::invalid_argument("drop_definite: slot is not in a definite polarization");
    }
    m.emplace(BranchKey{key.label.erased(photon), key.tag}, amp);
  }
  return TaggedState::unchecked(s.photon_count() - 1, std::move(m));
}

TaggedState bell_plus() { return ghz_plus(2); }
TaggedState bell_minus() { return ghz_minus(2); }

TaggedState ghz_plus(int photon_count) {
  if (photon_count < 1) throw std::invalid_argument("ghz_plus: need at least one photon");
  TaggedState::AmplitudeMap m;
  m.emplace(BranchKey{BasisLabel(photon_count, 0), 0}, Cplx{kInvSqrt2, 0.0});
  m.emplace(BranchKey{BasisLabel(photon_count, (std::uint64_t{1} << photon_count) - 1), 0},
            Cplx{kInvSqrt2, 0.0});
  return TaggedState::unchecked(photon_count, std::move(m));
}

TaggedState ghz_minus(int photon_count) {
  if (photon_count < 1) throw std::invalid_argument("ghz_minus: need at least one photon");
  TaggedState::AmplitudeMap m;
  m.emplace(BranchKey{BasisLabel(photon_count, 0), 0}, Cplx{kInvSqrt2, 0.0});
  m.emplace(BranchKey{BasisLabel(photon_count, (std::uint64_t{1} << photon_count) - 1), 0},
            Cplx{-kInvSqrt2, 0.0});
  return TaggedState::unchecked(photon_count, std::move(m));
}

}  // namespace qconc
