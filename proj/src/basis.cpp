#include "cqedvac/basis.hpp"

#include <cmath>
#include <numeric>

#include "cqedvac/error.hpp"

namespace cqedvac {

std::string to_string(Sector s) {
  switch (s) {
    case Sector::even: return "even";
    case Sector::odd: return "odd";
    case Sector::full: return "full";
  }
  return "full";
}

Sector parse_sector(const std::string& text) {
  if (text == "even") return Sector::even;
  if (text == "odd") return Sector::odd;
  if (text == "full") return Sector::full;
  throw DomainError("unknown sector '" + text + "' (expected even, odd or full)");
}

BasisIndexer::BasisIndexer(int n_atoms, std::vector<int> cutoffs, Sector sector)
    : n_atoms_(n_atoms), cutoffs_(std::move(cutoffs)), sector_(sector) {
  if (n_atoms_ < 1 || n_atoms_ > 24) throw DomainError("basis: atom count must be in [1, 24]");
  strides_.resize(cutoffs_.size());
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    if (cutoffs_[k] < 1) throw DomainError("basis: every Fock cutoff must be >= 1");
    strides_[k] = mode_configurations_;
    mode_configurations_ *= static_cast<std::size_t>(cutoffs_[k]) + 1;
  }
  spin_block_ = std::size_t{1} << (sector_ == Sector::full ? n_atoms_ : n_atoms_ - 1);
  low_mask_ = static_cast<std::uint32_t>((std::size_t{1} << (n_atoms_ - 1)) - 1);
}

int BasisIndexer::parity(std::uint32_t spins, std::span<const int> occupations) const {
  const int down = n_atoms_ - __builtin_popcount(spins);
  const int photons = std::accumulate(occupations.begin(), occupations.end(), 0);
  return ((down + photons) & 1) ? -1 : 1;
}

bool BasisIndexer::contains(std::uint32_t spins, std::span<const int> occupations) const {
  if (occupations.size() != cutoffs_.size()) return false;
  if (spins >> n_atoms_) return false;
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] > cutoffs_[k]) return false;
  }
  switch (sector_) {
    case Sector::full: return true;
    case Sector::even: return parity(spins, occupations) == 1;
    case Sector::odd: return parity(spins, occupations) == -1;
  }
  return false;
}

std::size_t BasisIndexer::index_of(std::uint32_t spins, std::span<const int> occupations) const {
  if (!contains(spins, occupations)) throw DomainError("basis: state outside the indexed space");
  std::size_t m = 0;
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    m += strides_[k] * static_cast<std::size_t>(occupations[k]);
  }
  return m * spin_block_ + rank_of_spins(spins);
}

void BasisIndexer::decode_modes(std::size_t m, std::span<int> occupations) const {
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    const auto radix = static_cast<std::size_t>(cutoffs_[k]) + 1;
    occupations[k] = static_cast<int>(m % radix);
    m /= radix;
  }
}

unsigned BasisIndexer::required_popcount_parity(unsigned photon_parity) const {
  // Pi = (-1)^(N - popcount + photons); even sector wants Pi = +1.
  const unsigned base = (static_cast<unsigned>(n_atoms_) + photon_parity) & 1U;
  return sector_ == Sector::odd ? base ^ 1U : base;
}

BasisIndexer::State BasisIndexer::state_at(std::size_t index) const {
  if (index >= dimension()) throw DomainError("basis: index out of range");
  State s;
  s.occupations.resize(cutoffs_.size());
  const std::size_t m = index / spin_block_;
  decode_modes(m, s.occupations);
  const unsigned photons =
      static_cast<unsigned>(std::accumulate(s.occupations.begin(), s.occupations.end(), 0));
  s.spins = spins_from_rank(index % spin_block_, photons & 1U);
  return s;
}

Wavefunction::Wavefunction(BasisIndexer b, std::vector<cplx> a)
    : basis(std::move(b)), amplitudes(std::move(a)) {
  if (amplitudes.size() != basis.dimension()) {
    throw DomainError("wavefunction: amplitude count does not match basis dimension");
  }
}

double Wavefunction::norm() const {
  double acc = 0.0;
  for (const auto& x : amplitudes) acc += std::norm(x);
  return std::sqrt(acc);
}

void Wavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("wavefunction: cannot normalize");
  for (auto& x : amplitudes) x /= n;
}

cplx inner_product(const Wavefunction& a, const Wavefunction& b) {
  if (!(a.basis == b.basis)) throw DomainError("inner_product: basis mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return acc;
}

Wavefunction embed_full(const Wavefunction& v) {
  if (v.basis.sector() == Sector::full) return v;
  Wavefunction out(v.basis.unrestricted());
  std::vector<int> occ(static_cast<std::size_t>(v.basis.n_modes()));
  for (std::size_t i = 0; i < v.amplitudes.size(); ++i) {
    const auto s = v.basis.state_at(i);
    out.amplitudes[out.basis.index_of(s.spins, s.occupations)] = v.amplitudes[i];
  }
  return out;
}

}  // namespace cqedvac
