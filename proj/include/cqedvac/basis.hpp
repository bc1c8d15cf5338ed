#pragma once

// Truncated spin (x) multimode Fock space. Packing: spin bits occupy the low
// part of the index (bit j set = atom j in its excited level |1>, sigma_z =
// +1), mode occupations sit above in mixed radix, mode 1 fastest.
//
// Parity Pi = (prod_j sigma_z,j) (-1)^(sum_k n_k). A parity sector keeps
// exactly half of the spin states for every photon configuration: the top
// spin bit is fixed by the other bits, so index arithmetic stays O(1).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cqedvac {

using cplx = std::complex<double>;

enum class Sector { even, odd, full };

std::string to_string(Sector s);
Sector parse_sector(const std::string& text);

class BasisIndexer {
 public:
  BasisIndexer(int n_atoms, std::vector<int> cutoffs, Sector sector = Sector::full);

  int n_atoms() const { return n_atoms_; }
  int n_modes() const { return static_cast<int>(cutoffs_.size()); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  Sector sector() const { return sector_; }

  std::size_t dimension() const { return mode_configurations_ * spin_block_; }
  std::size_t mode_configurations() const { return mode_configurations_; }
  /// Spin states stored per photon configuration (2^N, or 2^(N-1) in a sector).
  std::size_t spin_block() const { return spin_block_; }
  std::size_t mode_stride(int k) const { return strides_[static_cast<std::size_t>(k)]; }

  /// +1 or -1.
  int parity(std::uint32_t spins, std::span<const int> occupations) const;
  bool contains(std::uint32_t spins, std::span<const int> occupations) const;

  /// Throws DomainError when the state lies outside the truncation or sector.
  std::size_t index_of(std::uint32_t spins, std::span<const int> occupations) const;

  struct State {
    std::uint32_t spins = 0;
    std::vector<int> occupations;
  };
  State state_at(std::size_t index) const;

  /// Occupations of photon configuration m (mixed radix decode).
  void decode_modes(std::size_t m, std::span<int> occupations) const;

  /// Required popcount parity (0/1) of the spin bits for a photon
  /// configuration with total occupation parity `photon_parity`. Only
  /// meaningful inside a sector.
  unsigned required_popcount_parity(unsigned photon_parity) const;

  /// Spin bits of rank r within a block of the given total photon parity.
  std::uint32_t spins_from_rank(std::size_t rank, unsigned photon_parity) const {
    if (sector_ == Sector::full) return static_cast<std::uint32_t>(rank);
    const auto low = static_cast<std::uint32_t>(rank);
    const unsigned want = required_popcount_parity(photon_parity);
    const unsigned top = (static_cast<unsigned>(__builtin_popcount(low)) ^ want) & 1U;
    return low | (top << (n_atoms_ - 1));
  }

  std::size_t rank_of_spins(std::uint32_t spins) const {
    return sector_ == Sector::full ? spins : (spins & low_mask_);
  }

  friend bool operator==(const BasisIndexer& a, const BasisIndexer& b) {
    return a.n_atoms_ == b.n_atoms_ && a.cutoffs_ == b.cutoffs_ && a.sector_ == b.sector_;
  }

  /// The same truncation without the sector restriction.
  BasisIndexer unrestricted() const { return BasisIndexer(n_atoms_, cutoffs_, Sector::full); }

 private:
  int n_atoms_;
  std::vector<int> cutoffs_;
  Sector sector_;
  std::vector<std::size_t> strides_;
  std::size_t mode_configurations_ = 1;
  std::size_t spin_block_ = 1;
  std::uint32_t low_mask_ = 0;
};

struct Wavefunction {
  BasisIndexer basis;
  std::vector<cplx> amplitudes;

  explicit Wavefunction(BasisIndexer b) : basis(std::move(b)), amplitudes(basis.dimension()) {}
  Wavefunction(BasisIndexer b, std::vector<cplx> a);

  double norm() const;
  /// Throws DomainError for a zero or non-finite vector.
  void normalize();
};

cplx inner_product(const Wavefunction& a, const Wavefunction& b);

/// Embeds a sector state into the unrestricted space of the same truncation.
Wavefunction embed_full(const Wavefunction& v);

}  // namespace cqedvac
