#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flatband {

/// A shift in Z^d. All binary operations require equal rank.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t rank) : c_(rank, 0) {}
  LatticeVector(std::initializer_list<std::int64_t> components) : c_(components) {}
  explicit LatticeVector(std::vector<std::int64_t> components) : c_(std::move(components)) {}

  std::size_t rank() const noexcept { return c_.size(); }
  std::int64_t operator[](std::size_t k) const { return c_[k]; }
  std::int64_t& operator[](std::size_t k) { return c_[k]; }
  const std::vector<std::int64_t>& components() const noexcept { return c_; }

  bool is_zero() const;
  std::int64_t norm2() const;

  LatticeVector operator-() const;
  LatticeVector& operator+=(const LatticeVector& o);
  LatticeVector& operator-=(const LatticeVector& o);
  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend auto operator<=>(const LatticeVector& a, const LatticeVector& b) { return a.c_ <=> b.c_; }

  std::string to_string() const;

 private:
  std::vector<std::int64_t> c_;
};

std::ostream& operator<<(std::ostream& os, const LatticeVector& v);

/// Row-style Hermite normal form of the subgroup of Z^d generated by
/// `generators`: returns its nonzero rows, upper triangular with positive
/// pivots and entries above each pivot reduced into [0, pivot).
std::vector<LatticeVector> hermite_basis(std::span<const LatticeVector> generators, std::size_t rank);

/// Index [Z^d : L] of the lattice spanned by a Hermite basis, or 0 when the
/// basis has rank below d.
std::int64_t lattice_index(std::span<const LatticeVector> hermite, std::size_t rank);

}  // namespace flatband
