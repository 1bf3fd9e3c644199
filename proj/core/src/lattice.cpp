#include "flatband/lattice.hpp"

#include <gmpxx.h>

#include <ostream>
#include <sstream>

#include "flatband/error.hpp"

namespace flatband {

namespace {

void require_same_rank(const LatticeVector& a, const LatticeVector& b) {
  if (a.rank() != b.rank()) {
    throw Error(ErrorKind::RankMismatch,
                "shift ranks " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()));
  }
}

using IntRow = std::vector<mpz_class>;

void axpy(IntRow& target, const mpz_class& factor, const IntRow& source) {
  for (std::size_t k = 0; k < target.size(); ++k) target[k] -= factor * source[k];
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

bool LatticeVector::is_zero() const {
  for (auto x : c_) {
    if (x != 0) return false;
  }
  return true;
}

std::int64_t LatticeVector::norm2() const {
  std::int64_t s = 0;
  for (auto x : c_) s += x * x;
  return s;
}

LatticeVector LatticeVector::operator-() const {
  LatticeVector out(*this);
  for (auto& x : out.c_) x = -x;
  return out;
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& o) {
  require_same_rank(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& o) {
  require_same_rank(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

std::string LatticeVector::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LatticeVector& v) {
  os << '(';
  for (std::size_t k = 0; k < v.rank(); ++k) {
    if (k) os << ',';
    os << v[k];
  }
  return os << ')';
}

std::vector<LatticeVector> hermite_basis(std::span<const LatticeVector> generators, std::size_t rank) {
  std::vector<IntRow> rows;
  for (const auto& g : generators) {
    if (g.rank() != rank) {
      throw Error(ErrorKind::RankMismatch, "generator " + g.to_string() + " has wrong rank");
    }
    if (g.is_zero()) continue;
    IntRow row(rank);
    for (std::size_t k = 0; k < rank; ++k) row[k] = static_cast<long>(g[k]);
    rows.push_back(std::move(row));
  }

  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < rank && pivot_row < rows.size(); ++col) {
    // Euclid on the column until a single nonzero entry remains at pivot_row.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = pivot_row; i < rows.size(); ++i) {
        if (sgn(rows[i][col]) == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool reduced = true;
      for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
        if (sgn(rows[i][col]) == 0) continue;
        mpz_class q = floor_div(rows[i][col], rows[pivot_row][col]);
        axpy(rows[i], q, rows[pivot_row]);
        if (sgn(rows[i][col]) != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (sgn(rows[pivot_row][col]) == 0) continue;
    if (sgn(rows[pivot_row][col]) < 0) {
      for (auto& x : rows[pivot_row]) x = -x;
    }
    for (std::size_t i = 0; i < pivot_row; ++i) {
      mpz_class q = floor_div(rows[i][col], rows[pivot_row][col]);
      if (sgn(q) != 0) axpy(rows[i], q, rows[pivot_row]);
    }
    ++pivot_row;
  }

  std::vector<LatticeVector> out;
  for (std::size_t i = 0; i < pivot_row; ++i) {
    LatticeVector v(rank);
    for (std::size_t k = 0; k < rank; ++k) {
      if (!rows[i][k].fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "lattice entry overflow");
      v[k] = rows[i][k].get_si();
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::int64_t lattice_index(std::span<const LatticeVector> hermite, std::size_t rank) {
  if (hermite.size() < rank) return 0;
  std::int64_t index = 1;
  std::size_t col = 0;
  for (const auto& row : hermite) {
    while (col < rank && row[col] == 0) ++col;
    if (col == rank) return 0;
    index *= row[col];
    ++col;
  }
  return index;
}

}  // namespace flatband
