#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace geohom {

using Int = mpz_class;
using Rat = mpq_class;

// Internal invariant broken on valid input: a bug in this library, not a
// caller error.
struct defect_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline int sign(const Int& x) { return sgn(x); }
inline int sign(const Rat& x) { return sgn(x); }

inline Rat make_rat(Int num, Int den) {
  Rat q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

// floor of an exact rational
Int rat_floor(const Rat& x);

bool is_perfect_square(const Int& n);

// Kronecker symbol (a/n), the fully multiplicative extension of Jacobi.
int kronecker(const Int& a, const Int& n);

// Sawtooth ((x)) = x - floor(x) - 1/2 for x not an integer, 0 otherwise.
Rat sawtooth(const Rat& x);

// Classical Dedekind sum s(a,c) = sum_{n=1}^{c} ((n/c))((na/c)), c > 0.
// Evaluated through the reciprocity recursion, O(log c) arithmetic steps.
Rat dedekind_sum(Int a, Int c);

// An element of PSL2(Z).  Entries are kept sign-normalized (c > 0, or
// c == 0 and a > 0) so that equality of PSL elements is plain field
// comparison.  Construction rejects matrices of determinant != 1.
class Mat {
 public:
  Mat() : a_(1), b_(0), c_(0), d_(1) {}
  Mat(Int a, Int b, Int c, Int d);

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  const Int& d() const { return d_; }

  Int trace() const { return a_ + d_; }
  bool is_identity() const { return c_ == 0 && b_ == 0; }

  friend Mat operator*(const Mat& x, const Mat& y) {
    return Mat(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
               x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_);
  }
  friend bool operator==(const Mat& x, const Mat& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  std::string str() const;

 private:
  Int a_, b_, c_, d_;
};

inline Mat psl_normalize(Int a, Int b, Int c, Int d) {
  return Mat(std::move(a), std::move(b), std::move(c), std::move(d));
}

Mat inverse(const Mat& m);
Mat mat_pow(const Mat& m, const Int& e);

inline Mat mat_T() { return Mat(1, 1, 0, 1); }
inline Mat mat_T_pow(const Int& e) { return Mat(1, e, 0, 1); }

// Rademacher symbol Psi.  Well defined on PSL2(Z) (the class handles the
// sign normalization); integer valued on group elements, returned exactly.
// Convention: sign(0) = 0 in the 3*sign(c(a+d)) term.
Rat rademacher_psi(const Mat& m);

// A cusp: reduced fraction num/den with den >= 0; infinity is 1/0.
class Cusp {
 public:
  Cusp() : num_(1), den_(0) {}  // infinity
  Cusp(Int num, Int den);

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_infinity() const { return den_ == 0; }
  Rat value() const;  // finite cusps only

  friend bool operator==(const Cusp& x, const Cusp& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Cusp& x, const Cusp& y) { return !(x == y); }

  std::string str() const;

 private:
  Int num_, den_;
};

// (a x + b) / (c x + d) on cusps; a group action of PSL2(Z).
Cusp mobius_act(const Mat& m, const Cusp& x);

// Decimal rendering with a fixed number of digits after the point
// (round half away from zero); deterministic.
std::string rat_decimal(const Rat& x, int digits);

std::string rat_str(const Rat& x);  // always "num/den"

}  // namespace geohom
