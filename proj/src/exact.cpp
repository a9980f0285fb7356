#include "geohom/exact.hpp"

#include <sstream>
#include <utility>

namespace geohom {

Int rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

bool is_perfect_square(const Int& n) {
  return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

Rat sawtooth(const Rat& x) {
  if (x.get_den() == 1) return Rat(0);
  return x - rat_floor(x) - Rat(1, 2);
}

Rat dedekind_sum(Int a, Int c) {
  if (sgn(c) <= 0) throw std::invalid_argument("dedekind_sum: c must be > 0");
  // s(ga, gc) = s(a, c), by the sawtooth distribution identity.
  Int g = gcd(a, c);
  if (g != 1) {
    a /= g;
    c /= g;
  }
  mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());  // a in [0, c)
  // Reciprocity: s(a,c) = (a^2 + c^2 + 1)/(12ac) - 1/4 - s(c mod a, a).
  Rat total(0);
  int s = 1;
  while (a != 0) {
    total += s * (make_rat(a * a + c * c + 1, 12 * a * c) - Rat(1, 4));
    s = -s;
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), a.get_mpz_t());
    c = a;
    a = r;
  }
  return total;
}

Mat::Mat(Int a, Int b, Int c, Int d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1)
    throw std::invalid_argument("Mat: determinant must be 1");
  if (sgn(c_) < 0 || (c_ == 0 && sgn(a_) < 0)) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

std::string Mat::str() const {
  std::ostringstream os;
  os << "[" << a_ << ", " << b_ << "; " << c_ << ", " << d_ << "]";
  return os.str();
}

Mat inverse(const Mat& m) { return Mat(m.d(), -m.b(), -m.c(), m.a()); }

Mat mat_pow(const Mat& m, const Int& e) {
  Mat base = sgn(e) < 0 ? inverse(m) : m;
  Int n = abs(e);
  Mat acc;
  while (n != 0) {
    if (mpz_odd_p(n.get_mpz_t())) acc = acc * base;
    n >>= 1;
    if (n != 0) base = base * base;
  }
  return acc;
}

Rat rademacher_psi(const Mat& m) {
  if (m.c() == 0) {
    // Normalized, so a = d = 1 and the matrix is T^b.
    return Rat(m.b());
  }
  // c > 0 after normalization.
  Int t = m.trace();
  Rat psi = make_rat(t, m.c());
  psi -= 12 * dedekind_sum(m.a(), m.c());
  psi -= 3 * sign(t);  // sign(c(a+d)) with c > 0; sign(0) = 0
  return psi;
}

Cusp::Cusp(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) {
    num_ = 1;
    return;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  Int g = gcd(num_, den_);
  num_ /= g;
  den_ /= g;
  if (sgn(den_) < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Rat Cusp::value() const {
  if (is_infinity()) throw std::invalid_argument("Cusp::value on infinity");
  return make_rat(num_, den_);
}

std::string Cusp::str() const {
  if (is_infinity()) return "oo";
  std::ostringstream os;
  os << num_ << "/" << den_;
  return os.str();
}

Cusp mobius_act(const Mat& m, const Cusp& x) {
  return Cusp(m.a() * x.num() + m.b() * x.den(),
              m.c() * x.num() + m.d() * x.den());
}

std::string rat_decimal(const Rat& x, int digits) {
  Int num = x.get_num(), den = x.get_den();
  bool neg = sgn(num) < 0;
  if (neg) num = -num;
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // round half away from zero
  Int q = (num * scale * 2 + den) / (2 * den);
  Int ip = q / scale, fp = q % scale;
  std::string frac = fp.get_str();
  frac.insert(0, static_cast<size_t>(digits) - frac.size(), '0');
  std::string out = (neg && (ip != 0 || fp != 0)) ? "-" : "";
  out += ip.get_str() + "." + frac;
  return out;
}

std::string rat_str(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace geohom
