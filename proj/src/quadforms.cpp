#include "geohom/quadforms.hpp"

#include <algorithm>
#include <sstream>

namespace geohom {

std::string QuadForm::str() const {
  std::ostringstream os;
  os << "(" << a << ", " << b << ", " << c << ")";
  return os.str();
}

QuadForm act(const QuadForm& q, const Mat& m) {
  const Int &al = m.a(), &be = m.b(), &ga = m.c(), &de = m.d();
  Int a2 = q.eval(al, ga);
  Int c2 = q.eval(be, de);
  Int b2 = 2 * q.a * al * be + q.b * (al * de + be * ga) + 2 * q.c * ga * de;
  return {a2, b2, c2};
}

Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

bool squarefree(Int n) {
  n = abs(n);
  if (n == 0) return false;
  for (Int f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      n /= f;
      if (n % f == 0) return false;
    }
  }
  return true;
}

}  // namespace

bool is_fundamental(const Int& d) {
  return sgn(d) > 0 && !is_perfect_square(d) && is_fundamental_signed(d);
}

bool is_fundamental_signed(const Int& d) {
  if (d == 1) return true;
  if (d == 0) return false;
  Int m4;
  mpz_fdiv_r_ui(m4.get_mpz_t(), d.get_mpz_t(), 4);
  if (m4 == 1) return squarefree(d);
  if (m4 != 0) return false;
  Int q = d / 4;
  mpz_fdiv_r_ui(m4.get_mpz_t(), q.get_mpz_t(), 4);
  return (m4 == 2 || m4 == 3) && squarefree(q);
}

QuadForm principal_form(const Int& d) {
  Int b0 = abs(d % 2);
  return {Int(1), b0, (b0 * b0 - d) / 4};
}

bool is_reduced(const QuadForm& q) {
  Int d = q.disc();
  if (sgn(d) <= 0 || is_perfect_square(d)) return false;
  if (sgn(q.b) <= 0) return false;
  if (q.b * q.b >= d) return false;  // b < sqrt(d)
  Int t = 2 * abs(q.a);
  // sqrt(d) - b < 2|a|  <=>  (2|a| + b)^2 > d
  Int s = t + q.b;
  if (s * s <= d) return false;
  // 2|a| < sqrt(d) + b  <=>  2|a| - b < sqrt(d)
  s = t - q.b;
  return sgn(s) <= 0 || s * s < d;
}

RhoStep rho_step(const QuadForm& q) {
  Int d = q.disc();
  if (sgn(d) <= 0 || is_perfect_square(d))
    throw std::invalid_argument("rho_step: discriminant must be positive non-square");
  if (q.c == 0) throw std::invalid_argument("rho_step: degenerate form");
  Int s = isqrt(d);
  Int ac = abs(q.c), t = 2 * ac;
  // unique r = -b mod 2|c| in the window: (-|c|, |c|] if |c| > sqrt(d),
  // else (sqrt(d) - 2|c|, sqrt(d)).
  Int lo = (ac > s) ? Int(1 - ac) : Int(s + 1 - t);
  // least r >= lo with r = -b (mod t)
  Int r = -q.b;
  Int k;
  mpz_cdiv_q(k.get_mpz_t(), Int(lo - r).get_mpz_t(), t.get_mpz_t());
  r += k * t;
  Int c2 = (r * r - d) / (4 * q.c);
  Int m = (q.b + r) / (2 * q.c);
  return {{q.c, r, c2}, Mat(0, -1, 1, m)};
}

ReduceResult reduce(const QuadForm& q) {
  Int d = q.disc();
  if (sgn(d) <= 0 || is_perfect_square(d))
    throw std::invalid_argument("reduce: discriminant must be positive non-square");
  QuadForm f = q;
  Mat m;
  long guard = 0;
  while (!is_reduced(f)) {
    RhoStep st = rho_step(f);
    f = st.form;
    m = m * st.transform;
    if (++guard > 100000) throw defect_error("reduce: no convergence");
  }
  return {f, m};
}

std::vector<QuadForm> reduced_cycle(const QuadForm& reduced) {
  if (!is_reduced(reduced))
    throw std::invalid_argument("reduced_cycle: form not reduced");
  std::vector<QuadForm> cycle{reduced};
  QuadForm f = rho_step(reduced).form;
  long guard = 0;
  while (f != reduced) {
    cycle.push_back(f);
    f = rho_step(f).form;
    if (++guard > 1000000) throw defect_error("reduced_cycle: no return");
  }
  return cycle;
}

bool equivalent(const QuadForm& q1, const QuadForm& q2) {
  if (q1.disc() != q2.disc())
    throw std::invalid_argument("equivalent: mismatched discriminants");
  QuadForm r1 = reduce(q1).form, r2 = reduce(q2).form;
  for (const QuadForm& f : reduced_cycle(r1))
    if (f == r2) return true;
  return false;
}

Represented represent_coprime(const QuadForm& q, const Int& modulus) {
  Int mod = abs(modulus);
  for (Int bound = 1;; bound *= 2) {
    Int best = 0;
    Int bx = 0, by = 0;
    for (Int x = -bound; x <= bound; ++x) {
      for (Int y = -bound; y <= bound; ++y) {
        if (gcd(x, y) != 1) continue;
        Int v = q.eval(x, y);
        if (sgn(v) <= 0) continue;
        if (mod != 0 && gcd(v, mod) != 1) continue;
        if (best == 0 || v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    if (best != 0) {
      // extend the primitive column (bx, by) to an SL2(Z) matrix
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), bx.get_mpz_t(),
                 by.get_mpz_t());
      // s*bx + t*by = 1, so (bx, -t; by, s) has determinant 1
      return {best, Mat(bx, -t, by, s)};
    }
    if (bound > 4096)
      throw defect_error("represent_coprime: search exhausted");
  }
}

namespace {

// x = r1 mod m1, x = r2 mod m2 (moduli positive, gcd | r2 - r1);
// returns the least nonnegative solution mod lcm.
Int crt(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(),
             m2.get_mpz_t());
  Int diff = r2 - r1;
  if (diff % g != 0) throw defect_error("crt: incompatible congruences");
  Int l = m1 / g * m2;
  Int x = r1 + m1 * (s * (diff / g));
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), l.get_mpz_t());
  return x;
}

}  // namespace

QuadForm compose(const QuadForm& q1, const QuadForm& q2) {
  Int d = q1.disc();
  if (d != q2.disc())
    throw std::invalid_argument("compose: mismatched discriminants");
  if (!q1.is_primitive() || !q2.is_primitive())
    throw std::invalid_argument("compose: forms must be primitive");
  // replace q2 by an equivalent form whose leading coefficient is coprime
  // to a1, then align middle coefficients by CRT
  Represented rep = represent_coprime(q2, q1.a);
  QuadForm g2 = act(q2, rep.transform);
  if (g2.a != rep.value) throw defect_error("compose: transform mismatch");
  Int a1 = q1.a, a2 = g2.a;
  Int B = crt(q1.b, 2 * abs(a1), g2.b, 2 * a2);
  Int a12 = a1 * a2;
  Int num = B * B - d;
  if (num % (4 * a12) != 0) throw defect_error("compose: alignment failed");
  QuadForm prod{a12, B, num / (4 * a12)};
  return reduce(prod).form;
}

FormClass form_class(const QuadForm& q) {
  std::vector<QuadForm> cycle = reduced_cycle(reduce(q).form);
  QuadForm least = *std::min_element(cycle.begin(), cycle.end());
  return {least, cycle};
}

int NarrowClassGroup::index_of(const QuadForm& q) const {
  if (q.disc() != d)
    throw std::invalid_argument("index_of: discriminant mismatch");
  QuadForm r = reduce(q).form;
  auto it = lookup_.find(r);
  if (it == lookup_.end()) throw defect_error("index_of: unknown reduced form");
  return it->second;
}

int NarrowClassGroup::inverse_idx(int i) const {
  return index_of(form_inverse(classes[static_cast<size_t>(i)].fingerprint));
}

NarrowClassGroup narrow_class_group(const Int& d) {
  if (!is_fundamental(d))
    throw std::invalid_argument("narrow_class_group: d not fundamental");
  NarrowClassGroup g;
  g.d = d;
  Int s = isqrt(d);
  // enumerate all reduced forms: 0 < b <= s, b = d mod 2, ac = (b^2-d)/4
  std::vector<QuadForm> all;
  for (Int b = abs(d % 2) == 1 ? 1 : 2; b <= s; b += 2) {
    Int n = (d - b * b) / 4;  // = -a*c > 0
    for (Int a = 1; a * a <= n; ++a) {
      if (n % a != 0) continue;
      Int c = n / a;
      const QuadForm candidates[4] = {{a, b, -c}, {-a, b, c}, {c, b, -a}, {-c, b, a}};
      for (const QuadForm& f : candidates)
        if (is_reduced(f) && f.is_primitive()) all.push_back(f);
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  // identity class first, remaining cycles by fingerprint order
  FormClass identity = form_class(principal_form(d));
  g.classes.push_back(identity);
  for (const QuadForm& f : identity.cycle) g.lookup_[f] = 0;
  for (const QuadForm& f : all) {
    if (g.lookup_.count(f)) continue;
    FormClass cls = form_class(f);
    int idx = static_cast<int>(g.classes.size());
    for (const QuadForm& h : cls.cycle) g.lookup_[h] = idx;
    g.classes.push_back(cls);
  }

  int h = g.h_plus();
  g.table.assign(static_cast<size_t>(h), std::vector<int>(static_cast<size_t>(h)));
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      QuadForm prod = compose(g.classes[static_cast<size_t>(i)].fingerprint,
                              g.classes[static_cast<size_t>(j)].fingerprint);
      g.table[static_cast<size_t>(i)][static_cast<size_t>(j)] = g.index_of(prod);
    }
  return g;
}

PellUnit pell_plus(const Int& d) {
  if (!is_fundamental(d))
    throw std::invalid_argument("pell_plus: d not fundamental");
  // walk the principal cycle once; the accumulated transform is the
  // fundamental automorph, i.e. the minimal norm-one unit
  QuadForm r0 = reduce(principal_form(d)).form;
  Mat m;
  QuadForm f = r0;
  long guard = 0;
  do {
    RhoStep st = rho_step(f);
    f = st.form;
    m = m * st.transform;
    if (++guard > 1000000) throw defect_error("pell_plus: cycle does not close");
  } while (f != r0);
  Int u2 = abs(m.trace());
  if (m.b() % r0.c != 0) throw defect_error("pell_plus: automorph shape");
  Int v2 = abs(m.b() / r0.c);
  if (u2 * u2 - d * v2 * v2 != 4)
    throw defect_error("pell_plus: not a Pell solution");
  return {u2, v2};
}

bool has_norm_minus_one_unit(const Int& d) {
  // the norm-one unit is the square of a norm -4 solution iff u2 - 2 and
  // (u2 + 2)/d are perfect squares with matching product
  PellUnit p = pell_plus(d);
  Int x2 = p.u2 - 2;
  if (!is_perfect_square(x2)) return false;
  if ((p.u2 + 2) % d != 0) return false;
  Int y2 = (p.u2 + 2) / d;
  if (!is_perfect_square(y2)) return false;
  return isqrt(x2) * isqrt(y2) == p.v2;
}

int j_class_index(const NarrowClassGroup& group) {
  Int b0 = abs(group.d % 2);
  QuadForm j{Int(-1), b0, (group.d - b0 * b0) / 4};
  return group.index_of(j);
}

FormClass j_class(const Int& d) {
  Int b0 = abs(d % 2);
  return form_class({Int(-1), b0, (d - b0 * b0) / 4});
}

std::vector<GenusCharacter> genus_characters(const Int& d) {
  if (!is_fundamental(d))
    throw std::invalid_argument("genus_characters: d not fundamental");
  std::vector<GenusCharacter> out;
  for (Int e = 1; e * e <= d; ++e) {
    if (d % e != 0) continue;
    const Int halves[2] = {e, Int(d / e)};
    for (const Int& d1 : halves) {
      Int d2 = d / d1;
      for (int sg : {1, -1}) {
        Int f1 = sg * d1, f2 = sg * d2;
        if (!is_fundamental_signed(f1) || !is_fundamental_signed(f2)) continue;
        GenusCharacter chi =
            abs(f1) <= abs(f2) ? GenusCharacter{f1, f2} : GenusCharacter{f2, f1};
        bool seen = false;
        for (const auto& c : out)
          if (c.d1 == chi.d1 && c.d2 == chi.d2) seen = true;
        if (!seen) out.push_back(chi);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.is_trivial() != y.is_trivial()) return x.is_trivial();
    if (abs(x.d1) != abs(y.d1)) return abs(x.d1) < abs(y.d1);
    return x.d1 < y.d1;
  });
  return out;
}

int genus_value(const QuadForm& q, const GenusCharacter& chi) {
  if (chi.is_trivial()) return 1;
  Int m = represent_coprime(q, 2 * q.disc()).value;
  int v = kronecker(chi.d1, m);
  if (v == 0) throw defect_error("genus_value: non-coprime representative");
  return v;
}

std::vector<int> genus_signature(const QuadForm& q) {
  std::vector<int> sig;
  for (const GenusCharacter& chi : genus_characters(q.disc()))
    if (!chi.is_trivial()) sig.push_back(genus_value(q, chi));
  return sig;
}

bool in_principal_genus(const QuadForm& q) {
  for (int v : genus_signature(q))
    if (v != 1) return false;
  return true;
}

std::optional<Int> sqrt_mod_4p(const Int& d, const Int& p) {
  if (d % p == 0) throw std::invalid_argument("sqrt_mod_4p: ramified level");
  Int fourp = 4 * p;
  for (Int r = abs(d % 2); r < 2 * p; r += 2) {
    Int t = r * r - d;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), fourp.get_mpz_t());
    if (t == 0) return r;
  }
  return std::nullopt;
}

QuadForm p_ideal_form(const Int& d, const Int& p, const Int& r) {
  Int num = r * r - d;
  if (num % (4 * p) != 0)
    throw std::invalid_argument("p_ideal_form: r^2 != d mod 4p");
  return {p, r, num / (4 * p)};
}

Mat gamma_Q(const QuadForm& q, const Int& p) {
  if (q.a % p != 0)
    throw std::invalid_argument("gamma_Q: level condition violated (p does not divide a)");
  Int d = q.disc();
  PellUnit u = pell_plus(d);
  Int bv = q.b * u.v2;
  if ((u.u2 + bv) % 2 != 0) throw defect_error("gamma_Q: parity");
  return Mat((u.u2 + bv) / 2, q.c * u.v2, -q.a * u.v2, (u.u2 - bv) / 2);
}

namespace {

QuadForm dilate(const QuadForm& q, const Int& p) {
  if (q.a % p != 0) throw std::invalid_argument("dilate: p does not divide a");
  return {q.a / p, q.b, q.c * p};
}

}  // namespace

std::vector<LevelPClass> level_p_classes(const NarrowClassGroup& group,
                                         const Int& p, const Int& r) {
  if ((r * r - group.d) % (4 * p) != 0)
    throw std::invalid_argument("level_p_classes: invalid residue r");
  std::vector<LevelPClass> out;
  for (int k = 0; k < group.h_plus(); ++k) {
    const QuadForm& g = group.classes[static_cast<size_t>(k)].fingerprint;
    Represented rep = represent_coprime(g, p);
    QuadForm g2 = act(g, rep.transform);
    // b = g2.b mod 2 g2.a, b = r mod 2p, then lift the leading coefficient
    Int B = crt(g2.b, 2 * g2.a, r, 2 * p);
    Int num = B * B - group.d;
    if (num % (4 * g2.a * p) != 0) throw defect_error("level_p_classes: lift");
    QuadForm q{g2.a * p, B, num / (4 * g2.a * p)};
    if (group.index_of(dilate(q, p)) != k)
      throw defect_error("level_p_classes: label mismatch");
    out.push_back({k, q});
  }
  return out;
}

int level_p_label(const NarrowClassGroup& group, const Int& p, const Int& r,
                  const QuadForm& q) {
  if (q.disc() != group.d)
    throw std::invalid_argument("level_p_label: discriminant mismatch");
  if (q.a % p != 0 || (q.b - r) % (2 * p) != 0)
    throw std::invalid_argument("level_p_label: not a level-p form for this r");
  return group.index_of(dilate(q, p));
}

std::vector<Int> discriminant_family(const Int& p, const Int& limit) {
  std::vector<Int> out;
  for (Int d = 5; d <= limit; ++d) {
    if (!is_fundamental(d)) continue;
    if (kronecker(d, p) != 1) continue;  // p must split
    if (has_norm_minus_one_unit(d)) continue;
    auto r = sqrt_mod_4p(d, p);
    if (!r) throw defect_error("discriminant_family: split prime without root");
    if (in_principal_genus(p_ideal_form(d, p, *r))) continue;
    out.push_back(d);
  }
  return out;
}

}  // namespace geohom
