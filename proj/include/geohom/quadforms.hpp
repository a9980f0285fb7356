#pragma once

#include "geohom/exact.hpp"

#include <map>
#include <optional>
#include <vector>

namespace geohom {

// Integral binary quadratic form a x^2 + b xy + c y^2 of positive
// non-square discriminant.
struct QuadForm {
  Int a, b, c;

  Int disc() const { return b * b - 4 * a * c; }
  Int eval(const Int& x, const Int& y) const {
    return a * x * x + b * x * y + c * y * y;
  }
  bool is_primitive() const { return gcd(gcd(a, b), c) == 1; }

  friend bool operator==(const QuadForm& p, const QuadForm& q) {
    return p.a == q.a && p.b == q.b && p.c == q.c;
  }
  friend bool operator!=(const QuadForm& p, const QuadForm& q) {
    return !(p == q);
  }
  friend bool operator<(const QuadForm& p, const QuadForm& q) {
    if (p.a != q.a) return p.a < q.a;
    if (p.b != q.b) return p.b < q.b;
    return p.c < q.c;
  }

  std::string str() const;
};

// Right action by coordinate transformation: (Q o M)(x, y) = Q(ax+by, cx+dy).
// act(act(Q, M1), M2) == act(Q, M1 * M2); well defined on PSL.
QuadForm act(const QuadForm& q, const Mat& m);

// Positive fundamental discriminant (non-square).
bool is_fundamental(const Int& d);
// Fundamental discriminant of either sign; accepts 1 as the trivial one.
bool is_fundamental_signed(const Int& d);

QuadForm principal_form(const Int& d);

// Reduced in the indefinite sense: 0 < b < sqrt(d) and
// sqrt(d) - b < 2|a| < sqrt(d) + b.
bool is_reduced(const QuadForm& q);

// One step of the classical rho reduction operator, together with the
// SL2(Z) column transform carrying the form to it.
struct RhoStep {
  QuadForm form;
  Mat transform;
};
RhoStep rho_step(const QuadForm& q);

struct ReduceResult {
  QuadForm form;     // reduced
  Mat transform;     // q o transform == form
};
ReduceResult reduce(const QuadForm& q);

// The full rho-cycle starting at a reduced form (closed under rho).
std::vector<QuadForm> reduced_cycle(const QuadForm& reduced);

bool equivalent(const QuadForm& q1, const QuadForm& q2);

// Representative of the product class (concordant forms method), reduced.
QuadForm compose(const QuadForm& q1, const QuadForm& q2);

inline QuadForm form_inverse(const QuadForm& q) { return {q.a, -q.b, q.c}; }

// A proper-equivalence class of forms: the rho-cycle plus its
// lexicographically least member as fingerprint.
struct FormClass {
  QuadForm fingerprint;
  std::vector<QuadForm> cycle;

  friend bool operator==(const FormClass& x, const FormClass& y) {
    return x.fingerprint == y.fingerprint;
  }
};
FormClass form_class(const QuadForm& q);

// Narrow class group of a (positive, fundamental) discriminant, realized
// as the form class group under proper equivalence.  Index 0 is the
// identity (class of the principal form).
struct NarrowClassGroup {
  Int d;
  std::vector<FormClass> classes;
  std::vector<std::vector<int>> table;  // table[i][j] = index of product

  int h_plus() const { return static_cast<int>(classes.size()); }
  int index_of(const QuadForm& q) const;  // class index of any form of disc d
  int compose_idx(int i, int j) const { return table[i][j]; }
  int inverse_idx(int i) const;

 private:
  // reduced form -> class index, filled at construction
  std::map<QuadForm, int> lookup_;
  friend NarrowClassGroup narrow_class_group(const Int& d);
};
NarrowClassGroup narrow_class_group(const Int& d);

// Minimal solution of u^2 - d v^2 = 1 in positive half-integers,
// stored in doubled coordinates (u = u2/2, v = v2/2).
struct PellUnit {
  Int u2, v2;
};
PellUnit pell_plus(const Int& d);

// Whether x^2 - d y^2 = -4 has a (half-)integer solution, i.e. whether the
// fundamental unit has norm -1.  Decided by trying to extract a square root
// of the minimal norm-one unit.
bool has_norm_minus_one_unit(const Int& d);

// Class of the different (sqrt(d)): the principal class with reversed
// orientation, i.e. the class of (-1, b0, (d - b0^2)/4).
int j_class_index(const NarrowClassGroup& group);
FormClass j_class(const Int& d);

// Genus character attached to a factorization d = d1 * d2 into fundamental
// discriminants (d1 = 1 gives the trivial character).
struct GenusCharacter {
  Int d1, d2;
  bool is_trivial() const { return d1 == 1 || d2 == 1; }
};
// All 2^(t-1) characters, trivial one first, then ordered by |d1|.
std::vector<GenusCharacter> genus_characters(const Int& d);

// Character value on the class of q: kronecker(d1, m) for the smallest
// positive value m represented by q with gcd(m, 2d) = 1.
int genus_value(const QuadForm& q, const GenusCharacter& chi);

// Values on the nontrivial characters, in genus_characters order.
std::vector<int> genus_signature(const QuadForm& q);
bool in_principal_genus(const QuadForm& q);

// Smallest positive represented value coprime to the modulus, with the
// SL2(Z) transform whose action gives it as leading coefficient.
struct Represented {
  Int value;
  Mat transform;
};
Represented represent_coprime(const QuadForm& q, const Int& modulus);

// Smallest r >= 0 with r^2 = d mod 4p and r = d mod 2, or nothing when p
// is inert.  Throws for p | d (ramified).
std::optional<Int> sqrt_mod_4p(const Int& d, const Int& p);

// Norm form (p, r, (r^2-d)/(4p)) of the prime ideal over p.
QuadForm p_ideal_form(const Int& d, const Int& p, const Int& r);

// The automorph (u+bv, 2cv; -2av, u-bv) of a level-p form, PSL-normalized.
Mat gamma_Q(const QuadForm& q, const Int& p);

// Level-p class structure: one representative per narrow class label.
// The label of a level-p form is the proper class of its p-dilation
// (a/p, b, cp); this is the orientation convention pinned by the Hecke
// genus identity at (d, p) = (92, 11).
struct LevelPClass {
  int label;      // index into the narrow class group
  QuadForm rep;   // level-p form: p | a, b = r mod 2p
};
std::vector<LevelPClass> level_p_classes(const NarrowClassGroup& group,
                                         const Int& p, const Int& r);
// Label of an arbitrary level-p form (validated against p and r).
int level_p_label(const NarrowClassGroup& group, const Int& p, const Int& r,
                  const QuadForm& q);

// All fundamental d <= limit with: p split, no norm -1 unit, and the class
// over p outside the principal genus.
std::vector<Int> discriminant_family(const Int& p, const Int& limit);

Int isqrt(const Int& n);

}  // namespace geohom
