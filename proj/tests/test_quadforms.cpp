#include "doctest.h"

#include "geohom/exact.hpp"
#include "geohom/quadforms.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace geohom;

namespace {

std::mt19937_64 rng(7151823);

long rand_long(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Mat random_gamma0(long p) {
  Mat m = mat_T_pow(Int(rand_long(-4, 4)));
  for (int i = 0; i < 3; ++i) {
    m = m * Mat(1, 0, Int(p) * rand_long(-3, 3), 1);
    m = m * mat_T_pow(Int(rand_long(-4, 4)));
  }
  return m;
}

// fundamental discriminant of Q(sqrt(v)) for non-square v > 0
Int fundamental_of(Int v) {
  Int s = 1;
  for (Int f = 2; f * f <= v; ++f)
    while (v % (f * f) == 0) v /= f * f;
  s = v;
  Int m4;
  mpz_fdiv_r_ui(m4.get_mpz_t(), s.get_mpz_t(), 4);
  return m4 == 1 ? s : 4 * s;
}

}  // namespace

TEST_CASE("fundamental discriminants") {
  CHECK(is_fundamental(Int(92)));
  CHECK(!is_fundamental(Int(45)));
  CHECK(is_fundamental(Int(5)));
  CHECK(!is_fundamental(Int(4)));   // square
  CHECK(!is_fundamental(Int(20)));  // 20/4 = 5 = 1 mod 4
  CHECK(is_fundamental(Int(12)));
  CHECK(!is_fundamental(Int(13 * 13)));
  CHECK(is_fundamental_signed(Int(-4)));
  CHECK(is_fundamental_signed(Int(-23)));
  CHECK(!is_fundamental_signed(Int(-1)));
  CHECK(is_fundamental_signed(Int(1)));
}

TEST_CASE("reduction") {
  QuadForm q{1, 8, -7};
  CHECK(q.disc() == 92);
  CHECK(is_reduced(q));
  ReduceResult r = reduce(q);
  CHECK(r.form == q);
  CHECK(r.transform == Mat());

  QuadForm q2{11, -20, 7};
  ReduceResult r2 = reduce(q2);
  CHECK(is_reduced(r2.form));
  CHECK(act(q2, r2.transform) == r2.form);
  // idempotence of the reduced fixed point
  CHECK(reduce(r2.form).form == r2.form);

  // transform tracks the action for random starts
  for (int i = 0; i < 50; ++i) {
    QuadForm s = act(q, random_gamma0(1 + rand_long(1, 5)));
    ReduceResult rr = reduce(s);
    CHECK(is_reduced(rr.form));
    CHECK(act(s, rr.transform) == rr.form);
  }
}

TEST_CASE("proper equivalence") {
  QuadForm q{1, 8, -7};
  CHECK(equivalent(q, rho_step(q).form));
  CHECK(!equivalent(QuadForm{1, 8, -7}, QuadForm{11, 2, -2}));
  for (int i = 0; i < 30; ++i)
    CHECK(equivalent(q, act(q, random_gamma0(3))));
  CHECK_THROWS_AS(equivalent(q, principal_form(Int(12))), std::invalid_argument);
}

TEST_CASE("composition laws") {
  Int d(92);
  QuadForm pr = principal_form(d);
  QuadForm j{-1, 0, 23};
  CHECK(equivalent(compose(pr, j), j));
  CHECK(equivalent(compose(j, j), pr));  // h+ = 2 forces order 2
  CHECK(equivalent(compose(j, form_inverse(j)), pr));
  for (const Int& dd : {Int(40), Int(60), Int(316)}) {
    NarrowClassGroup g = narrow_class_group(dd);
    for (int i = 0; i < g.h_plus(); ++i) {
      const QuadForm& f = g.classes[static_cast<size_t>(i)].fingerprint;
      CHECK(g.index_of(compose(principal_form(dd), f)) == i);
      CHECK(g.compose_idx(i, g.inverse_idx(i)) == 0);
    }
  }
}

TEST_CASE("narrow class groups, small examples") {
  CHECK(narrow_class_group(Int(92)).h_plus() == 2);
  CHECK(narrow_class_group(Int(5)).h_plus() == 1);
  CHECK(narrow_class_group(Int(12)).h_plus() == 2);
  CHECK(narrow_class_group(Int(60)).h_plus() == 4);
}

TEST_CASE("pell units") {
  PellUnit p92 = pell_plus(Int(92));
  CHECK(p92.u2 == 48);
  CHECK(p92.v2 == 5);
  PellUnit p5 = pell_plus(Int(5));
  CHECK(p5.u2 == 3);
  CHECK(p5.v2 == 1);
  PellUnit p8 = pell_plus(Int(8));
  CHECK(p8.u2 == 6);
  CHECK(p8.v2 == 2);
}

TEST_CASE("pell minimality vs brute force, fundamental d < 500") {
  const Int cap(200000);
  for (Int d = 5; d < 500; ++d) {
    if (!is_fundamental(d)) continue;
    PellUnit u = pell_plus(d);
    CHECK(u.u2 * u.u2 - d * u.v2 * u.v2 == 4);
    CHECK(sgn(u.u2) > 0);
    CHECK(sgn(u.v2) > 0);
    // parity constraint of half-integer coordinates
    CHECK((u.u2 - u.v2 * (d % 2)) % 2 == 0);
    Int limit = u.v2 - 1 < cap ? u.v2 - 1 : cap;
    for (Int w = 1; w <= limit; ++w)
      CHECK(!is_perfect_square(4 + d * w * w));
  }
}

TEST_CASE("norm minus one units") {
  CHECK(has_norm_minus_one_unit(Int(5)));
  CHECK(!has_norm_minus_one_unit(Int(92)));
  CHECK(has_norm_minus_one_unit(Int(8)));
  CHECK(has_norm_minus_one_unit(Int(13)));
  CHECK(!has_norm_minus_one_unit(Int(12)));
}

TEST_CASE("j class vs norm minus one unit, fundamental d < 2000") {
  for (Int d = 5; d < 2000; ++d) {
    if (!is_fundamental(d)) continue;
    NarrowClassGroup g = narrow_class_group(d);
    bool j_trivial = j_class_index(g) == 0;
    CHECK(j_trivial == has_norm_minus_one_unit(d));
  }
}

TEST_CASE("genus characters") {
  auto to_set = [](const std::vector<GenusCharacter>& v) {
    std::set<std::set<std::string>> s;
    for (const auto& c : v) s.insert({c.d1.get_str(), c.d2.get_str()});
    return s;
  };
  auto g92 = genus_characters(Int(92));
  CHECK(g92.size() == 2);
  CHECK(to_set(g92) ==
        std::set<std::set<std::string>>{{"1", "92"}, {"-4", "-23"}});
  auto g12 = genus_characters(Int(12));
  CHECK(to_set(g12) ==
        std::set<std::set<std::string>>{{"1", "12"}, {"-4", "-3"}});
  for (const Int& d : {Int(5), Int(13), Int(29)}) {  // prime, 1 mod 4
    auto g = genus_characters(d);
    CHECK(g.size() == 1);
    CHECK(g[0].is_trivial());
  }
}

TEST_CASE("genus signatures") {
  CHECK(genus_signature(principal_form(Int(92))) == std::vector<int>{1});
  CHECK(genus_signature(QuadForm{11, 2, -2}) == std::vector<int>{-1});
  CHECK(genus_signature(QuadForm{11, -20, 7}) == std::vector<int>{-1});
  // constant on cycles, multiplicative under composition
  for (const Int& d : {Int(92), Int(60), Int(316), Int(1157)}) {
    NarrowClassGroup g = narrow_class_group(d);
    for (int i = 0; i < g.h_plus(); ++i) {
      auto sig = genus_signature(g.classes[static_cast<size_t>(i)].fingerprint);
      for (const QuadForm& f : g.classes[static_cast<size_t>(i)].cycle)
        CHECK(genus_signature(f) == sig);
      for (int j = 0; j < g.h_plus(); ++j) {
        auto sj = genus_signature(g.classes[static_cast<size_t>(j)].fingerprint);
        auto sp = genus_signature(
            g.classes[static_cast<size_t>(g.compose_idx(i, j))].fingerprint);
        for (size_t k = 0; k < sig.size(); ++k) CHECK(sp[k] == sig[k] * sj[k]);
      }
    }
  }
}

TEST_CASE("class group axioms and genus index, fundamental d < 5000") {
  for (Int d = 5; d < 5000; ++d) {
    if (!is_fundamental(d)) continue;
    NarrowClassGroup g = narrow_class_group(d);
    int h = g.h_plus();
    // identity and inverses
    for (int i = 0; i < h; ++i) {
      CHECK(g.compose_idx(0, i) == i);
      CHECK(g.compose_idx(i, 0) == i);
      CHECK(g.compose_idx(i, g.inverse_idx(i)) == 0);
    }
    // commutativity and cancellation (rows are permutations)
    for (int i = 0; i < h; ++i) {
      std::set<int> row;
      for (int j = 0; j < h; ++j) {
        CHECK(g.compose_idx(i, j) == g.compose_idx(j, i));
        row.insert(g.compose_idx(i, j));
      }
      CHECK(static_cast<int>(row.size()) == h);
    }
    // associativity on all triples for small groups
    if (h <= 16)
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
          for (int k = 0; k < h; ++k)
            CHECK(g.compose_idx(g.compose_idx(i, j), k) ==
                  g.compose_idx(i, g.compose_idx(j, k)));
    // principal genus has index 2^(t-1)
    size_t t1 = genus_characters(d).size();  // == 2^(t-1)
    std::set<std::vector<int>> sigs;
    size_t all_ones = 0;
    for (const FormClass& cls : g.classes) {
      auto s = genus_signature(cls.fingerprint);
      sigs.insert(s);
      if (std::all_of(s.begin(), s.end(), [](int v) { return v == 1; }))
        ++all_ones;
    }
    CHECK(sigs.size() == t1);
    CHECK(all_ones * t1 == static_cast<size_t>(h));
  }
}

TEST_CASE("sqrt mod 4p") {
  CHECK(sqrt_mod_4p(Int(92), Int(11)) == Int(2));
  CHECK(!sqrt_mod_4p(Int(12), Int(7)).has_value());
  CHECK(sqrt_mod_4p(Int(92), Int(7)) == Int(6));
  CHECK_THROWS_AS(sqrt_mod_4p(Int(92), Int(23)), std::invalid_argument);
}

TEST_CASE("p ideal form") {
  QuadForm f = p_ideal_form(Int(92), Int(11), Int(2));
  CHECK(f == QuadForm{11, 2, -2});
  CHECK(equivalent(f, j_class(Int(92)).fingerprint));
  QuadForm f2 = p_ideal_form(Int(12), Int(11), Int(10));
  CHECK(f2 == QuadForm{11, 10, 2});
}

TEST_CASE("gamma_Q") {
  Mat gI = gamma_Q(QuadForm{11, -20, 7}, Int(11));
  CHECK(gI == Mat(26, -35, 55, -74));
  CHECK(gamma_Q(QuadForm{-11, 20, -7}, Int(11)) == inverse(gI));
  CHECK(gamma_Q(QuadForm{11, 2, -2}, Int(11)) == Mat(29, -10, -55, 19));
  CHECK_THROWS_AS(gamma_Q(QuadForm{1, 8, -7}, Int(11)), std::invalid_argument);

  // fixes the roots of Q: fixed-point polynomial proportional to (a, b, c)
  for (const Int& d : {Int(92), Int(12), Int(316)}) {
    auto r = sqrt_mod_4p(d, Int(11));
    if (!r) continue;
    QuadForm q = p_ideal_form(d, Int(11), *r);
    Mat m = gamma_Q(q, Int(11));
    Int fa = m.c(), fb = m.d() - m.a(), fc = -m.b();
    CHECK(fa * q.b == fb * q.a);
    CHECK(fa * q.c == fc * q.a);
    CHECK(fb * q.c == fc * q.b);
  }

  // conjugation equivariance under the coordinate action
  QuadForm q{11, -20, 7};
  for (int i = 0; i < 20; ++i) {
    Mat s = random_gamma0(11);
    CHECK(gamma_Q(act(q, s), Int(11)) == inverse(s) * gamma_Q(q, Int(11)) * s);
  }
}

TEST_CASE("level-p classes, d = 92, p = 11") {
  NarrowClassGroup g = narrow_class_group(Int(92));
  auto classes = level_p_classes(g, Int(11), Int(2));
  CHECK(classes.size() == 2);
  // the identity label contains the paper's principal-class form
  CHECK(level_p_label(g, Int(11), Int(2), QuadForm{11, -20, 7}) == 0);
  CHECK(level_p_label(g, Int(11), Int(2), classes[0].rep) == 0);
  CHECK(classes[0].label == 0);
  // the J label is the other one
  int j = j_class_index(g);
  CHECK(j == 1);
  CHECK(level_p_label(g, Int(11), Int(2), classes[1].rep) == j);
  CHECK(level_p_label(g, Int(11), Int(2), QuadForm{-11, 2, 2}) == j);
  // every rep is a valid level-p form
  for (const auto& c : classes) {
    CHECK(c.rep.disc() == 92);
    CHECK(c.rep.a % 11 == 0);
    CHECK((c.rep.b - 2) % 22 == 0);
  }
}

TEST_CASE("level-p classes cover the class group") {
  for (const auto& [dv, pv, rv] :
       {std::tuple{92L, 11L, 2L}, {12L, 11L, 10L}, {60L, 11L, 4L}, {5L, 11L, 7L}}) {
    Int d(dv), p(pv), r(rv);
    REQUIRE(sqrt_mod_4p(d, p) == r);
    NarrowClassGroup g = narrow_class_group(d);
    auto classes = level_p_classes(g, p, r);
    CHECK(static_cast<int>(classes.size()) == g.h_plus());
    std::set<int> labels;
    for (const auto& c : classes) {
      labels.insert(c.label);
      CHECK(level_p_label(g, p, r, c.rep) == c.label);
    }
    CHECK(static_cast<int>(labels.size()) == g.h_plus());
    if (g.h_plus() == 1) CHECK(equivalent(classes[0].rep, p_ideal_form(d, p, r)));
  }
}

TEST_CASE("discriminant family") {
  auto fam = discriminant_family(Int(11), Int(100));
  CHECK(std::count(fam.begin(), fam.end(), Int(12)) == 1);
  CHECK(std::count(fam.begin(), fam.end(), Int(92)) == 1);
  CHECK(std::count(fam.begin(), fam.end(), Int(5)) == 0);
  CHECK(std::count(fam.begin(), fam.end(), Int(20)) == 0);

  // constructive recipe n^2 + p = d m^2 generates family members
  auto fam2 = discriminant_family(Int(11), Int(2000));
  for (long n = 1; n <= 40; ++n) {
    Int v = Int(n) * n + 11;
    if (is_perfect_square(v)) continue;
    Int d = fundamental_of(v);
    if (d % 11 == 0) continue;  // ramified: p | n forces p | d
    if (d > 2000 || has_norm_minus_one_unit(d)) continue;
    CAPTURE(n);
    CHECK(std::count(fam2.begin(), fam2.end(), d) == 1);
  }
}
