#include "geohom/farey.hpp"

#include <algorithm>

namespace geohom {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}

Gamma0Data gamma0_invariants(long p) {
  if (!is_prime(p)) throw std::invalid_argument("gamma0_invariants: p not prime");
  long e2 = p == 2 ? 1 : (p % 4 == 1 ? 2 : 0);
  long e3 = p == 3 ? 1 : (p % 3 == 1 ? 2 : 0);
  long num = p + 1 - 3 * e2 - 4 * e3;
  if (num % 12 != 0) throw defect_error("gamma0_invariants: genus formula");
  long g = num / 12;
  return {p, g, e2, e3, 2 * g + 1};
}

namespace {

struct WorkSide {
  int label = -1;  // -1 unlabeled, else SideLabel as int
  int partner = -1;
};

bool label_pass(long p, const std::vector<Cusp>& fr, std::vector<WorkSide>& sides) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < sides.size(); ++i) {
      if (sides[i].label >= 0) continue;
      const Int &bi = fr[i].den(), &bi1 = fr[i + 1].den();
      if ((bi * bi + bi1 * bi1) % p == 0) {
        sides[i] = {static_cast<int>(SideLabel::Even), static_cast<int>(i)};
        changed = true;
        continue;
      }
      if ((bi * bi + bi * bi1 + bi1 * bi1) % p == 0) {
        sides[i] = {static_cast<int>(SideLabel::Odd), static_cast<int>(i)};
        changed = true;
        continue;
      }
      for (size_t j = 0; j < sides.size(); ++j) {
        if (j == i || sides[j].label >= 0) continue;
        if ((bi * fr[j].den() + bi1 * fr[j + 1].den()) % p == 0) {
          sides[i] = {static_cast<int>(SideLabel::Paired), static_cast<int>(j)};
          sides[j] = {static_cast<int>(SideLabel::Paired), static_cast<int>(i)};
          changed = true;
          break;
        }
      }
    }
  }
  return std::all_of(sides.begin(), sides.end(),
                     [](const WorkSide& s) { return s.label >= 0; });
}

}  // namespace

FareySymbol farey_symbol(long p) {
  Gamma0Data data = gamma0_invariants(p);
  std::vector<Cusp> fr = {Cusp(0, 1), Cusp(1, 1)};
  std::vector<WorkSide> sides(1);

  long guard = 0;
  while (!label_pass(p, fr, sides)) {
    // refine every unlabeled side by inserting its mediant
    std::vector<Cusp> nfr;
    std::vector<WorkSide> nsides;
    std::vector<int> remap(sides.size());
    int shift = 0;
    for (size_t i = 0; i < sides.size(); ++i) {
      remap[i] = static_cast<int>(i) + shift;
      if (sides[i].label < 0) ++shift;
    }
    nfr.push_back(fr[0]);
    for (size_t i = 0; i < sides.size(); ++i) {
      if (sides[i].label < 0) {
        nfr.emplace_back(fr[i].num() + fr[i + 1].num(),
                         fr[i].den() + fr[i + 1].den());
        nsides.push_back({});
        nsides.push_back({});
      } else {
        WorkSide s = sides[i];
        s.partner = remap[static_cast<size_t>(s.partner)];
        nsides.push_back(s);
      }
      nfr.push_back(fr[i + 1]);
    }
    fr = std::move(nfr);
    sides = std::move(nsides);
    if (++guard > 100 * p) throw defect_error("farey_symbol: refinement cap hit");
  }

  FareySymbol fs;
  fs.p = p;
  fs.fractions = fr;
  fs.data = data;
  long ne = 0, no = 0, np = 0;
  for (const WorkSide& s : sides) {
    fs.sides.push_back({static_cast<SideLabel>(s.label), s.partner});
    if (s.label == static_cast<int>(SideLabel::Even)) ++ne;
    else if (s.label == static_cast<int>(SideLabel::Odd)) ++no;
    else ++np;
  }
  if (ne != data.e2 || no != data.e3 || np != 4 * data.genus)
    throw defect_error("farey_symbol: side counts disagree with invariants");

  fs.minimal = true;
  for (size_t i = 0; i < fs.sides.size(); ++i) {
    const Int &bi = fr[i].den(), &bi1 = fr[i + 1].den();
    size_t j = static_cast<size_t>(fs.sides[i].partner);
    Int prod;
    switch (fs.sides[i].label) {
      case SideLabel::Even: prod = bi * bi + bi1 * bi1; break;
      case SideLabel::Odd: prod = bi * bi + bi * bi1 + bi1 * bi1; break;
      case SideLabel::Paired: prod = bi * fr[j].den() + bi1 * fr[j + 1].den(); break;
    }
    if (prod != p) fs.minimal = false;
  }
  return fs;
}

PolygonGenerators polygon_generators(const FareySymbol& fs) {
  PolygonGenerators out;
  out.T = mat_T();
  out.side_refs.resize(fs.sides.size());
  const auto& fr = fs.fractions;
  for (size_t i = 0; i < fs.sides.size(); ++i) {
    const Int &ai = fr[i].num(), &bi = fr[i].den();
    const Int &ai1 = fr[i + 1].num(), &bi1 = fr[i + 1].den();
    switch (fs.sides[i].label) {
      case SideLabel::Even: {
        Mat m(ai1 * bi1 + ai * bi, -ai * ai - ai1 * ai1, bi * bi + bi1 * bi1,
              -(ai1 * bi1 + ai * bi));
        out.side_refs[i] = {PolygonGenerators::Kind::Elliptic2,
                            static_cast<int>(out.elliptic_order2.size()), 1};
        out.elliptic_order2.push_back(m);
        break;
      }
      case SideLabel::Odd: {
        Mat m(ai1 * bi1 + ai * bi1 + ai * bi, -ai * ai - ai * ai1 - ai1 * ai1,
              bi * bi + bi * bi1 + bi1 * bi1,
              -(ai1 * bi1 + ai1 * bi + ai * bi));
        out.side_refs[i] = {PolygonGenerators::Kind::Elliptic3,
                            static_cast<int>(out.elliptic_order3.size()), 1};
        out.elliptic_order3.push_back(m);
        break;
      }
      case SideLabel::Paired: {
        size_t j = static_cast<size_t>(fs.sides[i].partner);
        if (j < i) break;  // handled from the smaller index
        const Int &aj = fr[j].num(), &bj = fr[j].den();
        const Int &aj1 = fr[j + 1].num(), &bj1 = fr[j + 1].den();
        // maps side i to side j (f_i -> f_{j+1}, f_{i+1} -> f_j)
        Mat m(aj1 * bi1 + aj * bi, -ai * aj - ai1 * aj1, bi * bj + bi1 * bj1,
              -(ai1 * bj1 + ai * bj));
        int idx = static_cast<int>(out.hyperbolic.size());
        out.side_refs[j] = {PolygonGenerators::Kind::Hyperbolic, idx, 1};
        out.side_refs[i] = {PolygonGenerators::Kind::Hyperbolic, idx, -1};
        out.hyperbolic.push_back(m);
        break;
      }
    }
  }
  auto check = [&](const Mat& m) {
    if (m.c() % fs.p != 0) throw defect_error("polygon_generators: not in Gamma0(p)");
  };
  for (const Mat& m : out.elliptic_order2) check(m);
  for (const Mat& m : out.elliptic_order3) check(m);
  for (const Mat& m : out.hyperbolic) check(m);
  return out;
}

PoincareReport verify_poincare(const FareySymbol& fs) {
  PoincareReport rep;
  rep.minimal = fs.minimal;
  const auto& fr = fs.fractions;
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };

  if (fr.front() != Cusp(0, 1)) fail("first fraction is not 0/1");
  if (fr.back() != Cusp(1, 1)) fail("last fraction is not 1/1");
  for (size_t i = 0; i + 1 < fr.size(); ++i)
    if (fr[i + 1].num() * fr[i].den() - fr[i].num() * fr[i + 1].den() != 1)
      fail("consecutive fractions at side " + std::to_string(i) +
           " are not Farey neighbors");

  long ne = 0, no = 0, np = 0;
  for (size_t i = 0; i < fs.sides.size(); ++i) {
    const Int &bi = fr[i].den(), &bi1 = fr[i + 1].den();
    const FareySide& s = fs.sides[i];
    switch (s.label) {
      case SideLabel::Even:
        ++ne;
        if ((bi * bi + bi1 * bi1) % fs.p != 0)
          fail("even congruence fails at side " + std::to_string(i));
        break;
      case SideLabel::Odd:
        ++no;
        if ((bi * bi + bi * bi1 + bi1 * bi1) % fs.p != 0)
          fail("odd congruence fails at side " + std::to_string(i));
        break;
      case SideLabel::Paired: {
        ++np;
        size_t j = static_cast<size_t>(s.partner);
        if (j >= fs.sides.size() || fs.sides[j].partner != static_cast<int>(i))
          fail("pairing involution broken at side " + std::to_string(i));
        else if ((bi * fr[j].den() + bi1 * fr[j + 1].den()) % fs.p != 0)
          fail("pairing congruence fails at sides " + std::to_string(i) + "," +
               std::to_string(j));
        break;
      }
    }
  }
  if (ne != fs.data.e2) fail("even side count != e2");
  if (no != fs.data.e3) fail("odd side count != e3");
  if (np != 4 * fs.data.genus) fail("paired side count != 4g");

  PolygonGenerators gens = polygon_generators(fs);
  rep.generator_count = 1 + static_cast<long>(gens.elliptic_order2.size() +
                                              gens.elliptic_order3.size() +
                                              gens.hyperbolic.size());
  if (rep.generator_count != 1 + fs.data.e2 + fs.data.e3 + 2 * fs.data.genus)
    fail("generator count != 1 + e2 + e3 + 2g");
  for (const Mat& m : gens.elliptic_order2)
    if (!(m * m).is_identity()) fail("order-2 generator has wrong order");
  for (const Mat& m : gens.elliptic_order3)
    if (!(m * m * m).is_identity()) fail("order-3 generator has wrong order");
  for (const Mat& m : gens.hyperbolic) {
    Int t = abs(m.trace());
    if (t <= 2) fail("paired generator is not hyperbolic");
  }
  rep.ok = rep.failures.empty();
  return rep;
}

HomologyBasis homology_basis(const FareySymbol& fs, const PolygonGenerators& gens) {
  HomologyBasis basis;
  basis.p = fs.p;
  basis.generators.push_back(gens.T);
  for (const Mat& m : gens.hyperbolic) basis.generators.push_back(m);
  if (basis.rank() != fs.data.rank)
    throw defect_error("homology_basis: rank mismatch");
  return basis;
}

ZagierSet zagier_generators(long p) {
  if (!is_prime(p)) throw std::invalid_argument("zagier_generators: p not prime");
  ZagierSet out;
  out.p = p;
  out.elements.push_back({mat_T(), 0, 0, false});
  out.elements.push_back({Mat(1, -1, 0, 1), 0, 0, false});
  out.elements.push_back({Mat(1, 0, p, 1), 0, 0, false});
  out.elements.push_back({Mat(1, 0, -p, 1), 0, 0, false});
  for (long a = 1; a < p; ++a) {
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), Int(a).get_mpz_t(), Int(p).get_mpz_t()) == 0)
      throw defect_error("zagier_generators: non-invertible residue");
    long astar = p - static_cast<long>(inv.get_si());
    Int num = Int(a) * astar + 1;
    out.elements.push_back({Mat(a, -num / p, p, -astar), a, astar, a == astar});
  }
  return out;
}

}  // namespace geohom
