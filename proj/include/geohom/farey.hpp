#pragma once

#include "geohom/exact.hpp"

#include <string>
#include <vector>

namespace geohom {

struct Gamma0Data {
  long p;
  long genus;
  long e2, e3;
  long rank;  // 2g + 1
};
Gamma0Data gamma0_invariants(long p);

bool is_prime(long p);

enum class SideLabel { Even, Odd, Paired };

struct FareySide {
  SideLabel label;
  int partner;  // paired side index; equals own index for Even/Odd
};

// Kulkarni symbol of level p: fraction chain 0/1 .. 1/1 plus side labels.
// Side i is the arc between fractions[i] and fractions[i+1].
struct FareySymbol {
  long p;
  std::vector<Cusp> fractions;
  std::vector<FareySide> sides;
  Gamma0Data data;
  bool minimal;  // every side's pairing product equals p exactly

  long n_sides() const { return static_cast<long>(sides.size()); }
};

// Deterministic construction: label sides to a fixpoint (EVEN first, then
// ODD, then least admissible partner), then refine every still-unlabeled
// side by its mediant and rescan.
FareySymbol farey_symbol(long p);

// Side pairing matrices of the special polygon, straight from the symbol.
struct PolygonGenerators {
  Mat T;
  std::vector<Mat> elliptic_order2;
  std::vector<Mat> elliptic_order3;
  std::vector<Mat> hyperbolic;  // one per pair i < i*, ascending in i

  enum class Kind { Hyperbolic, Elliptic2, Elliptic3 };
  struct SideRef {
    Kind kind;
    int index;     // into the list of that kind
    int exponent;  // word letter emitted when crossing this side
  };
  std::vector<SideRef> side_refs;  // one per bottom side
};
PolygonGenerators polygon_generators(const FareySymbol& fs);

struct PoincareReport {
  bool ok;
  bool minimal;
  long generator_count;  // 1 + e2 + e3 + 2g
  std::vector<std::string> failures;
};
PoincareReport verify_poincare(const FareySymbol& fs);

// Ordered basis of H_1(Y0(p), R): T first (the Eisenstein element), then
// the 2g hyperbolic generators.
struct HomologyBasis {
  long p;
  std::vector<Mat> generators;
  long rank() const { return static_cast<long>(generators.size()); }
};
HomologyBasis homology_basis(const FareySymbol& fs, const PolygonGenerators& gens);

// Zagier's side pairing set: T^{+-1}, the parabolics (1,0;+-p,1), and the
// family (a, -(aa*+1)/p; p, -a*) with aa* = -1 mod p.
struct ZagierElement {
  Mat m;
  long a;      // 0 for the four parabolic members
  long astar;  // inverse partner under a <-> a*
  bool elliptic;
};
struct ZagierSet {
  long p;
  std::vector<ZagierElement> elements;
};
ZagierSet zagier_generators(long p);

}  // namespace geohom
