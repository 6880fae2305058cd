#pragma once

// Matching up to signed permutations of the variables, used to compare
// reduced output against hand-checked reference data.

#include "pcred/pipeline.hpp"

#include "support.hpp"

#include <algorithm>
#include <numeric>

namespace pcred::test {

inline std::vector<IMatrix> signed_permutations(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<IMatrix> out;
  do {
    for (unsigned signs = 0; signs < (1u << n); ++signs) {
      IMatrix p(n, n);
      for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = (signs >> i) & 1u ? -1 : 1;
      out.push_back(p);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Some signed permutation P and some pairing of the lists make every
// ours[i](P x) equal to +-target[pair(i)].
inline bool equal_up_to_signed_permutation(const std::vector<MultiPoly>& ours, const std::vector<MultiPoly>& target) {
  if (ours.size() != target.size() || ours.empty()) return false;
  std::vector<std::size_t> pairing(ours.size());
  std::iota(pairing.begin(), pairing.end(), 0);
  for (const IMatrix& p : signed_permutations(ours[0].nvars())) {
    std::vector<MultiPoly> moved;
    for (const auto& f : ours) moved.push_back(substitute(f, p));
    auto order = pairing;
    do {
      bool ok = true;
      for (std::size_t i = 0; i < moved.size() && ok; ++i) {
        const MultiPoly& t = target[order[i]];
        ok = moved[i] == t || moved[i] == -t;
      }
      if (ok) return true;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return false;
}

// Smallest relative distance between P^T a P and a multiple of b over signed
// permutations P.
inline Real gram_distance_up_to_signed_permutation(const RMatrix& a, const RMatrix& b) {
  Real best = -1;
  for (const IMatrix& p : signed_permutations(a.rows())) {
    const Real d = distance_mod_scaling(real_to_complex(congruence(a, p)), real_to_complex(b));
    if (best < 0 || d < best) best = d;
  }
  return best;
}

// Reference data: two ternary quadrics with a large-height pencil, and a
// plane quartic, together with hand-verified reductions.
inline const std::vector<std::string> kPencilInput = {
    "857211194051*x^2-10879213981695*x*y-1296007209476*x*z+34518126244996*y^2+8224075847095*y*z+489854396055*z^2",
    "2274418654562*x^2-28865567091425*x*y-3438665984061*x*z+91586146842213*y^2+21820750429746*y*z+1299719350945*z^2"};
inline const std::vector<std::string> kPencilReduced = {"2x^2 - x y + x z + 2z^2", "-2x z + 3y^2 - y z + 2z^2"};
inline const char* const kPencilCubic = "27348x^3 + 215720x^2 y + 567184x y^2 + 497080y^3";
inline const RMatrix kPencilGram{
    {Real("241474533625.0"), Real("-1532325529959.9"), Real("-182541212588.9")},
    {Real("-1532325529959.9"), Real("9723681808257.5"), Real("1158352212636.4")},
    {Real("-182541212588.9"), Real("1158352212636.4"), Real("137990925143.2")}};

inline const char* const kQuarticInput =
    "390908548757*x^4-1083699236751*x^3*y+835578482044*x^3*z+1126610184312*x^2*y^2-1737329379412*x^2*y*z"
    "+669777678687*x^2*z^2-520542386163*x*y^3+1204081445939*x*y^2*z-928398396271*x*y*z^2+238611653627*x*z^3"
    "+90192376558*y^4-278168756247*y^3*z+321720059816*y^2*z^2-165373310794*y*z^3+31877479532*z^4";
inline const char* const kQuarticReduced =
    "3x^4 - 3x^3 y + 3x^3 z + x^2 y^2 - 2x^2 z^2 + x y^2 z - x y z^2 - 2x z^3 + 3y^4 - 3y^3 z + y^2 z^2 - 3z^4";
inline const RMatrix kQuarticGram{
    {Real("367751.9942"), Real("-254909.8720"), Real("196557.1210")},
    {Real("-254909.8720"), Real("176692.9800"), Real("-136245.3974")},
    {Real("196557.1210"), Real("-136245.3974"), Real("105056.8935")}};

}  // namespace pcred::test
