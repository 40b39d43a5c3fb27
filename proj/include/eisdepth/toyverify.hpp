#ifndef EISDEPTH_TOYVERIFY_HPP
#define EISDEPTH_TOYVERIFY_HPP

#include "eisdepth/matrix.hpp"

#include <string>
#include <vector>

namespace eis {

// A subring T of Z_p^n (full rank, containing 1) with an ideal J of finite
// index, modeled over Z with exact lattice arithmetic. The ambient product
// splits into blocks A_i = Z_p^(n_i); T_i and J_i are the projections.
struct ToyInstance {
  long p = 5;
  std::vector<long> blocks;          // n_i, sum = n
  IntMat t_basis;                    // n x n HNF rows, ambient coords
  std::vector<std::vector<Int>> j_gens;  // ideal generators, ambient coords
};

struct ToyCheck {
  std::string name;
  bool applicable = true;
  bool pass = true;
  std::string note;
};

struct ToyReport {
  long p = 0;
  long n = 0, s = 0;
  bool t_local = false;
  bool residue_hypothesis = false;  // p - 1 >= s - 1
  long len_t_over_j = 0;            // val_p(#T/J)
  std::vector<long> len_i;          // val_p(#T_i/J_i)
  std::vector<int> ji_principal;    // 1 yes / 0 no / -1 undecided
  long nu = -1;                     // Nakayama generator count (T local only)
  long hs_mult = 0;                 // e(J, T)
  std::vector<ToyCheck> checks;
  bool all_pass = true;
};

ToyReport toy_verify(const ToyInstance& inst);

// the three worked examples (p = 5, two blocks)
ToyInstance toy_hand_instance(int which);

// seeded random instance with n <= 4, s <= 3, T local by construction
ToyInstance toy_random_instance(long p, unsigned long seed);

}  // namespace eis

#endif
