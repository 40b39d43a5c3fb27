#ifndef EISDEPTH_CHECKS_HPP
#define EISDEPTH_CHECKS_HPP

#include "eisdepth/newform.hpp"

#include <string>
#include <vector>

namespace eis {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// published congruence table for one (N, p)
struct TableCase {
  long N, p;
  // (level, r, e, residue field size)
  std::vector<std::array<long, 4>> rows;
  long depth;
  long val_phi;
};

const std::vector<TableCase>& published_tables();

// reproduce one table row set and the associated depth identities; with
// with_index also checks the index inequality, multiplicity identity, the
// q^2-1 bound and predicate agreement
CheckResult check_table_case(NewformEngine& engine, const TableCase& tc, bool with_index,
                             double budget_seconds);

// prime-level equality suite: N in {11, 23, 31, 67}
std::vector<CheckResult> run_prime_level_checks(NewformEngine& engine);

// module property suites (HNF/SNF identities, dimension formulas,
// commutativity, valuation multiplicativity, sturm monotonicity)
std::vector<CheckResult> run_property_checks(NewformEngine& engine, const std::vector<long>& levels);

// toy commutative-algebra suite: the hand examples + seeded random instances
std::vector<CheckResult> run_toy_checks(int random_count);

}  // namespace eis

#endif
