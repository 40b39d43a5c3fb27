#ifndef EISDEPTH_NEWFORM_HPP
#define EISDEPTH_NEWFORM_HPP

#include "eisdepth/modsym.hpp"
#include "eisdepth/numberfield.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace eis {

// A Galois orbit of newforms of level M. The coefficient field is
// K = Q[x]/(g) with theta the orbit's eigenvalue of the generic operator
// used for the decomposition; a_ell values are elements of K.
struct NewformOrbit {
  long level = 0;
  long orbit_index = 0;
  UniPoly g;
  std::shared_ptr<NumberField> field;

  // dual (column) eigenvector over K in quotient coords: dim x deg, integral
  IntMat dual_w;
  long pair_gen = 0;          // generator b with <w, gen_b> != 0
  std::vector<Int> pair_den;  // D = <w, gen_b> as Z[theta] coefficients
  QPoly pair_den_inv;         // D^{-1} mod g

  // eigenvector over K in cuspidal coords (cuspdim x deg, integral); the
  // orbit's eigensystem appears there with multiplicity one
  IntMat right_v;

  std::vector<Int> trace_seq;      // traces of a_ell, first valid primes
  std::vector<long> fingerprint;   // trace(a_ell) mod 1000003, first 5 valid primes

  long degree() const { return g.degree(); }
};

// Per-level state: presentation, orbits, and memoized eigenvalues.
struct LevelData {
  long level = 1;
  long new_dim = 0;
  std::shared_ptr<ManinPresentation> pres;
  std::vector<NewformOrbit> orbits;
  // primes ell (not dividing level) with cached a_ell, ascending
  std::vector<long> ells;
  // eigen[orbit][ell index] = a_ell in the power basis of theta
  std::vector<std::vector<std::vector<Rat>>> eigen;
  long bound = 0;  // all primes <= bound with ell not dividing level covered

  long ell_index(long ell) const;
  const std::vector<Rat>& eigenvalue(long orbit, long ell) const;
};

// Decomposes cuspidal plus spaces into newform orbits level by level and
// serves exact Hecke eigenvalues, with a persistent per-level cache.
class NewformEngine {
 public:
  NewformEngine(std::string cache_dir, unsigned long seed = 0, int threads = 0);

  // all levels M' | M decomposed (recursively); returns the level record
  LevelData& level(long M);
  // a_ell available for all primes ell <= bound with ell not dividing M
  void ensure_eigenvalues(long M, long bound);

  FieldElement eigenvalue(const LevelData& L, long orbit, long ell) const;

  const std::string& cache_dir() const { return cache_dir_; }
  unsigned long seed() const { return seed_; }
  int threads() const { return threads_; }

  // cache maintenance
  struct CacheEntry {
    long level;
    long orbits;
    long bound;
    std::string path;
  };
  std::vector<CacheEntry> cache_list() const;
  void cache_clear() const;

  // recompute a few cached eigenvalues from scratch and compare (used by
  // verify and on cache extension)
  void spot_check(long M, int count = 2);

 private:
  std::string cache_dir_;
  unsigned long seed_;
  int threads_;
  std::map<long, LevelData> levels_;

  void decompose(long M);
  void compute_eigen_range(LevelData& L, const std::vector<long>& new_ells);
  bool load_cache(long M, LevelData& L);
  // full write, or append of new eigenvalue lines when the on-disk file is a
  // prefix of the in-memory state (orbit blocks are never rewritten then)
  void save_cache(const LevelData& L) const;
  friend struct CacheIO;
};

}  // namespace eis

#endif
