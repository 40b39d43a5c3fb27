// Persistent per-level eigenvalue cache. Text format, decimal everywhere,
// checksummed footer; extensions append eigenvalue lines and leave the orbit
// blocks byte-identical.

#include "eisdepth/newform.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace eis {

namespace {

constexpr const char* kMagic = "eisdepth-eigencache 1";

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string cache_path(const std::string& dir, long M) {
  return dir + "/level_" + std::to_string(M) + ".ecache";
}

void write_mat(std::ostream& os, const char* tag, const IntMat& A) {
  os << tag << " " << A.m << " " << A.n << "\n";
  for (long i = 0; i < A.m; ++i) {
    for (long j = 0; j < A.n; ++j) os << (j ? " " : "") << A.at(i, j).get_str();
    os << "\n";
  }
}

bool read_mat(std::istream& is, const std::string& tag, IntMat& A) {
  std::string t;
  long m, n;
  if (!(is >> t >> m >> n) || t != tag) return false;
  A = IntMat(m, n);
  std::string v;
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j) {
      if (!(is >> v)) return false;
      A.at(i, j) = Int(v);
    }
  return true;
}

// serialized body: header + orbit blocks (everything before eigen lines)
std::string serialize_head(const LevelData& L, unsigned long seed) {
  std::ostringstream os;
  os << kMagic << "\n";
  os << "level " << L.level << "\n";
  os << "seed " << seed << "\n";
  os << "orbits " << L.orbits.size() << "\n";
  for (const NewformOrbit& orb : L.orbits) {
    os << "orbit " << orb.orbit_index << "\n";
    os << "g " << orb.g.degree();
    for (const Int& c : orb.g.c) os << " " << c.get_str();
    os << "\n";
    write_mat(os, "dualw", orb.dual_w);
    os << "pairgen " << orb.pair_gen << "\n";
    os << "pairden";
    for (const Int& c : orb.pair_den) os << " " << c.get_str();
    os << "\n";
    os << "pairdeninv " << orb.pair_den_inv.size();
    for (const Rat& c : orb.pair_den_inv) os << " " << c.get_str();
    os << "\n";
    write_mat(os, "rightv", orb.right_v);
    os << "traces " << orb.trace_seq.size();
    for (const Int& t : orb.trace_seq) os << " " << t.get_str();
    os << "\n";
    os << "fingerprint " << orb.fingerprint.size();
    for (long f : orb.fingerprint) os << " " << f;
    os << "\n";
  }
  return os.str();
}

std::string serialize_eigen_line(const LevelData& L, size_t idx) {
  std::ostringstream os;
  os << "E " << L.ells[idx];
  for (size_t o = 0; o < L.orbits.size(); ++o) {
    os << " |";
    for (const Rat& c : L.eigen[o][idx]) os << " " << c.get_str();
  }
  os << "\n";
  return os.str();
}

std::string footer(const std::string& payload, long bound) {
  std::ostringstream os;
  os << "end " << bound << " " << fnv1a(payload) << "\n";
  return os.str();
}

}  // namespace

void NewformEngine::save_cache(const LevelData& L) const {
  if (cache_dir_.empty()) return;
  std::error_code ec;
  fs::create_directories(cache_dir_, ec);
  std::string path = cache_path(cache_dir_, L.level);

  std::string head = serialize_head(L, seed_);

  // try append: existing payload must be a byte prefix of the new payload
  std::string newpayload = head;
  for (size_t i = 0; i < L.ells.size(); ++i) newpayload += serialize_eigen_line(L, i);

  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string old = buf.str();
    size_t endpos = old.rfind("\nend ");
    if (endpos != std::string::npos) {
      std::string oldpayload = old.substr(0, endpos + 1);
      if (newpayload.size() >= oldpayload.size() &&
          newpayload.compare(0, oldpayload.size(), oldpayload) == 0) {
        // append just the new part and a fresh footer
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << oldpayload;
        out << newpayload.substr(oldpayload.size());
        out << footer(newpayload, L.bound);
        return;
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << newpayload;
  out << footer(newpayload, L.bound);
}

bool NewformEngine::load_cache(long M, LevelData& L) {
  if (cache_dir_.empty()) return false;
  std::string path = cache_path(cache_dir_, M);
  if (!fs::exists(path)) return false;
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string all = buf.str();

  size_t endpos = all.rfind("\nend ");
  if (endpos == std::string::npos) {
    fprintf(stderr, "warning: cache file %s has no footer; recomputing\n", path.c_str());
    return false;
  }
  std::string payload = all.substr(0, endpos + 1);
  {
    std::istringstream fs_(all.substr(endpos + 1));
    std::string tag;
    long bound;
    std::string cks;
    if (!(fs_ >> tag >> bound >> cks) || tag != "end") {
      fprintf(stderr, "warning: cache file %s footer malformed; recomputing\n", path.c_str());
      return false;
    }
    if (std::to_string(fnv1a(payload)) != cks) {
      fprintf(stderr, "warning: cache file %s checksum mismatch; recomputing\n", path.c_str());
      return false;
    }
    L.bound = bound;
  }

  std::istringstream is(payload);
  std::string line;
  std::getline(is, line);
  if (line != kMagic) {
    fprintf(stderr, "warning: cache file %s version mismatch; recomputing\n", path.c_str());
    return false;
  }
  std::string tag;
  long level;
  unsigned long seed;
  size_t norb;
  if (!(is >> tag >> level) || tag != "level" || level != M) return false;
  if (!(is >> tag >> seed) || tag != "seed") return false;
  if (seed != seed_) {
    fprintf(stderr, "warning: cache file %s was written with seed %lu (current %lu); recomputing\n",
            path.c_str(), seed, seed_);
    return false;
  }
  if (!(is >> tag >> norb) || tag != "orbits") return false;

  L.level = M;
  L.orbits.clear();
  for (size_t o = 0; o < norb; ++o) {
    NewformOrbit orb;
    orb.level = M;
    long oi, deg;
    if (!(is >> tag >> oi) || tag != "orbit") return false;
    orb.orbit_index = oi;
    if (!(is >> tag >> deg) || tag != "g") return false;
    std::vector<Int> gc(deg + 1);
    std::string v;
    for (long i = 0; i <= deg; ++i) {
      if (!(is >> v)) return false;
      gc[i] = Int(v);
    }
    orb.g = UniPoly(std::move(gc));
    orb.field = std::make_shared<NumberField>(orb.g, /*check=*/false);
    if (!read_mat(is, "dualw", orb.dual_w)) return false;
    if (!(is >> tag >> orb.pair_gen) || tag != "pairgen") return false;
    if (!(is >> tag) || tag != "pairden") return false;
    orb.pair_den.assign(deg, Int(0));
    for (long i = 0; i < deg; ++i) {
      if (!(is >> v)) return false;
      orb.pair_den[i] = Int(v);
    }
    size_t ninv;
    if (!(is >> tag >> ninv) || tag != "pairdeninv") return false;
    orb.pair_den_inv.assign(ninv, Rat(0));
    for (size_t i = 0; i < ninv; ++i) {
      if (!(is >> v)) return false;
      orb.pair_den_inv[i] = Rat(v);
    }
    if (!read_mat(is, "rightv", orb.right_v)) return false;
    size_t ntr;
    if (!(is >> tag >> ntr) || tag != "traces") return false;
    orb.trace_seq.assign(ntr, Int(0));
    for (size_t i = 0; i < ntr; ++i) {
      if (!(is >> v)) return false;
      orb.trace_seq[i] = Int(v);
    }
    size_t nfp;
    if (!(is >> tag >> nfp) || tag != "fingerprint") return false;
    orb.fingerprint.assign(nfp, 0);
    for (size_t i = 0; i < nfp; ++i) {
      if (!(is >> v)) return false;
      orb.fingerprint[i] = std::stol(v);
    }
    L.orbits.push_back(std::move(orb));
  }
  L.new_dim = 0;
  for (auto& orb : L.orbits) L.new_dim += orb.degree();

  L.ells.clear();
  L.eigen.assign(norb, {});
  while (is >> tag) {
    if (tag != "E") return false;
    long ell;
    if (!(is >> ell)) return false;
    L.ells.push_back(ell);
    for (size_t o = 0; o < norb; ++o) {
      std::string bar;
      if (!(is >> bar) || bar != "|") return false;
      long deg = L.orbits[o].degree();
      std::vector<Rat> coords(deg);
      for (long i = 0; i < deg; ++i) {
        std::string s;
        if (!(is >> s)) return false;
        coords[i] = Rat(s);
        coords[i].canonicalize();
      }
      L.eigen[o].push_back(std::move(coords));
    }
  }
  return true;
}

std::vector<NewformEngine::CacheEntry> NewformEngine::cache_list() const {
  std::vector<CacheEntry> out;
  if (cache_dir_.empty() || !fs::exists(cache_dir_)) return out;
  for (const auto& entry : fs::directory_iterator(cache_dir_)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind("level_", 0) != 0 || name.find(".ecache") == std::string::npos) continue;
    std::ifstream in(entry.path());
    std::string line, tag;
    long level = 0;
    size_t norb = 0;
    std::getline(in, line);
    if (line != kMagic) continue;
    unsigned long seed;
    in >> tag >> level >> tag >> seed >> tag >> norb;
    // bound from footer
    std::ifstream in2(entry.path(), std::ios::binary);
    std::stringstream buf;
    buf << in2.rdbuf();
    std::string all = buf.str();
    long bound = 0;
    size_t endpos = all.rfind("\nend ");
    if (endpos != std::string::npos) {
      std::istringstream fs_(all.substr(endpos + 1));
      std::string t2, cks;
      fs_ >> t2 >> bound >> cks;
    }
    out.push_back({level, (long)norb, bound, entry.path().string()});
  }
  std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) {
    return a.level < b.level;
  });
  return out;
}

void NewformEngine::cache_clear() const {
  for (const auto& e : cache_list()) fs::remove(e.path);
}

}  // namespace eis
