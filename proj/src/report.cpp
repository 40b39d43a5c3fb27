#include "eisdepth/report.hpp"

#include "json.hpp"

#include <iomanip>
#include <sstream>

namespace eis {

using nlohmann::json;

namespace {

json report_to_json(const DepthReport& rep) {
  json j;
  j["format_version"] = 1;
  j["level"] = rep.N;
  j["prime"] = rep.p;
  j["prime_factors"] = rep.t;
  j["sturm_bound"] = rep.sturm_exact.get_str();
  j["scan_bound"] = rep.scan_bound;
  json rows = json::array();
  for (const auto& r : rep.records) {
    json row;
    row["level"] = r.level;
    row["orbit"] = r.orbit;
    row["r"] = r.r;
    row["ramindex"] = r.e;
    row["resfield"] = to_string(pow(Int(rep.p), (unsigned long)r.f));
    row["lambda"] = r.lambda_index;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["depth"] = rep.depth;
  j["val_phi"] = rep.val_phi;
  j["val_num_phi_over_24"] = rep.val_num_phi24;
  if (rep.ohta_applicable)
    j["ohta_bound"] = rep.ohta_bound;
  else
    j["ohta_bound"] = nullptr;
  j["strict_observed"] = rep.strict_observed;
  j["predicate"] = {{"applicable", rep.predicates.applicable},
                    {"predicts_strict", rep.predicates.predicts_strict},
                    {"description", rep.predicates.description}};
  if (rep.index_computed) {
    j["index"] = to_string(rep.index_n0);
    j["index_val"] = rep.index_val;
    j["multiplicity"] = rep.multiplicity;
    j["min_generators"] = rep.min_generators;
    j["verdict"] = rep.verdict;
  }
  return j;
}

}  // namespace

std::string render_report(const DepthReport& rep, OutputFormat fmt) {
  if (fmt == OutputFormat::Json) {
    return report_to_json(rep).dump(2) + "\n";
  }
  if (fmt == OutputFormat::Csv) {
    std::ostringstream os;
    os << "N,p,level,orbit,r,ramindex,resfield\n";
    for (const auto& r : rep.records)
      os << rep.N << "," << rep.p << "," << r.level << "," << r.orbit << "," << r.r << "," << r.e
         << "," << pow(Int(rep.p), (unsigned long)r.f).get_str() << "\n";
    return os.str();
  }
  std::ostringstream os;
  os << "N = " << rep.N << " = ";
  {
    auto qs = prime_factors(rep.N);
    for (size_t i = 0; i < qs.size(); ++i) os << (i ? " * " : "") << qs[i];
  }
  os << ",  p = " << rep.p << "\n";
  os << "sturm bound        = " << rep.sturm_exact.get_str() << "  (primes scanned: ell <= "
     << rep.scan_bound << ", ell coprime to N)\n";
  os << "val_p(phi(N))      = " << rep.val_phi << "   [phi(N) = " << euler_phi(rep.N) << "]\n";
  os << "val_p(num(phi/24)) = " << rep.val_num_phi24 << "\n";
  if (rep.records.empty()) {
    os << "no Eisenstein congruences mod " << rep.p << "\n";
  } else {
    os << "\nlevel |  r | ramindex | resfield | orbit\n";
    os << "------+----+----------+----------+------\n";
    for (const auto& r : rep.records) {
      os << std::setw(5) << r.level << " | " << std::setw(2) << r.r << " | " << std::setw(8) << r.e
         << " | " << std::setw(8) << pow(Int(rep.p), (unsigned long)r.f).get_str() << " | "
         << std::setw(5) << (r.orbit + 1) << "\n";
    }
    os << "\n";
  }
  os << "depth D = sum f*r  = " << rep.depth;
  if (rep.strict_observed)
    os << "  > val_p(phi(N)) = " << rep.val_phi << "  (strict)";
  else if (rep.depth == rep.val_phi)
    os << "  = val_p(phi(N))  (not strict)";
  else
    os << "  < val_p(phi(N)) = " << rep.val_phi;
  os << "\n";
  if (rep.ohta_applicable)
    os << "index lower bound  = " << rep.ohta_bound << "   [val_p(prod(q^2-1)), p coprime to N]\n";
  else
    os << "index lower bound  : not applicable (p | N)\n";
  os << "strictness test    : " << rep.predicates.description << "\n";
  if (rep.index_computed) {
    os << "#T/J               = " << rep.index_n0.get_str() << "\n";
    os << "val_p(#T/J)        = " << rep.index_val << "\n";
    os << "e(J,T)             = " << rep.multiplicity << "\n";
    os << "min generators     = " << rep.min_generators << "\n";
    os << "verdict            : " << rep.verdict << "\n";
  }
  return os.str();
}

std::string render_toy_report(const ToyReport& rep, OutputFormat fmt) {
  if (fmt == OutputFormat::Json) {
    json j;
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["s"] = rep.s;
    j["t_local"] = rep.t_local;
    j["len_T_over_J"] = rep.len_t_over_j;
    j["len_components"] = rep.len_i;
    j["nu"] = rep.nu;
    j["multiplicity"] = rep.hs_mult;
    json checks = json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name},
                        {"applicable", c.applicable},
                        {"pass", c.pass},
                        {"note", c.note}});
    j["checks"] = checks;
    j["all_pass"] = rep.all_pass;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "toy subalgebra: p = " << rep.p << ", n = " << rep.n << ", s = " << rep.s
     << (rep.t_local ? " (T local)" : " (T not local)") << "\n";
  os << "length(T/J) = " << rep.len_t_over_j << "; component lengths =";
  for (long v : rep.len_i) os << " " << v;
  os << "; nu = " << rep.nu << "; e(J,T) = " << rep.hs_mult << "\n";
  for (const auto& c : rep.checks) {
    os << "  [" << (c.applicable ? (c.pass ? "PASS" : "FAIL") : "skip") << "] " << c.name;
    if (!c.note.empty() && !c.applicable) os << "  (" << c.note << ")";
    os << "\n";
  }
  return os.str();
}

DepthReport parse_report_json(const std::string& json_text) {
  json j = json::parse(json_text);
  DepthReport rep;
  rep.N = j.at("level").get<long>();
  rep.p = j.at("prime").get<long>();
  rep.t = j.at("prime_factors").get<long>();
  rep.sturm_exact = Rat(j.at("sturm_bound").get<std::string>());
  rep.sturm_exact.canonicalize();
  rep.scan_bound = j.at("scan_bound").get<long>();
  for (const auto& row : j.at("rows")) {
    CongruenceRecord r;
    r.level = row.at("level").get<long>();
    r.orbit = row.at("orbit").get<long>();
    r.r = row.at("r").get<long>();
    r.e = row.at("ramindex").get<long>();
    Int res(row.at("resfield").get<std::string>());
    r.f = 0;
    Int t = res;
    while (t > 1) {
      t = divexact(t, Int(rep.p));
      ++r.f;
    }
    r.lambda_index = row.at("lambda").get<long>();
    rep.records.push_back(r);
  }
  rep.depth = j.at("depth").get<long>();
  rep.val_phi = j.at("val_phi").get<long>();
  rep.val_num_phi24 = j.at("val_num_phi_over_24").get<long>();
  rep.ohta_applicable = !j.at("ohta_bound").is_null();
  if (rep.ohta_applicable) rep.ohta_bound = j.at("ohta_bound").get<long>();
  rep.strict_observed = j.at("strict_observed").get<bool>();
  rep.predicates.applicable = j.at("predicate").at("applicable").get<bool>();
  rep.predicates.predicts_strict = j.at("predicate").at("predicts_strict").get<bool>();
  rep.predicates.description = j.at("predicate").at("description").get<std::string>();
  if (j.contains("index")) {
    rep.index_computed = true;
    rep.index_n0 = Int(j.at("index").get<std::string>());
    rep.index_val = j.at("index_val").get<long>();
    rep.multiplicity = j.at("multiplicity").get<long>();
    rep.min_generators = j.at("min_generators").get<long>();
    rep.verdict = j.at("verdict").get<std::string>();
  }
  return rep;
}

}  // namespace eis
