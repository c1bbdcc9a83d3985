#include "hessiasol/report.hpp"

#include <cstdio>

#include "hessiasol/common.hpp"

namespace hessiasol {

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Subsolution:
      return "subsolution";
    case Verdict::Supersolution:
      return "supersolution";
    case Verdict::Both:
      return "both";
    default:
      return "neither";
  }
}

}  // namespace

Json to_json(const Certificate& c) {
  Json j;
  j["pass"] = c.pass;
  j["verdict"] = verdict_name(c.verdict);
  j["tol"] = c.tol;
  j["worst_margin"] = c.worst_margin;
  j["worst_node"] = c.worst_node;
  j["worst_pos"] = c.worst_pos;
  j["worst_lambda"] = c.worst_lambda;
  j["kink_nodes"] = c.kink_nodes;
  j["checked_nodes"] = c.checked_nodes;
  return j;
}

Json to_json(const GammaCheckReport& r) {
  return Json{{"ok", r.ok}, {"worst_margin", r.worst_margin}, {"worst_node", r.worst_node}};
}

Json to_json(const CompareReport& r) {
  Json j;
  j["interior_gap"] = r.interior_gap;
  j["boundary_gap"] = r.boundary_gap;
  j["tol_grid"] = r.tol_grid;
  j["principle_ok"] = r.principle_ok;
  j["argmax_node"] = r.argmax_node;
  j["sub_certified"] = r.sub_certified;
  j["super_certified"] = r.super_certified;
  j["certification_skipped"] = r.certification_skipped;
  return j;
}

Json to_json(const SolveReport& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["final_residual"] = r.final_residual;
  j["wall_seconds"] = r.wall_seconds;
  j["h"] = r.h;
  j["dt"] = r.dt;
  j["rhs_root_exponent"] = r.rhs_root_exponent;
  j["subsolution_certificate"] = to_json(r.sub_cert);
  j["supersolution_certificate"] = to_json(r.super_cert);
  j["gamma_subharmonic"] = to_json(r.gamma);
  j["monotone_iterates"] = r.monotone_iterates;
  j["worst_monotonicity"] = r.worst_monotonicity;
  if (r.domain_caveat) j["caveat"] = r.caveat;
  return j;
}

Json to_json(const AbpReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"delta", e.delta}, {"volume", e.volume}, {"ratio", e.ratio}});
  Json j;
  j["delta0"] = r.delta0;
  j["entries"] = entries;
  j["bound_ok"] = r.bound_ok;
  j["k"] = r.k;
  j["dim"] = r.dim;
  j["semiconvex_ok"] = r.semiconvex_ok;
  j["min_real_hessian_eig"] = r.min_real_hessian_eig;
  return j;
}

Json to_json(const HolderReport& r) {
  Json bands = Json::array();
  for (const auto& b : r.bands)
    bands.push_back(Json{{"dist_lo", b.dist_lo},
                         {"dist_hi", b.dist_hi},
                         {"constant", b.constant},
                         {"pairs", b.pairs}});
  return Json{{"alpha", r.alpha},
              {"holder_constant", r.holder_constant},
              {"bands", bands}};
}

Json to_json(const CrosscheckReport& r) {
  Json j;
  j["k"] = r.k;
  j["tol"] = r.tol;
  j["b_samples"] = r.b_samples;
  j["margin_quotient"] = r.margin_quotient;
  j["margin_sigma_form"] = r.margin_sigma_form;
  j["margin_sorted_product"] = r.margin_sorted_product;
  j["margin_mixed"] = r.margin_mixed;
  j["margin_converse"] = r.margin_converse;
  j["failures"] = r.failures;
  j["all_ok"] = r.all_ok;
  return j;
}

std::string config_hash(const Json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hessiasol
