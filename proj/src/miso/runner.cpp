#include "runner.hpp"

#include <cstdlib>

#include "classify.hpp"
#include "io.hpp"
#include "pivotal.hpp"
#include "structure.hpp"

namespace miso {

namespace {

struct Options {
  Tolerances tol;
  Eigen::Index trunc = 8;
  unsigned long seed = 0;
  bool pretty = false;
  Json instance_b;
};

Complex complex_param(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError(where + ": expected a number or [re, im]");
}

Options parse_options(const std::string& options_json, const Instance* inst) {
  Options opt;
  if (inst) opt.tol = inst->tol;
  if (const char* env = std::getenv("MULTIISO_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || v <= 0.0)
      throw InputError("MULTIISO_TOL must be a positive number");
    opt.tol.tol_eq = v;
  }
  if (options_json.empty()) return opt;
  Json j;
  try {
    j = Json::parse(options_json);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("options: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw InputError("options: must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "tol_eq")
      opt.tol.tol_eq = it.value().get<double>();
    else if (k == "tol_rank")
      opt.tol.tol_rank = it.value().get<double>();
    else if (k == "tol_orth")
      opt.tol.tol_orth = it.value().get<double>();
    else if (k == "trunc")
      opt.trunc = it.value().get<long long>();
    else if (k == "seed")
      opt.seed = it.value().get<unsigned long>();
    else if (k == "pretty")
      opt.pretty = it.value().get<bool>();
    else if (k == "instance_b")
      opt.instance_b = it.value();
    else
      throw InputError("options: unknown field \"" + k + "\"");
  }
  opt.tol.check();
  if (opt.trunc < 1) throw InputError("options: trunc must be >= 1");
  return opt;
}

Json validation_to_json(const ValidationReport& v) {
  Json r;
  r["commutation"] = v.commutation;
  r["product_identity"] = v.product_identity;
  r["balance"] = v.balance;
  r["balance_projection"] = v.balance_projection;
  r["resolution"] = v.resolution;
  return r;
}

Json new_report(const std::string& command) {
  Json report;
  report["command"] = command;
  report["pass"] = false;
  report["residuals"] = Json::object();
  report["artifacts"] = Json::object();
  report["notes"] = Json::array();
  return report;
}

Json tuple_instance_json(const ModelTuple& t) {
  Instance inst;
  inst.tuple = t;
  return instance_to_json(inst);
}

void require_pairs(const Instance& inst, Eigen::Index n,
                   const std::string& command) {
  if (inst.tuple.n() < n)
    throw InputError(command + ": instance must provide at least " +
                     std::to_string(n) + " (U, P) pairs");
}

Json cmd_validate(const Instance& inst, const Options& opt) {
  Json report = new_report("validate");
  inst.tuple.check_well_formed(opt.tol);
  ValidationReport v = validate_model(inst.tuple, opt.tol);
  report["residuals"] = validation_to_json(v);
  report["pass"] = v.pass;
  return report;
}

Json cmd_compose(const Instance& inst, const Options& opt) {
  Json report = new_report("compose");
  require_pairs(inst, 2, "compose");
  const auto& a = inst.tuple.pairs[0];
  const auto& b = inst.tuple.pairs[1];
  auto [u, p] = compose(a.U, a.P, b.U, b.P, opt.tol);
  report["residuals"]["orthogonality"] = frob(a.P * b.U * b.P);
  ModelTuple out;
  out.dim_E = inst.tuple.dim_E;
  out.pairs.push_back({u, p});
  report["artifacts"]["instance"] = tuple_instance_json(out);
  report["pass"] = true;
  return report;
}

Json cmd_complete(const Instance& inst, const Options& opt) {
  Json report = new_report("complete");
  require_pairs(inst, 1, "complete");
  ModelTuple out = complete_tuple(inst.tuple.pairs, opt.tol);
  ValidationReport v = validate_model(out, opt.tol);
  report["residuals"] = validation_to_json(v);
  report["artifacts"]["instance"] = tuple_instance_json(out);
  report["pass"] = v.pass;
  return report;
}

Json cmd_pivotal(const Instance& inst, const Options& opt) {
  Json report = new_report("pivotal");
  require_pairs(inst, 2, "pivotal");
  const ComplexMatrix& u1 = inst.tuple.pairs[0].U;
  const ComplexMatrix& p1 = inst.tuple.pairs[0].P;
  const ComplexMatrix& u2 = inst.tuple.pairs[1].U;

  report["artifacts"]["T1"] = matrix_to_json(pivotal_operator(u1, p1, opt.tol));
  ExistsP2Result ex = exists_p2(u1, u2, p1, opt.tol);
  report["artifacts"]["q_min"] = subspace_to_json(ex.q_min_space);
  report["artifacts"]["q_max"] = subspace_to_json(ex.q_max_space);
  report["artifacts"]["exists_p2"] = ex.exists;
  if (ex.witness) {
    ComplexMatrix w = *ex.witness;
    report["artifacts"]["witness"] = matrix_to_json(w);
  }
  LatticeResult lat = p2_lattice(u1, u2, p1, opt.tol);
  Json latj;
  latj["enumerable"] = lat.enumerable;
  latj["reason"] = lat.reason;
  latj["count"] = lat.admissible.size();
  latj["meet_join_closed"] = lat.meet_join_closed;
  latj["all_w_unitary"] = lat.all_w_unitary;
  report["artifacts"]["lattice"] = latj;
  report["pass"] = ex.exists;
  return report;
}

Json cmd_build3(const Instance& inst, const Options& opt) {
  Json report = new_report("build3");
  require_pairs(inst, 2, "build3");
  const ComplexMatrix& u1 = inst.tuple.pairs[0].U;
  const ComplexMatrix& p1 = inst.tuple.pairs[0].P;
  const ComplexMatrix& u2 = inst.tuple.pairs[1].U;

  if (!inst.params.contains("q1"))
    throw InputError("build3: params.q1 is required (\"min\", \"max\" or a "
                     "basis matrix)");
  const Json& q1spec = inst.params["q1"];
  Subspace q1;
  if (q1spec.is_string() && q1spec.get<std::string>() == "min")
    q1 = q_min(u1, u2, p1, opt.tol);
  else if (q1spec.is_string() && q1spec.get<std::string>() == "max")
    q1 = q_max(u1, u2, p1, opt.tol);
  else if (q1spec.is_array())
    q1 = span(matrix_from_json(q1spec, "params.q1"), opt.tol);
  else
    throw InputError("build3: params.q1 must be \"min\", \"max\" or a matrix");

  ModelTuple out = build_3isometry(u1, u2, p1, q1, opt.tol);
  ValidationReport v = validate_model(out, opt.tol);
  report["residuals"] = validation_to_json(v);
  report["artifacts"]["instance"] = tuple_instance_json(out);
  report["artifacts"]["q1"] = subspace_to_json(q1);
  report["pass"] = v.pass;
  return report;
}

Json cmd_structure(const Instance& inst, const Options& opt) {
  Json report = new_report("structure");
  require_pairs(inst, 1, "structure");
  ModelTriple triple{inst.tuple.dim_E, inst.tuple.pairs[0].U,
                     inst.tuple.pairs[0].P};
  triple.check_well_formed(opt.tol);

  TZData tz = extract_TZ(triple, opt.tol);
  report["artifacts"]["f_dim"] = tz.f_dim;
  report["artifacts"]["fp_dim"] = tz.fp_dim;
  report["artifacts"]["T"] = matrix_to_json(tz.T);
  report["artifacts"]["Z"] = matrix_to_json(tz.Z);
  report["residuals"]["identification"] = tz.identification_residual;

  ContractionParts parts = contraction_parts(tz.T, opt.tol);
  report["artifacts"]["unitary_part_dim"] = parts.unitary_space.dim();
  report["artifacts"]["cnu_part_dim"] = parts.cnu_space.dim();
  report["residuals"]["reducing"] = parts.reducing_residual;
  report["artifacts"]["cnu_is_c_dot_zero"] = is_c_dot_zero(parts.T_cnu);

  Nonet nonet = nonet_extract(tz.Z, tz.fp_dim, tz.T, opt.tol);
  Json nj;
  nj["r_dim"] = nonet.R.dim();
  nj["r_star_dim"] = nonet.R_star.dim();
  nj["Tp"] = matrix_to_json(nonet.Tp);
  report["artifacts"]["nonet"] = nj;

  WoldReductionReport wold = wold_reduction_check(triple, opt.trunc, opt.tol);
  Json wj;
  wj["hypothesis_met"] = wold.hypothesis_met;
  wj["invariance"] = wold.invariance_residual;
  wj["constant_multiplier"] = wold.constant_multiplier_residual;
  wj["orthogonality"] = wold.orthogonality_residual;
  report["artifacts"]["wold"] = wj;
  if (!wold.hypothesis_met)
    report["notes"].push_back(
        "wold reduction hypothesis not met: cnu part of the pivotal "
        "contraction has spectral radius 1 within tolerance");
  report["pass"] = wold.hypothesis_met ? wold.pass : true;
  return report;
}

Json cmd_classify(const Instance& inst, const Options& opt) {
  Json report = new_report("classify");
  inst.tuple.check_well_formed(opt.tol);
  ValidationReport v = validate_model(inst.tuple, opt.tol);
  report["residuals"] = validation_to_json(v);
  report["pass"] = v.pass;

  PurityReport pur = purity_and_multiplicity(inst.tuple, opt.trunc, opt.tol);
  Json pj;
  pj["multiplicities"] = pur.multiplicities;
  pj["product_multiplicity"] = pur.product_multiplicity;
  pj["proper"] = pur.proper;
  pj["irreducible"] = pur.irreducible;
  pj["dim_bound_ok"] = pur.dim_bound_ok;
  pj["low_multiplicity_case"] = pur.low_multiplicity_case;
  pj["multiplicity_one_present"] = pur.multiplicity_one_present;
  pj["factor_pure"] = pur.factor_pure;
  report["artifacts"]["purity"] = pj;
  report["artifacts"]["commutant_dimension"] =
      commutant_dimension(inst.tuple, opt.tol);

  if (inst.tuple.dim_E == 2 && inst.tuple.n() == 2) {
    try {
      Canonical2 c2 = canonical2_extract(inst.tuple, opt.tol);
      Json cj;
      cj["c"] = Json::array({c2.c.real(), c2.c.imag()});
      cj["theta"] = Json::array({c2.theta.real(), c2.theta.imag()});
      report["artifacts"]["canonical2"] = cj;
    } catch (const Error& e) {
      report["notes"].push_back(std::string("canonical2 extraction: ") +
                                e.what());
    }
  }
  if (inst.tuple.dim_E == 3 && inst.tuple.n() == 3) {
    try {
      auto [n, nrep] = normality_obstruction(
          inst.tuple.pairs[0].U, inst.tuple.pairs[1].U, inst.tuple.pairs[0].P,
          inst.tuple.pairs[1].P, opt.tol);
      Json nj;
      nj["n_norm"] = nrep.n_norm;
      nj["n_vanishes"] = nrep.n_vanishes;
      nj["moduli_ok"] = nrep.moduli_ok;
      nj["be_nonzero"] = nrep.be_nonzero;
      report["artifacts"]["normality"] = nj;
    } catch (const Error& e) {
      report["notes"].push_back(std::string("normality obstruction: ") +
                                e.what());
    }
  }
  return report;
}

Json cmd_equiv(const Instance& inst, const Options& opt) {
  Json report = new_report("equiv");
  if (opt.instance_b.is_null())
    throw InputError("equiv: options.instance_b is required");
  Instance b = parse_instance_json(opt.instance_b);
  EquivalenceResult eq = equivalent(inst.tuple, b.tuple, opt.tol, opt.seed);
  switch (eq.status) {
    case EquivalenceStatus::equivalent:
      report["artifacts"]["status"] = "equivalent";
      break;
    case EquivalenceStatus::not_equivalent:
      report["artifacts"]["status"] = "not_equivalent";
      break;
    case EquivalenceStatus::undecided:
      report["artifacts"]["status"] = "undecided";
      break;
  }
  if (eq.intertwiner)
    report["artifacts"]["intertwiner"] = matrix_to_json(*eq.intertwiner);
  if (!eq.reason.empty()) report["notes"].push_back(eq.reason);
  report["pass"] = eq.status == EquivalenceStatus::equivalent;
  return report;
}

Json cmd_canonical(const Json& params, const Options& opt) {
  Json report = new_report("canonical");
  if (!params.contains("kind"))
    throw InputError("canonical: params.kind must be \"canonical2\" or "
                     "\"canonical3\"");
  const std::string kind = params["kind"].get<std::string>();
  if (kind == "canonical2") {
    Canonical2 p{complex_param(params.at("c"), "params.c"),
                 complex_param(params.at("theta"), "params.theta")};
    ModelTuple t = canonical2_build(p, opt.tol);
    ValidationReport v = validate_model(t, opt.tol);
    report["residuals"] = validation_to_json(v);
    report["artifacts"]["instance"] = tuple_instance_json(t);
    report["pass"] = v.pass;
  } else if (kind == "canonical3") {
    Canonical3 p{complex_param(params.at("alpha"), "params.alpha"),
                 complex_param(params.at("alpha1"), "params.alpha1"),
                 complex_param(params.at("theta"), "params.theta"),
                 complex_param(params.at("theta1"), "params.theta1")};
    Canonical3Report crep;
    ModelTuple t = canonical3_build(p, &crep, opt.tol);
    ValidationReport v = validate_model(t, opt.tol);
    report["residuals"] = validation_to_json(v);
    report["residuals"]["normality"] = crep.n_norm;
    report["residuals"]["moebius"] = crep.moebius_residual;
    report["artifacts"]["instance"] = tuple_instance_json(t);
    report["artifacts"]["candidates_tried"] = crep.candidates_tried;
    report["artifacts"]["irreducible"] = crep.irreducible;
    report["notes"].push_back(crep.relations);
    report["pass"] = v.pass;
  } else {
    throw InputError("canonical: unknown kind \"" + kind + "\"");
  }
  return report;
}

Json cmd_blaschke(const Json& params, const Options& opt) {
  Json report = new_report("blaschke");
  if (!params.contains("phis") || !params["phis"].is_array() ||
      params["phis"].empty())
    throw InputError("blaschke: params.phis must be a non-empty array");
  std::vector<BlaschkeProduct> phis;
  for (const Json& pj : params["phis"]) {
    BlaschkeProduct b;
    if (!pj.is_object() || !pj.contains("zeros"))
      throw InputError("blaschke: each phi needs a \"zeros\" array");
    for (const Json& z : pj.at("zeros"))
      b.zeros.push_back(complex_param(z, "phis.zeros"));
    if (pj.contains("constant"))
      b.constant = complex_param(pj["constant"], "phis.constant");
    phis.push_back(std::move(b));
  }
  Eigen::Index n_blocks = opt.trunc;
  if (params.contains("trunc")) n_blocks = params["trunc"].get<long long>();

  BlaschkeModelResult res = model_from_blaschke(phis, n_blocks, opt.tol);
  Tolerances vt = opt.tol;
  vt.tol_eq = std::max(vt.tol_eq, res.tol_model);
  vt.tol_orth = std::max(vt.tol_orth, res.tol_model);
  ValidationReport v = validate_model(res.tuple, vt);
  report["residuals"] = validation_to_json(v);
  report["artifacts"]["instance"] = tuple_instance_json(res.tuple);
  report["artifacts"]["rho"] = res.rho;
  report["artifacts"]["tol_model"] = res.tol_model;
  report["pass"] = v.pass;
  return report;
}

Json cmd_nonblaschke(const Options& opt) {
  Json report = new_report("nonblaschke");
  NonblaschkeReport r = nonblaschke_example(opt.trunc, opt.tol);
  report["residuals"]["commutation"] = r.commutation_residual;
  report["residuals"]["isometry"] = r.isometry_residual;
  report["residuals"]["square"] = r.square_residual;
  report["residuals"]["zero_divisor"] = r.zero_divisor_residual;
  report["artifacts"]["diff_norm"] = r.diff_norm;
  report["artifacts"]["sum_norm"] = r.sum_norm;
  report["artifacts"]["product_multiplicity"] = r.product_multiplicity;
  report["pass"] = r.pass;
  return report;
}

} // namespace

const char* version_string() { return "0.1.0"; }

RunResult run_command(const std::string& command,
                      const std::string& instance_json,
                      const std::string& options_json) {
  bool pretty = false;
  try {
    const bool needs_instance =
        command != "canonical" && command != "blaschke" &&
        command != "nonblaschke";
    Instance inst;
    if (needs_instance) {
      if (instance_json.empty())
        throw InputError(command + ": instance document required");
      inst = parse_instance(instance_json);
    } else if (!instance_json.empty()) {
      // parameter-only commands accept {"params": {...}} documents
      Json j = Json::parse(instance_json, nullptr, true);
      if (j.is_object() && j.contains("params")) inst.params = j["params"];
    }
    Options opt = parse_options(options_json, needs_instance ? &inst : nullptr);
    pretty = opt.pretty;

    Json report;
    if (command == "validate")
      report = cmd_validate(inst, opt);
    else if (command == "compose")
      report = cmd_compose(inst, opt);
    else if (command == "complete")
      report = cmd_complete(inst, opt);
    else if (command == "pivotal")
      report = cmd_pivotal(inst, opt);
    else if (command == "build3")
      report = cmd_build3(inst, opt);
    else if (command == "structure")
      report = cmd_structure(inst, opt);
    else if (command == "classify")
      report = cmd_classify(inst, opt);
    else if (command == "equiv")
      report = cmd_equiv(inst, opt);
    else if (command == "canonical")
      report = cmd_canonical(inst.params, opt);
    else if (command == "blaschke")
      report = cmd_blaschke(inst.params, opt);
    else if (command == "nonblaschke")
      report = cmd_nonblaschke(opt);
    else
      throw InputError("unknown command \"" + command + "\"");

    return {report["pass"].get<bool>() ? 0 : 1,
            dump_normalized(report, pretty)};
  } catch (const InputError& e) {
    Json err;
    err["command"] = command;
    err["error"] = std::string("input error: ") + e.what();
    return {2, dump_normalized(err, pretty)};
  } catch (const PreconditionError& e) {
    Json report = new_report(command);
    report["pass"] = false;
    report["notes"].push_back(std::string("precondition failed: ") + e.what());
    return {1, dump_normalized(report, pretty)};
  } catch (const Error& e) {
    Json err;
    err["command"] = command;
    err["error"] = e.what();
    return {2, dump_normalized(err, pretty)};
  } catch (const std::exception& e) {
    Json err;
    err["command"] = command;
    err["error"] = e.what();
    return {2, dump_normalized(err, pretty)};
  }
}

} // namespace miso
