#include "complab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "complab/report.hpp"

namespace complab {
namespace {

std::pair<cpx, std::string> parse_term(const std::string& term) {
  auto sep = term.find(':');
  if (sep == std::string::npos || sep == 0 || sep + 1 >= term.size()) {
    throw std::invalid_argument("term \"" + term +
                                "\" (expected <lambda>:<symbol spec>)");
  }
  const std::string lam = term.substr(0, sep);
  // Reuse the symbol mini-language's scalar grammar through a degree-zero
  // polynomial spec.
  cpx lambda = SelfMap::parse("poly:" + lam).origin_image();
  return {lambda, term.substr(sep + 1)};
}

cpx parse_scalar(const std::string& tok, const char* what) {
  try {
    return SelfMap::parse("poly:" + tok).origin_image();
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad complex literal \"" +
                                tok + "\"");
  }
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["weight"] = c.weight_spec;
  j["phi"] = c.phi_spec;
  j["psi"] = c.psi_spec;
  j["terms"] = c.term_specs;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["p"] = c.p;
  j["dim"] = c.dim;
  j["cuts"] = c.cuts;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["strategy"] = c.strategy;
  j["box_r"] = c.box_r;
  j["k_first"] = c.k_first;
  j["k_last"] = c.k_last;
  j["angular"] = c.angular;
  j["chi_far"] = c.chi_far;
  j["premise"] = c.premise;
  j["zeta_angle"] = c.zeta_angle;
  j["zeta_given"] = c.zeta_given;
  j["grid"] = c.grid;
  j["dump_matrix"] = c.dump_matrix;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.weight_spec = j.at("weight").get<std::string>();
  c.phi_spec = j.at("phi").get<std::string>();
  c.psi_spec = j.at("psi").get<std::string>();
  c.term_specs = j.at("terms").get<std::vector<std::string>>();
  c.lambda1 = j.at("lambda1").get<std::string>();
  c.lambda2 = j.at("lambda2").get<std::string>();
  c.p = j.at("p").get<double>();
  c.dim = j.at("dim").get<int>();
  c.cuts = j.at("cuts").get<std::vector<int>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.strategy = j.at("strategy").get<std::string>();
  c.box_r = j.at("box_r").get<double>();
  c.k_first = j.at("k_first").get<int>();
  c.k_last = j.at("k_last").get<int>();
  c.angular = j.at("angular").get<int>();
  c.chi_far = j.at("chi_far").get<std::string>();
  c.premise = j.at("premise").get<bool>();
  c.zeta_angle = j.at("zeta_angle").get<double>();
  c.zeta_given = j.at("zeta_given").get<bool>();
  c.grid = j.at("grid").get<int>();
  c.dump_matrix = j.value("dump_matrix", std::string());
  c.format = j.at("format").get<std::string>();
  return c;
}

struct Emitted {
  std::string text;      // full report body
  std::string verdict;   // empty when the command has no tri-state verdict
  bool inconclusive = false;
};

std::string envelope(const RunConfig& c, const std::string& verdict,
                     json report) {
  json j;
  j["command"] = c.command;
  j["verdict"] = verdict;
  j["report"] = std::move(report);
  j["config"] = config_json(c);
  return j.dump(2) + "\n";
}

Emitted run_weight_check(const RunConfig& c) {
  RadialWeight w = RadialWeight::parse(c.weight_spec);
  DoublingCertificate cert = doubling_check(w);
  std::string verdict = cert.in_upper && cert.in_lower ? "doubling-both"
                        : cert.in_upper               ? "doubling-upper-only"
                        : cert.in_lower               ? "doubling-lower-only"
                                                      : "doubling-neither";
  Emitted e;
  e.verdict = verdict;
  if (c.format == "csv") {
    std::string body = csv_line({"in_upper", "C_upper", "in_lower", "C_lower",
                                 "K", "alpha", "beta"});
    body += csv_line({cert.in_upper ? "1" : "0", format_double(cert.C_upper),
                      cert.in_lower ? "1" : "0", format_double(cert.C_lower),
                      format_double(cert.K), format_double(cert.alpha),
                      format_double(cert.beta)});
    e.text = body;
  } else {
    e.text = envelope(c, verdict, certificate_json(cert));
  }
  return e;
}

Emitted run_carleson(const RunConfig& c) {
  RadialWeight w = RadialWeight::parse(c.weight_spec);
  SelfMap phi = SelfMap::parse(c.phi_spec);
  phi.require_validated();

  std::function<double(cpx)> u;
  if (!c.chi_far.empty()) {
    SelfMap psi = SelfMap::parse(c.chi_far);
    psi.require_validated();
    const double threshold = c.box_r;
    u = [phi, psi, threshold](cpx z) {
      return rho(phi(z), psi(z)) >= threshold ? 1.0 : 0.0;
    };
  }
  std::vector<double> radii = dyadic_annuli(c.k_first, c.k_last);

  AnnulusScan scan;
  VerdictPolicy policy;
  if (c.premise) {
    scan = multiplier_decay_scan(phi, u, radii, c.angular, policy);
  } else {
    PullbackSampler sampler(phi, w, u);
    sampler.sample_count = c.samples;
    sampler.seed = c.seed;
    sampler.strategy = c.strategy == "tensor"
                           ? PullbackSampler::Strategy::tensor
                           : PullbackSampler::Strategy::monte_carlo;
    scan = vanishing_scan(sampler, c.box_r, radii, c.angular);
  }

  Emitted e;
  e.verdict = trend_name(scan.verdict);
  e.inconclusive = scan.verdict == Trend::inconclusive;
  if (c.format == "csv") {
    std::string body = csv_line({"radius", "sup_ratio", "stderr"});
    for (std::size_t k = 0; k < scan.radii.size(); ++k) {
      body += csv_line({format_double(scan.radii[k]), format_double(scan.sups[k]),
                        format_double(scan.stderrs[k])});
    }
    e.text = body;
  } else {
    e.text = envelope(c, e.verdict, annulus_scan_json(scan, policy));
  }
  return e;
}

Emitted run_essnorm(const RunConfig& c) {
  RadialWeight w = RadialWeight::parse(c.weight_spec);
  std::vector<std::pair<cpx, SelfMap>> terms;
  if (!c.phi_spec.empty()) {
    terms.emplace_back(cpx(1.0), SelfMap::parse(c.phi_spec));
  }
  for (const auto& t : c.term_specs) {
    auto [lambda, spec] = parse_term(t);
    terms.emplace_back(lambda, SelfMap::parse(spec));
  }
  if (terms.empty()) {
    throw std::invalid_argument("essnorm: need --phi or at least one --term");
  }
  TruncatedOperator op = combo_matrix(terms, w, c.dim);
  std::vector<int> cuts = c.cuts;
  for (int m : cuts) {
    if (m >= c.dim) {
      throw std::invalid_argument("essnorm: cut " + std::to_string(m) +
                                  " must stay below the dimension " +
                                  std::to_string(c.dim));
    }
  }
  if (!c.dump_matrix.empty()) write_matrix_csv(op, c.dump_matrix);
  std::vector<double> proxy = essnorm_proxy(op, cuts);

  Emitted e;
  if (c.format == "json") {
    json r;
    r["dim"] = c.dim;
    r["op_norm"] = op_norm(op);
    r["cuts"] = cuts;
    r["proxy"] = proxy;
    e.text = envelope(c, "", r);
  } else {
    std::string body = csv_line({"M", "proxy"});
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      body += csv_line({std::to_string(cuts[i]), format_double(proxy[i])});
    }
    e.text = body;
  }
  return e;
}

Emitted run_criterion(const RunConfig& c) {
  RadialWeight w = RadialWeight::parse(c.weight_spec);
  SelfMap phi = SelfMap::parse(c.phi_spec);
  SelfMap psi = SelfMap::parse(c.psi_spec);
  cpx l1 = parse_scalar(c.lambda1, "--lambda1");
  cpx l2 = parse_scalar(c.lambda2, "--lambda2");
  PairVerdict v = pair_compactness_verdict(phi, psi, l1, l2, w, c.p, c.dim);
  Emitted e;
  e.verdict = compactness_name(v.verdict);
  e.inconclusive = v.verdict == Compactness::inconclusive;
  if (c.format == "csv") {
    std::string body = csv_line({"radius", "sup"});
    for (std::size_t k = 0; k < v.moorhouse_scan.annuli.size(); ++k) {
      body += csv_line({format_double(v.moorhouse_scan.annuli[k]),
                        format_double(v.moorhouse_scan.sups[k])});
    }
    e.text = body;
  } else {
    e.text = envelope(c, e.verdict, v.to_json());
  }
  return e;
}

Emitted run_combo(const RunConfig& c) {
  RadialWeight w = RadialWeight::parse(c.weight_spec);
  std::vector<std::pair<cpx, SelfMap>> terms;
  for (const auto& t : c.term_specs) {
    auto [lambda, spec] = parse_term(t);
    terms.emplace_back(lambda, SelfMap::parse(spec));
  }
  if (terms.empty()) {
    throw std::invalid_argument("combo: need at least one --term");
  }

  Emitted e;
  if (!c.phi_spec.empty()) {
    SelfMap phi = SelfMap::parse(c.phi_spec);
    CombinationVerdict v =
        combination_compactness_verdict(phi, terms, w, c.grid, c.dim);
    e.verdict = compactness_name(v.verdict);
    e.inconclusive = v.verdict == Compactness::inconclusive;
    e.text = envelope(c, e.verdict, v.to_json());
    return e;
  }
  if (!c.zeta_given) {
    throw std::invalid_argument(
        "combo: provide --phi for a combination verdict or --zeta-angle for "
        "the boundary-point lower bound");
  }
  cpx zeta(std::cos(c.zeta_angle), std::sin(c.zeta_angle));
  DoublingCertificate cert = doubling_check(w);
  double bound = essential_norm_lower_bound(terms, zeta, cert, c.p);
  CancellationReport cancel = cancellation_conditions(terms, c.grid);
  json r;
  r["zeta"] = complex_json(zeta);
  r["lower_bound"] = bound;
  r["beta"] = cert.beta;
  r["cancellation_pass"] = cancel.pass;
  e.verdict = cancel.pass ? "cancellation-pass" : "cancellation-fail";
  e.text = envelope(c, e.verdict, r);
  return e;
}

Emitted run_replay(const RunConfig& c, std::ostream& err) {
  std::ifstream in(c.replay_path);
  if (!in) {
    throw std::invalid_argument("report --replay: cannot open " + c.replay_path);
  }
  json j = json::parse(in);
  RunConfig original = config_from_json(j.at("config"));
  original.output.clear();
  const std::string recorded = j.at("verdict").get<std::string>();

  std::ostringstream sink;
  int code = run_and_emit(original, sink, err);
  json rerun = json::parse(sink.str());
  const std::string now = rerun.at("verdict").get<std::string>();

  Emitted e;
  json r;
  r["recorded_verdict"] = recorded;
  r["replayed_verdict"] = now;
  r["match"] = recorded == now;
  e.verdict = recorded == now ? "replay-match" : "replay-mismatch";
  e.inconclusive = code == 2;
  e.text = envelope(c, e.verdict, r);
  if (recorded != now) {
    throw std::runtime_error("replay verdict changed: " + recorded + " -> " + now);
  }
  return e;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"composition-operator laboratory"};
  app.require_subcommand(1);

  auto add_weight = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--weight", c.weight_spec,
                                "weight spec: std:<alpha> | table:<csv>");
    if (required) opt->required();
  };

  CLI::App* wc = app.add_subcommand("weight-check", "certify a radial weight");
  add_weight(wc);
  wc->add_option("--out", c.output);
  wc->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* ca = app.add_subcommand("carleson", "pullback box-ratio scan");
  add_weight(ca);
  ca->add_option("--phi", c.phi_spec)->required();
  ca->add_option("--r", c.box_r);
  ca->add_option("--k-first", c.k_first);
  ca->add_option("--k-last", c.k_last);
  ca->add_option("--angular", c.angular);
  ca->add_option("--samples", c.samples);
  ca->add_option("--seed", c.seed);
  ca->add_option("--strategy", c.strategy)
      ->check(CLI::IsMember({"mc", "tensor"}));
  ca->add_option("--chi-far", c.chi_far,
                 "indicator multiplier 1[rho(phi,psi) >= r] with this psi");
  ca->add_flag("--premise", c.premise,
               "scan u(z)(1-|z|)/(1-|phi(z)|) instead of the pullback");
  ca->add_option("--out", c.output);
  ca->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* en = app.add_subcommand("essnorm", "essential-norm proxy decay");
  add_weight(en);
  en->add_option("--phi", c.phi_spec);
  en->add_option("--term", c.term_specs, "<lambda>:<symbol>, repeatable");
  en->add_option("--N", c.dim);
  en->add_option("--M", c.cuts, "projection cuts");
  en->add_option("--dump-matrix", c.dump_matrix,
                 "write <base>_re.csv and <base>_im.csv for the operator");
  en->add_option("--out", c.output);
  en->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* cr = app.add_subcommand("criterion", "two-symbol compactness verdict");
  add_weight(cr);
  cr->add_option("--phi", c.phi_spec)->required();
  cr->add_option("--psi", c.psi_spec)->required();
  cr->add_option("--lambda1", c.lambda1);
  cr->add_option("--lambda2", c.lambda2);
  cr->add_option("--p", c.p);
  cr->add_option("--N", c.dim);
  cr->add_option("--out", c.output);
  cr->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* co = app.add_subcommand(
      "combo", "linear-combination verdicts and boundary lower bounds");
  add_weight(co);
  co->add_option("--phi", c.phi_spec, "minuend symbol (combination verdict)");
  co->add_option("--term", c.term_specs, "<lambda>:<symbol>, repeatable");
  co->add_option("--p", c.p);
  co->add_option("--N", c.dim);
  co->add_option("--grid", c.grid);
  auto* za = co->add_option("--zeta-angle", c.zeta_angle,
                            "boundary angle for the lower bound");
  co->add_option("--out", c.output);
  co->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* rp = app.add_subcommand("report", "re-run a JSON report");
  rp->add_option("--replay", c.replay_path)->required();

  std::vector<std::string> argv_strings = args;
  std::vector<char*> argv;
  std::string prog = "complab";
  argv.push_back(prog.data());
  for (auto& s : argv_strings) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    c.command = "help";
    c.help_text = app.help();
    return c;
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  for (CLI::App* sub : app.get_subcommands()) {
    c.command = sub->get_name();
  }
  c.zeta_given = za->count() > 0;

  // Surface malformed weight/symbol specs at parse time with the offending
  // token, before any computation starts.
  if (!c.weight_spec.empty()) RadialWeight::parse(c.weight_spec);
  for (const std::string* spec : {&c.phi_spec, &c.psi_spec, &c.chi_far}) {
    if (!spec->empty()) SelfMap::parse(*spec);
  }
  for (const auto& t : c.term_specs) {
    auto [lambda, spec] = parse_term(t);
    (void)lambda;
    SelfMap::parse(spec);
  }
  if (c.command == "criterion" || c.command == "combo") {
    parse_scalar(c.lambda1, "--lambda1");
    parse_scalar(c.lambda2, "--lambda2");
  }
  return c;
}

int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Emitted e;
    if (config.command == "help") {
      out << config.help_text;
      return 0;
    } else if (config.command == "weight-check") {
      e = run_weight_check(config);
    } else if (config.command == "carleson") {
      e = run_carleson(config);
    } else if (config.command == "essnorm") {
      e = run_essnorm(config);
    } else if (config.command == "criterion") {
      e = run_criterion(config);
    } else if (config.command == "combo") {
      e = run_combo(config);
    } else if (config.command == "report") {
      e = run_replay(config, err);
    } else {
      throw std::invalid_argument("unknown command: " + config.command);
    }
    out << e.text;
    if (!config.output.empty()) write_file(config.output, e.text);
    return e.inconclusive ? 2 : 0;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace complab
