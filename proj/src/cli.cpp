#include "copekit/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "copekit/io.hpp"
#include "copekit/linalg.hpp"
#include "copekit/theories.hpp"

namespace copekit {

namespace {

struct Settings {
  std::string input;
  std::string output;
  std::string backend;
  double eps = kDefaultEps;
  std::uint64_t seed = 7;
  std::size_t restarts = 12;
  std::optional<std::size_t> max_k;

  std::string kind;
  std::vector<std::size_t> tom;
  std::optional<std::size_t> k;
  std::string model_path;
  std::vector<std::size_t> preps;
  std::vector<std::size_t> measurements;
  std::string theory;
  std::size_t count = 5;
  bool no_antipodes = false;
  bool cardinal = false;
};

std::string read_all(std::istream& s) {
  std::ostringstream buf;
  buf << s.rdbuf();
  return buf.str();
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_all(in);
  std::ifstream f(path);
  if (!f) throw ParseError("", "cannot open '" + path + "'");
  return read_all(f);
}

void write_output(const Settings& s, const std::string& text, std::ostream& out) {
  if (s.output.empty() || s.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(s.output);
  if (!f) throw PreconditionError("cannot write '" + s.output + "'");
  f << text;
}

CopeMatrix to_rational(const CopeMatrix& c) {
  const Matrix<double> m = c.to_float();
  Matrix<Rational> q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!snap_to_rational(m(i, j), c.eps(), 1000000, q(i, j)))
        throw PreconditionError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") has no nearby fraction; keep the float backend");
  CopeMatrix out(std::move(q), c.block_sizes());
  out.set_labels(c.preparation_labels(), c.measurement_labels(), c.outcome_labels());
  return out;
}

CopeMatrix apply_backend(const Settings& s, CopeMatrix c) {
  if (s.backend == "float") return c.is_exact() ? c.as_float(s.eps) : CopeMatrix(c.to_float(), c.block_sizes(), s.eps);
  if (s.backend == "rational") return c.is_exact() ? c : to_rational(c);
  return c;
}

CopeMatrix load_matrix(const Settings& s, std::istream& in) {
  CopeMatrix c = apply_backend(s, parse_cope(read_input(s.input, in)));
  require_valid(c);
  return c;
}

NmfOptions nmf_options(const Settings& s) {
  NmfOptions o;
  o.seed = s.seed;
  o.max_restarts = s.restarts;
  o.max_inner_dim = s.max_k;
  return o;
}

int cmd_info(const Settings& s, std::istream& in, std::ostream& out) {
  const CopeMatrix c = load_matrix(s, in);
  const auto q = quotient_extremal(c);
  const auto fid = fiducial_tomography_test(q.quotiented);
  std::ostringstream os;
  os << "backend: " << (c.is_exact() ? "rational" : "float") << "\n";
  if (!c.is_exact()) os << "eps: " << c.eps() << "\n";
  os << "preparations: " << c.num_preparations() << "\n";
  os << "measurements: " << c.num_measurements() << "\n";
  os << "outcomes per measurement: ";
  for (std::size_t b = 0; b < c.num_measurements(); ++b) os << (b ? "," : "") << c.block_sizes()[b];
  os << "\n";
  os << "rank: " << rank(c) << "\n";
  os << "quotient: " << q.quotiented.num_preparations() << " preparations, " << q.quotiented.num_measurements()
     << " measurements\n";
  os << "fiducial states: " << (fid.states_fiducial ? "yes" : "no") << "\n";
  os << "fiducial effects: " << (fid.effects_fiducial ? "yes" : "no") << "\n";
  write_output(s, os.str(), out);
  return exit_code::ok;
}

int cmd_validate(const Settings& s, std::istream& in, std::ostream& out) {
  const CopeMatrix c = apply_backend(s, parse_cope_unchecked(read_input(s.input, in)));
  const auto violations = validate(c);
  std::ostringstream os;
  if (violations.empty()) os << "valid\n";
  for (const auto& v : violations) os << v.message << "\n";
  write_output(s, os.str(), out);
  return violations.empty() ? exit_code::ok : exit_code::usage;
}

int cmd_factorize(const Settings& s, std::istream& in, std::ostream& out, std::ostream& err) {
  const CopeMatrix c = load_matrix(s, in);
  std::optional<ModelFactorization> m;
  if (s.kind == "pregpt") {
    m = pregpt_from_svd(c);
  } else if (s.kind == "gpt") {
    m = gpt(c);
  } else if (s.kind == "quasi") {
    const auto g = gpt(c);
    std::vector<std::size_t> tom = s.tom;
    // Default: the first independent state columns.
    if (tom.empty()) tom = g.visit([&](const auto& f) { return independent_columns(f.states, g.is_exact() ? 0.0 : g.eps); });
    m = quasi_from_gpt(g, tom);
  } else if (s.kind == "trivial") {
    m = trivial_ontological(c);
  } else if (s.kind == "nmf") {
    NmfOptions o = nmf_options(s);
    o.inner_dim = s.k.value_or(rank(c));
    m = nmf(c, o);
  } else if (s.kind == "enmf") {
    NmfOptions o = nmf_options(s);
    if (s.k) o.max_inner_dim = *s.k;
    m = enmf(c, o);
  }
  if (!m) {
    err << "no " << s.kind << " factorization found\n";
    return exit_code::failed;
  }
  write_output(s, emit_model(*m), out);
  return exit_code::ok;
}

int cmd_verify(const Settings& s, std::istream& in, std::ostream& out) {
  const CopeMatrix c = load_matrix(s, in);
  std::ifstream f(s.model_path);
  if (!f) throw ParseError("", "cannot open '" + s.model_path + "'");
  const ModelFactorization m = parse_model(read_all(f));
  const auto rep = classify_model(c, m);
  std::ostringstream os;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  os << "declared kind: " << to_string(m.kind) << "\n";
  os << "reconstruction: " << yn(rep.reconstruction_ok) << "\n";
  os << "unit: " << yn(rep.unit_ok) << "\n";
  os << "nonnegative: " << yn(rep.nonnegative_ok) << "\n";
  os << "states column-stochastic: " << yn(rep.states_column_stochastic_ok) << "\n";
  os << "rank C / effects / states: " << rep.rank_c << " / " << rep.rank_effects << " / " << rep.rank_states << "\n";
  os << "classes:";
  for (auto k : rep.inferred_kinds) os << " " << to_string(k);
  os << "\n";
  os << "satisfies declared kind: " << yn(rep.satisfies(m.kind)) << "\n";
  write_output(s, os.str(), out);
  return rep.satisfies(m.kind) ? exit_code::ok : exit_code::failed;
}

int cmd_certify(const Settings& s, std::istream& in, std::ostream& out) {
  const CopeMatrix c = load_matrix(s, in);
  const Certificate cert = certify(c, nmf_options(s));
  write_output(s, emit_certificate(cert), out);
  switch (cert.verdict) {
    case Verdict::Noncontextual: return exit_code::ok;
    case Verdict::Contextual: return exit_code::contextual;
    case Verdict::Undetermined: return exit_code::undetermined;
  }
  return exit_code::undetermined;
}

int cmd_generate(const Settings& s, std::ostream& out) {
  CopeMatrix c = [&] {
    if (s.theory == "spekkens") return spekkens();
    if (s.theory == "boxworld") return boxworld();
    if (s.theory == "extended-boxworld") return extended_boxworld();
    auto dirs = s.cardinal ? cardinal_directions() : generic_directions(s.count, s.seed);
    return discrete_qubit(dirs, !s.no_antipodes, s.eps);
  }();
  write_output(s, emit_cope(apply_backend(s, std::move(c))), out);
  return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational-theory contextuality toolkit", "copekit"};
  app.require_subcommand(1);
  Settings s;

  auto common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) sub->add_option("input", s.input, "Matrix document (default: stdin)");
    sub->add_option("-o,--output", s.output, "Write the result here instead of stdout");
    sub->add_option("--backend", s.backend, "Convert the input to this backend")
        ->check(CLI::IsMember({"rational", "float"}));
    sub->add_option("--eps", s.eps, "Float tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", s.seed, "Random seed");
    sub->add_option("--restarts", s.restarts, "NMF restarts")->check(CLI::PositiveNumber);
    sub->add_option("--max-k", s.max_k, "Largest inner dimension tried by the ENMF search");
  };

  auto* info = app.add_subcommand("info", "Dimensions, rank and fiducial tomography flags");
  common(info, true);
  auto* validate_cmd = app.add_subcommand("validate", "Check stochasticity; exit 2 on violations");
  common(validate_cmd, true);
  auto* quotient = app.add_subcommand("quotient", "Extremal quotient");
  common(quotient, true);
  auto* merge = app.add_subcommand("merge", "Merge all measurements into one");
  common(merge, true);
  auto* restrict_cmd = app.add_subcommand("restrict", "Fragment on chosen preparations and measurements (0-based)");
  common(restrict_cmd, true);
  restrict_cmd->add_option("--preps", s.preps, "Preparation indices")->delimiter(',')->required();
  restrict_cmd->add_option("--measurements", s.measurements, "Measurement indices")->delimiter(',')->required();
  auto* factorize = app.add_subcommand("factorize", "Write a model document");
  common(factorize, true);
  factorize->add_option("--kind", s.kind, "Model class")
      ->required()
      ->check(CLI::IsMember({"pregpt", "gpt", "quasi", "trivial", "nmf", "enmf"}));
  factorize->add_option("--tom", s.tom, "Tomographic state columns for --kind quasi (0-based)")->delimiter(',');
  factorize->add_option("-k", s.k, "Inner dimension (nmf) or largest inner dimension (enmf)");
  auto* verify = app.add_subcommand("verify", "Classify a model against a matrix; exit 1 if it fails its kind");
  common(verify, true);
  verify->add_option("--model", s.model_path, "Model document")->required();
  auto* certify_cmd = app.add_subcommand("certify", "Exit 0 noncontextual, 10 contextual, 20 undetermined");
  common(certify_cmd, true);
  auto* generate = app.add_subcommand("generate", "Write a built-in example matrix");
  common(generate, false);
  generate->add_option("--theory", s.theory, "Example theory")
      ->required()
      ->check(CLI::IsMember({"spekkens", "boxworld", "extended-boxworld", "qubit"}));
  generate->add_option("--count", s.count, "Number of qubit directions")->check(CLI::PositiveNumber);
  generate->add_flag("--no-antipodes", s.no_antipodes, "Omit the antipodal qubit preparations");
  generate->add_flag("--cardinal", s.cardinal, "Use the x, y, z axes as qubit directions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_code::usage;
  }

  try {
    if (*info) return cmd_info(s, in, out);
    if (*validate_cmd) return cmd_validate(s, in, out);
    if (*quotient) {
      write_output(s, emit_cope(quotient_extremal(load_matrix(s, in)).quotiented), out);
      return exit_code::ok;
    }
    if (*merge) {
      write_output(s, emit_cope(merge_measurements(load_matrix(s, in))), out);
      return exit_code::ok;
    }
    if (*restrict_cmd) {
      write_output(s, emit_cope(restrict_fragment(load_matrix(s, in), {s.preps, s.measurements})), out);
      return exit_code::ok;
    }
    if (*factorize) return cmd_factorize(s, in, out, err);
    if (*verify) return cmd_verify(s, in, out);
    if (*certify_cmd) return cmd_certify(s, in, out);
    if (*generate) return cmd_generate(s, out);
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return exit_code::guard;
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}

}  // namespace copekit
