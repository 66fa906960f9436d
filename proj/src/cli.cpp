#include "pairdim/cli.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairdim/acfqe.hpp"
#include "pairdim/dim2.hpp"
#include "pairdim/error.hpp"
#include "pairdim/oracle.hpp"
#include "pairdim/pairnf.hpp"
#include "pairdim/pregeo.hpp"

namespace pairdim::cli {

using nlohmann::json;

namespace {

struct Options {
  unsigned long characteristic = 0;
  std::vector<std::string> trans;
  std::string out;
  std::size_t max_clauses = 10000;
  std::string format = "json";
  std::string input;
  std::vector<std::string> vars;
  std::vector<std::string> small;
  std::string fiber = "z";
  std::vector<std::string> at;
  std::size_t samples = 100;
  std::uint32_t seed = 1;
};

struct Outcome {
  Outcome() = default;
  Outcome(std::string k, std::string in)
      : kind(std::move(k)), input(std::move(in)) {}

  std::string kind;
  std::string input;
  json options = json::object();
  json payload;
  int exit_code = kExitOk;
};

json dim_json(int d) {
  if (d == kNegInf) return "neg_inf";
  return d;
}

std::vector<std::string> merged_trans(const std::vector<std::string>& flag,
                                      const std::vector<std::string>& header) {
  std::vector<std::string> out = flag;
  for (const auto& t : header) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

EngineContext context_for(const Options& o,
                          const std::vector<std::string>& header = {}) {
  EngineContext ctx;
  ctx.characteristic = Characteristic(o.characteristic);
  ctx.transcendentals = merged_trans(o.trans, header);
  ctx.max_clauses = o.max_clauses;
  return ctx;
}

std::vector<std::string> field_free_vars(const Formula& f,
                                         const EngineContext& ctx) {
  std::vector<std::string> out;
  for (const auto& v : free_vars(f)) {
    if (!ctx.is_transcendental(v)) out.push_back(v);
  }
  return out;
}

json very_special_json(const VerySpecialFormula& v) {
  json eqs = json::array();
  for (const auto& e : v.eqs) eqs.push_back(e.to_string());
  return json{{"smallVars", v.u_vars},
              {"equations", eqs},
              {"inequation", v.ineq.to_string()},
              {"formula", print(to_formula(v))}};
}

json normal_form_json(const PairNormalForm& nf) {
  json disjuncts = json::array();
  for (const auto& d : nf.disjuncts) {
    json negatives = json::array();
    for (const auto& n : d.negatives) negatives.push_back(very_special_json(n));
    disjuncts.push_back(
        {{"positive", very_special_json(d.positive)}, {"negatives", negatives}});
  }
  return json{{"formula", print(to_formula(nf))}, {"disjuncts", disjuncts}};
}

json optional_formula(const std::optional<Formula>& f) {
  if (!f) return nullptr;
  return print(*f);
}

json certificate_json(const DimCertificate& c) {
  json parts = json::object();
  for (const auto& [role, part] : c.parts) parts[role] = certificate_json(part);
  return json{{"dimension", dim_json(c.dimension)},
              {"vars", c.vars},
              {"set", c.set_formula},
              {"method", c.method},
              {"variable", c.variable},
              {"rejectedVariables", c.rejected_variables},
              {"emptyFormula", optional_formula(c.empty_formula)},
              {"smallNonemptyFormula", optional_formula(c.small_nonempty_formula)},
              {"smallNonemptyUpperFormula",
               optional_formula(c.small_nonempty_upper_formula)},
              {"coSmallFormula", optional_formula(c.co_small_formula)},
              {"exactPartition", c.exact_partition},
              {"parts", parts}};
}

// ---------------------------------------------------------------------------
// Subcommands

Outcome run_parse(const Options& o) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  Outcome r{"parse", o.input};
  r.payload = {{"formula", print(parsed.formula)},
               {"freeVariables", field_free_vars(parsed.formula, ctx)},
               {"quantifierFree", is_quantifier_free(parsed.formula)},
               {"mentionsU", mentions_u(parsed.formula)}};
  return r;
}

Outcome run_qe(const Options& o) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  Formula reduced = qe(parsed.formula, ctx);
  Outcome r{"qe", o.input};
  r.payload = {{"formula", print(reduced)}};
  if (field_free_vars(parsed.formula, ctx).empty()) {
    r.payload["truth"] = decide_sentence(parsed.formula, ctx);
  } else {
    r.payload["truth"] = nullptr;
  }
  return r;
}

Outcome run_normalize(const Options& o) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  Outcome r{"normalForm", o.input};
  r.payload = normal_form_json(normalize(parsed.formula, ctx));
  return r;
}

Outcome run_dim(const Options& o) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  std::vector<std::string> vars = o.vars;
  if (vars.empty()) vars = field_free_vars(parsed.formula, ctx);
  DimCertificate cert = dim(normalize(parsed.formula, ctx), vars, ctx);
  Outcome r{"dim", o.input};
  r.options["vars"] = vars;
  r.payload = {{"dimension", dim_json(cert.dimension)},
               {"certificate", certificate_json(cert)}};
  return r;
}

Outcome run_dichotomy(const Options& o) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  std::vector<std::string> free = field_free_vars(parsed.formula, ctx);
  std::string z = o.fiber;
  if (free.size() == 1) z = free[0];
  if (free.size() > 1) {
    throw Error(ErrorKind::FreeVariable,
                "dichotomy needs a set in one variable; free variables: " +
                    print(parsed.formula));
  }
  DichotomyResult d = dichotomy(normalize(parsed.formula, ctx), z, ctx);
  Outcome r{"dichotomy", o.input};
  r.options["fiber"] = z;
  r.payload = {{"label", to_string(d.label)},
               {"variable", z},
               {"smallFormula", print(d.small_formula)},
               {"small", d.small},
               {"complementSmallFormula", print(d.complement_small_formula)},
               {"complementSmall", d.complement_small},
               {"complement", normal_form_json(d.complement)}};
  return r;
}

Outcome run_witness(const Options& o) {
  EngineContext ctx = context_for(o);
  Polynomial p = parse_polynomial(o.input);
  std::map<std::string, Polynomial> at;
  for (const auto& binding : o.at) {
    auto eq = binding.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument,
                  "--at expects name=polynomial, got " + binding);
    }
    at[binding.substr(0, eq)] = parse_polynomial(binding.substr(eq + 1));
  }
  InternalityWitness w = almost_internal_witness(p, o.small, o.fiber, at, ctx);
  Outcome r{"witness", o.input};
  json at_json = json::object();
  for (const auto& [name, value] : at) at_json[name] = value.to_string();
  r.options = {{"small", o.small}, {"fiber", o.fiber}, {"at", o.at}};
  r.payload = {{"relation", print(w.relation)},
               {"bound", w.bound},
               {"smallVars", w.small_vars},
               {"fiberVar", w.fiber_var},
               {"polynomial", w.polynomial.to_string()},
               {"image", print(w.image)},
               {"assignment", at_json}};
  return r;
}

std::string read_source(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  std::ifstream in(arg);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + arg);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Points are given by index or by label.
pregeo::Subset subset_from(const json& items,
                           const std::vector<std::string>& labels) {
  if (!items.is_array()) {
    throw Error(ErrorKind::InvalidArgument, "expected a list of points");
  }
  pregeo::Subset s = 0;
  for (const auto& item : items) {
    std::size_t index = labels.size();
    if (item.is_number_unsigned()) {
      index = item.get<std::size_t>();
    } else {
      std::string key = item.is_string() ? item.get<std::string>() : item.dump();
      index = static_cast<std::size_t>(
          std::find(labels.begin(), labels.end(), key) - labels.begin());
    }
    if (index >= labels.size()) {
      throw Error(ErrorKind::InvalidArgument, "unknown point " + item.dump());
    }
    s |= pregeo::Subset(1) << index;
  }
  return s;
}

json subset_json(const pregeo::FiniteClosureSystem& sys, pregeo::Subset s) {
  json out = json::array();
  for (auto i : pregeo::members(s)) out.push_back(sys.labels()[i]);
  return out;
}

pregeo::FiniteClosureSystem system_from(const json& description) {
  std::string kind = description.at("kind").get<std::string>();
  if (kind == "linear") {
    return pregeo::linear_instance(
        description.at("vectors").get<std::vector<std::vector<long>>>(),
        description.at("prime").get<unsigned long>());
  }
  if (kind == "identity") {
    return pregeo::identity_instance(description.at("size").get<std::size_t>());
  }
  if (kind == "explicit") {
    std::vector<std::string> labels;
    for (const auto& g : description.at("ground")) {
      labels.push_back(g.is_string() ? g.get<std::string>() : g.dump());
    }
    if (labels.size() > pregeo::kMaxGround) {
      throw Error(ErrorKind::TooLarge,
                  "ground set has " + std::to_string(labels.size()) + " points");
    }
    std::vector<std::pair<pregeo::Subset, pregeo::Subset>> table;
    if (description.contains("closure")) {
      for (const auto& entry : description.at("closure")) {
        table.emplace_back(subset_from(entry.at("set"), labels),
                           subset_from(entry.at("closure"), labels));
      }
    }
    return pregeo::explicit_instance(labels, table);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown closure kind " + kind);
}

json axiom_json(const pregeo::FiniteClosureSystem& sys,
                const pregeo::AxiomResult& a) {
  json out = {{"pass", a.pass}, {"witness", nullptr}};
  if (a.witness) {
    const auto& w = *a.witness;
    json witness = {{"set", subset_json(sys, w.set)},
                    {"other", subset_json(sys, w.other)},
                    {"a", nullptr},
                    {"b", nullptr}};
    if (w.a) witness["a"] = sys.labels()[*w.a];
    if (w.b) witness["b"] = sys.labels()[*w.b];
    out["witness"] = witness;
  }
  return out;
}

Outcome run_pregeo(const Options& o) {
  json description;
  try {
    description = json::parse(read_source(o.input));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Syntax, std::string("closure description: ") + e.what());
  }
  Outcome r{"pregeoCheck", description.dump()};
  pregeo::FiniteClosureSystem sys = [&] {
    try {
      return system_from(description);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("closure description: ") + e.what());
    }
  }();
  pregeo::AxiomReport report = pregeo::check_axioms(sys);
  json axioms = {{"extensive", axiom_json(sys, report.extensive)},
                 {"monotone", axiom_json(sys, report.monotone)},
                 {"idempotent", axiom_json(sys, report.idempotent)},
                 {"finiteCharacter", axiom_json(sys, report.finite_character)},
                 {"exchange", axiom_json(sys, report.exchange)}};
  r.payload = {{"labels", sys.labels()},
               {"axioms", axioms},
               {"pregeometry", report.all_pass()},
               {"rank", nullptr},
               {"queries", json::array()}};
  if (report.all_pass()) {
    r.payload["rank"] = pregeo::rank(sys, 0, sys.ground());
  }
  if (description.contains("queries")) {
    for (const auto& q : description.at("queries")) {
      pregeo::Subset a = subset_from(q.at("A"), sys.labels());
      pregeo::Subset b = subset_from(q.at("B"), sys.labels());
      unsigned k = pregeo::rank(sys, a, b);
      r.payload["queries"].push_back(
          {{"A", subset_json(sys, a)},
           {"B", subset_json(sys, b)},
           {"rank", k},
           {"basis", subset_json(sys, [&] {
              pregeo::Subset basis = 0;
              for (auto i : pregeo::greedy_basis(sys, a, b)) {
                basis |= pregeo::Subset(1) << i;
              }
              return basis;
            }())}});
    }
  }
  return r;
}

Outcome run_check(const Options& o, std::ostream& err) {
  ParsedFormula parsed = parse(o.input);
  EngineContext ctx = context_for(o, parsed.transcendentals);
  PairNormalForm nf = normalize(parsed.formula, ctx);
  Formula engine = to_formula(nf);
  auto points = oracle::generate_assignments(field_free_vars(parsed.formula, ctx),
                                             o.samples, ctx, o.seed);
  oracle::SampleReport report =
      oracle::sample_check(engine, parsed.formula, points, ctx);
  json disagreements = json::array();
  for (const auto& d : report.disagreements) {
    json at = json::object();
    for (const auto& [name, value] : d.assignment) at[name] = value.to_string();
    disagreements.push_back({{"assignment", at},
                             {"engine", d.engine_verdict},
                             {"oracle", d.oracle_verdict}});
  }
  Outcome r{"checkReport", o.input};
  r.options = {{"samples", o.samples}, {"seed", o.seed}};
  r.payload = {{"normalForm", print(engine)},
               {"total", report.total},
               {"agreements", report.agreements},
               {"disagreements", disagreements}};
  if (!report.disagreements.empty()) {
    err << "check: " << report.disagreements.size() << " of " << report.total
        << " samples disagree\n";
    r.exit_code = kExitError;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Output

void flatten(const json& j, const std::string& path, std::ostream& os) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) {
      flatten(v, path.empty() ? k : path + "." + k, os);
    }
  } else if (j.is_array() && !j.empty() && !j.front().is_primitive()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump())
       << "\n";
  }
}

std::string render(const Outcome& r, const Options& o,
                   const std::vector<std::string>& trans) {
  json options = r.options;
  options["maxClauses"] = o.max_clauses;
  json cert = {{"schemaVersion", kSchemaVersion},
               {"kind", r.kind},
               {"input", r.input},
               {"char", o.characteristic},
               {"transcendentals", trans},
               {"options", options},
               {"payload", r.payload},
               {"engineVersion", kEngineVersion}};
  if (o.format == "text") {
    std::ostringstream os;
    os << "kind: " << r.kind << "\n";
    os << "input: " << r.input << "\n";
    flatten(r.payload, "", os);
    return os.str();
  }
  return cert.dump(2) + "\n";
}

std::vector<std::string> declared_trans(const Options& o,
                                        const std::string& kind) {
  if (kind == "witness" || kind == "pregeoCheck") return o.trans;
  return merged_trans(o.trans, parse(o.input).transcendentals);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Symbolic engine for pairs of algebraically closed fields",
               "pairdim"};
  app.require_subcommand(1);
  app.add_option("--char", o.characteristic, "characteristic, 0 or a prime");
  app.add_option("--trans", o.trans, "transcendental constants")
      ->delimiter(',')
      ->allow_extra_args(false);
  app.add_option("--out", o.out, "write the certificate to a file");
  app.add_option("--max-clauses", o.max_clauses, "DNF size limit");
  app.add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  auto formula_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("input", o.input, "formula")->required();
    return sub;
  };
  formula_command("parse", "parse and print a formula");
  formula_command("qe", "eliminate quantifiers of a ring-language formula");
  formula_command("normalize", "pair normal form");
  formula_command("dim", "pregeometry dimension")
      ->add_option("--vars", o.vars, "ambient coordinates")
      ->delimiter(',')
      ->allow_extra_args(false);
  formula_command("dichotomy", "small or co-small, for a set in one variable")
      ->add_option("--fiber", o.fiber, "variable of a closed set");
  CLI::App* witness = app.add_subcommand("witness", "almost-internality witness");
  witness->fallthrough();
  witness->add_option("input", o.input, "polynomial P(x, y, z)")->required();
  witness->add_option("--small", o.small, "variables ranging over k")
      ->delimiter(',')
      ->allow_extra_args(false);
  witness->add_option("--fiber", o.fiber, "fiber variable");
  witness->add_option("--at", o.at, "parameter values name=polynomial")
      ->delimiter(',')
      ->allow_extra_args(false);
  CLI::App* pg = app.add_subcommand("pregeo-check",
                                    "check closure axioms and ranks");
  pg->fallthrough();
  pg->add_option("input", o.input, "JSON description or a path to one")
      ->required();
  CLI::App* check = formula_command("check", "compare f with its normal form");
  check->add_option("--samples", o.samples, "number of assignments");
  check->add_option("--seed", o.seed, "assignment seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, err, err);
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Outcome r;
    if (command == "parse") r = run_parse(o);
    else if (command == "qe") r = run_qe(o);
    else if (command == "normalize") r = run_normalize(o);
    else if (command == "dim") r = run_dim(o);
    else if (command == "dichotomy") r = run_dichotomy(o);
    else if (command == "witness") r = run_witness(o);
    else if (command == "pregeo-check") r = run_pregeo(o);
    else r = run_check(o, err);
    std::string text = render(r, o, declared_trans(o, r.kind));
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file || !(file << text)) {
        err << "error: cannot write " << o.out << "\n";
        return kExitError;
      }
    }
    return r.exit_code;
  } catch (const UnsupportedFragment& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace pairdim::cli
