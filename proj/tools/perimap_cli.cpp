// perimap: fixed / 2-periodic point census of z^d + c over finite fields.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "perimap/perimap.hpp"

namespace {

using perimap::BigInt;
using perimap::Error;
using perimap::ErrorKind;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

// Thrown for bad flag values; the message names the flag.
struct UsageError {
  std::string message;
};

[[noreturn]] void usage(const std::string& flag, const std::string& what) { throw UsageError{flag + ": " + what}; }

void require_prime(const std::string& flag, std::uint64_t p) {
  if (!perimap::is_prime(p)) usage(flag, "p must be prime (got " + std::to_string(p) + ")");
}

perimap::Family parse_family(const std::string& s) {
  if (s == "pl") return perimap::Family::PrimePower;
  if (s == "pm1l") return perimap::Family::PMinusOnePower;
  if (s == "raw") return perimap::Family::RawExponent;
  usage("--family", "expected pl, pm1l or raw (got '" + s + "')");
}

BigInt parse_bigint(const std::string& flag, const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) usage(flag, "expected an integer (got '" + s + "')");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') usage(flag, "expected an integer (got '" + s + "')");
  }
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

std::vector<BigInt> parse_poly(const std::string& flag, const std::string& s) {
  std::vector<BigInt> coeffs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) coeffs.push_back(parse_bigint(flag, item));
  if (coeffs.empty()) usage(flag, "empty coefficient list");
  return coeffs;
}

perimap::Limits limits_from_env() {
  perimap::Limits limits;
  if (const char* env = std::getenv("PERIMAP_LIMIT_Q")) {
    const std::string s = env;
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      usage("PERIMAP_LIMIT_Q", "expected a positive integer (got '" + s + "')");
    }
    limits.max_q = std::stoull(s);
  }
  return limits;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

// Writes the table to stdout, or to `out` plus `out`.manifest.json.
void emit(const perimap::CsvTable& table, const std::string& out, perimap::RunManifest& manifest) {
  if (out.empty()) {
    table.write(std::cout);
    return;
  }
  table.write_file(out);
  manifest.add_file(std::filesystem::path(out).filename().string(), table.row_count());
  manifest.write(out + ".manifest.json");
}

constexpr const char* kPairNormalization =
    "pairs (p, c) with prime_floor <= p <= cutoff and 1 <= c <= cutoff; prime_floor is 3 for pl and 5 for pm1l";

// --- field ----------------------------------------------------------------------

struct FieldArgs {
  std::uint64_t p = 0;
  unsigned n = 1;
  std::string poly;
};

int run_field_make(const FieldArgs& a) {
  require_prime("--p", a.p);
  if (a.n < 1) usage("--n", "n must be >= 1");
  if (!perimap::checked_pow(a.p, a.n)) usage("--n", "p^n overflows 64 bits");
  const perimap::FieldCtx ctx = perimap::make_field(a.p, a.n);
  std::vector<std::uint64_t> coeffs(ctx.modulus().coeffs());
  std::cout << join(coeffs) << '\n';
  return kExitOk;
}

int run_field_inert(const FieldArgs& a) {
  require_prime("--p", a.p);
  const perimap::IntPoly h(parse_poly("--poly", a.poly));
  if (h.degree() < 2) usage("--poly", "defining polynomial must have degree >= 2");
  if (!h.is_monic()) usage("--poly", "defining polynomial must be monic (last coefficient 1)");
  const perimap::InertResult r = perimap::inert_check(h, a.p);
  std::cout << perimap::to_string(r.verdict) << '\n';
  if (r.index_warning) {
    std::cout << "IndexWarning: h mod p has a repeated factor, so p may divide the index [O_K : Z[theta]]\n";
  }
  return kExitOk;
}

// --- census ---------------------------------------------------------------------

struct CensusArgs {
  std::string family = "pl";
  std::uint64_t p = 0;
  std::uint64_t ell = 1;
  std::uint64_t d = 0;
  unsigned n = 1;
  std::string c = "0";
  bool orbit = false;
  unsigned threads = 1;
  std::string out;
};

perimap::MapSpec build_map(const CensusArgs& a) {
  const perimap::Family family = parse_family(a.family);
  require_prime("--p", a.p);
  const BigInt c = parse_bigint("--c", a.c);
  switch (family) {
    case perimap::Family::PrimePower:
      if (a.p < 3) usage("--p", "family pl requires p >= 3");
      if (a.ell < 1) usage("--ell", "ell must be >= 1");
      return perimap::MapSpec::prime_power(a.p, a.ell, c);
    case perimap::Family::PMinusOnePower:
      if (a.p < 5) usage("--p", "family pm1l requires p >= 5");
      if (a.ell < 1) usage("--ell", "ell must be >= 1");
      return perimap::MapSpec::p_minus_one_power(a.p, a.ell, c);
    case perimap::Family::RawExponent:
      if (a.d < 2) usage("--d", "family raw needs --d >= 2");
      return perimap::MapSpec::raw(a.p, a.d, c);
  }
  usage("--family", "unsupported");
}

int run_census(const CensusArgs& a) {
  const perimap::MapSpec m = build_map(a);
  if (a.n < 1) usage("--n", "n must be >= 1");
  if (!perimap::checked_pow(a.p, a.n)) usage("--n", "p^n overflows 64 bits");
  const perimap::Limits limits = limits_from_env();
  const perimap::FieldCtx ctx = perimap::make_field(a.p, a.n);

  perimap::RunManifest manifest("census", {{"family", a.family}, {"p", a.p}, {"ell", a.ell}, {"d", a.d},
                                           {"n", a.n}, {"c", a.c}, {"orbit", a.orbit}, {"threads", a.threads}});
  perimap::CsvTable table(perimap::census_header(a.orbit));
  std::vector<std::string> row;
  if (a.orbit) {
    const auto image = perimap::map_table(ctx, m, limits, a.threads);
    const perimap::OrbitCensus orbit = perimap::orbit_census_from_table(image);
    const perimap::CensusResult r = perimap::census_from_table(ctx, image, a.threads);
    row = perimap::census_row(m, a.n, r);
    row.push_back(perimap::histogram_json(orbit));
    row.push_back(std::to_string(orbit.tail_point_count));
  } else {
    row = perimap::census_row(m, a.n, perimap::census(ctx, m, limits, a.threads));
  }
  table.add_row(std::move(row));
  emit(table, a.out, manifest);
  return kExitOk;
}

// --- verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t pmax = 7;
  std::uint64_t ellmax = 2;
  unsigned nmax = 2;
  unsigned threads = 1;
  std::string out = ".";
};

void print_summary(const std::vector<perimap::SummaryRow>& rows) {
  std::cout << "branch | convention | agreements/cells | rate\n";
  for (const auto& r : rows) {
    std::cout << r.branch << " | " << perimap::to_string(r.convention) << " | " << r.agreements << "/" << r.cells
              << " | " << r.rate().decimal(4) << '\n';
  }
}

int run_verify(const VerifyArgs& a) {
  if (a.pmax < 3) usage("--pmax", "pmax must be >= 3");
  if (a.ellmax < 1) usage("--ellmax", "ellmax must be >= 1");
  if (a.nmax < 1) usage("--nmax", "nmax must be >= 1");
  const perimap::Limits limits = limits_from_env();
  perimap::RunManifest manifest("verify", {{"pmax", a.pmax}, {"ellmax", a.ellmax}, {"nmax", a.nmax},
                                           {"threads", a.threads}, {"out", a.out}});

  const auto grid = perimap::ConformanceGrid::up_to(a.pmax, a.ellmax, a.nmax);
  const auto cells = perimap::conformance_matrix(grid, limits, a.threads);
  const auto summary = perimap::summarize(cells);

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  const perimap::CsvTable cell_table = perimap::conformance_table(cells);
  const perimap::CsvTable summary_table = perimap::summary_table(summary);
  cell_table.write_file((dir / "conformance.csv").string());
  summary_table.write_file((dir / "conformance_summary.csv").string());
  manifest.add_file("conformance.csv", cell_table.row_count());
  manifest.add_file("conformance_summary.csv", summary_table.row_count());
  manifest.add_note("coefficients", "c ranges over [0, p) for every prime");
  manifest.write((dir / "manifest.json").string());

  print_summary(summary);
  return kExitOk;
}

// --- avg / density --------------------------------------------------------------

struct AvgArgs {
  std::string family = "pm1l";
  std::uint64_t ell = 1;
  unsigned n = 1;
  std::string cls = "all";
  std::string convention = "div2_sub";
  std::vector<std::uint64_t> cutoffs;
  std::optional<double> divergence_factor;
  unsigned threads = 1;
  std::string out;
};

int run_avg(const AvgArgs& a) {
  perimap::SweepSpec spec;
  spec.family = parse_family(a.family);
  if (spec.family == perimap::Family::RawExponent) usage("--family", "avg needs pl or pm1l");
  if (a.ell < 1) usage("--ell", "ell must be >= 1");
  spec.ell = a.ell;
  if (a.n < 1) usage("--n", "n must be >= 1");
  const auto filter = perimap::parse_filter(a.cls);
  if (!filter) usage("--class", "expected all, zero, plus-one, minus-one, pm-one, other or nonzero");
  spec.filter = *filter;
  const auto conv = perimap::parse_convention(a.convention);
  if (!conv) usage("--convention", "unknown convention '" + a.convention + "'");
  spec.convention = *conv;
  for (auto c : a.cutoffs) {
    if (c < spec.floor()) usage("--cutoff", "cutoff must be >= " + std::to_string(spec.floor()));
  }
  if (a.divergence_factor && *a.divergence_factor <= 0) usage("--divergence-factor", "must be positive");
  const perimap::Limits limits = limits_from_env();

  perimap::RunManifest manifest(
      "avg", {{"family", a.family}, {"ell", a.ell}, {"n", a.n}, {"class", a.cls}, {"convention", a.convention},
              {"cutoffs", a.cutoffs}, {"threads", a.threads}});
  manifest.add_note("normalization", kPairNormalization);
  std::vector<std::string> header = perimap::avg_header();
  if (a.divergence_factor) {
    manifest.add_note("divergence", "diverging = value(cutoff) >= factor * value(cutoff / 2)");
    header.insert(header.end(), {"half_cutoff_value", "half_cutoff_decimal", "factor", "diverging"});
  }
  perimap::CsvTable table(header);
  for (auto cutoff : a.cutoffs) {
    spec.cutoff = cutoff;
    if (a.divergence_factor) {
      if (cutoff / 2 < spec.floor()) usage("--cutoff", "cutoff/2 must be >= " + std::to_string(spec.floor()));
      const auto d = perimap::divergence_check(spec, a.n, *a.divergence_factor, limits, a.threads);
      auto row = perimap::avg_row(spec, a.n, d.at_cutoff);
      std::ostringstream factor;
      factor << *a.divergence_factor;
      row.insert(row.end(), {d.at_half.value.str(), d.at_half.value.decimal(), factor.str(),
                             d.diverging ? "true" : "false"});
      table.add_row(std::move(row));
    } else {
      table.add_row(perimap::avg_row(spec, a.n, perimap::avg_estimate(spec, a.n, limits, a.threads)));
    }
  }
  emit(table, a.out, manifest);
  return kExitOk;
}

struct DensityArgs {
  std::string predicate;
  std::string family = "pl";
  std::uint64_t ell = 1;
  std::vector<std::uint64_t> cutoffs;
  std::string out;
};

perimap::DensityQuery parse_predicate(const std::string& s) {
  using perimap::DensityPredicate;
  if (s == "n-equals-p") return {DensityPredicate::NEqualsP, 0};
  if (s == "n-in-interval") return {DensityPredicate::NInInterval, 0};
  if (s == "m-equals-0") return {DensityPredicate::MEquals, 0};
  if (s == "m-equals-1") return {DensityPredicate::MEquals, 1};
  if (s == "m-equals-2") return {DensityPredicate::MEquals, 2};
  if (s == "count-zero") return {DensityPredicate::CountZero, 0};
  usage("--predicate", "expected n-equals-p, n-in-interval, m-equals-{0,1,2} or count-zero (got '" + s + "')");
}

int run_density(const DensityArgs& a) {
  const perimap::DensityQuery query = parse_predicate(a.predicate);
  perimap::SweepSpec spec;
  spec.family = perimap::density_family(query, parse_family(a.family));
  if (spec.family == perimap::Family::RawExponent) usage("--family", "density needs pl or pm1l");
  if (a.ell < 1) usage("--ell", "ell must be >= 1");
  spec.ell = a.ell;
  for (auto c : a.cutoffs) {
    if (c < spec.floor()) usage("--cutoff", "cutoff must be >= " + std::to_string(spec.floor()));
  }
  perimap::RunManifest manifest("density", {{"predicate", a.predicate}, {"family", perimap::to_string(spec.family)},
                                            {"ell", a.ell}, {"cutoffs", a.cutoffs}});
  manifest.add_note("normalization", kPairNormalization);
  perimap::CsvTable table(perimap::density_header());
  for (auto cutoff : a.cutoffs) {
    spec.cutoff = cutoff;
    const auto d = perimap::density_estimate(spec, query);
    table.add_row({a.predicate, perimap::to_string(spec.family), std::to_string(spec.ell), std::to_string(cutoff),
                   std::to_string(d.hits), std::to_string(d.total), d.value.decimal(), d.value.str()});
  }
  emit(table, a.out, manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perimap: fixed and 2-periodic point census of z^d + c over F_{p^n}"};
  app.require_subcommand(1);
  app.set_version_flag("--version", perimap::kVersion);

  FieldArgs field_args;
  auto* field = app.add_subcommand("field", "finite field utilities");
  field->require_subcommand(1);
  auto* field_make = field->add_subcommand("make", "print the modulus chosen for F_{p^n}");
  field_make->add_option("--p", field_args.p, "prime")->required();
  field_make->add_option("--n", field_args.n, "extension degree")->required();
  auto* field_inert = field->add_subcommand("inert", "is p inert in Z[x]/(h)?");
  field_inert->add_option("--poly", field_args.poly, "monic h as c0,c1,...,1")->required();
  field_inert->add_option("--p", field_args.p, "prime")->required();

  CensusArgs census_args;
  auto* census = app.add_subcommand("census", "six-way census of one map on one field");
  census->add_option("--family", census_args.family, "pl | pm1l | raw")->required();
  census->add_option("--p", census_args.p, "prime")->required();
  census->add_option("--ell", census_args.ell, "tower exponent");
  census->add_option("--d", census_args.d, "explicit degree (family raw)");
  census->add_option("--n", census_args.n, "extension degree")->required();
  census->add_option("--c", census_args.c, "integer coefficient")->allow_extra_args(false);
  census->add_flag("--orbit", census_args.orbit, "append the cycle histogram");
  census->add_option("--threads", census_args.threads, "worker cap")->check(CLI::Range(1U, 1024U));
  census->add_option("--out", census_args.out, "CSV file (default stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "conformance matrix of the claimed counts");
  verify->add_option("--pmax", verify_args.pmax, "largest prime")->required();
  verify->add_option("--ellmax", verify_args.ellmax, "largest ell")->required();
  verify->add_option("--nmax", verify_args.nmax, "largest extension degree")->required();
  verify->add_option("--threads", verify_args.threads, "worker cap")->check(CLI::Range(1U, 1024U));
  verify->add_option("--out", verify_args.out, "output directory");

  AvgArgs avg_args;
  auto* avg = app.add_subcommand("avg", "exact average count over (p, c) pairs");
  avg->add_option("--family", avg_args.family, "pl | pm1l")->required();
  avg->add_option("--ell", avg_args.ell, "tower exponent");
  avg->add_option("--n", avg_args.n, "extension degree");
  avg->add_option("--class", avg_args.cls, "all | zero | plus-one | minus-one | pm-one | other | nonzero");
  avg->add_option("--convention", avg_args.convention, "fixed_full | div2_full | ... | exact2_sub");
  avg->add_option("--cutoff", avg_args.cutoffs, "cutoff C (repeatable)")->required();
  avg->add_option("--divergence-factor", avg_args.divergence_factor, "compare value(C) with value(C/2)");
  avg->add_option("--threads", avg_args.threads, "worker cap")->check(CLI::Range(1U, 1024U));
  avg->add_option("--out", avg_args.out, "CSV file (default stdout)");

  DensityArgs density_args;
  auto* density = app.add_subcommand("density", "density of pairs by predicted count");
  density->add_option("--predicate", density_args.predicate, "n-equals-p | n-in-interval | m-equals-K | count-zero")
      ->required();
  density->add_option("--family", density_args.family, "family for count-zero (pl | pm1l)");
  density->add_option("--ell", density_args.ell, "tower exponent");
  density->add_option("--cutoff", density_args.cutoffs, "cutoff C (repeatable)")->required();
  density->add_option("--out", density_args.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*field_make) return run_field_make(field_args);
    if (*field_inert) return run_field_inert(field_args);
    if (*census) return run_census(census_args);
    if (*verify) return run_verify(verify_args);
    if (*avg) return run_avg(avg_args);
    if (*density) return run_density(density_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << perimap::to_string(e.kind()) << ": " << e.what() << '\n';
    return e.is_resource_limit() ? kExitLimit : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
