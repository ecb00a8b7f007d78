#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dunklsb/error.hpp"
#include "dunklsb/harness.hpp"
#include "dunklsb/kernel.hpp"

using namespace dunklsb;

namespace {

struct SystemOptions {
  std::string config;
  std::string family = "B";
  int rank = 2;
  int m = 0;
  std::string mu = "1/2,3/2";

  void add(CLI::App* app) {
    app->add_option("--config", config, "take root_system and mu from a suite config");
    app->add_option("--family", family, "A1^N, A, B, D or I2");
    app->add_option("--rank", rank, "dimension N (I2: ignored)");
    app->add_option("--m", m, "dihedral order for I2");
    app->add_option("--mu", mu, "comma separated multiplicity per orbit");
  }

  DunklContext context() const {
    RootSystemSpec spec;
    std::vector<Rational> values;
    if (!config.empty()) {
      SuiteConfig cfg = load_config(config);
      spec = cfg.root_system;
      for (const auto& v : cfg.mu) values.push_back(parse_rational(v));
    } else {
      spec.family = family;
      spec.n = rank;
      spec.m = m;
      std::stringstream in(mu);
      for (std::string item; std::getline(in, item, ',');) values.push_back(parse_rational(item));
    }
    for (const auto& v : values)
      if (sgn(v) < 0) throw ConfigError("mu must be nonnegative");
    return DunklContext::from_spec(spec, values);
  }
};

// "a", "a+bi", "a-bi", "bi"
ComplexLD parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw InvalidParameterError("empty coordinate");
  if (s.back() != 'i') return ComplexLD(std::stold(s), 0);
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0L;
    if (t == "-") return -1.0L;
    return std::stold(t);
  };
  if (split == std::string::npos) return ComplexLD(0, imag(s));
  return ComplexLD(std::stold(s.substr(0, split)), imag(s.substr(split)));
}

std::vector<ComplexLD> parse_point(const std::string& text) {
  std::vector<ComplexLD> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(parse_complex(item));
  return out;
}

std::string show(ComplexLD v) {
  std::ostringstream out;
  out << format_double(static_cast<double>(v.real())) << (v.imag() < 0 ? " - " : " + ")
      << format_double(static_cast<double>(std::abs(v.imag()))) << "i";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl operator and Segal-Bargmann transform verification"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the check catalog on a configuration");
  std::string config_path, out_path, format = "json";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  verify->add_option("--config", config_path, "suite config (JSON)")->required();
  verify->add_option("--out", out_path, "report path")->required();
  verify->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  verify->add_option("--seed", seed, "override the config seed");
  verify->add_option("--threads", threads, "worker threads (default DUNKLSB_THREADS or all cores)");

  auto* kernel = app.add_subcommand("kernel", "evaluate a kernel at one point pair");
  SystemOptions kernel_system;
  kernel_system.add(kernel);
  std::string version, t_text = "1", z_text, q_text;
  int truncation = 0;
  kernel->add_option("--version", version, "A, B, C, BSO, E or rho")->required();
  kernel->add_option("--t", t_text, "positive rational");
  kernel->add_option("--z", z_text, "comma separated complex coordinates, e.g. 0.3+0.1i,-0.2")->required();
  kernel->add_option("--q", q_text, "comma separated coordinates")->required();
  kernel->add_option("--truncation", truncation, "kernel truncation degree (default 24, 14 for N = 3)");

  auto* basis_cmd = app.add_subcommand("basis", "print the orthogonal basis");
  SystemOptions basis_system;
  basis_system.add(basis_cmd);
  int degree = 4;
  std::string emit = "csv", ordering = "graded-lex";
  basis_cmd->add_option("--degree", degree, "maximal degree")->required();
  basis_cmd->add_option("--emit", emit, "output format")->check(CLI::IsMember({"csv"}));
  basis_cmd->add_option("--ordering", ordering, "graded-lex or graded-reverse-lex");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      SuiteConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      Report report = run_verification(cfg, RunOptions{threads});
      emit_report(report, parse_report_format(format), out_path);
      std::cout << render_report(report, ReportFormat::kText);
      return report.passed() ? 0 : 1;
    }
    if (*kernel) {
      DunklContext ctx = kernel_system.context();
      if (truncation <= 0) truncation = ctx.dimension() >= 3 ? 14 : 24;
      auto table = KernelTable::linear_solve(ctx, truncation);
      auto z = parse_point(z_text), q = parse_point(q_text);
      if (z.size() != ctx.dimension() || q.size() != ctx.dimension())
        throw InvalidParameterError("z and q need " + std::to_string(ctx.dimension()) + " coordinates");
      KernelEval e = sb_kernel(table, parse_kernel_version(version), parse_rational(t_text), z, q);
      std::cout << "value " << show(e.value) << "\ntruncation " << e.degree << "\ntail "
                << format_double(static_cast<double>(e.tail)) << '\n';
      return 0;
    }
    if (*basis_cmd) {
      DunklContext ctx = basis_system.context();
      write_basis_csv(std::cout, build_orthogonal_basis(ctx, degree, parse_basis_ordering(ordering)));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "dunklsb: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dunklsb: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
