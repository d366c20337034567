// sasaki: verification, heat-invariant and classification reports for the
// Sasakian model spaces.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sasaki/sasaki.hpp"

namespace {

enum class Format { json, csv };

struct Output {
  Format format = Format::json;
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  }
};

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << sasaki::dump_json(sasaki::error_object(kind, message));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral geometry of eta-Einstein Sasakian model spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string out_path;
  double tol = 1e-8;
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  app.add_option("--tol", tol, "tolerance for pass/fail decisions")->check(CLI::PositiveNumber);

  const std::uint64_t env_seed = sasaki::seed_from_env();

  std::string space = "sphere";
  std::size_t n = 2;
  double a = 1.0;
  auto* verify = app.add_subcommand("verify", "structure and identity suite on a model space");
  verify->add_option("--space", space, "sphere, deformed_sphere or heisenberg")
      ->check(CLI::IsMember({"sphere", "deformed_sphere", "heisenberg"}));
  verify->add_option("--n", n, "m = 2n+1")->check(CLI::PositiveNumber);
  verify->add_option("--a", a, "D-homothetic deformation parameter");

  std::string ps = "0,1,2";
  auto* heat = app.add_subcommand("heat", "heat coefficients of the form Laplacians");
  heat->add_option("--space", space)->check(CLI::IsMember({"sphere", "deformed_sphere", "heisenberg"}));
  heat->add_option("--n", n)->check(CLI::PositiveNumber);
  heat->add_option("--a", a);
  heat->add_option("--p", ps, "comma-separated form degrees");

  std::size_t m = 5;
  std::uint64_t seed = env_seed;
  std::size_t samples = 24;
  auto* constants = app.add_subcommand("constants", "fit the universal a4 constants");
  constants->add_option("--m", m)->check(CLI::PositiveNumber);
  constants->add_option("--seed", seed);
  constants->add_option("--samples", samples);

  auto* independence = app.add_subcommand("independence", "rank of the p = 1, 2 coefficient matrix");
  independence->add_option("--m", m)->check(CLI::PositiveNumber);
  independence->add_option("--seed", seed);
  independence->add_option("--samples", samples);

  double tmin = 1e-3, tmax = 1e-1;
  std::size_t kmax = 400;
  auto* fit = app.add_subcommand("spectrum-fit", "small-t fit of the sphere heat trace");
  fit->add_option("--m", m)->check(CLI::Range(2, 64));
  fit->add_option("--tmin", tmin);
  fit->add_option("--tmax", tmax);
  fit->add_option("--kmax", kmax);

  std::string left, right, mode = "eta-einstein";
  std::optional<double> c;
  auto* classify = app.add_subcommand("classify", "transfer eta-Einstein / space-form status");
  classify->add_option("--left", left, "manifest JSON")->required();
  classify->add_option("--right", right, "manifest JSON")->required();
  classify->add_option("--mode", mode)->check(CLI::IsMember({"eta-einstein", "space-form"}));
  classify->add_option("--c", c, "phi-sectional curvature for space-form mode");
  classify->add_option("--seed", seed);
  classify->add_option("--samples", samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  Output output{format == "csv" ? Format::csv : Format::json, out_path};
  auto manifest = [&] {
    sasaki::Manifest mf;
    mf.kind = sasaki::parse_space_kind(space);
    mf.n = n;
    mf.a = a;
    return mf;
  };
  auto no_csv = [&](const std::string& cmd) {
    if (output.format == Format::csv) throw CLI::ValidationError("--format", "csv is not available for " + cmd);
  };

  try {
    sasaki::Json report;
    std::ostringstream csv;
    if (*verify) {
      no_csv("verify");
      report = sasaki::verify_report(manifest(), tol, env_seed);
    } else if (*heat) {
      std::vector<int> degrees;
      std::stringstream ss(ps);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          degrees.push_back(std::stoi(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw CLI::ValidationError("--p", "not an integer list: " + ps);
        }
      }
      if (degrees.empty()) throw CLI::ValidationError("--p", "empty degree list");
      if (output.format == Format::csv)
        sasaki::write_heat_csv(sasaki::heat_rows(manifest(), degrees), csv);
      else
        report = sasaki::heat_report(manifest(), degrees);
    } else if (*constants) {
      if (output.format == Format::csv)
        sasaki::write_constants_csv(sasaki::constants_rows(m, samples, seed), csv);
      else
        report = sasaki::constants_report(m, samples, seed);
    } else if (*independence) {
      no_csv("independence");
      report = sasaki::independence_report(m, samples, seed);
    } else if (*fit) {
      no_csv("spectrum-fit");
      report = sasaki::spectrum_fit_report(m, tmin, tmax, kmax);
    } else if (*classify) {
      no_csv("classify");
      report = sasaki::classify_report(sasaki::load_manifest(left), sasaki::load_manifest(right), mode, c, tol,
                                       samples, seed);
    }

    if (output.format == Format::csv) {
      output.write(csv.str());
      return 0;
    }
    output.write(sasaki::dump_json(report));
    return report["pass"].get<bool>() ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const sasaki::Error& e) {
    print_error(std::string(sasaki::to_string(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
