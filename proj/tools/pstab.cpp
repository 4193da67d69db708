#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pstab/cli.hpp"

int main(int argc, char** argv) {
  using namespace pstab;
  CLI::App app{"Exact minor-positivity classes and positive-stability certificates"};
  app.require_subcommand(1);

  std::string path, cert_path;
  bool as_json = false;
  std::vector<std::string> require;
  auto* classify = app.add_subcommand("classify", "report membership in every matrix class");
  classify->add_option("matrix", path, "matrix file")->required();
  classify->add_flag("--json", as_json, "JSON output");
  classify->add_option("--require", require, "classes that must hold (default: all)")
      ->check(CLI::IsMember(cli::class_names()));

  std::size_t order = 1;
  std::optional<std::size_t> wedge;
  auto* compound = app.add_subcommand("compound", "print a compound or generalized compound matrix");
  compound->add_option("matrix", path, "matrix file")->required();
  compound->add_option("--order", order, "compound order j")->required();
  compound->add_option("--wedge", wedge, "number m of copies of the matrix (generalized compound)");
  compound->add_flag("--json", as_json, "JSON output");

  std::optional<std::string> json_out;
  CertifyOptions opt;
  auto* certify = app.add_subcommand("certify", "issue a positive-stability certificate");
  certify->add_option("matrix", path, "matrix file")->required();
  certify->add_option("--json", json_out, "write the certificate document here ('-' for stdout)");
  certify->add_option("--tol-pos", opt.stabilizer.tols.tol_pos, "minimum real part in the simple-spectrum test");
  certify->add_option("--tol-imag", opt.stabilizer.tols.tol_imag, "relative imaginary-part tolerance");
  certify->add_option("--tol-sep", opt.stabilizer.tols.tol_sep, "minimum eigenvalue separation");
  certify->add_option("--max-shrink", opt.stabilizer.max_shrink, "halvings per level in the nested search");
  bool no_fallback = false;
  certify->add_flag("--no-fallback", no_fallback, "skip the geometric candidates after the nested search");

  auto* verify = app.add_subcommand("verify", "re-check the exact claims of a certificate");
  verify->add_option("certificate", cert_path, "certificate JSON")->required();
  verify->add_option("matrix", path, "matrix file")->required();

  app.add_subcommand("demo", "recompute the built-in 4x4 worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  if (*classify) return cli::cmd_classify(path, as_json, require, std::cout, std::cerr);
  if (*compound) return cli::cmd_compound(path, order, wedge, as_json, std::cout, std::cerr);
  opt.stabilizer.allow_fallback = !no_fallback;
  if (*certify) return cli::cmd_certify(path, json_out, opt, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(cert_path, path, std::cout, std::cerr);
  return cli::cmd_demo(std::cout, std::cerr);
}
