#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "tfpo/specialfn.hpp"

namespace {

int cmd_specialfn_table(const std::string& fn, int order, double from, double to,
                        int points, const std::string& out) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "cannot open " << out << "\n";
      return 2;
    }
    os = &file;
  }
  (*os) << "x,value\n";
  char buf[64];
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? from : from + (to - from) * i / double(points - 1);
    double v = 0.0;
    if (fn == "ai")
      v = tfpo::airy(x).ai;
    else if (fn == "bi")
      v = tfpo::airy(x).bi;
    else
      v = tfpo::bessel_i(order, x).value;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, v);
    (*os) << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tailored-finite-point operator network toolkit"};
  app.require_subcommand(1);

  auto* sf = app.add_subcommand("specialfn", "Tabulate special functions as CSV");
  auto* table = sf->add_subcommand("table", "Emit x,value rows");
  std::string fn = "ai", out;
  int order = 0, points = 101;
  double from = 0.0, to = 1.0;
  table->add_option("--fn", fn, "ai|bi|in")->check(CLI::IsMember({"ai", "bi", "in"}));
  table->add_option("--order", order, "Bessel order (fn=in)");
  table->add_option("--from", from)->required();
  table->add_option("--to", to)->required();
  table->add_option("--points", points);
  table->add_option("--out", out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (table->parsed()) return cmd_specialfn_table(fn, order, from, to, points, out);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
