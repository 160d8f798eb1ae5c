#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twave/acceptance.hpp"
#include "twave/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10, one PASS/FAIL line each"};
  std::string only;
  std::size_t jobs = twave::default_jobs();
  app.add_option("--only", only, "criterion numbers or module names, comma-separated");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  twave::acceptance::Options options;
  options.jobs = jobs;
  try {
    options.criteria = twave::acceptance::parse_filter(only);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  bool all = true;
  for (const auto& r : twave::acceptance::run_all(options, &std::cout)) all = all && r.pass;
  return all ? 0 : 1;
}
