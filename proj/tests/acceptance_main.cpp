// Acceptance suite runner: one PASS/FAIL line per criterion, nonzero exit on
// any failure. The same criteria back the CLI's `suite` subcommand.

#include <cstring>
#include <iostream>
#include <string>

#include "fracwalk/acceptance.hpp"

int main(int argc, char** argv) {
  fracwalk::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      opts.cli_path = argv[++i];
    } else if (arg == "--threads" && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      for (const char* tok = std::strtok(argv[++i], ","); tok; tok = std::strtok(nullptr, ","))
        opts.only.push_back(std::atoi(tok));
    } else {
      std::cerr << "usage: acceptance [--cli <fracwalk binary>] [--threads N] [--only 1,2,...]\n";
      return 2;
    }
  }
  const auto results = fracwalk::run_acceptance(opts, std::cout);
  const bool ok = fracwalk::all_passed(results);
  std::cout << (ok ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
  return ok ? 0 : 1;
}
