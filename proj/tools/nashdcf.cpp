// Command interpreter: runs script files (or stdin) and -c commands in one
// session. Exit status 0 iff no command failed.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nashdcf/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nashdcf: differential closures over the Nash field"};
  std::vector<std::string> scripts, commands;
  app.add_option("scripts", scripts, "Command files, run in order; stdin when none and no -c");
  app.add_option("-c,--command", commands, "Command to run after the scripts (repeatable)");
  CLI11_PARSE(app, argc, argv);

  nashdcf::Session session;
  int failed = 0;
  for (const auto& path : scripts) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << path << ": cannot open\n";
      ++failed;
      continue;
    }
    failed += session.run(in, std::cout, std::cerr);
  }
  if (!commands.empty()) {
    // one stream, so "line N" in errors is the N-th -c
    std::string joined;
    for (const auto& c : commands) joined += c + '\n';
    std::istringstream in(joined);
    failed += session.run(in, std::cout, std::cerr);
  }
  if (scripts.empty() && commands.empty()) failed += session.run(std::cin, std::cout, std::cerr);
  return failed == 0 ? 0 : 1;
}
