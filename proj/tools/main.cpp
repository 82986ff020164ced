#include <iostream>

#include "cli.hpp"
#include "tfpack/errors.hpp"

int main(int argc, char** argv) {
  using namespace tfpack::cli;
  std::optional<RunConfig> config;
  try {
    config = parse_command_line(argc, argv, std::cout);
  } catch (const tfpack::IoError& e) {
    std::cerr << tfpack::Json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
    return static_cast<int>(ExitCode::kIo);
  } catch (const tfpack::Error& e) {
    std::cerr << tfpack::Json{{"error", "config"}, {"message", e.what()}}.dump() << '\n';
    return static_cast<int>(ExitCode::kConfig);
  }
  if (!config) return 0;
  return run(*config, std::cout, std::cerr);
}
