#include <exception>
#include <iostream>

#include "aepp/run_config.hpp"

int main(int argc, char** argv) {
  aepp::RunConfig config;
  try {
    config = aepp::parse_args(argc, argv);
  } catch (const aepp::UsageError& e) {
    (e.code == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.code;
  }
  try {
    return aepp::execute(config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "aepp: " << e.what() << '\n';
    return 1;
  }
}
