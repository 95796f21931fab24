#include <exception>
#include <iostream>

#include "mmcache/cli.hpp"

int main(int argc, char** argv) {
    using namespace mmcache::experiments;
    auto result = cli_parse(std::vector<std::string>(argv + 1, argv + argc));
    if (!result.spec) {
        (result.exit_code == 0 ? std::cout : std::cerr) << result.message;
        return result.exit_code;
    }
    try {
        return run_experiment(*result.spec, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
