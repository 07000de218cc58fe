#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace dofkit::cli;
    try {
        const ExperimentConfig cfg = parse_args(std::vector<std::string>(argv, argv + argc));
        return run(cfg, std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "dofkit: " << e.what() << '\n';
        return e.code();
    }
}
