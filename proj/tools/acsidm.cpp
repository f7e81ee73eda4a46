#include <iostream>

#include "acsidm/cli/commands.hpp"

int main(int argc, char** argv)
{
    return acsidm::cli::run_cli(argc, argv, std::cout, std::cerr);
}
