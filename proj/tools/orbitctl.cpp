#include "nbody/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return nbody::run_cli(argc, argv, std::cout, std::cerr);
}
