#include "egress/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return egress::cli_main(argc, argv, std::cout, std::cerr);
}
