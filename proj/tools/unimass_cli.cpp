#include <iostream>

#include "unimass/cli_app.hpp"

int main(int argc, char** argv) {
    return unimass::cli::cli_main(argc, argv, std::cout, std::cerr);
}
