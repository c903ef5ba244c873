#include "lns1d/cli.hpp"

int main(int argc, char** argv) {
    return lns1d::cli_main(argc, argv);
}
