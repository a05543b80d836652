#include "uforge/cli.hpp"

int main(int argc, char** argv) {
    return uforge::cli::run(argc, argv);
}
