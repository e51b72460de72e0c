#include "scimap/cli_app.hpp"

int main(int argc, char** argv) {
    return scimap::run_cli(argc, argv);
}
