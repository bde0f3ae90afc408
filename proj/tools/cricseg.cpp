#include "cricseg/app.hpp"

int main(int argc, char** argv) { return cricseg::run_cli(argc, argv); }
