#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ellipse_lab: Dirichlet eigenvalues of the ellipse and their series"};
    ellipse_lab::RunConfig cfg;
    ellipse_lab::build_app(app, cfg);
    CLI11_PARSE(app, argc, argv);
    return ellipse_lab::run_command(app, cfg, std::cout, std::cerr);
}
