#include <iostream>

#include <CLI11.hpp>

#include "fracwill/config.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/reports.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fracwill: fractional Allen-Cahn and Willmore experiments"};
    std::string path;
    app.add_option("config", path, "key=value config file")->required();
    CLI11_PARSE(app, argc, argv);

    fracwill::RunConfig cfg;
    try {
        cfg = fracwill::load_config(path);
    } catch (const fracwill::Error& e) {
        std::cerr << "error kind=" << fracwill::error_kind_name(e.kind()) << " subcommand=none message=" << e.what()
                  << "\n";
        return 2;
    }
    return fracwill::execute(cfg, std::cerr);
}
