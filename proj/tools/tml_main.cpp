#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tml/session.hpp"

int main(int argc, char** argv) {
    CLI::App app{"TML tracing interpreter and provenance toolkit"};

    long fuel = tml::kDefaultFuel;
    if (const char* env_fuel = std::getenv("TML_FUEL")) fuel = std::atol(env_fuel);
    std::string script;
    bool keep_going = false;
    std::string format = "pretty";

    app.add_option("--fuel", fuel, "evaluation step budget");
    app.add_option("--script", script, "run a script file instead of the REPL");
    app.add_flag("--keep-going", keep_going, "continue a script after errors");
    app.add_option("--format", format, "slice output format")
        ->check(CLI::IsMember({"pretty", "canonical"}));

    CLI11_PARSE(app, argc, argv);

    tml::SessionOptions opts;
    opts.fuel = fuel;
    opts.canonical = format == "canonical";

    if (!script.empty()) {
        std::ifstream in(script);
        if (!in) {
            std::cerr << "error: cannot open " << script << "\n";
            return 2;
        }
        return tml::batch_run(in, std::cout, opts, keep_going);
    }

    tml::Session session(opts);
    std::string line;
    std::cout << "TML toplevel; :fuel N sets the step budget, Ctrl-D exits\n";
    while (true) {
        std::cout << "- " << std::flush;
        if (!std::getline(std::cin, line)) break;
        std::string out = session.run_line(line);
        if (!out.empty()) std::cout << out << "\n";
    }
    return 0;
}
