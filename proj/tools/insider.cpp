#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "insider/cli.hpp"

int main(int argc, char** argv) {
    using namespace insider::cli;
    try {
        const ParsedArgs parsed = parse_args(std::vector<std::string>(argv + 1, argv + argc));
        if (parsed.dump_config) {
            std::cout << dump_config(parsed.config);
            return 0;
        }
        return run(parsed.config, std::cout);
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
