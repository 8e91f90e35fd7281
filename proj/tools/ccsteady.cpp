// Command-line front end: solve | sweep | validate | selftest.
//
// Exit codes: 0 success, 2 config error, 3 solver nonconvergence,
// 4 mass possibly unreachable, 5 selftest failure, 1 anything else.
#include <cstring>
#include <iostream>
#include <string>

#include "ccs/commands.hpp"
#include "ccs/selftest.hpp"

namespace {

void usage(std::ostream& out) {
    out << "usage: ccsteady <solve|sweep|validate> --config <path>\n"
           "       ccsteady selftest\n";
}

int dispatch(const std::string& command, const ccs::RunConfig& config) {
    if (command == "solve") {
        ccs::run_solve(config, std::cout);
        return 0;
    }
    if (command == "sweep") {
        ccs::run_sweep(config, std::cout);
        return 0;
    }
    if (command == "validate") {
        ccs::run_validate(config, std::cout);
        return 0;
    }
    usage(std::cerr);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    const std::string command = argv[1];

    if (command == "selftest") {
        return ccs::run_selftest(std::cout) ? 0 : 5;
    }
    if (command == "-h" || command == "--help" || command == "help") {
        usage(std::cout);
        return 0;
    }

    std::string config_path;
    for (int i = 2; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) {
            config_path = argv[++i];
        } else {
            std::cerr << "unknown argument: " << argv[i] << "\n";
            usage(std::cerr);
            return 2;
        }
    }
    if (config_path.empty()) {
        std::cerr << "missing --config <path>\n";
        return 2;
    }

    try {
        const ccs::RunConfig config = ccs::parse_config_file(config_path);
        return dispatch(command, config);
    } catch (const ccs::ConfigError& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return 2;
    } catch (const ccs::InvalidSpecError& e) {
        std::cerr << "InvalidSpecError: " << e.what() << "\n";
        return 2;
    } catch (const ccs::MassUnreachableError& e) {
        std::cerr << "MassUnreachableError: " << e.what() << "\n"
                  << "  alpha reached: " << e.alpha_reached << ", best m: " << e.best_mass
                  << ", best lower mass: " << e.best_lower_mass << "\n";
        return 4;
    } catch (const ccs::NonConvergenceError& e) {
        std::cerr << "NonConvergenceError: " << e.what() << " (iterations " << e.iterations
                  << ", residual " << e.residual << ")\n";
        return 3;
    } catch (const ccs::InvariantViolationError& e) {
        std::cerr << "InvariantViolationError: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
