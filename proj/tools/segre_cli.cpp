#include <iostream>

#include "CLI11.hpp"
#include "segre/cli.hpp"

int main(int argc, char** argv) {
    using namespace segre::cli;
    CLI::App app{"segre: Segre multitype, chains and orbits of CR-generic manifolds"};
    app.set_version_flag("--version", kVersion);
    Flags f;
    std::string command, path, order;
    app.add_option("command", command, "validate|chains|ranks|minimality|multitype|witness|hormander|levi|e1det|orbit|checkall")
        ->required()
        ->check(CLI::IsMember(commands()));
    app.add_option("manifest", path, "manifest file (a directory for checkall)")->required();
    app.add_option("--order", order, "EXACT or a truncation order N");
    app.add_option("--seed", f.seed, "seed for random evaluation points");
    app.add_option("--trials", f.trials, "evaluation points per generic rank")->check(CLI::PositiveNumber);
    app.add_option("--kmax", f.kmax, "largest chain length (default 2d+3)");
    app.add_option("--base", f.base, "origin, generic, or chart coordinates like w1=1,zeta1=-1,xi1=0");
    app.add_option("--format", f.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    app.add_flag("--certify", f.certify, "expand pivot minors symbolically");
    app.add_flag("--paranoid", f.paranoid, "compute ranks up to kmax and check stability");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (!order.empty()) {
        try {
            f.order = segre::parse_order(order);
        } catch (const segre::UsageError& e) {
            std::cerr << "usage: " << e.what() << "\n";
            return 2;
        }
    }
    const auto rep = run(command, path, f);
    if (rep.exit_code == 0 || !rep.results.empty()) std::cout << rep.render(f.format);
    if (!rep.diagnostic.empty()) std::cerr << rep.diagnostic << "\n";
    return rep.exit_code;
}
