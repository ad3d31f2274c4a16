// Regenerates the golden moment tables under tests/fixtures from the
// quadrature oracle. Usage: make_fixtures OUTPUT_DIR

#include <iostream>
#include <string>
#include <vector>

#include "mdet/verify.hpp"

int main(int argc, char** argv) {
    using namespace mdet;
    if (argc != 2) {
        std::cerr << "usage: make_fixtures OUTPUT_DIR\n";
        return 1;
    }
    const std::string dir = argv[1];
    const struct {
        MomentCase kase;
        const char* name;
        int step;
    } tables[] = {{MomentCase::Stieltjes, "counterexample_stieltjes_delta2.tsv", 1},
                  {MomentCase::Hamburger, "counterexample_hamburger_delta2.tsv", 2}};
    for (const auto& t : tables) {
        const auto cd = build_counterexample(t.kase, 2.0);
        std::vector<FixtureRow> rows;
        for (int k = t.step; k <= 20; k += t.step) {
            rows.push_back({k, quadrature_log_abs_moment(cd.log_density_fn(), cd.support(), k), 1e-9});
        }
        write_fixture(dir + "/" + t.name, rows);
        std::cout << "wrote " << dir << "/" << t.name << " (" << rows.size() << " rows)\n";
    }
    return 0;
}
