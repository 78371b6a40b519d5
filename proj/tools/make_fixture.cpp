// Writes the synthetic report history used by the tests and the sample config.

#include <fstream>
#include <iostream>

#include "solvcap/report.hpp"
#include "solvcap/synthetic.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixture OUTPUT.csv\n";
        return 2;
    }
    const auto snapshots = solvcap::generate_reports(solvcap::reference_fixture_spec());
    std::ofstream out(argv[1], std::ios::binary);
    solvcap::write_report_csv(out, snapshots);
    if (!out) {
        std::cerr << "cannot write " << argv[1] << '\n';
        return 1;
    }
    return 0;
}
