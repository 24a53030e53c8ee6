#include <cstring>
#include <iostream>
#include <string>

#include "ordwalk/verify.hpp"

// Runs every acceptance criterion at its stated tolerance and prints one
// pass/fail line per sub-check; exit 0 iff all pass.
int main(int argc, char** argv) {
    ordwalk::Tier tier = ordwalk::Tier::Full;
    std::uint64_t seed = 20250809;
    std::string only;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--tier" && i + 1 < argc) {
            tier = (std::string(argv[++i]) == "quick") ? ordwalk::Tier::Quick : ordwalk::Tier::Full;
        } else if (arg == "--seed" && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--only" && i + 1 < argc) {
            only = argv[++i];
        }
    }
    ordwalk::VerifyReport report = ordwalk::run_verify(tier, seed, only);
    std::cout << report.render();
    return report.all_pass() ? 0 : 1;
}
