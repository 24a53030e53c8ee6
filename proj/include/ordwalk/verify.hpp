#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ordwalk {

enum class Tier { Quick, Full };

struct VerifyRow {
    std::string id;       // C01..C16
    std::string name;
    std::string detail;   // sub-check description
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    Tier tier = Tier::Quick;
    std::uint64_t seed = 0;
    std::vector<VerifyRow> rows;

    bool all_pass() const;
    // Deterministic text table, one line per sub-check; no timings, so a
    // rerun with the same seed is byte-identical.
    std::string render() const;
};

// Runs the cross-validation suite; `only` filters criteria by substring of
// id or name (empty: all).
VerifyReport run_verify(Tier tier, std::uint64_t seed, const std::string& only = "",
                        int streams = 0);

}  // namespace ordwalk
