#pragma once

// Named verification suites that drive the classification results end to
// end and report the outcome as structured checks.
//
// Each suite compares independently derived expectations (closed-form
// counts, brute-force oracles, frozen targets) against the library's
// output.  A Report carries one entry per check with the expected and actual
// values rendered as strings; the suite passes iff every check passes.
// Randomized suites draw from a deterministic generator seeded through
// VerifyOptions, so output is reproducible for a given seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ringline {

struct VerifyCheck {
  std::string description;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<VerifyCheck> checks;
  std::vector<std::string> notes;

  bool pass() const;
  std::size_t failed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20260814;  // drives the randomized suites
};

/// The named suites in the execution order of "all":
/// cardinalities, parallel-classes, local-ring-laws, psi-model, annihilator,
/// aut-counts, factorization, product-theorem, wreath-structure,
/// jordan-classification, bartolone-coverage, segre-decomposition.
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite; the name "all" runs every suite and concatenates
/// the checks with suite-name prefixes.  Unknown names throw
/// std::invalid_argument.
Report run_verify_suite(const std::string& name, const VerifyOptions& options = {});

/// Human-readable rendering, one line per check plus a header and notes.
std::string report_to_text(const Report& r);

/// {"format": 1, "suite", "status", "checks": [...], "notes": [...]}
std::string report_to_json(const Report& r);

}  // namespace ringline
