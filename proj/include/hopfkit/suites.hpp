#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hopfkit/hopf.hpp"

namespace hopfkit {

enum class CheckStatus { pass, warn, fail };
// published: the value stated in the source; computed: cross-validation between
// independent code paths; definitional: holds by construction of the objects.
enum class Provenance { published, computed, definitional };

struct Check {
    std::string suite;
    std::string params;
    std::string anchor;  // statement the check replays
    std::string computed;
    std::string expected;
    Provenance provenance = Provenance::computed;
    CheckStatus status = CheckStatus::fail;
};

struct SuiteOptions {
    std::vector<unsigned> primes;  // empty: the suite's default grid
    std::optional<unsigned> n, m, r;
    std::vector<unsigned> ns;
    std::optional<std::string> ring;
    std::size_t dim_cap = kDefaultDimensionCap;
    std::size_t enum_cap = kDefaultEnumerationCap;
};

// Known identifiers, excluding the aggregate "all".
const std::vector<std::string>& suite_ids();
bool known_suite(const std::string& id);

// Instances run concurrently; the returned order depends only on the inputs.
std::vector<Check> run_suite(const std::string& id, const SuiteOptions& options);

const char* status_name(CheckStatus s);
const char* provenance_name(Provenance p);
bool any_failure(const std::vector<Check>& checks);

enum class ReportFormat { text, json, csv };
std::string format_report(const std::vector<Check>& checks, ReportFormat format);

}  // namespace hopfkit
