#include <gtest/gtest.h>

#include "hopfkit/errors.hpp"
#include "hopfkit/suites.hpp"

using namespace hopfkit;

TEST(Suites, EveryIdEmitsAnchoredChecks) {
    SuiteOptions o;
    o.primes = {3};
    for (const auto& id : suite_ids()) {
        auto checks = run_suite(id, o);
        ASSERT_FALSE(checks.empty()) << id;
        for (const auto& c : checks) {
            EXPECT_EQ(c.suite, id);
            EXPECT_FALSE(c.anchor.empty());
        }
    }
}

TEST(Suites, UnknownAndInvalidInputs) {
    EXPECT_FALSE(known_suite("prop99"));
    EXPECT_TRUE(known_suite("all"));
    EXPECT_THROW(run_suite("prop99", {}), ArgumentError);
    SuiteOptions o;
    o.primes = {4};
    EXPECT_THROW(run_suite("ex1", o), ArgumentError);
    o.primes = {2};
    EXPECT_THROW(run_suite("prop12", o), PreconditionError);
}

TEST(Suites, SymDiscrepancyIsWarn) {
    SuiteOptions o;
    o.primes = {3};
    o.n = 3;
    o.r = 2;
    auto checks = run_suite("ex5", o);
    bool warned = false;
    for (const auto& c : checks) {
        EXPECT_NE(c.status, CheckStatus::fail) << c.anchor;
        if (c.status == CheckStatus::warn) {
            warned = true;
            EXPECT_EQ(c.computed, "6");
            EXPECT_EQ(c.expected, "4");
        }
    }
    EXPECT_TRUE(warned);
    EXPECT_FALSE(any_failure(checks));
}

TEST(Suites, DeterministicOrderAndFormats) {
    SuiteOptions o;
    o.primes = {2, 3};
    auto a = run_suite("ex4", o), b = run_suite("ex4", o);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].params + a[i].anchor, b[i].params + b[i].anchor);
    auto csv = format_report(a, ReportFormat::csv);
    EXPECT_EQ(csv.rfind("status,suite,params,anchor,computed,expected,provenance\n", 0), 0u);
    auto json = format_report(a, ReportFormat::json);
    EXPECT_EQ(json.front(), '[');
    EXPECT_NE(format_report(a, ReportFormat::text).find("passed"), std::string::npos);
}
