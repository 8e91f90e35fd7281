#include <doctest.h>

#include <sstream>

#include "ccs/selftest.hpp"

using namespace ccs;

TEST_CASE("the full invariant suite passes on a fresh build") {
    const auto results = run_selftest_checks();
    for (const CheckResult& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("suite sensitivity: a flipped chi sign makes lemma14 fail") {
    SelftestOptions fault;
    fault.fault_flip_chi_sign = true;
    const auto results = run_selftest_checks(fault);
    bool lemma14_failed = false;
    for (const CheckResult& r : results) {
        if (r.name == "lemma14-comparison")
            lemma14_failed = !r.pass;
        else
            CHECK(r.pass); // the fault is local to the comparison check
    }
    CHECK(lemma14_failed);
}

TEST_CASE("selftest reports are byte-identical across runs") {
    std::ostringstream a, b;
    const bool ok_a = run_selftest(a);
    const bool ok_b = run_selftest(b);
    CHECK(ok_a);
    CHECK(ok_b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("lemma4-monotonicity: PASS\n") != std::string::npos);
}
