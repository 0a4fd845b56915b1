#include <catch2/catch_amalgamated.hpp>

#include "support/properties.hpp"

// One section per registered property; each runs its full case budget from a
// fixed seed so failures replay exactly.
TEST_CASE("module invariants hold over generated inputs", "[properties]") {
    const std::vector<properties::Property> props = properties::all_properties();
    REQUIRE_FALSE(props.empty());
    std::uint64_t seed = 0xC0FFEEULL;
    for (const properties::Property& prop : props) {
        DYNAMIC_SECTION(prop.name) {
            const properties::SuiteResult result =
                properties::run_property(prop, seed);
            INFO(result.failure);
            CHECK(result.passed);
        }
        ++seed;
    }
}
