#include <stdexcept>

#include "doctest.h"
#include "simlink/scenario.hpp"

using namespace simlink;

TEST_CASE("defaults match the published table") {
    const LinkScenario s = default_scenario();
    CHECK(s.bandwidth == 1.0e7);
    CHECK(s.wavelength == 0.0214);
    CHECK(s.layers_tx == 3);
    CHECK(s.layers_rx == 3);
    CHECK(s.atoms_tx == 36);
    CHECK(s.atoms_rx == 36);
    CHECK(s.freq == 7e9);
    CHECK(s.thickness_tx == 0.1);
    CHECK(s.noise_psd == doctest::Approx(1e-21));
    CHECK(s.tx_power == 0.01);
    CHECK(s.rician == 20.0);
    CHECK(s.wait_budget == 0.5);
    CHECK(s.packet_mean == 1e8);
    REQUIRE(s.ref_pathloss_db.has_value());
    CHECK(*s.ref_pathloss_db == 80.0);
    CHECK(s.layer_gap_tx() == doctest::Approx(0.1 / 3.0));
}

TEST_CASE("defaults validate cleanly, with a wavelength warning") {
    const LinkScenario s = default_scenario();
    CHECK(validate(s).empty());
    // 21.4 mm as printed vs c/f = 42.86 mm
    CHECK(validate_warnings(s).size() == 1);
}

TEST_CASE("violations name the field and rule") {
    LinkScenario s = default_scenario();
    s.atoms_tx = 4;
    s.num_streams = 5;
    auto v = validate(s);
    REQUIRE(!v.empty());
    CHECK(v.front().message == "M >= S violated");

    s = default_scenario();
    s.bandwidth = 0.0;
    v = validate(s);
    REQUIRE(v.size() == 1);
    CHECK(v.front().field == "bandwidth");
}

TEST_CASE("validate is pure") {
    LinkScenario s = default_scenario();
    s.atoms_rx = 25;
    s.num_streams = 26;
    const auto a = validate(s);
    const auto b = validate(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].message == b[i].message);
}

TEST_CASE("config text round-trips bit-exactly") {
    LinkScenario s = default_scenario();
    s.wavelength = 0.1 + 1e-17;  // not representable prettily
    s.noise_psd = 3.141592653589793e-21;
    s.rng_seed = 0xdeadbeefcafe;
    s.ref_pathloss_db.reset();
    const LinkScenario r = from_config_text(to_config_text(s));
    CHECK(r.wavelength == s.wavelength);
    CHECK(r.noise_psd == s.noise_psd);
    CHECK(r.rng_seed == s.rng_seed);
    CHECK(!r.ref_pathloss_db.has_value());
    CHECK(to_config_text(r) == to_config_text(s));
    CHECK(config_hash(r) == config_hash(s));
}

TEST_CASE("set_field overrides and rejects junk") {
    LinkScenario s = default_scenario();
    set_field(s, "num_streams=5");
    CHECK(s.num_streams == 5);
    set_field(s, "bandwidth=2.5e7");
    CHECK(s.bandwidth == 2.5e7);
    set_field(s, "ref_pathloss_db=none");
    CHECK(!s.ref_pathloss_db.has_value());
    set_field(s, "los_mode=steering");
    CHECK(s.los_mode == "steering");
    CHECK_THROWS_AS(set_field(s, "no_such_field=1"), std::invalid_argument);
    CHECK_THROWS_AS(set_field(s, "bandwidth"), std::invalid_argument);
}

TEST_CASE("stability needs service above load") {
    const LinkScenario s = default_scenario();  // load = 1e8 bits/s
    CHECK(stable(s, 20.0));   // 2e8 > 1e8
    CHECK(!stable(s, 5.0));   // 5e7 < 1e8
    CHECK(!stable(s, 10.0));  // equality is not stable
}
