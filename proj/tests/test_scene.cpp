#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "homesim/scene.hpp"

using namespace homesim;

TEST_CASE("minimal 1x1 scene parses to the degenerate world") {
    Scene s = parse_scene("size 1 1\nlight 1\n");
    CHECK(s.width == 1);
    CHECK(s.height == 1);
    CHECK(s.walls.empty());
    CHECK(s.light_level == 1.0);
    CHECK(s.objects.empty());
}

TEST_CASE("bundled minimal kitchen fixture: two appliances, one plate") {
    Scene s = parse_scene(read_file("data/scenes/kitchen_minimal.scene"));
    CHECK(s.width == 10);
    CHECK(s.height == 10);
    CHECK(s.appliances.size() == 2);
    CHECK(s.objects.size() == 1);
    CHECK(s.objects[0].object_class == "Plate");
    CHECK(validate_scene(s).empty());
}

TEST_CASE("every bundled scene fixture validates clean") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator("data/scenes")) {
        if (entry.path().extension() != ".scene") continue;
        ++seen;
        INFO("fixture: " << entry.path().string());
        Scene s = parse_scene(read_file(entry.path().string()));
        CHECK(validate_scene(s).empty());
    }
    CHECK(seen >= 3);
}

TEST_CASE("wall between non-adjacent cells is rejected with the adjacency rule") {
    CHECK_THROWS_WITH_AS(parse_scene("size 5 5\nwall 0 0 2 0 opaque\n"),
                         doctest::Contains("4-adjacent"), ParseError);
}

TEST_CASE("syntax errors carry the line number") {
    try {
        parse_scene("size 5 5\nlight nope\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("validate_scene flags duplicate ids") {
    Scene s = parse_scene("size 5 5\nobject plate_1 Plate 1 1\n");
    ObjectInstance dup = s.objects[0];
    dup.cell = Cell{2, 2};
    s.objects.push_back(dup);
    auto v = validate_scene(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "DuplicateId");
    CHECK(v[0].entity == "plate_1");
}

TEST_CASE("validate_scene flags light out of range") {
    Scene s = parse_scene("size 3 3\n");
    s.light_level = 1.5;
    auto v = validate_scene(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "LightOutOfRange");
}

TEST_CASE("validate_scene flags an object walled in on all four edges") {
    Scene s = parse_scene(
        "size 3 3\n"
        "wall 1 1 0 1 opaque\nwall 1 1 2 1 opaque\nwall 1 1 1 0 opaque\nwall 1 1 1 2 opaque\n"
        "object mug_1 Mug 0 0\n");
    CHECK(validate_scene(s).empty());
    s.objects[0].cell = Cell{1, 1};
    auto v = validate_scene(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].invariant == "ObjectEnclosed");
}

TEST_CASE("edge_between: passage, explicit wall, implicit perimeter") {
    Scene s = parse_scene("size 4 4\nwall 1 1 2 1 glass\n");
    CHECK(!edge_between({0, 0}, {1, 0}, s).has_value());
    auto w = edge_between({1, 1}, {2, 1}, s);
    REQUIRE(w.has_value());
    CHECK(w->material == Material::Glass);
    auto b = edge_between({0, 0}, Direction::West, s);
    REQUIRE(b.has_value());
    CHECK(b->material == Material::Opaque);
    CHECK_THROWS_AS(edge_between({0, 0}, {2, 0}, s), std::invalid_argument);
}

TEST_CASE("wall lookups are symmetric in the cell pair") {
    Scene s = parse_scene(read_file("data/scenes/kitchen.scene"));
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        Cell a{rng.uniform_int(0, s.width - 1), rng.uniform_int(0, s.height - 1)};
        Direction d = static_cast<Direction>(rng.uniform_int(0, 3));
        Cell b = a + delta(d);
        auto ab = edge_between(a, b, s);
        auto ba = edge_between(b, a, s);
        CHECK(ab.has_value() == ba.has_value());
        if (ab) {
            CHECK(ab->material == ba->material);
            CHECK(ab->edge == ba->edge);
        }
    }
}

namespace {

Scene random_scene(Rng& rng) {
    Scene s;
    s.width = rng.uniform_int(2, 12);
    s.height = rng.uniform_int(2, 12);
    s.light_level = rng.uniform_int(0, 4) / 4.0;
    int walls = rng.uniform_int(0, 10);
    for (int i = 0; i < walls; ++i) {
        Cell a{rng.uniform_int(0, s.width - 1), rng.uniform_int(0, s.height - 1)};
        Cell b = a + delta(static_cast<Direction>(rng.uniform_int(0, 3)));
        s.walls[GridEdge::between(a, b)] =
            static_cast<Material>(rng.uniform_int(0, 2));
    }
    int objs = rng.uniform_int(0, 5);
    for (int i = 0; i < objs; ++i) {
        ObjectInstance o;
        o.id = "obj_" + std::to_string(i);
        o.object_class = i % 2 ? "Plate" : "Bottle";
        o.cell = Cell{rng.uniform_int(0, s.width - 1), rng.uniform_int(0, s.height - 1)};
        o.heated = rng.uniform_int(0, 1) == 1;
        s.objects.push_back(std::move(o));
    }
    int apps = rng.uniform_int(0, 3);
    for (int i = 0; i < apps; ++i) {
        Appliance a;
        a.id = "app_" + std::to_string(i);
        a.kind = static_cast<ApplianceKind>(rng.uniform_int(0, 4));
        a.cell = Cell{rng.uniform_int(0, s.width - 1), rng.uniform_int(0, s.height - 1)};
        if (is_openable(a.kind)) a.is_open = rng.uniform_int(0, 1) == 1;
        if (is_toggleable(a.kind)) a.is_on = rng.uniform_int(0, 1) == 1;
        s.appliances.push_back(std::move(a));
    }
    return s;
}

}  // namespace

TEST_CASE("parse -> serialize -> parse is identity on the canonical form") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        Scene s = random_scene(rng);
        if (!validate_scene(s).empty()) continue;  // generator may wall something in
        std::string first = serialize_scene(s);
        Scene reparsed = parse_scene(first);
        CHECK(serialize_scene(reparsed) == first);
    }
    for (const char* fixture : {"data/scenes/kitchen.scene", "data/scenes/mirror_hall.scene"}) {
        std::string canon = serialize_scene(parse_scene(read_file(fixture)));
        CHECK(serialize_scene(parse_scene(canon)) == canon);
    }
}

TEST_CASE("held objects serialize without a cell and round-trip") {
    Scene s = parse_scene("size 3 3\nobject mug_1 Mug held heated\n");
    REQUIRE(s.objects.size() == 1);
    CHECK(s.objects[0].held);
    CHECK(!s.objects[0].cell.has_value());
    std::string canon = serialize_scene(s);
    CHECK(canon.find("object mug_1 Mug held heated") != std::string::npos);
    CHECK(serialize_scene(parse_scene(canon)) == canon);
}

TEST_CASE("the parser survives junk input with errors, never crashes") {
    Rng rng(0xfeed);
    const std::string alphabet = "size light wall object appliance 0123456789 -.=\n\"#abcXYZ";
    for (int trial = 0; trial < 1000; ++trial) {
        std::string text;
        int len = rng.uniform_int(0, 120);
        for (int i = 0; i < len; ++i)
            text += alphabet[static_cast<size_t>(
                rng.uniform_int(0, static_cast<int>(alphabet.size()) - 1))];
        try {
            Scene s = parse_scene(text);
            CHECK(validate_scene(s).empty());  // parse only returns valid scenes
        } catch (const ParseError&) {
        } catch (const SemanticError&) {
        }
    }
}

TEST_CASE("scene digest is stable for equal scenes and differs across scenes") {
    Scene a = parse_scene(read_file("data/scenes/kitchen.scene"));
    Scene b = parse_scene(read_file("data/scenes/mirror_hall.scene"));
    CHECK(scene_digest(a) == scene_digest(a));
    CHECK(scene_digest(a) != scene_digest(b));
}
