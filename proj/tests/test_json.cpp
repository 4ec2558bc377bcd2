#include "toric/json.hpp"

#include <doctest.h>

using namespace toric;

TEST_CASE("parse_json: scalars and containers") {
    CHECK(parse_json("null").is_null());
    CHECK(parse_json("true").as_bool());
    CHECK(parse_json("-42").as_int() == -42);
    CHECK(parse_json("\"hi\\n\"").as_string() == "hi\n");
    CHECK(parse_json("[1,2,3]").as_array().size() == 3);
    CHECK(parse_json("{\"a\":1}").at("a").as_int() == 1);
    CHECK(parse_json(" { \"a\" : [ 1 , 2 ] } ").at("a").as_array()[1].as_int() == 2);
}

TEST_CASE("parse_json: arbitrary-precision integers survive") {
    const char* big = "123456789012345678901234567890123456789";
    CHECK(parse_json(big).as_int() == Int(big));
    CHECK(dump_json(parse_json(big)) == big);
}

TEST_CASE("parse_json: floats are rejected") {
    CHECK_THROWS_AS(parse_json("1.5"), JsonParseError);
    CHECK_THROWS_AS(parse_json("[1, 0.5]"), JsonParseError);
    CHECK_THROWS_AS(parse_json("1e3"), JsonParseError);
    CHECK_THROWS_AS(parse_json("-2E4"), JsonParseError);
    CHECK_THROWS_AS(parse_json("007"), JsonParseError);
}

TEST_CASE("parse_json: error positions are 1-based line/column") {
    try {
        parse_json("{\"a\": 1,\n  \"b\": 1.5}");
        FAIL("expected parse error");
    } catch (const JsonParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 9);  // points at the '.' of "1.5"
    }
}

TEST_CASE("parse_json: structural strictness") {
    CHECK_THROWS_AS(parse_json("{\"a\":1,\"a\":2}"), JsonParseError);  // dup key
    CHECK_THROWS_AS(parse_json("[1,]"), JsonParseError);
    CHECK_THROWS_AS(parse_json("{}x"), JsonParseError);  // trailing content
    CHECK_THROWS_AS(parse_json("[1 2]"), JsonParseError);
    CHECK_THROWS_AS(parse_json("\"\\q\""), JsonParseError);
    CHECK_THROWS_AS(parse_json(""), JsonParseError);
    CHECK_THROWS_AS(parse_json("\"ab"), JsonParseError);
}

TEST_CASE("parse_json: unicode escapes") {
    CHECK(parse_json("\"\\u0041\"").as_string() == "A");
    CHECK(parse_json("\"\\u00e9\"").as_string() == "\xc3\xa9");
    // surrogate pair for U+1F600
    CHECK(parse_json("\"\\ud83d\\ude00\"").as_string() == "\xf0\x9f\x98\x80");
    CHECK_THROWS_AS(parse_json("\"\\ud83d\""), JsonParseError);
}

TEST_CASE("dump_json: compact, order-preserving, round-trips") {
    JsonObject obj;
    obj.emplace_back("name", JsonValue("P2"));
    obj.emplace_back("rank", JsonValue(2));
    obj.emplace_back("rays", JsonValue(JsonArray{
        JsonValue(JsonArray{JsonValue(1), JsonValue(0)}),
        JsonValue(JsonArray{JsonValue(-1), JsonValue(-1)})}));
    JsonValue v{std::move(obj)};
    std::string text = dump_json(v);
    CHECK(text == "{\"name\":\"P2\",\"rank\":2,\"rays\":[[1,0],[-1,-1]]}");
    CHECK(parse_json(text) == v);
    CHECK(parse_json(dump_json_pretty(v)) == v);
}

TEST_CASE("dump_json: string escaping round-trips") {
    JsonValue v{std::string("a\"b\\c\nd\x01") + "e"};
    CHECK(parse_json(dump_json(v)) == v);
    CHECK(dump_json(v) == "\"a\\\"b\\\\c\\nd\\u0001e\"");
}

TEST_CASE("parse_json: nesting depth is bounded") {
    std::string deep(300, '[');
    deep += std::string(300, ']');
    CHECK_THROWS_AS(parse_json(deep), JsonParseError);
}
