#include "toric/json.hpp"

#include <algorithm>
#include <sstream>

namespace toric {

const JsonValue* JsonValue::find(std::string_view key) const {
    const JsonObject* obj = std::get_if<JsonObject>(&v_);
    if (!obj) return nullptr;
    for (const auto& [k, v] : *obj)
        if (k == key) return &v;
    return nullptr;
}

const JsonValue& JsonValue::at(std::string_view key) const {
    if (const JsonValue* p = find(key)) return *p;
    throw JsonTypeError("missing member \"" + std::string(key) + "\"");
}

namespace {

constexpr std::size_t kMaxDepth = 200;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    JsonValue run() {
        skip_ws();
        JsonValue v = parse_value(0);
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content after document");
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw JsonParseError(msg, line_, col_);
    }

    bool eof() const { return pos_ >= text_.size(); }

    char peek() const {
        if (eof()) fail("unexpected end of input");
        return text_[pos_];
    }

    char advance() {
        char c = peek();
        ++pos_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void expect(char c) {
        if (eof() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    void skip_ws() {
        while (!eof()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                advance();
            else
                break;
        }
    }

    JsonValue parse_value(std::size_t depth) {
        if (depth > kMaxDepth) fail("nesting too deep");
        if (eof()) fail("unexpected end of input");
        char c = peek();
        switch (c) {
            case '{': return parse_object(depth);
            case '[': return parse_array(depth);
            case '"': return JsonValue(parse_string());
            case 't': parse_literal("true"); return JsonValue(true);
            case 'f': parse_literal("false"); return JsonValue(false);
            case 'n': parse_literal("null"); return JsonValue(nullptr);
            default:
                if (c == '-' || (c >= '0' && c <= '9')) return parse_number();
                fail("unexpected character");
        }
    }

    void parse_literal(std::string_view lit) {
        for (char c : lit) {
            if (eof() || text_[pos_] != c) fail("invalid literal");
            advance();
        }
    }

    JsonValue parse_number() {
        std::string digits;
        if (peek() == '-') digits += advance();
        if (eof() || !isdigit_ascii(text_[pos_])) fail("digit expected");
        while (!eof() && isdigit_ascii(text_[pos_])) digits += advance();
        if (!eof()) {
            char c = text_[pos_];
            if (c == '.' || c == 'e' || c == 'E')
                fail("floating-point literals are not accepted; integers only");
        }
        std::string_view body = digits;
        if (body[0] == '-') body.remove_prefix(1);
        if (body.size() > 1 && body[0] == '0') fail("leading zeros are not accepted");
        Int value(digits);
        if (value == 0) value = 0;  // normalizes "-0"
        return JsonValue(value);
    }

    static bool isdigit_ascii(char c) { return c >= '0' && c <= '9'; }

    static bool ishex(char c) {
        return isdigit_ascii(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    }

    unsigned hex4() {
        unsigned v = 0;
        for (int i = 0; i < 4; ++i) {
            if (eof() || !ishex(text_[pos_])) fail("invalid \\u escape");
            char c = advance();
            unsigned d = (c <= '9') ? unsigned(c - '0')
                                    : unsigned((c | 0x20) - 'a' + 10);
            v = v * 16 + d;
        }
        return v;
    }

    static void append_utf8(std::string& out, unsigned cp) {
        if (cp < 0x80) {
            out += char(cp);
        } else if (cp < 0x800) {
            out += char(0xC0 | (cp >> 6));
            out += char(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += char(0xE0 | (cp >> 12));
            out += char(0x80 | ((cp >> 6) & 0x3F));
            out += char(0x80 | (cp & 0x3F));
        } else {
            out += char(0xF0 | (cp >> 18));
            out += char(0x80 | ((cp >> 12) & 0x3F));
            out += char(0x80 | ((cp >> 6) & 0x3F));
            out += char(0x80 | (cp & 0x3F));
        }
    }

    std::string parse_string() {
        expect('"');
        std::string out;
        for (;;) {
            if (eof()) fail("unterminated string");
            char c = advance();
            if (c == '"') break;
            if (static_cast<unsigned char>(c) < 0x20) fail("raw control character in string");
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) fail("unterminated escape");
            char e = advance();
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case '/': out += '/'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'u': {
                    unsigned cp = hex4();
                    if (cp >= 0xD800 && cp <= 0xDBFF) {
                        if (eof() || text_[pos_] != '\\') fail("unpaired surrogate");
                        advance();
                        if (eof() || text_[pos_] != 'u') fail("unpaired surrogate");
                        advance();
                        unsigned lo = hex4();
                        if (lo < 0xDC00 || lo > 0xDFFF) fail("invalid low surrogate");
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
                        fail("unpaired surrogate");
                    }
                    append_utf8(out, cp);
                    break;
                }
                default: fail("invalid escape character");
            }
        }
        return out;
    }

    JsonValue parse_array(std::size_t depth) {
        expect('[');
        JsonArray arr;
        skip_ws();
        if (!eof() && text_[pos_] == ']') {
            advance();
            return JsonValue(std::move(arr));
        }
        for (;;) {
            skip_ws();
            arr.push_back(parse_value(depth + 1));
            skip_ws();
            if (eof()) fail("unterminated array");
            char c = advance();
            if (c == ']') break;
            if (c != ',') fail("expected ',' or ']'");
        }
        return JsonValue(std::move(arr));
    }

    JsonValue parse_object(std::size_t depth) {
        expect('{');
        JsonObject obj;
        skip_ws();
        if (!eof() && text_[pos_] == '}') {
            advance();
            return JsonValue(std::move(obj));
        }
        for (;;) {
            skip_ws();
            if (eof() || text_[pos_] != '"') fail("expected string key");
            std::string key = parse_string();
            for (const auto& [k, v] : obj)
                if (k == key) fail("duplicate key \"" + key + "\"");
            skip_ws();
            expect(':');
            skip_ws();
            obj.emplace_back(std::move(key), parse_value(depth + 1));
            skip_ws();
            if (eof()) fail("unterminated object");
            char c = advance();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}'");
        }
        return JsonValue(std::move(obj));
    }
};

void escape_into(std::ostream& os, const std::string& s) {
    os << '"';
    for (char raw : s) {
        unsigned char c = static_cast<unsigned char>(raw);
        switch (raw) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\b': os << "\\b"; break;
            case '\f': os << "\\f"; break;
            case '\n': os << "\\n"; break;
            case '\r': os << "\\r"; break;
            case '\t': os << "\\t"; break;
            default:
                if (c < 0x20) {
                    static const char* hex = "0123456789abcdef";
                    os << "\\u00" << hex[c >> 4] << hex[c & 0xF];
                } else {
                    os << raw;
                }
        }
    }
    os << '"';
}

void dump_into(std::ostream& os, const JsonValue& v, int indent, int level) {
    auto newline = [&](int lvl) {
        if (indent >= 0) {
            os << '\n';
            for (int i = 0; i < indent * lvl; ++i) os << ' ';
        }
    };
    if (v.is_null()) {
        os << "null";
    } else if (v.is_bool()) {
        os << (v.as_bool() ? "true" : "false");
    } else if (v.is_int()) {
        os << v.as_int();
    } else if (v.is_string()) {
        escape_into(os, v.as_string());
    } else if (v.is_array()) {
        const JsonArray& arr = v.as_array();
        if (arr.empty()) {
            os << "[]";
            return;
        }
        // short scalar arrays stay on one line in pretty mode
        bool inline_arr = indent < 0;
        if (!inline_arr) {
            inline_arr = std::all_of(arr.begin(), arr.end(), [](const JsonValue& e) {
                return e.is_int() || e.is_bool() || e.is_null();
            });
        }
        os << '[';
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (i) os << ',';
            if (!inline_arr)
                newline(level + 1);
            else if (indent >= 0 && i)
                os << ' ';
            dump_into(os, arr[i], inline_arr ? -1 : indent, level + 1);
        }
        if (!inline_arr) newline(level);
        os << ']';
    } else {
        const JsonObject& obj = v.as_object();
        if (obj.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (const auto& [k, val] : obj) {
            if (!first) os << ',';
            first = false;
            newline(level + 1);
            escape_into(os, k);
            os << ':';
            if (indent >= 0) os << ' ';
            dump_into(os, val, indent, level + 1);
        }
        newline(level);
        os << '}';
    }
}

}  // namespace

JsonValue parse_json(std::string_view text) { return Parser(text).run(); }

std::string dump_json(const JsonValue& v) {
    std::ostringstream os;
    dump_into(os, v, -1, 0);
    return os.str();
}

std::string dump_json_pretty(const JsonValue& v) {
    std::ostringstream os;
    dump_into(os, v, 2, 0);
    os << '\n';
    return os.str();
}

}  // namespace toric
