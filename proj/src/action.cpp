#include "evoforge/action.hpp"

#include <array>
#include <cctype>
#include <unordered_map>

namespace evoforge {

namespace {

struct NameEntry {
    const char* name;
    ActionType kind;
};

// Canonical DSL names in enum order. `type_text` serializes as `type`.
constexpr std::array<NameEntry, kActionTypeCount> kCanonicalNames = {{
    {"click", ActionType::click},
    {"left_single", ActionType::left_single},
    {"right_single", ActionType::right_single},
    {"hover", ActionType::hover},
    {"left_double", ActionType::left_double},
    {"double_click", ActionType::double_click},
    {"drag", ActionType::drag},
    {"select", ActionType::select},
    {"type", ActionType::type_text},
    {"hotkey", ActionType::hotkey},
    {"press", ActionType::press},
    {"scroll", ActionType::scroll},
    {"move_mouse", ActionType::move_mouse},
    {"highlight", ActionType::highlight},
    {"copy", ActionType::copy},
    {"paste", ActionType::paste},
    {"wait", ActionType::wait},
    {"finished", ActionType::finished},
}};

const std::unordered_map<std::string, ActionType>& name_table() {
    static const std::unordered_map<std::string, ActionType> table = [] {
        std::unordered_map<std::string, ActionType> t;
        for (const auto& e : kCanonicalNames) t.emplace(e.name, e.kind);
        // Parse-time aliases.
        t.emplace("finish_task", ActionType::finished);
        t.emplace("type_text", ActionType::type_text);
        return t;
    }();
    return table;
}

const char* kDirectionNames[] = {"up", "down", "left", "right"};

std::string escape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

RewardFamily reward_family(ActionType kind) {
    switch (kind) {
        case ActionType::click:
        case ActionType::left_single:
        case ActionType::right_single:
        case ActionType::hover:
        case ActionType::left_double:
        case ActionType::double_click:
        case ActionType::move_mouse:
            return RewardFamily::point;
        case ActionType::drag:
        case ActionType::select:
        case ActionType::highlight:
            return RewardFamily::box;
        case ActionType::type_text:
        case ActionType::hotkey:
        case ActionType::press:
        case ActionType::copy:
        case ActionType::paste:
            return RewardFamily::text;
        case ActionType::scroll:
            return RewardFamily::direction;
        case ActionType::wait:
        case ActionType::finished:
            return RewardFamily::fixed;
    }
    throw MalformedPayload("unknown action type");
}

const char* action_name(ActionType kind) {
    for (const auto& e : kCanonicalNames)
        if (e.kind == kind) return e.name;
    return "?";
}

const char* direction_name(ScrollDirection d) {
    return kDirectionNames[static_cast<int>(d)];
}

Action Action::point_action(ActionType kind, Point p) {
    if (reward_family(kind) != RewardFamily::point)
        throw MalformedPayload(std::string(action_name(kind)) + " does not take a point");
    if (p.x < 0 || p.y < 0) throw OutOfRangeCoordinate("negative coordinate");
    Action a;
    a.kind = kind;
    a.point = p;
    return a;
}

Action Action::box_action(ActionType kind, Box b) {
    if (reward_family(kind) != RewardFamily::box)
        throw MalformedPayload(std::string(action_name(kind)) + " does not take a box");
    if (b.x1 < 0 || b.y1 < 0 || b.x2 < 0 || b.y2 < 0)
        throw OutOfRangeCoordinate("negative coordinate");
    if (b.x1 > b.x2 || b.y1 > b.y2)
        throw MalformedPayload("box must satisfy x1<=x2 and y1<=y2");
    Action a;
    a.kind = kind;
    a.box = b;
    return a;
}

Action Action::text_action(ActionType kind, std::string text) {
    if (kind != ActionType::type_text && kind != ActionType::copy &&
        kind != ActionType::paste)
        throw MalformedPayload(std::string(action_name(kind)) + " does not take text");
    Action a;
    a.kind = kind;
    a.text = std::move(text);
    return a;
}

Action Action::keys_action(ActionType kind, std::string keys) {
    if (kind != ActionType::hotkey && kind != ActionType::press)
        throw MalformedPayload(std::string(action_name(kind)) + " does not take keys");
    Action a;
    a.kind = kind;
    // Canonical lowercase with '+' separators.
    for (char& c : keys) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    a.keys = std::move(keys);
    return a;
}

Action Action::scroll_action(ScrollDirection d) {
    Action a;
    a.kind = ActionType::scroll;
    a.direction = d;
    return a;
}

Action Action::simple(ActionType kind) {
    if (reward_family(kind) != RewardFamily::fixed)
        throw MalformedPayload(std::string(action_name(kind)) + " requires a payload");
    Action a;
    a.kind = kind;
    return a;
}

std::string Action::payload_string() const {
    if (text) return *text;
    if (keys) return *keys;
    if (direction) return direction_name(*direction);
    return {};
}

// ---------------------------------------------------------------------------
// Parser: `name(arg=value)` with whitespace allowed between tokens.

namespace {

class Scanner {
  public:
    explicit Scanner(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eof() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw MalformedPayload(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) throw MalformedPayload("expected identifier");
        return s_.substr(start, pos_ - start);
    }
    int integer() {
        skip_ws();
        bool neg = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            neg = true;
            ++pos_;
        }
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw MalformedPayload("expected integer");
        long v = std::stol(s_.substr(start, pos_ - start));
        if (neg) throw OutOfRangeCoordinate("negative coordinate");
        return static_cast<int>(v);
    }
    std::string quoted() {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '\'')
            throw MalformedPayload("expected quoted string");
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '\'') {
            char c = s_[pos_++];
            if (c == '\\' && pos_ < s_.size()) c = s_[pos_++];
            out.push_back(c);
        }
        if (pos_ >= s_.size()) throw MalformedPayload("unterminated string");
        ++pos_;  // closing quote
        return out;
    }

  private:
    const std::string& s_;
    size_t pos_ = 0;
};

Point parse_point(Scanner& sc) {
    sc.expect('(');
    int x = sc.integer();
    sc.expect(',');
    int y = sc.integer();
    sc.expect(')');
    return {x, y};
}

Box parse_box(Scanner& sc) {
    sc.expect('(');
    int x1 = sc.integer();
    sc.expect(',');
    int y1 = sc.integer();
    sc.expect(',');
    int x2 = sc.integer();
    sc.expect(',');
    int y2 = sc.integer();
    sc.expect(')');
    return {x1, y1, x2, y2};
}

}  // namespace

Action parse_action(const std::string& text) {
    Scanner sc(text);
    std::string name = sc.word();
    auto it = name_table().find(name);
    if (it == name_table().end()) throw UnknownActionName(name);
    ActionType kind = it->second;
    sc.expect('(');
    Action result;
    switch (reward_family(kind)) {
        case RewardFamily::point: {
            std::string key = sc.word();
            if (key != "point") throw MalformedPayload("expected point=");
            sc.expect('=');
            result = Action::point_action(kind, parse_point(sc));
            break;
        }
        case RewardFamily::box: {
            std::string key = sc.word();
            if (key != "box") throw MalformedPayload("expected box=");
            sc.expect('=');
            result = Action::box_action(kind, parse_box(sc));
            break;
        }
        case RewardFamily::text: {
            std::string key = sc.word();
            sc.expect('=');
            if (kind == ActionType::hotkey || kind == ActionType::press) {
                if (key != "keys") throw MalformedPayload("expected keys=");
                result = Action::keys_action(kind, sc.quoted());
            } else {
                if (key != "text") throw MalformedPayload("expected text=");
                result = Action::text_action(kind, sc.quoted());
            }
            break;
        }
        case RewardFamily::direction: {
            std::string key = sc.word();
            if (key != "direction") throw MalformedPayload("expected direction=");
            sc.expect('=');
            std::string dir = sc.word();
            int di = -1;
            for (int i = 0; i < 4; ++i)
                if (dir == kDirectionNames[i]) di = i;
            if (di < 0) throw MalformedPayload("unknown direction " + dir);
            result = Action::scroll_action(static_cast<ScrollDirection>(di));
            break;
        }
        case RewardFamily::fixed:
            result = Action::simple(kind);
            break;
    }
    sc.expect(')');
    if (!sc.eof()) throw MalformedPayload("trailing characters after action");
    return result;
}

std::string serialize_action(const Action& a) {
    std::string out = action_name(a.kind);
    out.push_back('(');
    switch (reward_family(a.kind)) {
        case RewardFamily::point:
            out += "point=(" + std::to_string(a.point->x) + "," +
                   std::to_string(a.point->y) + ")";
            break;
        case RewardFamily::box:
            out += "box=(" + std::to_string(a.box->x1) + "," + std::to_string(a.box->y1) +
                   "," + std::to_string(a.box->x2) + "," + std::to_string(a.box->y2) + ")";
            break;
        case RewardFamily::text:
            if (a.keys)
                out += "keys='" + escape_text(*a.keys) + "'";
            else
                out += "text='" + escape_text(*a.text) + "'";
            break;
        case RewardFamily::direction:
            out += std::string("direction=") + direction_name(*a.direction);
            break;
        case RewardFamily::fixed:
            break;
    }
    out.push_back(')');
    return out;
}

// ---------------------------------------------------------------------------
// Vocabulary and tokenization.

Vocabulary::Vocabulary() {
    for (const auto& e : kCanonicalNames) tokens_.push_back(e.name);
    for (const char* kw : {"point", "box", "text", "keys", "direction"})
        tokens_.push_back(kw);
    for (const char* d : kDirectionNames) tokens_.push_back(d);
    for (int c = 32; c <= 126; ++c) tokens_.push_back(std::string(1, static_cast<char>(c)));
}

const Vocabulary& Vocabulary::instance() {
    static const Vocabulary v;
    return v;
}

int Vocabulary::id(const std::string& tok) const {
    static const std::unordered_map<std::string, int> index = [this] {
        std::unordered_map<std::string, int> m;
        for (int i = 0; i < size(); ++i) {
            // Multi-character tokens shadow nothing; single chars are unique.
            if (!m.count(tokens_[i])) m.emplace(tokens_[i], i);
        }
        return m;
    }();
    auto it = index.find(tok);
    if (it == index.end()) throw MalformedPayload("token not in vocabulary: " + tok);
    return it->second;
}

namespace {

void emit(std::vector<int>& out, const std::string& tok) {
    out.push_back(Vocabulary::instance().id(tok));
}

void emit_chars(std::vector<int>& out, const std::string& s) {
    for (char c : s) emit(out, std::string(1, c));
}

}  // namespace

TokenSequence tokenize_action(const Action& a) {
    TokenSequence seq;
    auto& t = seq.tokens;
    emit(t, action_name(a.kind));
    emit(t, "(");
    switch (reward_family(a.kind)) {
        case RewardFamily::point:
            emit(t, "point");
            emit(t, "=");
            emit(t, "(");
            emit_chars(t, std::to_string(a.point->x));
            emit(t, ",");
            emit_chars(t, std::to_string(a.point->y));
            emit(t, ")");
            break;
        case RewardFamily::box:
            emit(t, "box");
            emit(t, "=");
            emit(t, "(");
            emit_chars(t, std::to_string(a.box->x1));
            emit(t, ",");
            emit_chars(t, std::to_string(a.box->y1));
            emit(t, ",");
            emit_chars(t, std::to_string(a.box->x2));
            emit(t, ",");
            emit_chars(t, std::to_string(a.box->y2));
            emit(t, ")");
            break;
        case RewardFamily::text:
            if (a.keys) {
                emit(t, "keys");
                emit(t, "=");
                emit(t, "'");
                emit_chars(t, escape_text(*a.keys));
                emit(t, "'");
            } else {
                emit(t, "text");
                emit(t, "=");
                emit(t, "'");
                emit_chars(t, escape_text(*a.text));
                emit(t, "'");
            }
            break;
        case RewardFamily::direction:
            emit(t, "direction");
            emit(t, "=");
            emit(t, direction_name(*a.direction));
            break;
        case RewardFamily::fixed:
            break;
    }
    emit(t, ")");
    return seq;
}

std::string detokenize(const TokenSequence& seq) {
    std::string out;
    for (int id : seq.tokens) out += Vocabulary::instance().token(id);
    return out;
}

}  // namespace evoforge
