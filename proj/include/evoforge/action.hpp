#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evoforge/errors.hpp"

namespace evoforge {

enum class ActionType {
    click,
    left_single,
    right_single,
    hover,
    left_double,
    double_click,
    drag,
    select,
    type_text,
    hotkey,
    press,
    scroll,
    move_mouse,
    highlight,
    copy,
    paste,
    wait,
    finished,
};

constexpr int kActionTypeCount = 18;

// Reward family per action type; one family per type.
enum class RewardFamily { point, box, text, direction, fixed };

enum class ScrollDirection { up, down, left, right };

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

struct Box {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const Box&) const = default;
    double area() const {
        return static_cast<double>(x2 - x1) * static_cast<double>(y2 - y1);
    }
};

RewardFamily reward_family(ActionType kind);
const char* action_name(ActionType kind);  // canonical DSL name
const char* direction_name(ScrollDirection d);

// One parsed GUI action. Payload presence matches the kind's reward
// family; construct via the factories so invalid combinations never exist.
struct Action {
    ActionType kind = ActionType::wait;
    std::optional<Point> point;
    std::optional<Box> box;
    std::optional<std::string> text;   // type_text/copy/paste payload
    std::optional<std::string> keys;   // hotkey/press payload
    std::optional<ScrollDirection> direction;

    bool operator==(const Action&) const = default;

    static Action point_action(ActionType kind, Point p);
    static Action box_action(ActionType kind, Box b);
    static Action text_action(ActionType kind, std::string text);
    static Action keys_action(ActionType kind, std::string keys);
    static Action scroll_action(ScrollDirection d);
    static Action simple(ActionType kind);  // wait / finished

    // Canonical string payload used by text-family reward comparison.
    std::string payload_string() const;
};

Action parse_action(const std::string& text);
std::string serialize_action(const Action& a);

// Fixed DSL alphabet shared by all policies. Multi-character tokens for
// action names / keywords / directions, single-character tokens for
// everything printable.
class Vocabulary {
  public:
    static const Vocabulary& instance();

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::string& token(int id) const { return tokens_.at(id); }
    int id(const std::string& tok) const;

  private:
    Vocabulary();
    std::vector<std::string> tokens_;
};

struct TokenSequence {
    std::vector<int> tokens;
    bool operator==(const TokenSequence&) const = default;
};

TokenSequence tokenize_action(const Action& a);
std::string detokenize(const TokenSequence& seq);

}  // namespace evoforge
