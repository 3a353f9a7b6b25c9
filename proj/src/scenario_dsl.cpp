#include "eaog/scenario_dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "eaog/andor_graph.hpp"

namespace eaog {

DslError::DslError(ErrorCode code, int line, int column, std::vector<std::string> expected,
                   const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column), message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::string DslError::diagnostic() const {
  std::ostringstream os;
  std::string msg = what();
  // what() is "<code>: message"
  os << line_ << ':' << column_ << ": error: " << msg;
  if (!expected_.empty()) {
    os << " [expected: ";
    for (std::size_t i = 0; i < expected_.size(); ++i) {
      if (i) os << ", ";
      os << expected_[i];
    }
    os << ']';
  }
  return os.str();
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  if (ec != std::errc{}) return "0";
  std::string out(buf.data(), end);
  if (out == "-0") out = "0";
  return out;
}

namespace {

struct Token {
  std::string text;
  int col = 1;
  bool quoted = false;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

[[noreturn]] void fail(ErrorCode code, int line, int col, std::vector<std::string> expected,
                       const std::string& message) {
  throw DslError(code, line, col, std::move(expected), message);
}

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      const char c = raw[i];
      const auto uc = static_cast<unsigned char>(c);
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (uc < 0x20 || uc > 0x7e) {
        fail(ErrorCode::LexError, number, static_cast<int>(i) + 1, {"printable ASCII"},
             "invalid character (code " + std::to_string(uc) + ")");
      }
      if (c == '#') break;
      Token tok;
      tok.col = static_cast<int>(i) + 1;
      if (c == '"') {
        tok.quoted = true;
        ++i;
        bool closed = false;
        while (i < raw.size()) {
          const char d = raw[i];
          const auto ud = static_cast<unsigned char>(d);
          if (ud < 0x20 || ud > 0x7e) {
            fail(ErrorCode::LexError, number, static_cast<int>(i) + 1, {"printable ASCII"},
                 "invalid character in string");
          }
          if (d == '\\') {
            if (i + 1 >= raw.size() || (raw[i + 1] != '"' && raw[i + 1] != '\\')) {
              fail(ErrorCode::LexError, number, static_cast<int>(i) + 1, {"\\\"", "\\\\"},
                   "bad escape sequence");
            }
            tok.text += raw[i + 1];
            i += 2;
            continue;
          }
          if (d == '"') {
            closed = true;
            ++i;
            break;
          }
          tok.text += d;
          ++i;
        }
        if (!closed) {
          fail(ErrorCode::LexError, number, tok.col, {"closing quote"}, "unterminated string");
        }
      } else {
        while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') {
          const auto ud = static_cast<unsigned char>(raw[i]);
          if (ud < 0x20 || ud > 0x7e) {
            fail(ErrorCode::LexError, number, static_cast<int>(i) + 1, {"printable ASCII"},
                 "invalid character (code " + std::to_string(ud) + ")");
          }
          if (raw[i] == '"') {
            fail(ErrorCode::LexError, number, static_cast<int>(i) + 1, {"whitespace"},
                 "quote inside a bare token");
          }
          tok.text += raw[i];
          ++i;
        }
      }
      line.tokens.push_back(std::move(tok));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  return lines;
}

enum class Section { None, Objects, Agents, Predicates, Actions, Init, Goal, Graph, Stages };

constexpr std::array<std::string_view, 8> kSectionNames = {
    "OBJECTS", "AGENTS", "PREDICATES", "ACTIONS", "INIT", "GOAL", "GRAPH", "STAGES"};

std::optional<Section> section_of(std::string_view word) {
  for (std::size_t i = 0; i < kSectionNames.size(); ++i) {
    if (word == kSectionNames[i]) return static_cast<Section>(i + 1);
  }
  return std::nullopt;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

bool is_variable(std::string_view s) { return s.size() > 1 && s[0] == '?' && is_identifier(s.substr(1)); }

struct Loc {
  int line = 0;
  int col = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  Scenario run() {
    if (lines_.empty()) fail(ErrorCode::ParseError, 1, 1, {"SCENARIO"}, "empty scenario");
    header(lines_[0]);
    Section current = Section::None;
    for (std::size_t i = 1; i < lines_.size(); ++i) {
      const Line& line = lines_[i];
      const Token& first = line.tokens[0];
      if (!first.quoted) {
        if (auto sec = section_of(first.text)) {
          close_section(current);
          if (*sec <= current) {
            fail(ErrorCode::ParseError, line.number, first.col, remaining_sections(current),
                 "section " + first.text + " out of order");
          }
          current = *sec;
          open_section(current, line);
          continue;
        }
      }
      switch (current) {
        case Section::None:
          fail(ErrorCode::ParseError, line.number, first.col, remaining_sections(current),
               "expected a section header");
        case Section::Objects: object_line(line); break;
        case Section::Agents: agent_line(line); break;
        case Section::Predicates: predicate_line(line); break;
        case Section::Actions: action_line(line); break;
        case Section::Init: fact_list_line(line, true); break;
        case Section::Goal: fact_list_line(line, false); break;
        case Section::Graph: template_line(line, graph_state_); break;
        case Section::Stages: stage_line(line); break;
      }
    }
    close_section(current);
    const int last_line = lines_.back().number;
    if (!saw_graph_) fail(ErrorCode::ParseError, last_line + 1, 1, {"GRAPH"}, "missing GRAPH section");
    if (s_.goal.required_facts.empty()) {
      fail(ErrorCode::ResolveError, goal_loc_.line ? goal_loc_.line : last_line + 1, 1, {"goal fact"},
           "goal is empty");
    }
    canonicalize(s_);
    return std::move(s_);
  }

 private:
  struct TemplateState {
    GraphTemplate* tmpl = nullptr;
    Loc header;
    std::map<std::string, Param> vars;  // declared params
    std::map<std::uint32_t, Loc> node_locs;
    std::map<int, Loc> arc_locs;
    std::vector<std::pair<Loc, std::uint32_t>> node_refs;
  };

  // ---- helpers ----
  std::vector<std::string> remaining_sections(Section after) const {
    std::vector<std::string> out;
    for (std::size_t i = static_cast<std::size_t>(after); i < kSectionNames.size(); ++i) {
      out.emplace_back(kSectionNames[i]);
    }
    return out;
  }

  static const Token& need(const Line& line, std::size_t idx, const std::vector<std::string>& expected) {
    if (idx >= line.tokens.size()) {
      const Token& last = line.tokens.back();
      fail(ErrorCode::ParseError, line.number, last.col + static_cast<int>(last.text.size()) + 1,
           expected, "unexpected end of line");
    }
    return line.tokens[idx];
  }

  static void no_more(const Line& line, std::size_t idx) {
    if (idx < line.tokens.size()) {
      fail(ErrorCode::ParseError, line.number, line.tokens[idx].col, {"end of line"},
           "unexpected token '" + line.tokens[idx].text + "'");
    }
  }

  static std::string ident(const Line& line, std::size_t idx, const std::string& what) {
    const Token& t = need(line, idx, {what});
    if (t.quoted || !is_identifier(t.text)) {
      fail(ErrorCode::ParseError, line.number, t.col, {what}, "bad " + what + " '" + t.text + "'");
    }
    return t.text;
  }

  static void keyword(const Line& line, std::size_t idx, std::string_view word) {
    const Token& t = need(line, idx, {std::string(word)});
    if (t.quoted || t.text != word) {
      fail(ErrorCode::ParseError, line.number, t.col, {std::string(word)},
           "unexpected token '" + t.text + "'");
    }
  }

  static double number(const Line& line, std::size_t idx, bool non_negative = false) {
    const std::string what = non_negative ? "non-negative number" : "number";
    const Token& t = need(line, idx, {what});
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [ptr, ec] = std::from_chars(b, e, v, std::chars_format::fixed);
    if (t.quoted || ec != std::errc{} || ptr != e || !std::isfinite(v) || (non_negative && v < 0.0)) {
      fail(ErrorCode::ParseError, line.number, t.col, {what}, "bad number '" + t.text + "'");
    }
    return v;
  }

  static long integer(const Line& line, std::size_t idx, const std::string& what) {
    const Token& t = need(line, idx, {what});
    long v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (t.quoted || ec != std::errc{} || ptr != e || v < 0) {
      fail(ErrorCode::ParseError, line.number, t.col, {what}, "bad " + what + " '" + t.text + "'");
    }
    return v;
  }

  static Fact fact_token(const Line& line, std::size_t idx) {
    const Token& t = need(line, idx, {"fact"});
    auto f = t.quoted ? std::nullopt : parse_fact(t.text);
    if (!f) fail(ErrorCode::ParseError, line.number, t.col, {"fact"}, "bad fact '" + t.text + "'");
    return *f;
  }

  // Checks predicate arity and that every argument is allowed in this context.
  enum class ArgMode { Ground, ActionPattern, ActionDelete, Template };

  void check_fact(const Fact& f, const Token& t, int line, ArgMode mode,
                  const std::map<std::string, Param>* vars) const {
    auto p = predicates_.find(f.predicate);
    if (p == predicates_.end()) {
      fail(ErrorCode::ResolveError, line, t.col, {"declared predicate"},
           "undeclared predicate " + f.predicate);
    }
    if (p->second != static_cast<int>(f.args.size())) {
      fail(ErrorCode::ResolveError, line, t.col, {std::to_string(p->second) + " arguments"},
           f.predicate + " takes " + std::to_string(p->second) + " arguments");
    }
    for (const auto& a : f.args) check_arg(a, t, line, mode, vars);
  }

  void check_arg(const std::string& a, const Token& t, int line, ArgMode mode,
                 const std::map<std::string, Param>* vars) const {
    if (entities_.contains(a)) return;
    if (a[0] == '?' && vars != nullptr && vars->contains(a) && mode != ArgMode::Ground) return;
    if (a == "$agent" && (mode == ArgMode::ActionPattern || mode == ArgMode::ActionDelete)) return;
    if (a == "*" && mode == ArgMode::ActionDelete) return;
    const bool var = a[0] == '?';
    fail(ErrorCode::ResolveError, line, t.col, {var ? "declared parameter" : "declared entity"},
         (var ? "undeclared variable " : "unknown entity ") + a);
  }

  std::map<std::string, Param> parse_params(const Line& line, std::size_t from,
                                            std::vector<Param>& out) const {
    std::map<std::string, Param> vars;
    for (std::size_t i = from; i < line.tokens.size(); ++i) {
      const Token& t = line.tokens[i];
      const auto colon = t.text.find(':');
      Param p{t.text.substr(0, colon), colon == std::string::npos ? "any" : t.text.substr(colon + 1)};
      if (t.quoted || !is_variable(p.name) || !is_identifier(p.type)) {
        fail(ErrorCode::ParseError, line.number, t.col, {"?name:type"}, "bad parameter '" + t.text + "'");
      }
      if (vars.contains(p.name)) {
        fail(ErrorCode::ResolveError, line.number, t.col, {"unique parameter"},
             "duplicate parameter " + p.name);
      }
      if (p.type != "any" && p.type != "arm" && p.type != "base" && !kinds_.contains(p.type)) {
        fail(ErrorCode::ResolveError, line.number, t.col, {"entity kind"}, "unknown type " + p.type);
      }
      vars[p.name] = p;
      out.push_back(p);
    }
    return vars;
  }

  // ---- sections ----
  void header(const Line& line) {
    keyword(line, 0, "SCENARIO");
    s_.name = ident(line, 1, "scenario name");
    no_more(line, 2);
  }

  void open_section(Section sec, const Line& line) {
    if (sec == Section::Graph) {
      saw_graph_ = true;
      s_.graph.name = ident(line, 1, "graph name");
      no_more(line, 2);
      graph_state_ = TemplateState{};
      graph_state_.tmpl = &s_.graph;
      graph_state_.header = {line.number, line.tokens[0].col};
      return;
    }
    if (sec == Section::Goal) goal_loc_ = {line.number, line.tokens[0].col};
    no_more(line, 1);
  }

  void close_section(Section sec) {
    if (sec == Section::Objects) {
      for (const auto& [id, support] : supports_) {
        if (!objects_.contains(support.second)) {
          fail(ErrorCode::ResolveError, support.first.line, support.first.col, {"declared object"},
               "unknown support " + support.second);
        }
      }
      // support chains must be acyclic
      for (const auto& [id, support] : supports_) {
        std::set<std::string> seen{id};
        std::string cur = support.second;
        while (true) {
          if (!seen.insert(cur).second) {
            fail(ErrorCode::ResolveError, support.first.line, support.first.col, {"acyclic support"},
                 "support cycle through " + id);
          }
          auto it = supports_.find(cur);
          if (it == supports_.end()) break;
          cur = it->second.second;
        }
      }
    } else if (sec == Section::Agents) {
      for (const auto& [id, mount] : mounts_) {
        const auto* base = find_agent(mount.second);
        if (base == nullptr || base->kind != AgentKind::Base) {
          fail(ErrorCode::ResolveError, mount.first.line, mount.first.col, {"declared base"},
               "unknown base " + mount.second);
        }
      }
    } else if (sec == Section::Actions) {
      finish_action();
    } else if (sec == Section::Graph) {
      finish_template(graph_state_);
    } else if (sec == Section::Stages) {
      finish_stage();
    }
  }

  const AgentDecl* find_agent(const std::string& id) const {
    for (const auto& a : s_.agents) {
      if (a.id == id) return &a;
    }
    return nullptr;
  }

  void declare_entity(const Line& line, const std::string& id, const std::string& kind) {
    if (entities_.contains(id)) {
      fail(ErrorCode::ResolveError, line.number, line.tokens[0].col, {"unique id"},
           "duplicate entity " + id);
    }
    entities_.insert(id);
    kinds_.insert(kind);
  }

  // <id> <kind> <x> <y> <yaw> circle <r> | box <hx> <hy>  <height> movable|fixed [on <support>]
  void object_line(const Line& line) {
    ObjectDecl o;
    o.id = ident(line, 0, "object id");
    o.kind = ident(line, 1, "object kind");
    if (o.kind == "arm" || o.kind == "base" || o.kind == "any") {
      fail(ErrorCode::ParseError, line.number, line.tokens[1].col, {"object kind"},
           "reserved kind " + o.kind);
    }
    o.position = {number(line, 2), number(line, 3)};
    o.yaw = number(line, 4);
    const Token& shape = need(line, 5, {"circle", "box"});
    std::size_t i = 6;
    if (shape.text == "circle" && !shape.quoted) {
      o.footprint.shape = Footprint::Shape::Circle;
      o.footprint.radius = number(line, i++, true);
    } else if (shape.text == "box" && !shape.quoted) {
      o.footprint.shape = Footprint::Shape::Box;
      o.footprint.hx = number(line, i++, true);
      o.footprint.hy = number(line, i++, true);
    } else {
      fail(ErrorCode::ParseError, line.number, shape.col, {"circle", "box"},
           "unknown footprint '" + shape.text + "'");
    }
    o.height = number(line, i++, true);
    const Token& mob = need(line, i, {"movable", "fixed"});
    if (mob.text == "movable" && !mob.quoted) {
      o.movable = true;
    } else if (!(mob.text == "fixed" && !mob.quoted)) {
      fail(ErrorCode::ParseError, line.number, mob.col, {"movable", "fixed"},
           "unexpected token '" + mob.text + "'");
    }
    ++i;
    if (i < line.tokens.size()) {
      keyword(line, i, "on");
      o.support = ident(line, i + 1, "support id");
      supports_[o.id] = {Loc{line.number, line.tokens[i + 1].col}, o.support};
      no_more(line, i + 2);
    }
    declare_entity(line, o.id, o.kind);
    objects_.insert(o.id);
    s_.objects.push_back(std::move(o));
  }

  // <id> arm <x> <y> <yaw> reach <r> clearance <h> [mount <base>]
  // <id> base <x> <y> <yaw> radius <r>
  void agent_line(const Line& line) {
    AgentDecl a;
    a.id = ident(line, 0, "agent id");
    const Token& kind = need(line, 1, {"arm", "base"});
    a.position = {number(line, 2), number(line, 3)};
    a.yaw = number(line, 4);
    if (kind.text == "arm" && !kind.quoted) {
      a.kind = AgentKind::Arm;
      keyword(line, 5, "reach");
      a.reach = number(line, 6, true);
      keyword(line, 7, "clearance");
      a.clearance = number(line, 8, true);
      if (line.tokens.size() > 9) {
        keyword(line, 9, "mount");
        a.mount = ident(line, 10, "base id");
        mounts_[a.id] = {Loc{line.number, line.tokens[10].col}, a.mount};
        no_more(line, 11);
      }
    } else if (kind.text == "base" && !kind.quoted) {
      a.kind = AgentKind::Base;
      keyword(line, 5, "radius");
      a.radius = number(line, 6, true);
      no_more(line, 7);
    } else {
      fail(ErrorCode::ParseError, line.number, kind.col, {"arm", "base"},
           "unknown agent kind '" + kind.text + "'");
    }
    declare_entity(line, a.id, a.kind == AgentKind::Arm ? "arm" : "base");
    s_.agents.push_back(std::move(a));
  }

  void predicate_line(const Line& line) {
    PredicateDecl p;
    p.name = ident(line, 0, "predicate name");
    p.arity = static_cast<int>(integer(line, 1, "arity"));
    no_more(line, 2);
    if (predicates_.contains(p.name)) {
      fail(ErrorCode::ResolveError, line.number, line.tokens[0].col, {"unique predicate"},
           "duplicate predicate " + p.name);
    }
    predicates_[p.name] = p.arity;
    s_.predicates.push_back(std::move(p));
  }

  // action <name> ?p:type ...
  //   class transfer ?obj ?goal | handover ?obj ?goal | transit ?goal | symbolic | wait <s>
  //   pre|add|del <fact> ...
  void action_line(const Line& line) {
    const Token& head = line.tokens[0];
    if (!head.quoted && head.text == "action") {
      finish_action();
      ActionTemplate a;
      a.name = ident(line, 1, "action name");
      for (const auto& existing : s_.actions) {
        if (existing.name == a.name) {
          fail(ErrorCode::ResolveError, line.number, line.tokens[1].col, {"unique action"},
               "duplicate action " + a.name);
        }
      }
      action_vars_ = parse_params(line, 2, a.params);
      s_.actions.push_back(std::move(a));
      action_open_ = true;
      saw_class_ = false;
      return;
    }
    if (!action_open_) {
      fail(ErrorCode::ParseError, line.number, head.col, {"action"}, "expected an action declaration");
    }
    ActionTemplate& a = s_.actions.back();
    auto slot = [&](std::size_t idx, bool allow_hand) {
      const Token& t = need(line, idx, {"parameter"});
      if (allow_hand && t.text == "hand" && !t.quoted) return t.text;
      if (t.quoted || !action_vars_.contains(t.text)) {
        fail(ErrorCode::ResolveError, line.number, t.col, {"declared parameter"},
             "undeclared parameter " + t.text);
      }
      return t.text;
    };
    if (head.quoted) fail(ErrorCode::ParseError, line.number, head.col, {"class", "pre", "add", "del"}, "unexpected string");
    if (head.text == "class") {
      if (saw_class_) {
        fail(ErrorCode::ParseError, line.number, head.col, {"pre", "add", "del"}, "duplicate class");
      }
      saw_class_ = true;
      const Token& k = need(line, 1, {"transfer", "handover", "transit", "symbolic", "wait"});
      auto mc = k.quoted ? std::nullopt : motion_class_from_string(k.text);
      if (!mc) {
        fail(ErrorCode::ParseError, line.number, k.col, {"transfer", "handover", "transit", "symbolic", "wait"},
             "unknown motion class '" + k.text + "'");
      }
      a.motion_class = *mc;
      switch (*mc) {
        case MotionClass::Transfer:
        case MotionClass::Handover:
          a.object_slot = slot(2, false);
          a.goal_slot = slot(3, true);
          no_more(line, 4);
          break;
        case MotionClass::Transit:
          a.goal_slot = slot(2, false);
          no_more(line, 3);
          break;
        case MotionClass::Wait:
          a.duration = number(line, 2, true);
          no_more(line, 3);
          break;
        case MotionClass::Symbolic:
          no_more(line, 2);
          break;
      }
      return;
    }
    std::vector<Fact>* list = nullptr;
    ArgMode mode = ArgMode::ActionPattern;
    if (head.text == "pre") list = &a.preconditions;
    if (head.text == "add") list = &a.effects_add;
    if (head.text == "del") {
      list = &a.effects_del;
      mode = ArgMode::ActionDelete;
    }
    if (list == nullptr) {
      fail(ErrorCode::ParseError, line.number, head.col, {"action", "class", "pre", "add", "del"},
           "unexpected token '" + head.text + "'");
    }
    if (!list->empty()) {
      fail(ErrorCode::ParseError, line.number, head.col, {"class", "pre", "add", "del"},
           "duplicate " + head.text + " clause");
    }
    need(line, 1, {"fact"});
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      Fact f = fact_token(line, i);
      check_fact(f, line.tokens[i], line.number, mode, &action_vars_);
      list->push_back(std::move(f));
    }
  }

  void finish_action() {
    if (!action_open_) return;
    action_open_ = false;
  }

  void fact_list_line(const Line& line, bool init) {
    for (std::size_t i = 0; i < line.tokens.size(); ++i) {
      Fact f = fact_token(line, i);
      check_fact(f, line.tokens[i], line.number, ArgMode::Ground, nullptr);
      if (init && is_derived_predicate(f.predicate)) {
        fail(ErrorCode::ResolveError, line.number, line.tokens[i].col, {"symbolic fact"},
             f.predicate + " is derived from geometry and cannot appear in INIT");
      }
      (init ? s_.init : s_.goal.required_facts).insert(std::move(f));
    }
  }

  // node <id> <kind> <label> [fact ...]
  // arc <id> <parent> <- <child> ... weight <w> [if <fact> ...] [do <call> ...]
  void template_line(const Line& line, TemplateState& st) {
    const Token& head = line.tokens[0];
    GraphTemplate& t = *st.tmpl;
    if (!head.quoted && head.text == "node") {
      NodeDecl n;
      n.id = static_cast<std::uint32_t>(integer(line, 1, "node id"));
      const Token& kt = need(line, 2, {"leaf", "internal", "root", "failure"});
      auto kind = kt.quoted ? std::nullopt : node_kind_from_string(kt.text);
      if (!kind || *kind == NodeKind::Virtual) {
        fail(ErrorCode::ParseError, line.number, kt.col, {"leaf", "internal", "root", "failure"},
             "bad node kind '" + kt.text + "'");
      }
      n.kind = *kind;
      n.label = need(line, 3, {"label"}).text;
      for (std::size_t i = 4; i < line.tokens.size(); ++i) {
        Fact f = fact_token(line, i);
        check_fact(f, line.tokens[i], line.number, ArgMode::Template, &st.vars);
        n.facts.push_back(std::move(f));
      }
      if (n.kind != NodeKind::Leaf && !n.facts.empty()) {
        fail(ErrorCode::ParseError, line.number, line.tokens[4].col, {"end of line"},
             "only leaf nodes carry facts");
      }
      if (st.node_locs.contains(n.id)) {
        fail(ErrorCode::ResolveError, line.number, line.tokens[1].col, {"unique node id"},
             "duplicate node " + std::to_string(n.id));
      }
      st.node_locs[n.id] = {line.number, line.tokens[1].col};
      t.nodes.push_back(std::move(n));
      return;
    }
    if (!head.quoted && head.text == "arc") {
      ArcDecl a;
      a.id = static_cast<int>(integer(line, 1, "arc id"));
      if (st.arc_locs.contains(a.id)) {
        fail(ErrorCode::ResolveError, line.number, line.tokens[1].col, {"unique arc id"},
             "duplicate arc " + std::to_string(a.id));
      }
      st.arc_locs[a.id] = {line.number, line.tokens[1].col};
      a.parent = static_cast<std::uint32_t>(integer(line, 2, "node id"));
      st.node_refs.push_back({{line.number, line.tokens[2].col}, a.parent});
      keyword(line, 3, "<-");
      std::size_t i = 4;
      while (i < line.tokens.size() && line.tokens[i].text != "weight") {
        a.children.push_back(static_cast<std::uint32_t>(integer(line, i, "node id")));
        st.node_refs.push_back({{line.number, line.tokens[i].col}, a.children.back()});
        ++i;
      }
      if (a.children.empty()) need(line, line.tokens.size(), {"node id"});
      keyword(line, i, "weight");
      a.weight = number(line, i + 1, true);
      i += 2;
      enum { None, Guards, Calls } mode = None;
      for (; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        if (!tok.quoted && tok.text == "if" && mode == None && a.guards.empty()) {
          mode = Guards;
          continue;
        }
        if (!tok.quoted && tok.text == "do" && mode != Calls) {
          mode = Calls;
          continue;
        }
        if (mode == None) {
          fail(ErrorCode::ParseError, line.number, tok.col, {"if", "do"}, "unexpected token '" + tok.text + "'");
        }
        Fact f = fact_token(line, i);
        if (mode == Guards) {
          check_fact(f, tok, line.number, ArgMode::Template, &st.vars);
          a.guards.push_back(std::move(f));
        } else {
          check_call(f, tok, line.number, st.vars);
          a.actions.push_back(std::move(f));
        }
      }
      t.arcs.push_back(std::move(a));
      return;
    }
    fail(ErrorCode::ParseError, line.number, head.col, {"node", "arc"}, "unexpected token '" + head.text + "'");
  }

  void check_call(const Fact& call, const Token& t, int line, const std::map<std::string, Param>& vars) const {
    const ActionTemplate* tmpl = nullptr;
    for (const auto& a : s_.actions) {
      if (a.name == call.predicate) tmpl = &a;
    }
    if (tmpl == nullptr) {
      fail(ErrorCode::ResolveError, line, t.col, {"declared action"}, "undeclared action " + call.predicate);
    }
    if (tmpl->params.size() != call.args.size()) {
      fail(ErrorCode::ResolveError, line, t.col, {std::to_string(tmpl->params.size()) + " arguments"},
           call.predicate + " takes " + std::to_string(tmpl->params.size()) + " arguments");
    }
    for (const auto& arg : call.args) check_arg(arg, t, line, ArgMode::Template, &vars);
  }

  void finish_template(TemplateState& st) {
    if (st.tmpl == nullptr) return;
    for (const auto& [loc, id] : st.node_refs) {
      if (!st.node_locs.contains(id)) {
        fail(ErrorCode::ResolveError, loc.line, loc.col, {"declared node id"},
             "arc references undeclared node " + std::to_string(id));
      }
    }
    try {
      (void)build_graph(*st.tmpl);
    } catch (const DslError&) {
      throw;
    } catch (const Error& e) {
      Loc loc = st.header;
      const std::string& el = e.element();
      if (el.rfind("node ", 0) == 0) {
        auto it = st.node_locs.find(static_cast<std::uint32_t>(std::stoul(el.substr(5))));
        if (it != st.node_locs.end()) loc = it->second;
      } else if (el.rfind("arc ", 0) == 0) {
        auto it = st.arc_locs.find(std::stoi(el.substr(4)));
        if (it != st.arc_locs.end()) loc = it->second;
      }
      fail(ErrorCode::ResolveError, loc.line, loc.col, {"well-formed graph"}, e.what());
    }
    st.tmpl = nullptr;
  }

  // stage <name> ?p:type ...   followed by node/arc lines
  void stage_line(const Line& line) {
    const Token& head = line.tokens[0];
    if (!head.quoted && head.text == "stage") {
      finish_stage();
      GraphTemplate t;
      t.name = ident(line, 1, "stage name");
      for (const auto& existing : s_.stages) {
        if (existing.name == t.name) {
          fail(ErrorCode::ResolveError, line.number, line.tokens[1].col, {"unique stage"},
               "duplicate stage " + t.name);
        }
      }
      s_.stages.push_back(std::move(t));
      stage_state_ = TemplateState{};
      stage_state_.tmpl = &s_.stages.back();
      stage_state_.header = {line.number, head.col};
      stage_state_.vars = parse_params(line, 2, s_.stages.back().params);
      return;
    }
    if (stage_state_.tmpl == nullptr) {
      fail(ErrorCode::ParseError, line.number, head.col, {"stage"}, "expected a stage declaration");
    }
    template_line(line, stage_state_);
  }

  void finish_stage() { finish_template(stage_state_); }

  std::vector<Line> lines_;
  Scenario s_;
  std::set<std::string> entities_;
  std::set<std::string> objects_;
  std::set<std::string> kinds_;
  std::map<std::string, int> predicates_;
  std::map<std::string, std::pair<Loc, std::string>> supports_;
  std::map<std::string, std::pair<Loc, std::string>> mounts_;
  std::map<std::string, Param> action_vars_;
  bool action_open_ = false;
  bool saw_class_ = false;
  bool saw_graph_ = false;
  Loc goal_loc_;
  TemplateState graph_state_;
  TemplateState stage_state_;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void write_facts(std::ostringstream& os, const std::vector<Fact>& facts) {
  for (const auto& f : facts) os << ' ' << f.str();
}

void write_params(std::ostringstream& os, const std::vector<Param>& params) {
  for (const auto& p : params) os << ' ' << p.name << ':' << p.type;
}

void write_template_body(std::ostringstream& os, const GraphTemplate& t, const char* indent) {
  std::vector<const NodeDecl*> nodes;
  for (const auto& n : t.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* n : nodes) {
    os << indent << "node " << n->id << ' ' << to_string(n->kind) << ' ' << quote(n->label);
    write_facts(os, n->facts);
    os << '\n';
  }
  std::vector<const ArcDecl*> arcs;
  for (const auto& a : t.arcs) arcs.push_back(&a);
  std::sort(arcs.begin(), arcs.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* a : arcs) {
    os << indent << "arc " << a->id << ' ' << a->parent << " <-";
    for (auto c : a->children) os << ' ' << c;
    os << " weight " << format_number(a->weight);
    if (!a->guards.empty()) {
      os << " if";
      write_facts(os, a->guards);
    }
    if (!a->actions.empty()) {
      os << " do";
      write_facts(os, a->actions);
    }
    os << '\n';
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser(lex(text)).run(); }

std::string serialize(const GraphTemplate& tmpl) {
  std::ostringstream os;
  write_template_body(os, tmpl, "");
  return os.str();
}

std::string serialize(const Scenario& input) {
  Scenario s = input;
  canonicalize(s);
  std::ostringstream os;
  os << "SCENARIO " << s.name << "\n\nOBJECTS\n";
  for (const auto& o : s.objects) {
    os << "  " << o.id << ' ' << o.kind << ' ' << format_number(o.position.x) << ' '
       << format_number(o.position.y) << ' ' << format_number(o.yaw) << ' ';
    if (o.footprint.shape == Footprint::Shape::Circle) {
      os << "circle " << format_number(o.footprint.radius);
    } else {
      os << "box " << format_number(o.footprint.hx) << ' ' << format_number(o.footprint.hy);
    }
    os << ' ' << format_number(o.height) << ' ' << (o.movable ? "movable" : "fixed");
    if (!o.support.empty()) os << " on " << o.support;
    os << '\n';
  }
  os << "\nAGENTS\n";
  for (const auto& a : s.agents) {
    os << "  " << a.id << ' ' << (a.kind == AgentKind::Arm ? "arm" : "base") << ' '
       << format_number(a.position.x) << ' ' << format_number(a.position.y) << ' ' << format_number(a.yaw);
    if (a.kind == AgentKind::Arm) {
      os << " reach " << format_number(a.reach) << " clearance " << format_number(a.clearance);
      if (!a.mount.empty()) os << " mount " << a.mount;
    } else {
      os << " radius " << format_number(a.radius);
    }
    os << '\n';
  }
  os << "\nPREDICATES\n";
  for (const auto& p : s.predicates) os << "  " << p.name << ' ' << p.arity << '\n';
  os << "\nACTIONS\n";
  for (const auto& a : s.actions) {
    os << "  action " << a.name;
    write_params(os, a.params);
    os << "\n    class " << to_string(a.motion_class);
    switch (a.motion_class) {
      case MotionClass::Transfer:
      case MotionClass::Handover: os << ' ' << a.object_slot << ' ' << a.goal_slot; break;
      case MotionClass::Transit: os << ' ' << a.goal_slot; break;
      case MotionClass::Wait: os << ' ' << format_number(a.duration); break;
      case MotionClass::Symbolic: break;
    }
    os << '\n';
    if (!a.preconditions.empty()) {
      os << "    pre";
      write_facts(os, a.preconditions);
      os << '\n';
    }
    if (!a.effects_add.empty()) {
      os << "    add";
      write_facts(os, a.effects_add);
      os << '\n';
    }
    if (!a.effects_del.empty()) {
      os << "    del";
      write_facts(os, a.effects_del);
      os << '\n';
    }
  }
  os << "\nINIT\n";
  for (const auto& f : s.init) os << "  " << f.str() << '\n';
  os << "\nGOAL\n";
  for (const auto& f : s.goal.required_facts) os << "  " << f.str() << '\n';
  os << "\nGRAPH " << s.graph.name << '\n';
  write_template_body(os, s.graph, "  ");
  os << "\nSTAGES\n";
  for (const auto& st : s.stages) {
    os << "  stage " << st.name;
    write_params(os, st.params);
    os << '\n';
    write_template_body(os, st, "    ");
  }
  return os.str();
}

}  // namespace eaog
