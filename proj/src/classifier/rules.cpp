#include "inspectkit/classifier/rules.hpp"

#include <fstream>
#include <sstream>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace {

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool matches(std::string_view lowered, std::string_view keyword) {
  if (keyword.empty()) return false;
  if (!is_ascii(keyword)) return lowered.find(keyword) != std::string_view::npos;
  bool prefix = keyword.back() == '*';
  if (prefix) keyword.remove_suffix(1);
  if (keyword.empty()) return false;
  std::size_t pos = 0;
  while ((pos = lowered.find(keyword, pos)) != std::string_view::npos) {
    bool left = pos == 0 || !is_word_byte(static_cast<unsigned char>(lowered[pos - 1]));
    std::size_t end = pos + keyword.size();
    bool right = prefix || end == lowered.size() ||
                 !is_word_byte(static_cast<unsigned char>(lowered[end]));
    if (left && right) return true;
    ++pos;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

KeywordRules build_defaults() {
  KeywordRules r;
  auto set = [&](Category c, std::vector<std::string> kws) { r.keywords[index_of(c)] = std::move(kws); };
  set(Category::kShortDescription,
      {"lack of description", "not enough detail", "more detail*", "insufficient", "elaborate",
       "説明不足", "記述不足"});
  set(Category::kExcess, {"unnecessary", "redundant", "excessive", "too much", "不要", "冗長"});
  set(Category::kAbstract, {"vague", "abstract", "ambiguous", "more specific*", "concrete", "曖昧", "抽象"});
  set(Category::kUnderstandability,
      {"hard to understand", "difficult to understand", "unclear", "confusing", "わかりにく", "分かりにく"});
  set(Category::kUndefined, {"undefined", "not defined", "define", "definition", "未定義"});
  set(Category::kInconsistent,
      {"inconsisten*", "mismatch*", "does not match", "contradict*", "矛盾", "不一致"});
  set(Category::kMistake, {"wrong", "incorrect", "error", "mistake*", "誤り", "間違"});
  set(Category::kRationale, {"rationale", "why", "reason*", "justif*", "根拠", "理由"});
  set(Category::kShortItems, {"missing", "omitted", "lacks", "item*", "項目不足", "抜け"});
  set(Category::kMissedInspection,
      {"not fixed", "still not", "previous comment*", "not reflected", "未修正", "反映されていない"});
  set(Category::kPresentation, {"typo*", "spelling", "misspel*", "wording", "grammar", "誤字", "表記"});
  set(Category::kEnhancementRequest,
      {"would be better", "consider", "suggest*", "could add", "improve*", "したほうが", "改善"});
  set(Category::kFormat, {"format*", "layout", "indent*", "font", "heading*", "書式", "体裁"});
  return r;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const KeywordRules& KeywordRules::defaults() {
  static const KeywordRules kDefaults = build_defaults();
  return kDefaults;
}

KeywordRules KeywordRules::parse(std::string_view text) {
  KeywordRules r;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    auto fail = [&](const std::string& what) {
      return ParseError("line " + std::to_string(line_no) + ": " + what);
    };

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected 'slug = [...]'");
    std::string_view key = trim(line.substr(0, eq));
    auto cat = parse_category(key);
    if (!cat) throw fail("unknown category '" + std::string(key) + "'");

    std::string_view rest = trim(line.substr(eq + 1));
    if (rest.empty() || rest.front() != '[') throw fail("expected '['");
    rest.remove_prefix(1);
    std::vector<std::string> words;
    bool closed = false;
    while (!closed) {
      rest = trim(rest);
      if (rest.empty()) throw fail("unterminated list");
      if (rest.front() == ']') {
        closed = true;
        rest.remove_prefix(1);
        break;
      }
      if (rest.front() != '"') throw fail("expected a quoted keyword");
      std::string word;
      std::size_t i = 1;
      for (;; ++i) {
        if (i >= rest.size()) throw fail("unterminated string");
        char c = rest[i];
        if (c == '"') break;
        if (c == '\\') {
          if (++i >= rest.size()) throw fail("unterminated string");
          c = rest[i];
        }
        word += c;
      }
      rest.remove_prefix(i + 1);
      if (trim(word).empty()) throw fail("empty keyword");
      words.push_back(ascii_lower(word));
      rest = trim(rest);
      if (!rest.empty() && rest.front() == ',') rest.remove_prefix(1);
    }
    rest = trim(rest);
    if (!rest.empty() && rest.front() != '#') throw fail("unexpected text after list");
    auto& slot = r.keywords[index_of(*cat)];
    slot.insert(slot.end(), words.begin(), words.end());
  }
  return r;
}

KeywordRules KeywordRules::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("rules file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string KeywordRules::to_text() const {
  std::string out = "[keywords]\n";
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    out += slug(category_at(c));
    out += " = [";
    for (std::size_t i = 0; i < keywords[c].size(); ++i) {
      if (i) out += ", ";
      out += quote(keywords[c][i]);
    }
    out += "]\n";
  }
  return out;
}

LabelSet KeywordRules::match(std::string_view body) const {
  std::string lowered = ascii_lower(body);
  LabelSet labels;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    for (const auto& kw : keywords[c]) {
      if (matches(lowered, kw)) {
        labels.insert(category_at(c));
        break;
      }
    }
  }
  return labels;
}

LabelAssignment rule_baseline(const InspectionComment& comment, const KeywordRules& rules,
                              Timestamp at) {
  LabelSet labels = rules.match(comment.body);
  if (labels.empty()) labels.insert(Category::kEnhancementRequest);
  return {comment.id, labels, Labeler::rule_baseline(), std::nullopt, at};
}

}  // namespace inspectkit
