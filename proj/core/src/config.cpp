#include "spectra/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::map<std::string, ConfigSection> run() {
    std::map<std::string, ConfigSection> out;
    std::string section;
    out[section];
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      const char c = peek();
      if (c == '\n') {
        advance();
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '[') {
        advance();
        skip_spaces();
        section = read_key();
        skip_spaces();
        expect(']');
        end_of_line();
        if (out.count(section) && !out[section].empty())
          fail("duplicate section [" + section + "]");
        out[section];
        continue;
      }
      const std::size_t key_line = line_, key_col = col_;
      std::string key = read_key();
      skip_spaces();
      expect('=');
      skip_spaces();
      ConfigValue v = read_value();
      end_of_line();
      auto& sec = out[section];
      if (sec.count(key)) throw ConfigError(key_line, key_col, "duplicate key '" + key + "'");
      sec.emplace(std::move(key), std::move(v));
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(line_, col_, what); }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_blank() { skip_spaces(); }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  void skip_layout() {
    for (;;) {
      skip_spaces();
      if (at_end()) return;
      if (peek() == '#') {
        skip_comment();
      } else if (peek() == '\n') {
        advance();
      } else {
        return;
      }
    }
  }
  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  void end_of_line() {
    skip_spaces();
    if (at_end()) return;
    if (peek() == '#') {
      skip_comment();
      return;
    }
    if (peek() != '\n') fail("unexpected trailing text");
    advance();
  }

  std::string read_key() {
    if (!at_end() && peek() == '"') return read_string();
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-' || peek() == '.'))
      key.push_back(peek()), advance();
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::string read_string() {
    expect('"');
    std::string s;
    while (!at_end() && peek() != '"') {
      if (peek() == '\n') fail("unterminated string");
      s.push_back(peek());
      advance();
    }
    expect('"');
    return s;
  }

  ConfigValue read_value() {
    ConfigValue v;
    v.line = line_;
    v.column = col_;
    if (at_end()) fail("expected a value");
    const char c = peek();
    if (c == '"') {
      v.data = read_string();
    } else if (c == '[') {
      advance();
      ConfigValue::Array items;
      skip_layout();
      while (!at_end() && peek() != ']') {
        items.push_back(read_value());
        skip_layout();
        if (!at_end() && peek() == ',') {
          advance();
          skip_layout();
        } else if (!at_end() && peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      expect(']');
      v.data = std::move(items);
    } else {
      std::size_t start = pos_;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '-' ||
                           peek() == '+' || peek() == '.' || peek() == 'e' || peek() == 'E'))
        advance();
      const std::string_view token = text_.substr(start, pos_ - start);
      if (token.empty()) fail("expected a number, string or array");
      double x = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
      if (ec != std::errc() || ptr != token.data() + token.size())
        throw ConfigError(v.line, v.column, "malformed number '" + std::string(token) + "'");
      v.data = x;
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const ConfigValue& require(const ConfigSection& sec, const std::string& section, const std::string& key) {
  auto it = sec.find(key);
  if (it == sec.end()) throw ConfigError(0, 0, "missing key '" + key + "' in [" + section + "]");
  return it->second;
}

[[noreturn]] void bad(const ConfigValue& v, const std::string& what) {
  throw ConfigError(v.line, v.column, what);
}

int as_int(const ConfigValue& v) {
  if (!v.is_number()) bad(v, "expected an integer");
  const double x = std::get<double>(v.data);
  if (x != static_cast<double>(static_cast<long long>(x))) bad(v, "expected an integer");
  return static_cast<int>(x);
}

Word as_word(const ConfigValue& v) {
  if (!v.is_string()) bad(v, "expected a quoted word");
  try {
    return Word::parse(std::get<std::string>(v.data));
  } catch (const InvalidArgument& e) {
    bad(v, e.what());
  }
}

}  // namespace

std::map<std::string, ConfigSection> parse_config(std::string_view text) { return Parser(text).run(); }

CenterCocycle model_from_config(std::string_view text) {
  const auto doc = parse_config(text);
  auto sys_it = doc.find("system");
  if (sys_it == doc.end()) throw ConfigError(0, 0, "missing section [system]");
  auto coc_it = doc.find("cocycle");
  if (coc_it == doc.end()) throw ConfigError(0, 0, "missing section [cocycle]");
  const ConfigSection& sys = sys_it->second;
  const ConfigSection& coc = coc_it->second;

  const ConfigValue& alpha_v = require(sys, "system", "alphabet");
  const int k = as_int(alpha_v);
  if (k < 2 || k > kMaxAlphabet) bad(alpha_v, "alphabet must be in [2, 36]");

  SymbolicSystem::Matrix m(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), true));
  if (auto it = sys.find("transitions"); it != sys.end()) {
    if (sys.count("forbidden")) bad(it->second, "give either 'transitions' or 'forbidden', not both");
    if (!it->second.is_array()) bad(it->second, "transitions must be an array of 0/1 rows");
    const auto& rows = std::get<ConfigValue::Array>(it->second.data);
    if (rows.size() != static_cast<std::size_t>(k)) bad(it->second, "transitions needs one row per symbol");
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (!rows[a].is_string()) bad(rows[a], "transition rows are quoted 0/1 strings");
      const auto& row = std::get<std::string>(rows[a].data);
      if (row.size() != static_cast<std::size_t>(k)) bad(rows[a], "transition row has wrong length");
      for (std::size_t b = 0; b < row.size(); ++b) {
        if (row[b] != '0' && row[b] != '1') bad(rows[a], "transition rows may only contain 0 and 1");
        m[a][b] = row[b] == '1';
      }
    }
  } else if (auto fit = sys.find("forbidden"); fit != sys.end()) {
    if (!fit->second.is_array()) bad(fit->second, "forbidden must be an array of words");
    for (const auto& item : std::get<ConfigValue::Array>(fit->second.data)) {
      Word w = as_word(item);
      if (w.size() != 2) bad(item, "forbidden words must have length 2");
      if (w[0] >= k || w[1] >= k) bad(item, "forbidden word uses symbols outside the alphabet");
      m[w[0]][w[1]] = false;
    }
  }

  std::optional<SymbolicSystem> system;
  try {
    if (auto bit = doc.find("bridges"); bit != doc.end() && !bit->second.empty()) {
      std::vector<std::vector<Word>> table(static_cast<std::size_t>(k), std::vector<Word>(static_cast<std::size_t>(k)));
      std::vector<std::vector<bool>> seen(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), false));
      for (const auto& [key, value] : bit->second) {
        const auto comma = key.find(',');
        if (comma == std::string::npos) bad(value, "bridge keys look like \"a,b\"");
        Word a = Word::parse(key.substr(0, comma));
        Word b = Word::parse(key.substr(comma + 1));
        if (a.size() != 1 || b.size() != 1 || a[0] >= k || b[0] >= k) bad(value, "bad bridge key '" + key + "'");
        table[a[0]][b[0]] = as_word(value);
        seen[a[0]][b[0]] = true;
      }
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          if (!seen[a][b])
            throw ConfigError(0, 0, "bridge table is missing pair " + std::to_string(a) + "," + std::to_string(b));
      system.emplace(std::move(m), std::move(table));
    } else {
      system.emplace(std::move(m));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(sys.begin() == sys.end() ? 0 : alpha_v.line, 0, e.what());
  }

  const ConfigValue& depth_v = require(coc, "cocycle", "depth");
  const int depth = as_int(depth_v);
  if (depth < 1) bad(depth_v, "depth must be at least 1");
  const ConfigValue& values_v = require(coc, "cocycle", "values");
  if (!values_v.is_array()) bad(values_v, "values must be an array of numbers");
  std::vector<double> values;
  for (const auto& item : std::get<ConfigValue::Array>(values_v.data)) {
    if (!item.is_number()) bad(item, "cocycle values must be numbers");
    values.push_back(std::get<double>(item.data));
  }
  try {
    return CenterCocycle(std::move(*system), depth, std::move(values));
  } catch (const InvalidArgument& e) {
    bad(values_v, e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, 0, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace spectra
