#include "qna/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "qna/error.hpp"

namespace qna {

namespace {

constexpr const char* kRoleNames[3] = {"subject", "verb", "object"};
const std::string kPass = "*";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_trim(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

}  // namespace

bool TripletRule::matches(const Triplet& t) const {
  const std::string* slots[3] = {&t.subject, &t.verb, &t.object};
  for (int i = 0; i < 3; ++i)
    if (pattern[i] != kPass && pattern[i] != *slots[i]) return false;
  return true;
}

bool SynonymLexicon::empty() const {
  return triplet_rules.empty() && role_maps[0].empty() && role_maps[1].empty() &&
         role_maps[2].empty();
}

const std::string& SynonymLexicon::map_role(Role role, const std::string& s) const {
  const auto& m = role_maps[static_cast<int>(role)];
  const auto it = m.find(s);
  return it == m.end() ? s : it->second;
}

namespace {

// A rule output slot is either a literal or "unknown" (pass-through).
struct SlotValue {
  bool known = false;
  std::string value;
};

std::array<SlotValue, 3> rule_output(const TripletRule& r) {
  std::array<SlotValue, 3> out;
  for (int i = 0; i < 3; ++i) {
    if (r.replacement[i] == kPass) continue;
    out[i] = {true, r.replacement[i]};
  }
  return out;
}

void validate(const SynonymLexicon& lex, const std::string& src) {
  // canonical/variant chains within each role
  for (int role = 0; role < 3; ++role) {
    std::set<std::string> canonicals;
    for (const auto& [variant, canonical] : lex.role_maps[role]) canonicals.insert(canonical);
    for (const auto& [variant, canonical] : lex.role_maps[role]) {
      if (variant != canonical && canonicals.count(variant))
        throw Error(src + ": [" + kRoleNames[role] + "] \"" + variant +
                    "\" is a variant of \"" + canonical +
                    "\" but also a canonical of another entry (chain)");
    }
  }

  // duplicate patterns
  for (std::size_t a = 0; a < lex.triplet_rules.size(); ++a)
    for (std::size_t b = a + 1; b < lex.triplet_rules.size(); ++b)
      if (lex.triplet_rules[a].pattern == lex.triplet_rules[b].pattern)
        throw Error(src + ": duplicate triplet rule pattern \"" +
                    lex.triplet_rules[a].pattern[0] + "," + lex.triplet_rules[a].pattern[1] +
                    "," + lex.triplet_rules[a].pattern[2] + "\"");

  // replacement literals must be role-map fixpoints
  for (const auto& r : lex.triplet_rules) {
    for (int i = 0; i < 3; ++i) {
      if (r.replacement[i] == kPass) continue;
      const std::string& mapped = lex.map_role(static_cast<Role>(i), r.replacement[i]);
      if (mapped != r.replacement[i])
        throw Error(src + ": triplet rule output \"" + r.replacement[i] +
                    "\" is a [" + kRoleNames[i] + "] variant of \"" + mapped +
                    "\"; rule outputs must be canonical");
    }
  }

  // no rule may rewrite another rule's output (pass slots treated as unknown)
  for (const auto& r : lex.triplet_rules) {
    const auto out = rule_output(r);
    for (const auto& q : lex.triplet_rules) {
      bool compatible = true;
      for (int i = 0; i < 3 && compatible; ++i) {
        if (q.pattern[i] == kPass) continue;
        if (out[i].known && out[i].value != q.pattern[i]) compatible = false;
      }
      if (!compatible) continue;
      // q could fire on r's output; it must leave it unchanged
      for (int i = 0; i < 3; ++i) {
        if (q.replacement[i] == kPass) continue;
        const bool fixes = out[i].known ? q.replacement[i] == out[i].value : false;
        if (!fixes)
          throw Error(src + ": triplet rule producing \"" + r.replacement[0] + "," +
                      r.replacement[1] + "," + r.replacement[2] +
                      "\" would be rewritten again by the rule matching \"" + q.pattern[0] +
                      "," + q.pattern[1] + "," + q.pattern[2] + "\" (chain)");
      }
    }
  }

  // Patterns written against a role canonical must also cover every variant
  // combination with an identical replacement; otherwise a triplet can slip
  // past the rules, get role-mapped into the pattern, and be rewritten on a
  // second pass.
  const auto variants_of = [&](int role, const std::string& canonical) {
    std::vector<std::string> vs;
    for (const auto& [variant, canon] : lex.role_maps[role])
      if (canon == canonical && variant != canonical) vs.push_back(variant);
    return vs;
  };
  for (const auto& r : lex.triplet_rules) {
    std::array<std::vector<std::string>, 3> options;
    bool has_combo = false;
    for (int i = 0; i < 3; ++i) {
      options[i] = {r.pattern[i]};
      if (r.pattern[i] == kPass) continue;
      for (auto& v : variants_of(i, r.pattern[i])) {
        options[i].push_back(v);
        has_combo = true;
      }
    }
    if (!has_combo) continue;
    for (const auto& s : options[0]) {
      for (const auto& v : options[1]) {
        for (const auto& o : options[2]) {
          const std::array<std::string, 3> combo{s, v, o};
          if (combo == r.pattern) continue;
          const bool covered = std::any_of(
              lex.triplet_rules.begin(), lex.triplet_rules.end(), [&](const TripletRule& q) {
                return q.pattern == combo && q.replacement == r.replacement;
              });
          if (!covered)
            throw Error(src + ": triplet rule pattern \"" + r.pattern[0] + "," + r.pattern[1] +
                        "," + r.pattern[2] + "\" targets canonical forms; add the same rule for \"" +
                        combo[0] + "," + combo[1] + "," + combo[2] +
                        "\" or write the rule against raw variants");
        }
      }
    }
  }
}

}  // namespace

SynonymLexicon parse_lexicon(const std::string& bytes, const std::string& src) {
  SynonymLexicon lex;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  int section = -1;  // 0..2 role, 3 triplet
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto at = [&] { return src + ":" + std::to_string(line_no) + ": "; };
    if (t.front() == '[' && t.back() == ']') {
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name == "subject") section = 0;
      else if (name == "verb") section = 1;
      else if (name == "object") section = 2;
      else if (name == "triplet") section = 3;
      else throw Error(at() + "unknown section [" + name + "]");
      continue;
    }
    const auto arrow = t.find("<=");
    if (arrow == std::string::npos) throw Error(at() + "expected \"canonical <= variants\"");
    if (section < 0) throw Error(at() + "entry before any section header");
    const std::string lhs = trim(t.substr(0, arrow));
    const std::string rhs = trim(t.substr(arrow + 2));
    if (lhs.empty() || rhs.empty()) throw Error(at() + "empty side of \"<=\"");

    if (section < 3) {
      if (lhs == kPass) throw Error(at() + "\"*\" is reserved and cannot be a canonical");
      auto& role_map = lex.role_maps[section];
      for (const auto& variant : split_trim(rhs, '|')) {
        if (variant.empty()) throw Error(at() + "empty variant");
        if (variant == kPass) throw Error(at() + "\"*\" is reserved and cannot be a variant");
        const auto it = role_map.find(variant);
        if (it != role_map.end() && it->second != lhs)
          throw Error(at() + "[" + kRoleNames[section] + "] variant \"" + variant +
                      "\" maps to both \"" + it->second + "\" and \"" + lhs + "\"");
        role_map.emplace(variant, lhs);
      }
    } else {
      TripletRule rule;
      const auto repl = split_trim(lhs, ',');
      const auto pat = split_trim(rhs, ',');
      if (repl.size() != 3 || pat.size() != 3)
        throw Error(at() + "triplet rule sides must have exactly 3 comma-separated slots");
      for (int i = 0; i < 3; ++i) {
        if (pat[i].empty() || repl[i].empty()) throw Error(at() + "empty slot in triplet rule");
        rule.pattern[i] = pat[i];
        rule.replacement[i] = repl[i];
        if (pat[i] != kPass) ++rule.specificity;
      }
      rule.order = lex.triplet_rules.size();
      lex.triplet_rules.push_back(std::move(rule));
    }
  }
  validate(lex, src);
  return lex;
}

SynonymLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str(), path);
}

Triplet canonicalize(const Triplet& triplet, const SynonymLexicon& lexicon) {
  Triplet out = triplet;
  const TripletRule* best = nullptr;
  for (const auto& r : lexicon.triplet_rules) {
    if (!r.matches(out)) continue;
    if (!best || r.specificity > best->specificity) best = &r;
  }
  if (best) {
    std::string* slots[3] = {&out.subject, &out.verb, &out.object};
    for (int i = 0; i < 3; ++i)
      if (best->replacement[i] != kPass) *slots[i] = best->replacement[i];
  }
  out.subject = lexicon.map_role(Role::subject, out.subject);
  out.verb = lexicon.map_role(Role::verb, out.verb);
  out.object = lexicon.map_role(Role::object, out.object);
  return out;
}

}  // namespace qna
