#include "xomine/obo.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "xomine/errors.hpp"

namespace xomine {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Strips a trailing " ! comment" from a tag value.
std::string_view strip_inline_comment(std::string_view v) {
  auto pos = v.find(" !");
  if (pos != std::string_view::npos) v = v.substr(0, pos);
  return trim(v);
}

std::string_view first_token(std::string_view v) {
  auto pos = v.find_first_of(" \t");
  return pos == std::string_view::npos ? v : v.substr(0, pos);
}

struct Stanza {
  std::size_t line = 0;  // line number of the [Term] header
  std::string id;
  std::string name;
  bool obsolete = false;
  std::vector<std::pair<std::string, std::string>> parents;  // (kind, target id)
};

}  // namespace

ParsedOntology parse_obo(std::istream& in, std::string category, const ParseOptions& options) {
  std::vector<Stanza> stanzas;
  std::map<std::string, std::size_t> tag_warnings;

  bool in_term = false;
  Stanza cur;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (!in_term) return;
    if (cur.id.empty())
      throw DataError("OBO stanza at line " + std::to_string(cur.line) + " has no id");
    stanzas.push_back(std::move(cur));
    cur = Stanza{};
    in_term = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '!') continue;
    if (v.front() == '[') {
      flush();
      if (v == "[Term]") {
        in_term = true;
        cur.line = line_no;
      }
      continue;
    }
    if (!in_term) continue;  // header or non-term stanza content

    auto colon = v.find(": ");
    std::string_view tag = colon == std::string_view::npos ? v : v.substr(0, colon);
    std::string_view value = colon == std::string_view::npos ? std::string_view{} : trim(v.substr(colon + 2));

    if (tag == "id") {
      cur.id = std::string(first_token(strip_inline_comment(value)));
    } else if (tag == "name") {
      cur.name = std::string(strip_inline_comment(value));
    } else if (tag == "namespace") {
      // recognized; the graph category comes from the caller
    } else if (tag == "is_a") {
      cur.parents.emplace_back("is_a", std::string(first_token(value)));
    } else if (tag == "relationship") {
      std::string_view kind = first_token(value);
      std::string_view rest = trim(value.substr(kind.size()));
      std::string_view target = first_token(rest);
      if (kind.empty() || target.empty())
        throw DataError("malformed relationship at line " + std::to_string(line_no));
      cur.parents.emplace_back(std::string(kind), std::string(target));
    } else if (tag == "is_obsolete") {
      cur.obsolete = first_token(value) == "true";
    } else {
      ++tag_warnings[std::string(tag)];
    }
  }
  flush();

  ParsedOntology result;
  OntologyGraphBuilder builder(std::move(category));
  auto transitive = [&](std::string_view kind) {
    return std::find(options.transitive_kinds.begin(), options.transitive_kinds.end(), kind) !=
           options.transitive_kinds.end();
  };

  std::set<std::string> kept;
  for (const auto& s : stanzas) {
    if (s.obsolete) {
      ++result.obsolete_skipped;
      continue;
    }
    if (kept.count(s.id))
      throw DataError("duplicate term id '" + s.id + "' at line " + std::to_string(s.line));
    kept.insert(s.id);
    builder.term(s.id, s.name);
  }
  for (const auto& s : stanzas) {
    if (s.obsolete) continue;
    for (const auto& [kind, target] : s.parents) {
      if (!kept.count(target)) {
        ++result.dropped_edge_count;
        continue;
      }
      builder.relation(kind, transitive(kind));
      builder.edge(s.id, kind, target);
    }
  }

  for (const auto& [tag, n] : tag_warnings) {
    result.unknown_tag_count += n;
    result.warnings.push_back("unrecognized tag '" + tag + "' (" + std::to_string(n) + "x)");
  }
  if (result.obsolete_skipped)
    result.warnings.push_back("skipped " + std::to_string(result.obsolete_skipped) + " obsolete term(s)");
  if (result.dropped_edge_count)
    result.warnings.push_back("dropped " + std::to_string(result.dropped_edge_count) +
                              " edge(s) to missing or obsolete terms");
  result.warning_count = result.unknown_tag_count + result.obsolete_skipped + result.dropped_edge_count;
  result.graph = std::make_shared<const OntologyGraph>(builder.build());
  return result;
}

}  // namespace xomine
