#pragma once

#include <istream>
#include <memory>
#include <string>
#include <vector>

#include "xomine/ontology.hpp"

namespace xomine {

// Relation kinds traversed during generalization. Anything else found in an
// OBO file is stored but never walked.
inline const std::vector<std::string> kDefaultTransitiveKinds = {"is_a", "part_of"};

struct ParseOptions {
  std::vector<std::string> transitive_kinds = kDefaultTransitiveKinds;
};

struct ParsedOntology {
  std::shared_ptr<const OntologyGraph> graph;
  std::size_t warning_count = 0;     // unrecognized tags + obsolete skips + dropped edges
  std::size_t obsolete_skipped = 0;  // [Term] stanzas excluded for is_obsolete: true
  std::size_t unknown_tag_count = 0;
  std::size_t dropped_edge_count = 0;  // edges whose target stanza is missing or obsolete
  std::vector<std::string> warnings;   // one message per distinct cause
};

// Parses the OBO 1.2/1.4 subset: [Term] stanzas with id, name, namespace,
// is_a, relationship and is_obsolete tags. Lines starting with '!' are
// comments; trailing " ! ..." annotations on values are stripped. Other
// stanza types ([Typedef], ...) and header lines are ignored silently.
// Throws DataError on a stanza without an id or on a duplicate id.
ParsedOntology parse_obo(std::istream& in, std::string category,
                         const ParseOptions& options = {});

}  // namespace xomine
