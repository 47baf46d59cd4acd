#pragma once

#include <string>
#include <vector>

#include "zrescale/expr.hpp"

namespace zrescale {

/// A built-in family: name, template text in the expression grammar, and
/// the metadata instantiation needs.
struct CatalogueEntry {
  std::string name;
  std::string expression;
  int dimension = 1;
  bool zero_free = false;
  Ball domain;
};

/// The built-in families, in stable listing order.
const std::vector<CatalogueEntry>& catalogue();

/// Looks an entry up by name; throws DomainError for unknown names.
const CatalogueEntry& catalogue_entry(const std::string& name);

/// Parses the entry's template into a ready FamilySpec.
FamilySpec make_family(const CatalogueEntry& entry);

}  // namespace zrescale
