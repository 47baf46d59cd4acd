#include "zrescale/catalogue.hpp"

#include "zrescale/errors.hpp"

namespace zrescale {

// The exp families get a 0.3-radius domain so the zero-free sampling check
// min |exp(j z)| = exp(-0.3 j) clears the 1e-12 floor for the documented
// schedules (j <= 90); on a unit ball it would underflow past j ~ 28.
const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> entries = {
      {"linear", "j*z1", 1, false, Ball{origin(1), 1.0}},
      {"power", "z1^j", 1, false, Ball{origin(1), 1.0}},
      {"exp", "exp(j*z1)", 1, true, Ball{origin(1), 0.3}},
      {"affine_normal", "z1 + 1/j", 1, false, Ball{origin(1), 1.0}},
      {"planar", "j*z1 + z2^2", 2, false, Ball{origin(2), 1.0}},
      {"exp_neg_alpha", "exp(j*z1)", 1, true, Ball{origin(1), 0.3}},
  };
  return entries;
}

const CatalogueEntry& catalogue_entry(const std::string& name) {
  for (const CatalogueEntry& e : catalogue())
    if (e.name == name) return e;
  throw DomainError("unknown catalogue family '" + name + "'");
}

FamilySpec make_family(const CatalogueEntry& entry) {
  FamilySpec family;
  family.dimension = entry.dimension;
  family.tmpl = parse_expression(entry.expression, entry.dimension);
  family.domain = entry.domain;
  family.zero_free = entry.zero_free;
  return family;
}

}  // namespace zrescale
