#pragma once

#include "inqkit/relational.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace inqkit {

// Finite multi-sorted relational structure. Elements have global ids; each
// belongs to exactly one sort and also has an index local to its sort.
class Structure {
public:
  struct Element {
    std::string name;
    std::size_t sort;
    std::size_t local;
  };
  struct Relation {
    std::string name;
    std::vector<std::size_t> sorts;
    std::set<std::vector<std::size_t>> tuples;
  };

  std::size_t add_sort(const std::string& name);  // idempotent
  std::size_t add_element(std::size_t sort, const std::string& name);
  std::size_t add_relation(const std::string& name, std::vector<std::size_t> sorts);  // idempotent
  void add_tuple(std::size_t rel, std::vector<std::size_t> tuple);
  void add_tuple(const std::string& rel, std::vector<std::size_t> tuple);
  void set_point(const std::string& name, std::size_t element) { points_[name] = element; }

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& sort_names() const { return sort_names_; }
  std::size_t sort_index(const std::string& name) const;  // SIZE_MAX when absent
  const std::vector<std::size_t>& sort_elements(std::size_t sort) const { return by_sort_.at(sort); }
  const Element& element(std::size_t id) const { return elements_.at(id); }
  std::size_t element_index(const std::string& name) const;  // throws UnknownIdentifier
  bool has_element(const std::string& name) const { return by_name_.count(name) > 0; }
  const std::vector<Relation>& relations() const { return relations_; }
  std::size_t relation_index(const std::string& name) const;  // SIZE_MAX when absent
  const std::map<std::string, std::size_t>& points() const { return points_; }

  bool holds(std::size_t rel, const std::vector<std::size_t>& tuple) const;
  // Fast path for binary relations.
  bool holds2(std::size_t rel, std::size_t x, std::size_t y) const {
    return pairs_[rel].count((std::uint64_t{x} << 32) | y) > 0;
  }
  bool holds1(std::size_t rel, std::size_t x) const { return pairs_[rel].count(x) > 0; }

  // Substructure induced by the given element ids (sorted), with the same
  // sorts and relations; points inside the set are kept.
  Structure induced(const std::vector<std::size_t>& keep) const;

private:
  std::vector<std::string> sort_names_;
  std::vector<std::vector<std::size_t>> by_sort_;
  std::vector<Element> elements_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<Relation> relations_;
  std::vector<std::unordered_set<std::uint64_t>> pairs_;  // unary and binary relations only
  std::map<std::string, std::size_t> points_;
};

// Sorts "world" and "state"; relations "in" (ε), "E_<agent>", "P_<prop>".
// State elements are named by their world lists, e.g. "{u,v}".
Structure to_structure(const RelationalModel& r);

std::string state_name(const std::vector<std::string>& worlds, InfoState s);

// Isomorphism test (backtracking over sort-respecting bijections that
// preserve every relation by name and the named points).
bool isomorphic(const Structure& a, const Structure& b);

Structure disjoint_union(const Structure& a, const Structure& b, const std::string& left_tag = "L:",
                         const std::string& right_tag = "R:");

} // namespace inqkit
