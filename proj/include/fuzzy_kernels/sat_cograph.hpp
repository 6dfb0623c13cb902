#pragma once

// CNF formulas compiled into oriented cographs whose kernels are the satisfying assignments.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace fuzzy_kernels {

struct Literal {
  int variable;  // 0-based
  bool positive;
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct CnfFormula {
  int variables = 0;
  std::vector<std::vector<Literal>> clauses;

  /// Throws InvalidCnf on empty clauses, out-of-range variables, repeated or complementary literals.
  void validate() const {
    if (variables < 0) throw Error(ErrorKind::InvalidCnf, "negative variable count");
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      const auto& clause = clauses[c];
      if (clause.empty()) throw Error(ErrorKind::InvalidCnf, "clause " + std::to_string(c) + " is empty");
      std::vector<int> seen(static_cast<std::size_t>(variables), 0);
      for (const auto& lit : clause) {
        if (lit.variable < 0 || lit.variable >= variables)
          throw Error(ErrorKind::InvalidCnf, "clause " + std::to_string(c) + " names variable out of range");
        int& mark = seen[static_cast<std::size_t>(lit.variable)];
        const int bit = lit.positive ? 1 : 2;
        if (mark & bit) throw Error(ErrorKind::InvalidCnf, "clause " + std::to_string(c) + " repeats a literal");
        mark |= bit;
        if (mark == 3) throw Error(ErrorKind::InvalidCnf, "clause " + std::to_string(c) + " is a tautology");
      }
    }
  }

  bool satisfied_by(const std::vector<bool>& assignment) const {
    return std::all_of(clauses.begin(), clauses.end(), [&](const auto& clause) {
      return std::any_of(clause.begin(), clause.end(), [&](const Literal& l) {
        return assignment[static_cast<std::size_t>(l.variable)] == l.positive;
      });
    });
  }
};

/// Reads DIMACS CNF (`p cnf V C`, clauses of signed integers ending in 0). Repeated literals are merged.
inline CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula phi;
  bool header = false;
  std::size_t declared = 0;
  std::vector<Literal> current;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidCnf, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c" || first[0] == 'c' || first == "%") continue;
    if (first == "p") {
      std::string fmt;
      long v = -1, c = -1;
      if (header || !(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) fail("bad problem line");
      phi.variables = static_cast<int>(v);
      declared = static_cast<std::size_t>(c);
      header = true;
      continue;
    }
    if (!header) fail("clause before problem line");
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      long value = 0;
      try {
        std::size_t used = 0;
        value = std::stol(tok, &used);
        if (used != tok.size()) fail("bad literal '" + tok + "'");
      } catch (const std::logic_error&) {
        fail("bad literal '" + tok + "'");
      }
      if (value == 0) {
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        phi.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const long var = value < 0 ? -value : value;
      if (var > phi.variables) fail("variable " + std::to_string(var) + " exceeds header");
      current.push_back({static_cast<int>(var - 1), value > 0});
    }
  }
  if (!header) throw Error(ErrorKind::InvalidCnf, "missing problem line");
  if (!current.empty()) throw Error(ErrorKind::InvalidCnf, "last clause is not terminated by 0");
  if (phi.clauses.size() != declared)
    throw Error(ErrorKind::InvalidCnf, "header declares " + std::to_string(declared) + " clauses, found " +
                                           std::to_string(phi.clauses.size()));
  phi.validate();
  return phi;
}

inline std::string to_dimacs(const CnfFormula& phi) {
  std::string out = "p cnf " + std::to_string(phi.variables) + " " + std::to_string(phi.clauses.size()) + "\n";
  for (const auto& clause : phi.clauses) {
    for (const auto& l : clause) out += (l.positive ? "" : "-") + std::to_string(l.variable + 1) + " ";
    out += "0\n";
  }
  return out;
}

enum class RoleKind { Clause, Literal, Alpha, Omega };

/// Vertex layout: clauses, then (x, not x) per variable, then alpha, omega.
struct ReductionRoles {
  int clauses = 0;
  int variables = 0;

  int vertex_count() const { return clauses + 2 * variables + 2; }
  Vertex clause_vertex(int c) const { return c; }
  Vertex literal_vertex(int variable, bool positive) const { return clauses + 2 * variable + (positive ? 0 : 1); }
  Vertex alpha() const { return clauses + 2 * variables; }
  Vertex omega() const { return clauses + 2 * variables + 1; }

  RoleKind kind(Vertex v) const {
    if (v < clauses) return RoleKind::Clause;
    if (v < alpha()) return RoleKind::Literal;
    return v == alpha() ? RoleKind::Alpha : RoleKind::Omega;
  }
  std::string describe(Vertex v) const {
    switch (kind(v)) {
      case RoleKind::Clause: return "c" + std::to_string(v + 1);
      case RoleKind::Literal: {
        const int var = (v - clauses) / 2;
        return ((v - clauses) % 2 == 0 ? "x" : "~x") + std::to_string(var + 1);
      }
      case RoleKind::Alpha: return "alpha";
      case RoleKind::Omega: return "omega";
    }
    return "?";
  }
};

struct CographReduction {
  Digraph graph;
  ReductionRoles roles;
};

inline CographReduction sat_to_cograph(const CnfFormula& phi) {
  phi.validate();
  ReductionRoles roles{static_cast<int>(phi.clauses.size()), phi.variables};
  DigraphBuilder b(roles.vertex_count());
  for (int c = 0; c < roles.clauses; ++c)
    for (int e = c + 1; e < roles.clauses; ++e) b.add_edge(c, e, Orientation::Bidirectional);
  for (int v = 0; v < roles.variables; ++v)
    b.add_edge(roles.literal_vertex(v, true), roles.literal_vertex(v, false), Orientation::Bidirectional);
  b.add_arc(roles.alpha(), roles.omega());
  for (int c = 0; c < roles.clauses; ++c) {
    const Vertex cv = roles.clause_vertex(c);
    std::vector<bool> in_clause(static_cast<std::size_t>(2 * roles.variables), false);
    for (const auto& l : phi.clauses[static_cast<std::size_t>(c)])
      in_clause[static_cast<std::size_t>(2 * l.variable + (l.positive ? 0 : 1))] = true;
    for (int i = 0; i < 2 * roles.variables; ++i) {
      const Vertex lv = roles.clauses + i;
      if (in_clause[static_cast<std::size_t>(i)]) b.add_arc(cv, lv);
      else b.add_arc(lv, cv);
    }
    b.add_arc(cv, roles.alpha());
    b.add_arc(roles.omega(), cv);
  }
  return {b.build(), roles};
}

/// Reads the assignment off a kernel of the reduction; throws NotAKernel if k has the wrong shape.
inline std::vector<bool> kernel_to_assignment(const ReductionRoles& roles, const VertexSet& k) {
  if (!k.contains(roles.omega())) throw Error(ErrorKind::NotAKernel, "kernel must contain omega");
  if (k.contains(roles.alpha())) throw Error(ErrorKind::NotAKernel, "kernel cannot contain alpha");
  for (int c = 0; c < roles.clauses; ++c)
    if (k.contains(roles.clause_vertex(c))) throw Error(ErrorKind::NotAKernel, "kernel cannot contain a clause");
  std::vector<bool> assignment(static_cast<std::size_t>(roles.variables));
  for (int v = 0; v < roles.variables; ++v) {
    const bool pos = k.contains(roles.literal_vertex(v, true));
    const bool neg = k.contains(roles.literal_vertex(v, false));
    if (pos == neg) throw Error(ErrorKind::NotAKernel, "variable " + std::to_string(v + 1) + " needs exactly one literal");
    assignment[static_cast<std::size_t>(v)] = pos;
  }
  return assignment;
}

inline VertexSet assignment_to_kernel(const ReductionRoles& roles, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != roles.variables)
    throw Error(ErrorKind::PreconditionViolation, "assignment length differs from variable count");
  VertexSet k(static_cast<std::size_t>(roles.vertex_count()));
  k.insert(roles.omega());
  for (int v = 0; v < roles.variables; ++v) k.insert(roles.literal_vertex(v, assignment[static_cast<std::size_t>(v)]));
  return k;
}

}  // namespace fuzzy_kernels
