// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/spec_format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace dms {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line = 1;

  std::size_t column() const {
    std::size_t col = 1;
    for (std::size_t i = pos; i > 0; --i) {
      if (text[i - 1] == '\n') break;
      ++col;
    }
    return col;
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!accept(c)) throw ParseError(line, column(), "expected " + what);
  }

  std::optional<std::string> ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) return std::nullopt;
    return text.substr(start, pos - start);
  }

  std::string expect_ident(const std::string& what) {
    auto id = ident();
    if (!id) throw ParseError(line, column(), "expected " + what);
    return *id;
  }
};

struct GuardParser {
  Cursor& cur;
  const std::set<std::string>& constants;

  Term term() {
    std::string id = cur.expect_ident("term");
    if (constants.count(id)) return Term::constant(id);
    return Term::variable(id);
  }

  Atom atom(const std::string& pred) {
    cur.expect('(', "'('");
    std::vector<Term> terms;
    if (!cur.accept(')')) {
      terms.push_back(term());
      while (cur.accept(',')) terms.push_back(term());
      cur.expect(')', "')'");
    }
    return Atom{pred, std::move(terms)};
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> vars;
    vars.push_back(cur.expect_ident("variable"));
    while (cur.accept(',')) vars.push_back(cur.expect_ident("variable"));
    cur.expect('.', "'.' after quantifier variables");
    return vars;
  }

  // primary := '!' primary | '(' guard ')' | 'true' | 'exists' vars '.' conj
  //          | 'forall' vars '.' conj | atom | term '=' term
  Guard primary() {
    if (cur.accept('!')) return g_not(primary());
    if (cur.accept('(')) {
      Guard g = conj();
      cur.expect(')', "')'");
      return g;
    }
    std::size_t save = cur.pos;
    std::string id = cur.expect_ident("guard");
    if (id == "true") return g_true();
    if (id == "exists") {
      auto vars = var_list();
      return g_exists(vars, conj());
    }
    if (id == "forall") {
      auto vars = var_list();
      Guard body = conj();
      // The grammar has no universal quantifier; accept only the CNA shape
      // and emit its De Morgan encoding.
      auto ng = try_normalize(body);
      if (!ng || !ng->positive.empty() || !ng->quantified.empty() || !ng->identified.empty()) {
        throw ParseError(cur.line, cur.column(),
                         "forall body must be a conjunction of negated atoms");
      }
      return g_forall_not(vars, {ng->negative.begin(), ng->negative.end()});
    }
    if (cur.peek() == '(') return g_atom(atom(id));
    // Equality: term '=' term.
    cur.pos = save;
    Term lhs = term();
    cur.expect('=', "'=' in equality");
    Term rhs = term();
    return g_eq(lhs, rhs);
  }

  Guard conj() {
    Guard g = primary();
    while (cur.accept('&')) g = g_and(g, primary());
    return g;
  }
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Guard parse_guard_text(const std::string& text, const std::set<std::string>& constants) {
  Cursor cur{text};
  GuardParser gp{cur, constants};
  Guard g = gp.conj();
  if (!cur.eof()) throw ParseError(cur.line, cur.column(), "trailing input after guard");
  return g;
}

SpecFile parse_spec(const std::string& text) {
  SpecFile spec;
  std::set<std::string> const_names;
  std::map<std::string, Guard> guards_by_name;
  std::map<std::string, PredicateSymbol> preds;
  bool anything = false;

  auto parse_atom_list = [&](Cursor& cur) {
    GuardParser gp{cur, const_names};
    std::set<Atom> atoms;
    atoms.insert(gp.atom(cur.expect_ident("predicate")));
    while (cur.accept(',')) atoms.insert(gp.atom(cur.expect_ident("predicate")));
    return atoms;
  };

  std::vector<std::string> lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string raw = strip_comment(lines[ln]);
    if (blank(raw)) continue;
    anything = true;
    Cursor cur{raw};
    cur.line = ln + 1;
    std::string kw = cur.expect_ident("declaration keyword");

    if (kw == "pred") {
      std::string name = cur.expect_ident("predicate name");
      cur.expect('/', "'/' and an arity");
      std::string arity = cur.expect_ident("arity");
      PredicateSymbol p{name, static_cast<std::size_t>(std::stoul(arity))};
      if (preds.count(name) && preds[name].arity != p.arity) {
        throw ParseError(cur.line, cur.column(), "predicate " + name + " redeclared with a different arity");
      }
      preds[name] = p;
      spec.system.vocabulary.insert(p);
    } else if (kw == "const") {
      while (auto id = cur.ident()) {
        const_names.insert(*id);
        spec.pool_constants.push_back(*id);
      }
    } else if (kw == "init") {
      for (const Atom& a : parse_atom_list(cur)) {
        if (!a.constant_only()) {
          throw ParseError(cur.line, cur.column(), "init atoms must be ground over constants");
        }
        spec.system.initial.insert(a);
      }
    } else if (kw == "guard") {
      std::string name = cur.expect_ident("guard name");
      cur.expect(':', "':='");
      cur.expect('=', "':='");
      GuardParser gp{cur, const_names};
      Guard g = gp.conj();
      if (!cur.eof()) throw ParseError(cur.line, cur.column(), "trailing input after guard");
      guards_by_name[name] = g;
      spec.guards.emplace_back(name, g);
    } else if (kw == "action") {
      Action act;
      act.name = cur.expect_ident("action name");
      cur.expect(':', "':='");
      cur.expect('=', "':='");
      std::string section = cur.expect_ident("'guard'");
      if (section != "guard") throw ParseError(cur.line, cur.column(), "expected 'guard'");
      std::string gname = cur.expect_ident("guard name");
      auto it = guards_by_name.find(gname);
      if (it == guards_by_name.end() && gname == "true") {
        act.guard = g_true();
      } else if (it == guards_by_name.end()) {
        throw ParseError(cur.line, cur.column(), "unknown guard " + gname);
      } else {
        act.guard = it->second;
      }
      while (!cur.eof()) {
        std::string part = cur.expect_ident("'del' or 'add'");
        if (part == "del") {
          auto atoms = parse_atom_list(cur);
          act.del.insert(atoms.begin(), atoms.end());
        } else if (part == "add") {
          auto atoms = parse_atom_list(cur);
          act.add.insert(atoms.begin(), atoms.end());
        } else {
          throw ParseError(cur.line, cur.column(), "expected 'del' or 'add'");
        }
      }
      spec.system.actions.push_back(std::move(act));
    } else if (kw == "target") {
      spec.target = cur.expect_ident("action name");
    } else {
      throw ParseError(cur.line, 1, "unknown declaration '" + kw + "'");
    }
  }
  if (!anything) throw ParseError(1, 1, "empty specification");

  // Arity checking against declared predicates.
  auto check_atom = [&](const Atom& a, std::size_t line) {
    auto it = preds.find(a.pred);
    if (it == preds.end()) return;  // validate() reports vocabulary issues
    if (it->second.arity != a.terms.size()) {
      throw ParseError(line, 1,
                       "arity mismatch for " + a.pred + ": declared " +
                           std::to_string(it->second.arity) + ", used with " +
                           std::to_string(a.terms.size()));
    }
  };
  for (const Atom& a : spec.system.initial) check_atom(a, 1);
  for (const Action& act : spec.system.actions) {
    for (const Atom& a : act.del) check_atom(a, 1);
    for (const Atom& a : act.add) check_atom(a, 1);
  }
  return spec;
}

std::string render_spec(const SpecFile& spec) {
  std::ostringstream out;
  for (const PredicateSymbol& p : spec.system.vocabulary) {
    out << "pred " << p.name << "/" << p.arity << "\n";
  }
  if (!spec.pool_constants.empty()) {
    out << "const";
    for (const std::string& c : spec.pool_constants) out << " " << c;
    out << "\n";
  }
  if (!spec.system.initial.empty()) {
    out << "init ";
    bool first = true;
    for (const Atom& a : spec.system.initial) {
      if (!first) out << ", ";
      first = false;
      out << to_string(a);
    }
    out << "\n";
  }
  std::map<std::string, std::string> guard_names;
  for (const auto& [name, g] : spec.guards) {
    out << "guard " << name << " := " << to_string(g) << "\n";
    guard_names.emplace(to_string(g), name);
  }
  for (const Action& act : spec.system.actions) {
    out << "action " << act.name << " := guard ";
    auto it = guard_names.find(to_string(act.guard));
    out << (it != guard_names.end() ? it->second : "true");
    if (!act.del.empty()) {
      out << " del ";
      bool first = true;
      for (const Atom& a : act.del) {
        if (!first) out << ", ";
        first = false;
        out << to_string(a);
      }
    }
    if (!act.add.empty()) {
      out << " add ";
      bool first = true;
      for (const Atom& a : act.add) {
        if (!first) out << ", ";
        first = false;
        out << to_string(a);
      }
    }
    out << "\n";
  }
  if (spec.target) out << "target " << *spec.target << "\n";
  return out.str();
}

std::vector<Database> parse_database_set(const std::string& text,
                                         const std::set<std::string>& constants) {
  std::vector<Database> out;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string raw = strip_comment(lines[ln]);
    if (blank(raw)) continue;
    Cursor cur{raw};
    cur.line = ln + 1;
    GuardParser gp{cur, constants};
    Instance inst;
    if (cur.peek() != '\0') {
      std::string id = cur.expect_ident("predicate or 'empty'");
      if (id != "empty") {
        inst.insert(gp.atom(id));
        while (cur.accept(',')) inst.insert(gp.atom(cur.expect_ident("predicate")));
      }
    }
    if (!is_database(inst)) {
      throw ParseError(ln + 1, 1, "database lines must be ground over constants");
    }
    out.emplace_back(inst);
  }
  if (out.empty()) throw ParseError(1, 1, "no databases in set file");
  return out;
}

}  // namespace dms
