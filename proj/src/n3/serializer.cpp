#include "pragproof/n3/serializer.hpp"

#include <cctype>
#include <regex>
#include <sstream>

namespace pragproof::n3 {

namespace {

bool is_local_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || static_cast<unsigned char>(c) >= 0x80;
}

bool valid_local(const std::string& local) {
  if (local.empty()) return true;
  if (local.front() == '.' || local.back() == '.' || local.front() == '-') return false;
  for (char c : local)
    if (!is_local_char(c) && c != '.') return false;
  return true;
}

std::string compact_iri(const std::string& iri, const PrefixMap& prefixes) {
  const std::string* best_label = nullptr;
  std::size_t best_len = 0;
  for (const auto& [label, ns] : prefixes) {
    if (ns.empty() || ns.size() < best_len || iri.compare(0, ns.size(), ns) != 0) continue;
    if (!valid_local(iri.substr(ns.size()))) continue;
    if (!best_label || ns.size() > best_len) {
      best_label = &label;
      best_len = ns.size();
    }
  }
  if (best_label) return *best_label + ":" + iri.substr(best_len);
  std::string out = "<";
  for (char c : iri) {
    if (c == '>' || c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(static_cast<unsigned char>(c)));
      out += buf;
    } else {
      out += c;
    }
  }
  return out + ">";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

bool bare_numeric(const Term& lit) {
  static const std::regex integer(R"([+-]?[0-9]+)");
  static const std::regex decimal(R"([+-]?[0-9]*\.[0-9]+)");
  static const std::regex dbl(R"([+-]?([0-9]+\.?[0-9]*|\.[0-9]+)[eE][+-]?[0-9]+)");
  const std::string& dt = lit.datatype();
  if (dt == vocab::kXsdInteger) return std::regex_match(lit.text(), integer);
  if (dt == vocab::kXsdDecimal) return std::regex_match(lit.text(), decimal);
  if (dt == vocab::kXsdDouble) return std::regex_match(lit.text(), dbl);
  if (dt == vocab::kXsdBoolean) return lit.text() == "true";
  return false;
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

class Writer {
 public:
  Writer(const PrefixMap& prefixes, const SerializeOptions& options) : prefixes_(prefixes), options_(options) {}

  std::string term(const Term& t, int indent) const {
    switch (t.kind()) {
      case TermKind::Uri:
        return compact_iri(t.text(), prefixes_);
      case TermKind::Literal:
        if (bare_numeric(t)) return t.text();
        return t.datatype().empty() ? quote(t.text()) : quote(t.text()) + "^^" + compact_iri(t.datatype(), prefixes_);
      case TermKind::ExistentialVar:
        return "_:" + t.text();
      case TermKind::UniversalVar:
        return "?" + t.text();
      case TermKind::List: {
        std::string out = "(";
        for (const Term& item : t.items()) out += " " + term(item, indent);
        return out + " )";
      }
      case TermKind::Graph:
        return graph(t.formula(), indent);
      case TermKind::False:
        return "false";
    }
    return {};
  }

  std::string graph(const Formula& f, int indent) const {
    if (f.empty()) return "{ }";
    if (f.implications.empty() && f.atoms.size() == 1 && !has_graph(f.atoms.front())) {
      return "{ " + atom_text(f.atoms.front(), indent) + ". }";
    }
    return "{\n" + statements(f, indent + 2) + pad(indent) + "}";
  }

  std::string statements(const Formula& f, int indent) const {
    std::string out;
    const auto& atoms = f.atoms;
    for (std::size_t i = 0; i < atoms.size();) {
      out += pad(indent) + term(atoms[i].subject, indent) + " " + predicate(atoms[i].predicate, indent) + " " +
             term(atoms[i].object, indent);
      std::size_t j = i + 1;
      if (!options_.expand) {
        for (; j < atoms.size() && atoms[j].subject == atoms[i].subject; ++j) {
          out += ";\n" + pad(indent + 4) + predicate(atoms[j].predicate, indent + 4) + " " +
                 term(atoms[j].object, indent + 4);
        }
      }
      out += ".\n";
      i = j;
    }
    for (const Implication& imp : f.implications) {
      out += pad(indent) + term(imp.antecedent, indent) + "\n" + pad(indent) + "=>\n" + pad(indent) +
             term(imp.consequent, indent) + ".\n";
    }
    return out;
  }

 private:
  const PrefixMap& prefixes_;
  const SerializeOptions& options_;

  static bool has_graph(const Triple& t) {
    return t.subject.is_graph() || t.predicate.is_graph() || t.object.is_graph();
  }

  std::string predicate(const Term& p, int indent) const {
    if (!options_.expand && p.is_uri() && p.text() == vocab::kRdfType) return "a";
    return term(p, indent);
  }

  std::string atom_text(const Triple& t, int indent) const {
    return term(t.subject, indent) + " " + predicate(t.predicate, indent) + " " + term(t.object, indent);
  }
};

}  // namespace

std::string serialize_term(const Term& term, const PrefixMap& prefixes) {
  SerializeOptions options;
  return Writer(prefixes, options).term(term, 0);
}

std::string serialize_statements(const Formula& formula, const PrefixMap& prefixes, int indent,
                                 const SerializeOptions& options) {
  return Writer(prefixes, options).statements(formula, indent);
}

std::string serialize_graph(const Formula& formula, const PrefixMap& prefixes, int indent,
                            const SerializeOptions& options) {
  return Writer(prefixes, options).graph(formula, indent);
}

std::string serialize(const Document& doc, const SerializeOptions& options) {
  std::ostringstream out;
  for (const auto& [label, ns] : doc.prefixes) out << "@prefix " << label << ": <" << ns << ">.\n";
  if (!doc.prefixes.empty() && !doc.body.empty()) out << "\n";
  out << Writer(doc.prefixes, options).statements(doc.body, 0);
  return out.str();
}

}  // namespace pragproof::n3
