#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nearlat/algebra.hpp"
#include "nearlat/algebra_io.hpp"
#include "nearlat/consequence.hpp"
#include "nearlat/enumerate.hpp"
#include "nearlat/gentzen.hpp"
#include "nearlat/modal.hpp"
#include "nearlat/term.hpp"

namespace {

using namespace nearlat;

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

std::string tuple_str(const FiniteAlgebra& a, const std::vector<int>& tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += a.name_of(tuple[i]);
  }
  return out + ")";
}

std::string witness_str(const IdentityWitness& w, const FiniteAlgebra& a) {
  return w.law + " at " + tuple_str(a, w.tuple) + ": lhs=" + a.name_of(w.lhs) +
         " rhs=" + a.name_of(w.rhs);
}

int cmd_check(const std::string& path) {
  FiniteAlgebra a = read_algebra_file(path);
  CheckResult nl = check_nearlattice(a);
  std::string report = "nearlattice: ";
  report += nl.ok ? "pass" : "fail [" + witness_str(*nl.witness, a) + "]";
  bool all = nl.ok;
  report += "; distributive: ";
  if (!nl.ok) {
    report += "skipped";
  } else {
    CheckResult d = check_distributive(a);
    report += d.ok ? "pass" : "fail [" + witness_str(*d.witness, a) + "]";
    all = all && d.ok;
  }
  std::cout << report << "\n";
  if (auto g = a.greatest())
    std::cout << "greatest element: " << a.name_of(*g) << "\n";
  else
    std::cout << "greatest element: none\n";
  if (a.has_box()) {
    ModalCheckResult mr = check_modal(a);
    std::cout << "modal: " << (mr.ok ? "pass" : "fail") << "\n";
    all = all && mr.ok;
  }
  return all ? kHolds : kFails;
}

std::vector<std::string> split_premises(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int cmd_consequence(const std::string& class_path, const std::string& premises,
                    const std::string& conclusion, const std::string& mode_name) {
  std::optional<Mode> mode = mode_from_string(mode_name);
  if (!mode) {
    std::cerr << "error: unknown mode '" << mode_name << "'\n";
    return kUsage;
  }
  std::vector<FiniteAlgebra> members;
  std::vector<std::string> labels;
  for (auto& [label, alg] : load_class_path(class_path)) {
    labels.push_back(label);
    members.push_back(std::move(alg));
  }
  AlgebraClass cls(std::move(members), std::move(labels));
  Signature sig = cls.signature();

  ConsequenceQuery q;
  q.mode = *mode;
  for (const std::string& chunk : split_premises(premises)) {
    std::string text = trimmed(chunk);
    if (text.empty()) {
      std::cerr << "error: empty premise\n";
      return kUsage;
    }
    q.premises.push_back(parse_formula(text, sig));
  }
  q.conclusion = parse_formula(trimmed(conclusion), sig);

  ConsequenceResult r = consequence(q, cls);
  if (r.holds) {
    std::cout << "holds\n";
    return kHolds;
  }
  const ConsequenceWitness& w = *r.witness;
  const FiniteAlgebra& a = cls.member(w.member);
  std::cout << "fails\nwitness: member " << w.label;
  for (const auto& [var, elem] : w.valuation)
    std::cout << ", x" << var << "=" << a.name_of(elem);
  if (w.separating)
    std::cout << ", separating element " << a.name_of(*w.separating);
  std::cout << "\n";
  return kFails;
}

int cmd_prove(const std::string& sequent_text, int depth, int mn_bound,
              const std::string& cert_path) {
  Sequent s = parse_sequent(sequent_text);
  ProveOutcome r = prove(s, depth, mn_bound);
  if (r.proof) {
    std::string cert = write_certificate(*r.proof);
    std::cout << cert;
    if (!cert_path.empty()) {
      std::ofstream out(cert_path);
      if (!out) {
        std::cerr << "error: cannot write '" << cert_path << "'\n";
        return kUsage;
      }
      out << cert;
    }
    return kHolds;
  }
  std::cout << "not-found: " << r.note << "\n";
  try {
    AlgebraClass tiny(enumerate_dn(2));
    ConsequenceQuery q{s.premises, s.conclusion, Mode::Plain};
    ConsequenceResult cr = consequence(q, tiny);
    if (!cr.holds) {
      const FiniteAlgebra& a = tiny.member(cr.witness->member);
      std::cout << "countermodel: two-element chain with";
      if (cr.witness->valuation.empty()) std::cout << " the empty valuation";
      for (const auto& [var, elem] : cr.witness->valuation)
        std::cout << " x" << var << "=" << a.name_of(elem);
      std::cout << "\n";
    } else {
      std::cout << "no size-2 countermodel; not-found is not a refutation\n";
    }
  } catch (const EvalError&) {
    // Formulas mention constants or box; the plain catalog cannot evaluate
    // them, so no countermodel is attempted.
  }
  return kFails;
}

int cmd_enumerate(int size, bool modal, const std::string& out_dir) {
  std::vector<FiniteAlgebra> catalog = enumerate_dn(size);
  std::cout << "size " << size << ": " << catalog.size() << " algebras\n";
  std::vector<FiniteAlgebra> modal_catalog;
  if (modal) {
    std::vector<FiniteAlgebra> base;
    for (const FiniteAlgebra& a : catalog) base.push_back(a.with_top());
    modal_catalog = enumerate_modal(base);
    std::cout << "modal expansions: " << modal_catalog.size() << "\n";
  }
  if (out_dir.empty()) return kHolds;

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::vector<FiniteAlgebra>& out_catalog = modal ? modal_catalog : catalog;
  std::string stem = modal ? "mdn" : "dn";
  std::vector<std::string> files;
  for (std::size_t i = 0; i < out_catalog.size(); ++i) {
    std::string name =
        stem + std::to_string(size) + "_" + std::to_string(i) + ".alg";
    write_algebra_file((fs::path(out_dir) / name).string(), out_catalog[i]);
    files.push_back(name);
  }
  std::ofstream index((fs::path(out_dir) / "index.txt").string());
  if (!index) {
    std::cerr << "error: cannot write index in '" << out_dir << "'\n";
    return kUsage;
  }
  index << "size " << size << " count " << out_catalog.size() << "\n";
  for (const std::string& f : files) index << f << "\n";
  std::cout << "wrote " << out_catalog.size() << " files to " << out_dir << "\n";
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite distributive nearlattice workbench"};
  app.require_subcommand(1);

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "Validate an algebra file");
  check->add_option("path", check_path, "algebra file")->required();

  std::string class_path, premises, conclusion, mode = "plain";
  CLI::App* cons = app.add_subcommand("consequence", "Evaluate a consequence query");
  cons->add_option("--class", class_path, "algebra file or catalog directory")
      ->required();
  cons->add_option("--premises", premises, "semicolon-separated formulas");
  cons->add_option("--conclusion", conclusion, "formula")->required();
  cons->add_option("--mode", mode, "plain | degrees | truth");

  std::string sequent_text, cert_path;
  int depth = 8, mn_bound = 3;
  CLI::App* prove_cmd = app.add_subcommand("prove", "Search for a derivation");
  prove_cmd->add_option("sequent", sequent_text, "e.g. \"m(x0,x1,x2) |- x0|x2\"")
      ->required();
  prove_cmd->add_option("--depth", depth, "search depth bound");
  prove_cmd->add_option("--mn-bound", mn_bound, "max n for the iterated-m rule");
  prove_cmd->add_option("--emit-certificate", cert_path, "write certificate here");

  int size = 0;
  bool modal = false;
  std::string out_dir;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate", "Generate catalogs up to isomorphism");
  enumerate_cmd->add_option("--size", size, "universe size")->required();
  enumerate_cmd->add_flag("--modal", modal, "expand with box tables");
  enumerate_cmd->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(check_path);
    if (*cons) return cmd_consequence(class_path, premises, conclusion, mode);
    if (*prove_cmd) return cmd_prove(sequent_text, depth, mn_bound, cert_path);
    if (*enumerate_cmd) return cmd_enumerate(size, modal, out_dir);
  } catch (const AlgebraParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormulaError& e) {
    std::cerr << "error: bad formula at position " << e.position << ": "
              << e.what() << "\n";
    return kUsage;
  } catch (const SequentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
