#include "nearlat/algebra_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nearlat {

namespace {

std::vector<std::string> tokens_of(const std::string& raw) {
  std::string line = raw;
  if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
  std::vector<std::string> out;
  std::istringstream ss(line);
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

FiniteAlgebra read_algebra(std::istream& in) {
  int n = -1;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> covers;
  std::vector<int> table;          // -1 = unset
  std::vector<int> box;            // -1 = unset
  std::map<std::string, int> constants;
  bool saw_cover = false, saw_cell = false;

  // Element tokens are names, or 0-based indices when no name matches.
  auto index_of = [&](const std::string& name, int line_no) {
    for (int i = 0; i < n; ++i)
      if (names[static_cast<std::size_t>(i)] == name) return i;
    if (!name.empty() &&
        std::all_of(name.begin(), name.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      int i = -1;
      try {
        i = std::stoi(name);
      } catch (const std::exception&) {
        i = -1;
      }
      if (i >= 0 && i < n) return i;
      throw AlgebraParseError("element index '" + name + "' out of range", line_no);
    }
    throw AlgebraParseError("unknown element '" + name + "'", line_no);
  };

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tok = tokens_of(raw);
    if (tok.empty()) continue;

    if (tok[0] == "size") {
      if (n >= 0) throw AlgebraParseError("duplicate size line", line_no);
      if (tok.size() != 2) throw AlgebraParseError("expected: size N", line_no);
      try {
        n = std::stoi(tok[1]);
      } catch (const std::exception&) {
        throw AlgebraParseError("size is not a number", line_no);
      }
      if (n < 1 || n > 64) throw AlgebraParseError("size out of range", line_no);
      continue;
    }
    if (n < 0) throw AlgebraParseError("size must come first", line_no);

    if (tok[0] == "elements") {
      if (!names.empty()) throw AlgebraParseError("duplicate elements line", line_no);
      if (static_cast<int>(tok.size()) != n + 1)
        throw AlgebraParseError("expected " + std::to_string(n) + " element names",
                                line_no);
      names.assign(tok.begin() + 1, tok.end());
      for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
          if (names[i] == names[j])
            throw AlgebraParseError("duplicate element name '" + names[i] + "'",
                                    line_no);
      continue;
    }
    if (names.empty())
      for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));

    if (tok[0] == "const") {
      if (tok.size() != 4 || tok[2] != "=")
        throw AlgebraParseError("expected: const name = element", line_no);
      if (constants.count(tok[1]))
        throw AlgebraParseError("duplicate constant '" + tok[1] + "'", line_no);
      constants[tok[1]] = index_of(tok[3], line_no);
      continue;
    }

    if (tok[0] == "box") {
      if (tok.size() != 4 || tok[2] != "=")
        throw AlgebraParseError("expected: box element = element", line_no);
      if (box.empty()) box.assign(static_cast<std::size_t>(n), -1);
      int src = index_of(tok[1], line_no);
      if (box[static_cast<std::size_t>(src)] >= 0)
        throw AlgebraParseError("duplicate box row for '" + tok[1] + "'", line_no);
      box[static_cast<std::size_t>(src)] = index_of(tok[3], line_no);
      continue;
    }

    if (tok[0] == "m") {
      if (tok.size() != 6 || tok[4] != "=")
        throw AlgebraParseError("expected: m a b c = d", line_no);
      if (saw_cover)
        throw AlgebraParseError("table cell after cover lines", line_no);
      saw_cell = true;
      if (table.empty())
        table.assign(static_cast<std::size_t>(n) * n * n, -1);
      int i = index_of(tok[1], line_no), j = index_of(tok[2], line_no),
          k = index_of(tok[3], line_no), v = index_of(tok[5], line_no);
      std::size_t cell = (static_cast<std::size_t>(i) * n + j) * n + k;
      if (table[cell] >= 0) throw AlgebraParseError("duplicate table cell", line_no);
      table[cell] = v;
      continue;
    }

    // "cover a < b"; the bare form "a < b" is accepted too.
    bool keyword_cover = tok.size() == 4 && tok[0] == "cover" && tok[2] == "<";
    if (keyword_cover || (tok.size() == 3 && tok[1] == "<")) {
      if (saw_cell) throw AlgebraParseError("cover line after table cells", line_no);
      saw_cover = true;
      std::size_t lo = keyword_cover ? 1 : 0;
      covers.emplace_back(index_of(tok[lo], line_no),
                          index_of(tok[lo + 2], line_no));
      continue;
    }

    throw AlgebraParseError("unrecognized line", line_no);
  }

  if (n < 0) throw AlgebraParseError("missing size line", 0);
  if (names.empty())
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));

  std::optional<std::vector<std::uint8_t>> box_table;
  if (!box.empty()) {
    for (int i = 0; i < n; ++i)
      if (box[static_cast<std::size_t>(i)] < 0)
        throw AlgebraParseError(
            "box table is missing a row for '" + names[static_cast<std::size_t>(i)] + "'",
            line_no);
    box_table.emplace(box.begin(), box.end());
  }

  if (saw_cell) {
    for (std::size_t c = 0; c < table.size(); ++c)
      if (table[c] < 0) {
        int k = static_cast<int>(c % n), j = static_cast<int>(c / n % n),
            i = static_cast<int>(c / n / n);
        throw AlgebraParseError("table is missing cell m " +
                                    names[static_cast<std::size_t>(i)] + " " +
                                    names[static_cast<std::size_t>(j)] + " " +
                                    names[static_cast<std::size_t>(k)],
                                line_no);
      }
    std::vector<std::uint8_t> t(table.begin(), table.end());
    try {
      return FiniteAlgebra(n, std::move(t), names, std::move(constants),
                           std::move(box_table));
    } catch (const std::invalid_argument& e) {
      throw AlgebraParseError(e.what(), line_no);
    }
  }

  try {
    return from_hasse(names, covers, std::move(constants), std::move(box_table));
  } catch (const std::exception& e) {
    throw AlgebraParseError(e.what(), line_no);
  }
}

FiniteAlgebra read_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_algebra(in);
}

void write_algebra(std::ostream& out, const FiniteAlgebra& a) {
  const int n = a.size();
  out << "size " << n << "\n";
  out << "elements";
  for (int i = 0; i < n; ++i) out << ' ' << a.names()[static_cast<std::size_t>(i)];
  out << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out << "m " << a.names()[static_cast<std::size_t>(i)] << ' '
            << a.names()[static_cast<std::size_t>(j)] << ' '
            << a.names()[static_cast<std::size_t>(k)] << " = "
            << a.names()[static_cast<std::size_t>(a.m(i, j, k))] << "\n";
  for (const auto& [name, idx] : a.constants())
    out << "const " << name << " = " << a.names()[static_cast<std::size_t>(idx)]
        << "\n";
  if (a.has_box())
    for (int i = 0; i < n; ++i)
      out << "box " << a.names()[static_cast<std::size_t>(i)] << " = "
          << a.names()[static_cast<std::size_t>(a.box(i))] << "\n";
}

void write_algebra_file(const std::string& path, const FiniteAlgebra& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_algebra(out, a);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::pair<std::string, FiniteAlgebra>> load_class_path(
    const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, FiniteAlgebra>> out;
  fs::path p(path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p))
      if (entry.is_regular_file() && entry.path().extension() == ".alg")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw std::runtime_error("directory '" + path + "' has no .alg files");
    for (const auto& f : files)
      out.emplace_back(f.stem().string(), read_algebra_file(f.string()));
    return out;
  }
  if (!fs::is_regular_file(p)) {
    fs::path alt = p;
    alt += ".alg";
    if (!fs::is_regular_file(alt))
      throw std::runtime_error("no algebra file at '" + path + "'");
    p = alt;
  }
  out.emplace_back(p.stem().string(), read_algebra_file(p.string()));
  return out;
}

}  // namespace nearlat
