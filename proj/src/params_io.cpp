#include "slg/params_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "slg/sexpr.hpp"

namespace slg {

std::string format_prob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

namespace {

// Splits a record line into fields; braces, parens and quotes group.
std::vector<std::string> split_fields(const std::string& line, int lineno) {
  std::vector<std::string> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    size_t start = i;
    int depth = 0;
    bool in_quote = false;
    while (i < line.size()) {
      char c = line[i];
      if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_quote = !in_quote;
      if (!in_quote) {
        if (c == '{' || c == '(' || c == '[') ++depth;
        if (c == '}' || c == ')' || c == ']') --depth;
        if ((c == ' ' || c == '\t') && depth == 0) break;
      }
      ++i;
    }
    if (depth != 0 || in_quote)
      throw ParseError("unbalanced grouping in parameter record", lineno, static_cast<int>(start + 1));
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_prob(const std::string& s, int lineno) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad probability '" + s + "'", lineno, 1);
  }
  if (used != s.size()) throw ParseError("bad probability '" + s + "'", lineno, 1);
  return v;
}

}  // namespace

void ParamsBuilder::add_line(const std::string& line, int lineno) {
  auto f = split_fields(line, lineno);
  if (f.empty()) return;
  int lvl;
  if (f[0] == "slg1")
    lvl = 1;
  else if (f[0] == "slg2")
    lvl = 2;
  else if (f[0] == "slg3")
    lvl = 3;
  else if (f[0] == "slg4")
    lvl = 4;
  else
    throw ParseError("unknown record tag '" + f[0] + "'", lineno, 1);
  if (level_ == 0) level_ = lvl;
  if (level_ != lvl)
    throw ParseError("record level " + f[0] + " differs from the file's level", lineno, 1);

  auto need = [&](size_t n) {
    if (f.size() != n)
      throw ParseError("expected " + std::to_string(n) + " fields, got " +
                           std::to_string(f.size()),
                       lineno, 1);
  };

  switch (lvl) {
    case 1: {
      need(5);
      if (f[1] != "sub" && f[1] != "adj")
        throw ParseError("expected 'sub' or 'adj'", lineno, 1);
      auto& table = f[1] == "sub" ? l1_.sub : l1_.adj;
      if (!table[f[2]].p.emplace(f[3], parse_prob(f[4], lineno)).second)
        throw ParseError("duplicate record for " + f[2] + " -> " + f[3], lineno, 1);
      break;
    }
    case 2: {
      if (f[1] == "root") {
        need(4);
        if (!l2_.root.p.emplace(f[2], parse_prob(f[3], lineno)).second)
          throw ParseError("duplicate root record for " + f[2], lineno, 1);
        break;
      }
      need(6);
      if (f[1] != "sub" && f[1] != "adj")
        throw ParseError("expected 'sub', 'adj' or 'root'", lineno, 1);
      auto& table = f[1] == "sub" ? l2_.sub : l2_.adj;
      Slg2Key key{f[2], NodeAddress::parse(f[3])};
      if (!table[key].p.emplace(f[4], parse_prob(f[5], lineno)).second)
        throw ParseError("duplicate record for " + key.str() + " -> " + f[4], lineno, 1);
      break;
    }
    case 3: {
      if (f[1] == "root") {
        need(4);
        if (!l3_.root.p.emplace(f[2], parse_prob(f[3], lineno)).second)
          throw ParseError("duplicate root record for " + f[2], lineno, 1);
        break;
      }
      if (f[1] != "expand") throw ParseError("expected 'expand' or 'root'", lineno, 1);
      need(5);
      MetaProduction mp;
      try {
        mp = MetaProduction::parse(f[3]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno, 1);
      }
      if (!l3_.expand[f[2]].p.emplace(mp, parse_prob(f[4], lineno)).second)
        throw ParseError("duplicate expansion record for " + f[2], lineno, 1);
      break;
    }
    case 4: {
      need(4);
      if (f[1] != "frag") throw ParseError("expected 'frag'", lineno, 1);
      Fragment frag{parse_phrase_tree(f[2], lineno)};
      double prob = parse_prob(f[3], lineno);
      if (!l4_.fragments.emplace(fragment_key(frag), std::make_pair(frag, prob)).second)
        throw ParseError("duplicate fragment record", lineno, 1);
      break;
    }
  }
}

AnyParams ParamsBuilder::take() {
  switch (level_) {
    case 1:
      return std::move(l1_);
    case 2:
      return std::move(l2_);
    case 3:
      return std::move(l3_);
    case 4:
      return std::move(l4_);
    default:
      throw std::runtime_error("empty parameter file");
  }
}

AnyParams parse_params(const std::string& text) {
  auto lines = content_lines(text);
  bool lifted = false;
  size_t start = 0;
  if (!lines.empty() && lines[0].second == "lifted-slg3") {
    lifted = true;
    start = 1;
  }
  ParamsBuilder b;
  for (size_t i = start; i < lines.size(); ++i) b.add_line(lines[i].second, lines[i].first);
  AnyParams p = b.take();
  if (lifted) {
    if (b.level() != 2)
      throw std::runtime_error("lifted-slg3 file must carry slg2 records");
    return lift(std::get<Slg2Params>(p));
  }
  return p;
}

namespace {

void render_slg1(const Slg1Params& p, std::ostringstream& os) {
  for (const auto& [label, d] : p.sub)
    for (const auto& [o, v] : d.p)
      os << "slg1 sub " << label << " " << o << " " << format_prob(v) << "\n";
  for (const auto& [label, d] : p.adj)
    for (const auto& [o, v] : d.p)
      os << "slg1 adj " << label << " " << o << " " << format_prob(v) << "\n";
}

void render_slg2(const Slg2Params& p, std::ostringstream& os) {
  for (const auto& [o, v] : p.root.p)
    os << "slg2 root " << o << " " << format_prob(v) << "\n";
  for (const auto& [key, d] : p.sub)
    for (const auto& [o, v] : d.p)
      os << "slg2 sub " << key.host << " " << key.addr.str() << " " << o << " "
         << format_prob(v) << "\n";
  for (const auto& [key, d] : p.adj)
    for (const auto& [o, v] : d.p)
      os << "slg2 adj " << key.host << " " << key.addr.str() << " " << o << " "
         << format_prob(v) << "\n";
}

void render_slg3(const Slg3Params& p, std::ostringstream& os) {
  for (const auto& [o, v] : p.root.p)
    os << "slg3 root " << o << " " << format_prob(v) << "\n";
  for (const auto& [mother, d] : p.expand)
    for (const auto& [mp, v] : d.p)
      os << "slg3 expand " << mother << " " << mp.str() << " " << format_prob(v) << "\n";
}

void render_slg4(const Slg4Params& p, std::ostringstream& os) {
  for (const auto& [key, fp] : p.fragments)
    os << "slg4 frag " << key << " " << format_prob(fp.second) << "\n";
}

}  // namespace

std::string render_params(const AnyParams& p) {
  std::ostringstream os;
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, Slg1Params>) {
          render_slg1(params, os);
        } else if constexpr (std::is_same_v<T, Slg2Params>) {
          render_slg2(params, os);
        } else if constexpr (std::is_same_v<T, Slg3Params>) {
          render_slg3(params, os);
        } else if constexpr (std::is_same_v<T, LiftedSlg3>) {
          os << "lifted-slg3\n";
          render_slg2(params.base, os);
        } else {
          render_slg4(params, os);
        }
      },
      p);
  return os.str();
}

AnyParams load_params_file(const std::string& path) {
  return parse_params(read_text_file(path));
}

void save_params_file(const std::string& path, const AnyParams& p) {
  write_text_file(path, render_params(p));
}

}  // namespace slg
