// Scenario runner: verify | epi | compat | factor.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "moufang/scenario.hpp"

namespace {

using namespace moufang;

constexpr int kSchemaExit = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read scenario " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const RunResult& r, const std::string& output) {
  const std::string text = r.report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return kSchemaExit;
    }
    out << text;
  }
  return r.exit_code;
}

std::vector<std::string> split_coords(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Image of one element, printed as comma-separated coordinates (rows joined by ';').
int run_epi(const Scenario& s, const std::string& element, const std::string& kind) {
  ScenarioContext ctx(s);
  ModelPtr m = ctx.model();
  std::vector<Vector> rows;
  std::stringstream rs(element);
  std::string row;
  while (std::getline(rs, row, ';')) {
    Vector v;
    for (const auto& c : split_coords(row)) v.push_back(parse_element(s.field, c));
    rows.push_back(std::move(v));
  }
  const GeoElement x = m->make(kind == "line" ? Kind::line : Kind::point, rows);
  if (!m->contains(x)) throw BadParameterDomain(x.str() + " is not an element of " + m->describe());
  const GeoElement y = ctx.epimorphism()(x);
  for (std::size_t i = 0; i < y.rows.size(); ++i) std::cout << (i ? ";" : "") << vector_str(y.rows[i]);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epimorphisms of Moufang polygons: scenario checks and reductions"};
  app.require_subcommand(1);
  std::string path, output, element, kind = "point";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;

  auto add_common = [&](CLI::App* sub, bool overrides) {
    sub->add_option("scenario", path, "Scenario JSON file")->required();
    if (!overrides) return;
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--samples", samples, "Override the sample count");
    sub->add_option("--output", output, "Write the report here instead of standard output");
  };
  auto* verify = app.add_subcommand("verify", "Run every listed check");
  add_common(verify, true);
  auto* epi = app.add_subcommand("epi", "Print the image of one element");
  add_common(epi, false);
  epi->add_option("--element", element, "Comma-separated coordinates; rows of a line separated by ';'")->required();
  epi->add_option("--kind", kind, "point or line")->check(CLI::IsMember({"point", "line"}));
  auto* compat = app.add_subcommand("compat", "Run the compatibility checkers only");
  add_common(compat, true);
  auto* factor = app.add_subcommand("factor", "Check factorization through the coarsening");
  add_common(factor, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kSchemaExit;
  }

  try {
    const Scenario s = parse_scenario(read_file(path));
    if (*epi) return run_epi(s, element, kind);
    RunOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    std::string name = "verify";
    if (*compat) {
      name = "compat";
      opt.filter = is_compat_check;
    } else if (*factor) {
      name = "factor";
      opt.filter = [](const std::string& n) { return n == "factor"; };
      opt.extra = {"factor"};
    }
    return emit(run_scenario(s, name, opt), output);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchemaExit;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
