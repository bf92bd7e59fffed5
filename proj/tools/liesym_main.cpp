#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "liesym/report.hpp"

namespace {

using namespace liesym;

struct LoadedInput {
  Model model;
  ReportMeta meta;
};

LoadedInput load_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  LoadedInput out{build_model(parse_spec(text)), {}};
  std::size_t slash = path.find_last_of('/');
  out.meta.input_name = slash == std::string::npos ? path : path.substr(slash + 1);
  out.meta.input_hash = fnv1a64_hex(text);
  return out;
}

void emit(const Report& rep, bool json) {
  if (json)
    std::cout << rep.render_json().dump(2) << "\n";
  else
    std::cout << rep.render_text();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie point-symmetry analysis of polynomial PDE systems in exact rational "
               "arithmetic"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable JSON on stdout");

  std::string file;
  int degree = -1;
  bool serial = false;
  auto* sym = app.add_subcommand("symmetries", "solve the determining equations");
  sym->add_option("file", file, "input .pde file")->required();
  sym->add_option("--degree", degree, "coefficient ansatz degree (default from the file)");
  sym->add_flag("--serial", serial, "disable the parallel row assembly");

  std::vector<std::string> names;
  int oracle = 0;
  auto* ver = app.add_subcommand("verify", "check candidate fields against the system");
  ver->add_option("file", file, "input .pde file")->required();
  ver->add_option("--vfield", names, "field name or combination (repeatable; default: all)");
  ver->add_option("--oracle", oracle, "also run N numeric point-oracle trials");

  std::string from_table;
  auto* alg = app.add_subcommand("algebra", "commutators, adjoints, series, Killing form");
  alg->add_option("file", file, "input .pde file");
  alg->add_option("--from-table", from_table, "JSON structure-constants file instead of a .pde");

  int dim = 1;
  auto* opt = app.add_subcommand("optimal", "verify and normalize optimal-system candidates");
  opt->add_option("file", file, "input .pde file")->required();
  opt->add_option("--dim", dim, "subalgebra dimension (1, 2 or 3)")->required();

  std::string field_expr;
  auto* red = app.add_subcommand("reduce", "flow, invariants, transformed solutions");
  red->add_option("file", file, "input .pde file")->required();
  red->add_option("--vfield", field_expr, "field name or combination, e.g. v1+v2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (sym->parsed()) {
      LoadedInput in = load_input(file);
      int d = degree >= 0 ? degree : in.model.ansatz_degree;
      emit(symmetries_report(in.model, in.meta, d, !serial), json);
    } else if (ver->parsed()) {
      LoadedInput in = load_input(file);
      emit(verify_report(in.model, in.meta, names, oracle), json);
    } else if (alg->parsed()) {
      if (!from_table.empty()) {
        std::ifstream raw(from_table, std::ios::binary);
        if (!raw) throw ValidationError("cannot open file: " + from_table);
        std::ostringstream buf;
        buf << raw.rdbuf();
        ReportMeta meta;
        std::size_t slash = from_table.find_last_of('/');
        meta.input_name = slash == std::string::npos ? from_table : from_table.substr(slash + 1);
        meta.input_hash = fnv1a64_hex(buf.str());
        emit(algebra_report_from_table(algebra_from_json_file(from_table), meta), json);
      } else if (!file.empty()) {
        LoadedInput in = load_input(file);
        emit(algebra_report(in.model, in.meta), json);
      } else {
        throw ValidationError("algebra needs a .pde file or --from-table");
      }
    } else if (opt->parsed()) {
      LoadedInput in = load_input(file);
      emit(optimal_report(in.model, in.meta, dim), json);
    } else if (red->parsed()) {
      LoadedInput in = load_input(file);
      emit(reduce_report(in.model, in.meta, field_expr), json);
    }
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
    if (!e.hint.empty()) std::cerr << "  hint: " << e.hint << "\n";
    return 2;
  } catch (const NotSupportedError& e) {
    std::cerr << "not supported: " << e.what() << "\n";
    return 3;
  } catch (const ClosureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
