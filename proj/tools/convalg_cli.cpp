// Command-line front end for the convolution-algebra library.
//
// Results go to stdout as JSON, diagnostics to stderr. Exit status is 0 on
// success, 1 when a computation fails and 2 for bad input.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "convalg/convalg.hpp"

namespace {

using nlohmann::json;
using namespace convalg;

constexpr int kExitComputation = 1;
constexpr int kExitInput = 2;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Channel load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_channel(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(const json& j, const std::string& out_path = {}) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError(out_path + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

json spectrum_json(const Spectrum& s) {
  json values = json::array();
  for (Index k = 0; k < s.values.size(); ++k) values.push_back(complex_json(s.values[k]));
  json clusters = json::array();
  for (std::size_t k = 0; k < s.cluster_count(); ++k)
    clusters.push_back({{"index", k}, {"eigenvalue", complex_json(s.representatives[k])},
                        {"multiplicity", s.multiplicity(k)}});
  return {{"hermitian", s.hermitian}, {"cluster_tol", s.cluster_tol}, {"values", values}, {"clusters", clusters}};
}

json witness_json(const WitnessReport& r) {
  return {{"chosen_eigenvalue", r.chosen_eigenvalue},
          {"multiplicity", r.multiplicity},
          {"detection_value", r.detection_value},
          {"verdict", std::string(to_string(r.verdict))},
          {"witness", to_json(to_file(r.witness))}};
}

/// Convolution or composition of two loaded channels, keeping the bipartite
/// structure when both operands carry compatible local dimensions.
Channel combine(const Channel& a, const Channel& b, bool convolution) {
  const SuperOp& x = as_superop(a);
  const SuperOp& y = as_superop(b);
  SuperOp result = convolution ? convolve(x, y) : compose(x, y);
  const auto* ba = std::get_if<BipartiteOp>(&a);
  const auto* bb = std::get_if<BipartiteOp>(&b);
  if (ba && bb) {
    if (convolution && ba->shape() == bb->shape()) return BipartiteOp(ba->shape(), std::move(result));
    const auto& outer = ba->shape();
    const auto& inner = bb->shape();
    if (!convolution && inner.out_a == outer.in_a && inner.out_b == outer.in_b)
      return BipartiteOp(BipartiteShape{inner.in_a, inner.in_b, outer.out_a, outer.out_b}, std::move(result));
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution algebra of quantum superoperators"};
  app.require_subcommand(1);

  std::function<void()> action;
  std::string file, file2, out_path, eig_selector = "most-negative", demo_name;
  double cluster_tol = 0.0, tol = 1e-9;
  int p = 2;

  auto* choi = app.add_subcommand("choi", "Print the Choi matrix");
  choi->add_option("file", file, "Channel file")->required();
  choi->callback([&] {
    action = [&] {
      const CMat c = to_choi(as_superop(load(file)));
      emit({{"rows", c.rows()}, {"cols", c.cols()}, {"data", matrix_to_json(c)}});
    };
  });

  for (const bool conv : {true, false}) {
    auto* sub = conv ? app.add_subcommand("conv", "Convolution product of two channels (aform output)")
                     : app.add_subcommand("compose", "Composition F1 o F2 of two channels (aform output)");
    sub->add_option("file1", file, "First channel file")->required();
    sub->add_option("file2", file2, "Second channel file")->required();
    sub->add_option("-o,--output", out_path, "Write the result here instead of stdout");
    sub->callback([&, conv] {
      action = [&, conv] { emit(to_json(to_file(combine(load(file), load(file2), conv))), out_path); };
    });
  }

  auto* spec = app.add_subcommand("spectrum", "Clustered spectrum of the Choi matrix");
  spec->add_option("file", file, "Channel file")->required();
  auto* tol_opt = spec->add_option("--cluster-tol", cluster_tol, "Cluster tolerance")->check(CLI::PositiveNumber);
  spec->callback([&] {
    action = [&] {
      const auto s = spectrum(as_superop(load(file)),
                              tol_opt->count() ? std::optional<double>(cluster_tol) : std::nullopt);
      emit(spectrum_json(s));
    };
  });

  auto* norm = app.add_subcommand("norm", "Entrywise l1 or l2 norm of the A-form");
  norm->add_option("file", file, "Channel file")->required();
  norm->add_option("--p", p, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  norm->callback([&] { action = [&] { emit({{"p", p}, {"norm", norm_lp(as_superop(load(file)), p)}}); }; });

  auto* check = app.add_subcommand("check", "Channel predicates (CP, TP, unital, unitary)");
  check->add_option("file", file, "Channel file")->required();
  check->add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
  check->callback([&] {
    action = [&] {
      const auto r = channel_checks(as_superop(load(file)), tol);
      emit({{"is_cp", r.is_cp},
            {"is_tp", r.is_tp},
            {"is_unital", r.is_unital},
            {"is_unitary", r.is_unitary},
            {"min_choi_eigenvalue", r.min_choi_eigenvalue},
            {"kraus_rank", r.kraus_rank}});
    };
  });

  auto* witness = app.add_subcommand("witness", "Nonseparability witness for a bipartite channel");
  witness->add_option("file", file, "Bipartite channel file")->required();
  witness->add_option("--eig", eig_selector, "most-negative or index:k");
  witness->callback([&] {
    action = [&] {
      const auto selector = EigenSelector::parse(eig_selector);
      const Channel ch = load(file);
      const auto* bop = std::get_if<BipartiteOp>(&ch);
      if (!bop) throw SchemaError(file + ": /dims: witness needs a bipartite channel (two local dimensions)");
      emit(witness_json(build_witness(*bop, selector)));
    };
  });

  auto* demo = app.add_subcommand("demo", "Worked examples");
  demo->add_option("name", demo_name, "Example name")->required()->check(CLI::IsMember({"cnot"}));
  demo->callback([&] {
    action = [&] {
      const BipartiteOp cnot = cnot_channel();
      const auto s = spectrum(pt_a(cnot).op());
      json j = witness_json(build_witness(cnot));
      j["channel"] = "cnot";
      j["partial_transpose_spectrum"] = spectrum_json(s)["clusters"];
      emit(j);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    action();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return 0;
}
