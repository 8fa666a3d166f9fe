#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mahler_cli/pipeline.hpp"

namespace {

using mahler::cli::Command;
using mahler::cli::InputError;

struct Flags {
  std::string problem_path;
  std::string out_path;
  bool no_timing = false;
  bool text = false;
  std::optional<long> precision, truncation, max_degree, theorem, trials;
  std::optional<std::string> tol, epsilon, max_height, constant_C;
  std::optional<std::uint64_t> seed;
};

void apply(const Flags& f, mahler::cli::Problem& pr) {
  nlohmann::json o = mahler::cli::options_to_json(pr.options);
  if (f.precision) o["precision_bits"] = *f.precision;
  if (f.truncation) o["truncation"] = *f.truncation;
  if (f.tol) o["tol"] = *f.tol;
  if (f.epsilon) o["epsilon"] = *f.epsilon;
  if (f.max_degree) o["max_degree"] = *f.max_degree;
  if (f.max_height) o["max_height"] = *f.max_height;
  if (f.constant_C) o["C"] = *f.constant_C;
  if (f.theorem) o["theorem"] = *f.theorem;
  if (f.seed) o["seed"] = std::to_string(*f.seed);
  if (f.trials) o["trials"] = *f.trials;
  try {
    pr.options = mahler::cli::parse_options(o, "options");
  } catch (const InputError& e) {
    static const std::map<std::string, std::string> flag = {
        {"precision_bits", "--precision"}, {"truncation", "--truncation"}, {"tol", "--tol"},
        {"epsilon", "--epsilon"},          {"max_degree", "--max-degree"}, {"max_height", "--max-height"},
        {"C", "--constant-C"},             {"theorem", "--theorem"},       {"seed", "--seed"},
        {"trials", "--trials"}};
    const std::string key = e.path().substr(e.path().find('.') + 1);
    const std::string what = e.what();
    throw InputError(flag.count(key) ? flag.at(key) : e.path(), what.substr(what.find(": ") + 2));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mahler system solver, orbit certifier, evaluator and transcendence-measure toolkit"};
  app.require_subcommand(1, 1);
  Flags f;
  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("problem", f.problem_path, "JSON problem file")->required();
    sub->add_option("--precision", f.precision, "working precision in bits");
    sub->add_option("--truncation", f.truncation, "series truncation order N");
    sub->add_option("--tol", f.tol, "evaluation tolerance (rational string)");
    sub->add_option("--epsilon", f.epsilon, "epsilon of the measure exponents");
    sub->add_option("--max-degree", f.max_degree, "relation probe degree bound D");
    sub->add_option("--max-height", f.max_height, "relation probe height bound H");
    sub->add_option("--constant-C", f.constant_C, "constant C of the measure");
    sub->add_option("--theorem", f.theorem, "restrict to one theorem")->check(CLI::IsMember({1, 2, 3}));
    sub->add_option("--seed", f.seed, "seed for measure consistency sampling");
    sub->add_option("--trials", f.trials, "measure consistency sample count");
    sub->add_flag("--no-timing", f.no_timing, "omit stage timings (byte-identical reports)");
    auto* json_flag = sub->add_flag("--json", "JSON report (default)");
    sub->add_flag("--text", f.text, "human-readable summary on stderr")->excludes(json_flag);
    sub->add_option("--out", f.out_path, "write the JSON report here instead of stdout");
  };
  for (const char* name : {"solve", "orbit", "check", "eval", "bounds", "probe", "full"})
    add_common(app.add_subcommand(name, std::string("run the ") + name + " stage(s)"));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors are input errors; --help exits 0
    int rc = app.exit(e);
    return rc == 0 ? 0 : mahler::cli::kExitInput;
  }
  const Command cmd = *mahler::cli::parse_command(app.get_subcommands().front()->get_name());

  mahler::cli::Problem pr;
  try {
    std::ifstream in(f.problem_path);
    if (!in) throw InputError("$", "cannot read " + f.problem_path);
    std::stringstream buf;
    buf << in.rdbuf();
    pr = mahler::cli::parse_problem_text(buf.str());
    apply(f, pr);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return mahler::cli::kExitInput;
  }

  mahler::cli::RunResult res = mahler::cli::run(cmd, pr, !f.no_timing);
  const std::string dumped = res.report.dump(2) + "\n";
  if (!f.out_path.empty()) {
    std::ofstream out(f.out_path);
    if (!out) {
      std::cerr << "cannot write " << f.out_path << "\n";
      return mahler::cli::kExitInput;
    }
    out << dumped;
  } else if (!f.text) {
    std::cout << dumped;
  }
  if (f.text) std::cerr << res.text;
  return res.exit_code;
}
