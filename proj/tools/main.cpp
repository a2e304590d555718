// chernoff_lab: command-line front-end. Every flag maps onto a RunConfig key;
// flags given explicitly override the same key from --config.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

using chernoff::Json;
namespace cli = chernoff::cli;

enum class Kind { text, count, real, list };

struct Flag {
  const char* name;
  const char* key;
  Kind kind;
  const char* help;
};

const std::vector<Flag> kFlags = {
    {"--scheme", "scheme", Kind::text, "uniform | alternating | dirichlet | power_law"},
    {"--n", "n", Kind::count, "number of weights (partition)"},
    {"--theta", "theta", Kind::real, "power-law exponent"},
    {"--seed", "seed", Kind::count, "seed for random schemes and states"},
    {"--concentration", "concentration", Kind::real, "Dirichlet concentration"},
    {"--t", "t", Kind::real, "time"},
    {"--ns", "ns", Kind::list, "comma-separated ascending list of n"},
    {"--family", "family", Kind::text, "implicit-euler | exact | trotter"},
    {"--matrix", "matrix", Kind::text, "generator A (or A1): inline JSON or file"},
    {"--matrix2", "matrix2", Kind::text, "second Trotter generator A2: inline JSON or file"},
    {"--L", "L", Kind::text, "measured observable: inline JSON or file"},
    {"--rho", "rho", Kind::text, "initial density matrix: inline JSON or file"},
    {"--gamma", "gamma", Kind::real, "measurement strength"},
    {"--nodes", "nodes", Kind::count, "quadrature nodes (quadrature variant)"},
    {"--variant", "variant", Kind::text, "quadrature | closed"},
    {"--law", "law", Kind::text, "uniform | triangular | gaussian | beta_symmetric"},
    {"--dx", "dx", Kind::real, "grid spacing"},
    {"--output", "output", Kind::text, "CSV output path (sidecar next to it)"},
    {"--density-out", "density_out", Kind::text, "write the final density as x,p CSV"},
};

const std::map<std::string, std::vector<std::string>> kCommandFlags = {
    {"partition", {"scheme", "n", "theta", "seed", "concentration", "output"}},
    {"converge",
     {"scheme", "theta", "seed", "concentration", "t", "ns", "family", "matrix", "matrix2", "output"}},
    {"trotter", {"scheme", "theta", "seed", "concentration", "t", "ns", "matrix", "matrix2", "output"}},
    {"quantum",
     {"scheme", "theta", "seed", "concentration", "t", "ns", "L", "rho", "gamma", "nodes", "variant",
      "output"}},
    {"clt", {"scheme", "theta", "seed", "concentration", "t", "ns", "law", "dx", "output", "density_out"}},
    {"lemma4", {"scheme", "theta", "seed", "concentration", "t", "ns", "matrix", "output"}},
};

const char* describe(const std::string& command) {
  if (command == "partition") return "generate one row of a partition scheme";
  if (command == "converge") return "product convergence sweep for a matrix family";
  if (command == "trotter") return "Trotter splitting sweep e^{tA1} e^{tA2}";
  if (command == "quantum") return "continuous-measurement channel sweep";
  if (command == "clt") return "weighted central limit sweep";
  return "uniform vs non-uniform product comparison chain";
}

Json convert(const Flag& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    switch (flag.kind) {
      case Kind::text:
        return text;
      case Kind::count: {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
      }
      case Kind::real: {
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
      }
      case Kind::list: {
        Json out = Json::array();
        std::size_t start = 0;
        while (start <= text.size()) {
          const std::size_t comma = text.find(',', start);
          const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          if (item.empty() || item[0] == '-') throw std::invalid_argument("bad item");
          out.push_back(std::stoull(item, &used));
          if (used != item.size()) throw std::invalid_argument("trailing characters");
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        return out;
      }
    }
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(std::string("invalid value for ") + flag.name + ": '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chernoff product experiments over non-uniform partitions", "chernoff_lab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON RunConfig; explicit flags take precedence")
      ->check(CLI::ExistingFile);

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [command, keys] : kCommandFlags) {
    CLI::App* sub = app.add_subcommand(command, describe(command));
    sub->fallthrough();
    subs[command] = sub;
    for (const Flag& flag : kFlags) {
      if (std::find(keys.begin(), keys.end(), flag.key) == keys.end()) continue;
      sub->add_option(flag.name, values[command + "/" + flag.key], flag.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  try {
    Json merged = Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      merged = Json::parse(in);
      if (!merged.is_object()) throw std::invalid_argument("config: expected a JSON object");
    }
    for (const auto& [command, sub] : subs) {
      if (!sub->parsed()) continue;
      merged["command"] = command;
      for (const Flag& flag : kFlags) {
        const CLI::Option* opt = sub->get_option_no_throw(flag.name);
        if (opt == nullptr || opt->count() == 0) continue;
        merged[flag.key] = convert(flag, values[command + "/" + flag.key]);
      }
    }
    const cli::RunConfig config = cli::config_from_json(merged);
    return cli::run(config, std::cout, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return cli::kExitUsage;
}
