// Standalone generator for synthetic check-in files, handy for demos and for
// exercising the full CLI pipeline without real export data.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "poixa/synthgen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic check-in generator (tab-separated, newest first)"};
  poixa::SynthConfig cfg;
  std::string out;
  app.add_option("--users", cfg.n_users, "number of users");
  app.add_option("--groups", cfg.n_groups, "number of behavior groups");
  app.add_option("--route-len", cfg.route_len, "POIs per group route");
  app.add_option("--extra-pois", cfg.extra_pois, "scattered decoy POIs");
  app.add_option("--min-steps", cfg.min_steps, "minimum visits per user");
  app.add_option("--max-steps", cfg.max_steps, "maximum visits per user");
  app.add_option("--noise", cfg.noise_prob, "probability of an off-route visit");
  app.add_option("--seed", cfg.seed, "generator seed");
  app.add_option("--out", out, "output file (default: stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = poixa::synth_checkins(cfg);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f.good()) {
        std::cerr << "error: cannot write " << out << "\n";
        return 1;
      }
      f << text;
      std::cout << "wrote " << out << "\n";
    }
  } catch (const poixa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
