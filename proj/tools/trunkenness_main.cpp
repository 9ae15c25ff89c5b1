// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "trunkenness.h"

namespace {

int fail(tk_status status) {
  std::cerr << tk_status_name(status) << ": " << tk_last_error() << "\n";
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux, trunkenness, knot trunk and helicity of volume-preserving fields on S^3"};
  std::string config_path;
  std::string out_dir = "out";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  std::string task;
  bool check_only = false;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_option("--task", task,
                 "task override: flux, profile, trunkenness, knot-trunk, linking, helicity, "
                 "asymptotic-trunk, paper-suite");
  app.add_flag("--check", check_only, "validate the configuration and print its effective form");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "IoError: cannot read '" << config_path << "'\n";
      return static_cast<int>(TK_ERR_IO);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  if (check_only) {
    char* echo = nullptr;
    if (const auto s = tk_config_check(text.c_str(), &echo); s != TK_OK) return fail(s);
    std::cout << echo;
    tk_string_free(echo);
    return 0;
  }

  if (const auto s = tk_set_jobs(jobs); s != TK_OK) return fail(s);
  char* summary = nullptr;
  const auto status = tk_run_experiment(text.c_str(), out_dir.c_str(),
                                        task.empty() ? nullptr : task.c_str(),
                                        seed_opt->count() > 0 ? 1 : 0, seed, &summary);
  if (summary) {
    std::cout << summary;
    tk_string_free(summary);
  }
  if (status != TK_OK) return fail(status);
  std::cout << "reports written to " << out_dir << "\n";
  return 0;
}
