// Command-line front end: one subcommand per scenario kind.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "isostokes/errors.hpp"
#include "isostokes/scenario.hpp"

namespace fs = std::filesystem;
using iso::json;

namespace {

struct Job {
  std::string path;
  iso::ScenarioResult result;
};

iso::ScenarioResult run_one(const std::string& path, const iso::RunOptions& base, const std::string& kind,
                            const std::vector<std::string>& plots, bool many) {
  iso::RunOptions opt = base;
  if (!opt.out_dir.empty() && many) opt.out_dir = (fs::path(opt.out_dir) / fs::path(path).stem()).string();
  json cfg;
  {
    std::ifstream f(path);
    if (!f) {
      iso::ScenarioResult r;
      r.exit_code = iso::ExitConfigError;
      r.summary = path + ": cannot open config";
      return r;
    }
    try {
      f >> cfg;
    } catch (const json::exception& e) {
      iso::ScenarioResult r;
      r.exit_code = iso::ExitConfigError;
      r.summary = path + ": " + e.what();
      return r;
    }
  }
  auto r = iso::run_scenario(cfg, opt, kind);
  for (const auto& p : plots) {
    if (opt.out_dir.empty()) {
      r.summary += "\n  plot '" + p + "' skipped: no --out directory";
      continue;
    }
    try {
      fs::create_directories(opt.out_dir);
      std::string file = (fs::path(opt.out_dir) / (p + ".csv")).string();
      iso::emit_plot_data(r.report, p, file);
      r.files.push_back(file);
    } catch (const iso::Error& e) {
      r.summary += "\n  plot '" + p + "': " + e.what();
      r.exit_code = std::max(r.exit_code, int(iso::ExitConfigError));
    }
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isostokes: monodromy data of linear systems with coalescing eigenvalues"};
  app.require_subcommand(1);
  std::vector<std::string> configs;
  iso::RunOptions opt;
  int jobs = 1;
  std::vector<std::string> plots;
  bool quiet = false;
  const std::vector<std::string> kinds{"rays", "cells", "formal", "levelt", "connect", "flow", "verify", "painleve-a3", "run"};
  for (const auto& k : kinds) {
    auto* sub = app.add_subcommand(k, k == "run" ? "run configs of any kind" : "run a '" + k + "' scenario");
    sub->add_option("--config", configs, "scenario JSON (repeatable)")->required()->check(CLI::ExistingFile);
    sub->add_option("--precision", opt.precision, "floating precision in bits (53 only)");
    sub->add_option("--mode", opt.mode, "exact | float | auto")->check(CLI::IsMember({"exact", "float", "auto"}));
    sub->add_option("--out", opt.out_dir, "directory for report files");
    sub->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
    sub->add_option("--plot", plots, "plot data: rays | cells-2d-slice | flow-trace | remainder-decay");
    sub->add_flag("--quiet", quiet, "print only the verdict lines");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : iso::ExitConfigError;
  }
  std::string kind = app.get_subcommands().front()->get_name();
  if (kind == "run") kind.clear();
  const bool many = configs.size() > 1;

  std::vector<iso::ScenarioResult> results(configs.size());
  std::size_t next = 0;
  while (next < configs.size()) {
    std::vector<std::future<iso::ScenarioResult>> batch;
    std::size_t start = next;
    for (; next < configs.size() && int(next - start) < jobs; ++next)
      batch.push_back(std::async(std::launch::async, run_one, configs[next], opt, kind, plots, many));
    for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }
  int rc = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& r = results[i];
    if (many) std::cout << configs[i] << "\n";
    std::string s = r.summary;
    if (quiet) s = s.substr(0, s.find('\n'));
    std::cout << s << "\n";
    if (!quiet)
      for (const auto& f : r.files) std::cout << "  wrote " << f << "\n";
    rc = std::max(rc, r.exit_code);
  }
  return rc;
}
