#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exdecomp/assembly.hpp"
#include "exdecomp/errors.hpp"
#include "exdecomp/generator.hpp"
#include "exdecomp/io.hpp"

namespace fs = std::filesystem;
using namespace exdecomp;

namespace {

bool g_json_logs = false;

void log_event(const Json& j) {
  if (g_json_logs) std::cerr << j.dump() << '\n';
}

Json failure_json(const Certificate& c) {
  if (!c.failure) return nullptr;
  return {{"stage", c.failure->stage},
          {"clause", c.failure->clause},
          {"message", c.failure->message},
          {"witness", c.failure->witness}};
}

// --params accepts a path to a JSON file or an inline JSON object.
Json load_params(const std::string& arg) {
  if (fs::exists(arg)) return read_json_file(arg);
  try {
    return Json::parse(arg);
  } catch (const std::exception& e) {
    throw InputError("--params is neither a file nor JSON: " +
                     std::string(e.what()));
  }
}

int error_exit(const std::string& what) {
  std::cout << Json{{"status", "input_error"}, {"message", what}}.dump() << '\n';
  return 1;
}

// Runs one instance file and writes its certificate. Returns the exit code.
int run_one(const std::string& in, const std::string& out,
            const std::string& params, std::optional<uint64_t> seed,
            ExecutionPolicy policy, Json& summary) {
  auto t0 = std::chrono::steady_clock::now();
  Instance inst = instance_from_json(read_json_file(in));
  if (!params.empty()) apply_params(inst.params, load_params(params));
  if (seed) inst.params.seed = *seed;
  Certificate cert = run_pipeline(inst, policy);
  if (!out.empty()) write_json_file(out, to_json(cert));
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  summary = {{"instance", in},
             {"certificate", out},
             {"regime", cert.regime},
             {"status", cert.status},
             {"exit_code", exit_code(cert)},
             {"systems", cert.systems.size()},
             {"failure", failure_json(cert)},
             {"elapsed_ms", ms}};
  log_event({{"event", "run"}, {"summary", summary}});
  return exit_code(cert);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exceptional system decompositions of near two-clique graphs"};
  app.require_subcommand(1);
  app.add_flag("--json-logs", g_json_logs, "Stage traces as JSON lines on stderr");

  GeneratorSpec spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  gen->add_option("--regime", spec.regime, "noncritical | critical | few_edges")
      ->check(CLI::IsMember({"noncritical", "critical", "few_edges"}));
  gen->add_option("--n", spec.n, "Number of vertices (0 = regime default)");
  gen->add_option("--K", spec.K, "Number of clusters per side (0 = default)");
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  std::string run_in, run_out, run_params, batch_dir;
  std::optional<uint64_t> run_seed;
  bool parallel = false;
  auto* run = app.add_subcommand("run", "Decompose an instance into systems");
  run->add_option("instance", run_in, "Instance JSON");
  run->add_option("--out", run_out, "Certificate path (directory with --batch)");
  run->add_option("--params", run_params, "Parameter overrides: file or JSON");
  run->add_option("--seed", run_seed, "Override the slicing seed");
  run->add_option("--batch", batch_dir, "Run every *.json instance in a directory");
  run->add_flag("--parallel", parallel, "Use the OpenMP kernels");

  std::string ver_in, ver_cert;
  bool ver_parallel = false;
  auto* ver = app.add_subcommand("verify", "Re-verify a certificate");
  ver->add_option("instance", ver_in, "Instance JSON")->required();
  ver->add_option("certificate", ver_cert, "Certificate JSON")->required();
  ver->add_flag("--parallel", ver_parallel, "Use the OpenMP kernels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Instance inst = generate(spec);
      Json j = to_json(inst);
      if (gen_out.empty()) {
        std::cout << j.dump() << '\n';
      } else {
        write_json_file(gen_out, j);
        std::cout << Json{{"status", "ok"},
                          {"out", gen_out},
                          {"n", inst.G.n()},
                          {"edges", inst.G.num_edges()},
                          {"regime", spec.regime},
                          {"meta", inst.meta}}
                         .dump()
                  << '\n';
      }
      return 0;
    }
    if (*run) {
      ExecutionPolicy policy =
          parallel ? ExecutionPolicy::kParallel : ExecutionPolicy::kSerial;
      if (!batch_dir.empty()) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(batch_dir)) {
          std::string name = e.path().filename().string();
          if (e.path().extension() == ".json" &&
              name.find(".cert.") == std::string::npos) {
            files.push_back(e.path().string());
          }
        }
        std::sort(files.begin(), files.end());
        std::string dir = run_out.empty() ? batch_dir : run_out;
        fs::create_directories(dir);
        const int N = static_cast<int>(files.size());
        std::vector<Json> sums(N);
        std::vector<int> codes(N, 0);
        // One pipeline per task; each pipeline runs its serial kernels.
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int k = 0; k < N; ++k) {
          fs::path p(files[k]);
          std::string out =
              (fs::path(dir) / (p.stem().string() + ".cert.json")).string();
          try {
            codes[k] = run_one(files[k], out, run_params, run_seed,
                               ExecutionPolicy::kSerial, sums[k]);
          } catch (const std::exception& e) {
            codes[k] = 1;
            sums[k] = {{"instance", files[k]},
                       {"status", "input_error"},
                       {"message", e.what()}};
          }
        }
        int worst = 0;
        for (int c : codes) worst = std::max(worst, c);
        std::cout << Json{{"batch", sums}, {"exit_code", worst}}.dump() << '\n';
        return worst;
      }
      if (run_in.empty()) return error_exit("run needs an instance or --batch");
      Json summary;
      int code = run_one(run_in, run_out, run_params, run_seed, policy, summary);
      std::cout << summary.dump() << '\n';
      return code;
    }
    if (*ver) {
      Instance inst = instance_from_json(read_json_file(ver_in));
      Certificate cert = certificate_from_json(read_json_file(ver_cert), inst.G.n());
      Report rep = verify_certificate(
          inst, cert,
          ver_parallel ? ExecutionPolicy::kParallel : ExecutionPolicy::kSerial);
      Json out = {{"ok", rep.ok()}, {"report", to_json(rep)}};
      if (const ClauseResult* f = rep.first_failure()) {
        out["first_failure"] = {{"clause", f->clause}, {"detail", f->detail}};
      }
      log_event({{"event", "verify"}, {"ok", rep.ok()}});
      std::cout << out.dump() << '\n';
      return rep.ok() ? 0 : 3;
    }
  } catch (const InputError& e) {
    return error_exit(e.what());
  } catch (const std::exception& e) {
    std::cout << Json{{"status", "error"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 0;
}
