// Throughput of the OpenMP kernels against their serial references, and of
// the benchmark harness at 1 vs N jobs. Usage: bench_kernels [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>

#include "ikbqa/benchmark.hpp"
#include "ikbqa/config.hpp"
#include "ikbqa/kernels.hpp"
#include "ikbqa/workspace.hpp"

using namespace ikbqa;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-30s serial %9.3f ms  parallel %9.3f ms  speedup %.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

SparseVector random_vector(std::mt19937_64& rng, std::uint32_t dim, int nnz) {
  std::vector<double> dense(dim, 0.0);
  for (int i = 0; i < nnz; ++i) dense[rng() % dim] = static_cast<double>(rng() % 1000) / 100.0;
  return SparseVector::from_dense(dense);
}

std::string random_name(std::mt19937_64& rng) {
  static const char* words[] = {"tom", "hanks", "paris", "film", "award", "river", "city", "young", "north", "saint"};
  std::string s;
  const int n = 1 + rng() % 4;
  for (int i = 0; i < n; ++i) s += std::string(i ? " " : "") + words[rng() % 10];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) omp_set_num_threads(std::atoi(argv[1]));
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n", threads);
  std::mt19937_64 rng(1);

  std::vector<SparseVector> docs;
  for (int i = 0; i < 50000; ++i) docs.push_back(random_vector(rng, 1u << 16, 40));
  const auto query = random_vector(rng, 1u << 16, 40);
  std::vector<double> a, b;
  const double cs = best_of(5, [&] { a = cosine_batch_serial(query, docs); });
  const double cp = best_of(5, [&] { b = cosine_batch(query, docs); });
  report("cosine_batch (50k docs)", cs, cp);
  if (a != b) std::printf("  mismatch between serial and parallel cosine\n");

  std::vector<NameEntry> entries;
  for (std::uint32_t i = 0; i < 200000; ++i) {
    const auto name = random_name(rng);
    const auto q = make_name_query(name);
    entries.push_back({i, "e" + std::to_string(i), name, q.normalized, q.tokens});
  }
  const auto nq = make_name_query("tom hanks film");
  const double ns = best_of(5, [&] { a = score_names_serial(nq, entries); });
  const double np = best_of(5, [&] { b = score_names(nq, entries); });
  report("score_names (200k names)", ns, np);
  if (a != b) std::printf("  mismatch between serial and parallel name scores\n");

  const auto tmp = std::filesystem::temp_directory_path() / "ikbqa-bench-sessions";
  auto cfg = load_config(std::filesystem::path(IKBQA_DATA_DIR) / "config" / "default.json");
  cfg.sessionDir = tmp;
  cfg.cacheDir.clear();
  Workspace ws(cfg);
  auto base = load_questions(std::filesystem::path(IKBQA_DATA_DIR) / "questions" / "toy12.jsonl");
  std::vector<BenchmarkQuestion> qs;
  for (int r = 0; r < 20; ++r)
    for (auto q : base) {
      q.id += "-" + std::to_string(r);
      qs.push_back(std::move(q));
    }
  const SessionRunner runner = [&ws](const BenchmarkQuestion& q) {
    SessionRequest req;
    req.id = q.id;
    req.question = q.question;
    req.dataset = std::string(dataset_name(q.type.dataset));
    req.mode = ReviewMode::Auto;
    req.agentSpec = {{"kind", "scripted"}, {"script", q.script}};
    auto agent = ws.make_agent(req.agentSpec, ReviewMode::Auto);
    DialogueSession s = ws.prepare(std::move(req));
    ws.dataset(s.dataset).engine->run(s, *agent);
    return s;
  };
  for (const auto& q : base) ws.dataset(std::string(dataset_name(q.type.dataset)));  // load outside the timing
  const double rs = best_of(3, [&] { run_benchmark(qs, runner, {}, 1); });
  const double rp = best_of(3, [&] { run_benchmark(qs, runner, {}, threads); });
  report("run_benchmark (240 dialogues)", rs, rp);
  std::filesystem::remove_all(tmp);
}
