#include "mixmetric/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "mixmetric/error.hpp"
#include "mixmetric/matrix.hpp"
#include "mixmetric/metric.hpp"
#include "mixmetric/model_io.hpp"
#include "mixmetric/predictor.hpp"
#include "mixmetric/schema.hpp"

namespace mixmetric::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a sibling temporary file so a failed command never leaves a
// partial output behind.
void write_file_atomically(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    try {
      emit(out);
      out.flush();
      if (!out) throw Error("write to '" + tmp.string() + "' failed");
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into '" + path + "'");
  }
}

std::size_t parse_threads(const std::string& text) {
  if (text.empty() || text == "auto") return 0;
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.front() == '-') throw CLI::ValidationError("--threads", "expected a count or 'auto'");
  return value;
}

struct Options {
  std::string schema, data, model, out, query, a, b;
  std::string format = "text";
  std::string threads;
  std::size_t k = 5;
};

std::size_t thread_count(const Options& o) {
  if (!o.threads.empty()) return parse_threads(o.threads);
  if (const char* env = std::getenv("MIXMETRIC_THREADS")) return parse_threads(env);
  return 0;
}

std::string format_accuracy(double x) {
  std::string s = format_real(x);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void cmd_fit(const Options& o, std::ostream&) {
  const Schema schema = parse_schema(read_file(o.schema));
  const Dataset data = parse_csv(read_file(o.data), schema);
  const std::string doc = save_model(fit_metric(data));
  write_file_atomically(o.out, [&](std::ostream& out) { out << doc; });
}

void cmd_dist(const Options& o, std::ostream& out) {
  const FittedMetric metric = load_model(read_file(o.model));
  const Record a = parse_csv_record(o.a, metric.schema);
  const Record b = parse_csv_record(o.b, metric.schema);
  out << format_real(record_distance(metric, a, b)) << '\n';
}

void cmd_matrix(const Options& o, std::ostream&, std::size_t threads) {
  const FittedMetric metric = load_model(read_file(o.model));
  const Dataset data = parse_csv(read_file(o.data), metric.schema);
  const CondensedMatrix matrix = pairwise_matrix(metric, data, threads);
  write_file_atomically(o.out, [&](std::ostream& out) {
    if (o.format == "binary")
      write_matrix_binary(out, matrix);
    else
      write_matrix_text(out, matrix);
  });
}

void cmd_predict(const Options& o, std::ostream& out) {
  FittedMetric metric = load_model(read_file(o.model));
  const Dataset training = parse_csv(read_file(o.data), metric.schema);
  const Dataset queries = parse_csv(read_file(o.query), metric.schema);
  const TrainedPredictor predictor(std::move(metric), training);
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    PredictionResult result;
    try {
      result = predictor.predict(queries.row(q), o.k);
    } catch (const Error& e) {
      throw Error("query row " + std::to_string(q + 1) + ": " + e.what());
    }
    out << "label=" << result.label;
    for (const auto& [label, score] : result.class_scores) out << '\t' << label << '=' << format_real(score);
    out << '\n';
  }
}

void cmd_eval(const Options& o, std::ostream& out, std::size_t threads) {
  const Schema schema = parse_schema(read_file(o.schema));
  const Dataset data = parse_csv(read_file(o.data), schema);
  out << "accuracy=" << format_accuracy(loo_accuracy(data, o.k, threads)) << '\n';
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-data distances: probabilistic CDF distance, Gower distance, pairwise matrices and "
               "nearest-neighbour prediction.",
               "mixmetric"};
  app.require_subcommand(1);
  Options o;

  auto* fit = app.add_subcommand("fit", "Fit attribute models and write a model document");
  fit->add_option("--schema", o.schema, "Schema document")->required();
  fit->add_option("--data", o.data, "Training CSV")->required();
  fit->add_option("--out", o.out, "Model document to write")->required();

  auto* dist = app.add_subcommand("dist", "Distance between two records");
  dist->add_option("--model", o.model, "Model document")->required();
  dist->add_option("--a", o.a, "First record as a CSV row")->required();
  dist->add_option("--b", o.b, "Second record as a CSV row")->required();

  auto* matrix = app.add_subcommand("matrix", "Condensed pairwise distance matrix");
  matrix->add_option("--model", o.model, "Model document")->required();
  matrix->add_option("--data", o.data, "CSV of records")->required();
  matrix->add_option("--out", o.out, "Matrix file to write")->required();
  matrix->add_option("--format", o.format, "text or binary")->check(CLI::IsMember({"text", "binary"}));
  matrix->add_option("--threads", o.threads, "Worker threads (count or auto)");

  auto* predict = app.add_subcommand("predict", "Classify query rows by similarity-weighted kNN");
  predict->add_option("--model", o.model, "Model document (schema must name a target)")->required();
  predict->add_option("--data", o.data, "Training CSV with the target column")->required();
  predict->add_option("--query", o.query, "CSV of query rows")->required();
  predict->add_option("--k", o.k, "Number of neighbours")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Leave-one-out accuracy");
  eval->add_option("--schema", o.schema, "Schema document (must name a target)")->required();
  eval->add_option("--data", o.data, "CSV with the target column")->required();
  eval->add_option("--k", o.k, "Number of neighbours")->check(CLI::PositiveNumber);
  eval->add_option("--threads", o.threads, "Worker threads (count or auto)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  std::size_t threads = 0;
  try {
    app.parse(reversed);
    threads = thread_count(o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(fit))
      cmd_fit(o, out);
    else if (app.got_subcommand(dist))
      cmd_dist(o, out);
    else if (app.got_subcommand(matrix))
      cmd_matrix(o, out, threads);
    else if (app.got_subcommand(predict))
      cmd_predict(o, out);
    else if (app.got_subcommand(eval))
      cmd_eval(o, out, threads);
  } catch (const std::exception& e) {
    err << "mixmetric: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace mixmetric::cli
