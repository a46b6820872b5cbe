#include "topictrend/model/fitted_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "topictrend/error.hpp"
#include "topictrend/model/softmax.hpp"

namespace topictrend::model {

void Hyperparams::validate() const {
  if (num_topics < 2) throw usage_error("InvalidArgument", "K must be >= 2");
  if (!(sigma2 > 0) || !(delta2 > 0) || !(a2 > 0)) {
    throw usage_error("InvalidArgument", "sigma2, delta2 and a2 must be > 0");
  }
  if (alpha0.size() != 1 && alpha0.size() != static_cast<std::size_t>(num_topics)) {
    throw usage_error("InvalidArgument", "alpha0 must have 1 or K entries");
  }
}

std::vector<double> Hyperparams::alpha0_vector() const {
  const auto K = static_cast<std::size_t>(std::max(num_topics, 1));
  if (alpha0.size() == K) return alpha0;
  return std::vector<double>(K, alpha0.empty() ? 0.0 : alpha0.front());
}

std::span<const double> FittedModel::natural(std::size_t topic, std::size_t slice) const {
  const std::size_t V = vocab_size();
  return {topic_natural.data() + (topic * num_slices() + slice) * V, V};
}

std::span<double> FittedModel::natural(std::size_t topic, std::size_t slice) {
  const std::size_t V = vocab_size();
  return {topic_natural.data() + (topic * num_slices() + slice) * V, V};
}

std::vector<double> FittedModel::topic_distribution(std::size_t topic, std::size_t slice) const {
  return softmax(natural(topic, slice));
}

std::vector<double> FittedModel::time_averaged_distribution(std::size_t topic) const {
  std::vector<double> avg(vocab_size(), 0.0);
  for (std::size_t t = 0; t < num_slices(); ++t) {
    const auto p = topic_distribution(topic, t);
    for (std::size_t v = 0; v < p.size(); ++v) avg[v] += p[v];
  }
  for (double& x : avg) x /= static_cast<double>(num_slices());
  return avg;
}

std::span<const double> FittedModel::alpha(std::size_t slice) const {
  return {alpha_mean.data() + slice * num_topics(), num_topics()};
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw data_error("ParseError", "bad number '" + std::string(s) + "'");
  }
  return x;
}

nlohmann::json hyperparams_to_json(const Hyperparams& h) {
  return {{"K", h.num_topics}, {"sigma2", h.sigma2}, {"delta2", h.delta2},
          {"a2", h.a2},        {"alpha0", h.alpha0}, {"seed", h.seed}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& j) {
  Hyperparams h;
  h.num_topics = j.at("K").get<int>();
  h.sigma2 = j.at("sigma2").get<double>();
  h.delta2 = j.at("delta2").get<double>();
  h.a2 = j.at("a2").get<double>();
  h.alpha0 = j.at("alpha0").get<std::vector<double>>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

nlohmann::json options_to_json(const DtmOptions& o) {
  return {{"max_iters", o.max_iters},
          {"tolerance", o.tolerance},
          {"obs_variance", o.obs_variance},
          {"initial_variance", o.initial_variance},
          {"init_lda_iters", o.init_lda_iters},
          {"init_lda_alpha", o.init_lda_alpha},
          {"init_noise", o.init_noise},
          {"estep_max_iters", o.estep_max_iters},
          {"estep_tolerance", o.estep_tolerance},
          {"mstep_max_iters", o.mstep_max_iters}};
}

DtmOptions options_from_json(const nlohmann::json& j) {
  DtmOptions o;
  o.max_iters = j.at("max_iters").get<int>();
  o.tolerance = j.at("tolerance").get<double>();
  o.obs_variance = j.at("obs_variance").get<double>();
  o.initial_variance = j.at("initial_variance").get<double>();
  o.init_lda_iters = j.at("init_lda_iters").get<int>();
  o.init_lda_alpha = j.at("init_lda_alpha").get<double>();
  o.init_noise = j.at("init_noise").get<double>();
  o.estep_max_iters = j.at("estep_max_iters").get<int>();
  o.estep_tolerance = j.at("estep_tolerance").get<double>();
  o.mstep_max_iters = j.at("mstep_max_iters").get<int>();
  return o;
}

namespace {

constexpr int kFormatVersion = 1;

void write_row(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << '\t' << format_double(v);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("ParseError", "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

void expect_fields(const std::vector<std::string_view>& fields, std::size_t n,
                   const std::filesystem::path& path) {
  if (fields.size() != n) {
    throw data_error("ParseError", path.string() + ": expected " + std::to_string(n) +
                                       " fields, found " + std::to_string(fields.size()));
  }
}

}  // namespace

void save_model(const FittedModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t K = model.num_topics();
  const std::size_t T = model.num_slices();

  nlohmann::json header;
  header["format"] = "topictrend-model";
  header["version"] = kFormatVersion;
  header["hyperparams"] = hyperparams_to_json(model.hyper);
  header["options"] = options_to_json(model.options);
  header["corpus_hash"] = model.corpus_hash;
  header["train_log"] = {{"iterations", model.train_log.iterations},
                         {"bound_history", model.train_log.bound_history},
                         {"relative_changes", model.train_log.relative_changes},
                         {"final_bound", model.train_log.final_bound},
                         {"converged", model.train_log.converged}};
  header["vocabulary"] = model.vocabulary;
  auto& periods = header["periods"] = nlohmann::json::array();
  for (const auto& p : model.periods) {
    periods.push_back({{"label", p.label}, {"start_year", p.start_year}, {"end_year", p.end_year}});
  }
  header["num_documents"] = model.documents.size();
  {
    std::ofstream out(dir / "model.json", std::ios::binary);
    out << header.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "topics.tsv", std::ios::binary);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t t = 0; t < T; ++t) {
        out << k << '\t' << t;
        write_row(out, model.natural(k, t));
        out << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "topic_variance.tsv", std::ios::binary);
    for (std::size_t t = 0; t < T; ++t) out << t << '\t' << format_double(model.topic_variance[t]) << '\n';
  }
  {
    std::ofstream out(dir / "alpha.tsv", std::ios::binary);
    for (std::size_t t = 0; t < T; ++t) {
      out << t;
      write_row(out, {model.alpha_mean.data() + t * K, K});
      write_row(out, {model.alpha_variance.data() + t * K, K});
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "documents.tsv", std::ios::binary);
    for (const auto& d : model.documents) {
      if (d.id.find_first_of("\t\n") != std::string::npos) {
        throw data_error("ParseError", "document id contains a tab or newline: " + d.id);
      }
      out << d.id << '\t' << d.year << '\t' << d.slice;
      write_row(out, d.eta);
      write_row(out, d.eta_var);
      write_row(out, d.theta);
      out << '\n';
    }
  }
}

FittedModel load_model(const std::filesystem::path& dir) {
  FittedModel model;
  nlohmann::json header;
  {
    std::ifstream in(dir / "model.json", std::ios::binary);
    if (!in) throw data_error("ParseError", "no model.json in " + dir.string());
    try {
      in >> header;
    } catch (const nlohmann::json::exception& e) {
      throw data_error("ParseError", (dir / "model.json").string() + ": " + e.what());
    }
  }
  try {
    if (header.value("format", std::string()) != "topictrend-model") {
      throw data_error("ParseError", dir.string() + " is not a model archive");
    }
    if (header.at("version").get<int>() != kFormatVersion) {
      throw data_error("ParseError", "unsupported model archive version");
    }
    model.hyper = hyperparams_from_json(header.at("hyperparams"));
    model.options = options_from_json(header.at("options"));
    model.corpus_hash = header.at("corpus_hash").get<std::string>();
    const auto& log = header.at("train_log");
    model.train_log.iterations = log.at("iterations").get<int>();
    model.train_log.bound_history = log.at("bound_history").get<std::vector<double>>();
    model.train_log.relative_changes = log.at("relative_changes").get<std::vector<double>>();
    model.train_log.final_bound = log.at("final_bound").get<double>();
    model.train_log.converged = log.at("converged").get<bool>();
    model.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& p : header.at("periods")) {
      model.periods.push_back({p.at("label").get<std::string>(), p.at("start_year").get<int>(),
                               p.at("end_year").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw data_error("ParseError", (dir / "model.json").string() + ": " + e.what());
  }

  const std::size_t K = model.num_topics();
  const std::size_t T = model.num_slices();
  const std::size_t V = model.vocab_size();

  model.topic_natural.assign(K * T * V, 0.0);
  const auto topics_path = dir / "topics.tsv";
  const auto topic_lines = read_lines(topics_path);
  if (topic_lines.size() != K * T) throw data_error("ParseError", topics_path.string() + ": wrong row count");
  for (const auto& line : topic_lines) {
    const auto f = split_tabs(line);
    expect_fields(f, V + 2, topics_path);
    const auto k = static_cast<std::size_t>(parse_double(f[0]));
    const auto t = static_cast<std::size_t>(parse_double(f[1]));
    if (k >= K || t >= T) throw data_error("ParseError", topics_path.string() + ": index out of range");
    auto row = model.natural(k, t);
    for (std::size_t v = 0; v < V; ++v) row[v] = parse_double(f[v + 2]);
  }

  const auto var_path = dir / "topic_variance.tsv";
  const auto var_lines = read_lines(var_path);
  if (var_lines.size() != T) throw data_error("ParseError", var_path.string() + ": wrong row count");
  for (const auto& line : var_lines) {
    const auto f = split_tabs(line);
    expect_fields(f, 2, var_path);
    model.topic_variance.push_back(parse_double(f[1]));
  }

  const auto alpha_path = dir / "alpha.tsv";
  const auto alpha_lines = read_lines(alpha_path);
  if (alpha_lines.size() != T) throw data_error("ParseError", alpha_path.string() + ": wrong row count");
  model.alpha_mean.assign(T * K, 0.0);
  model.alpha_variance.assign(T * K, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const auto f = split_tabs(alpha_lines[t]);
    expect_fields(f, 2 * K + 1, alpha_path);
    for (std::size_t k = 0; k < K; ++k) {
      model.alpha_mean[t * K + k] = parse_double(f[1 + k]);
      model.alpha_variance[t * K + k] = parse_double(f[1 + K + k]);
    }
  }

  const auto docs_path = dir / "documents.tsv";
  for (const auto& line : read_lines(docs_path)) {
    const auto f = split_tabs(line);
    expect_fields(f, 3 + 3 * K, docs_path);
    DocumentTopics d;
    d.id = std::string(f[0]);
    d.year = static_cast<int>(parse_double(f[1]));
    d.slice = static_cast<std::size_t>(parse_double(f[2]));
    if (d.slice >= T) throw data_error("ParseError", docs_path.string() + ": slice out of range");
    for (std::size_t k = 0; k < K; ++k) {
      d.eta.push_back(parse_double(f[3 + k]));
      d.eta_var.push_back(parse_double(f[3 + K + k]));
      d.theta.push_back(parse_double(f[3 + 2 * K + k]));
    }
    model.documents.push_back(std::move(d));
  }
  return model;
}

}  // namespace topictrend::model
