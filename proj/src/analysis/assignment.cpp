#include "topictrend/analysis/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "topictrend/error.hpp"

namespace topictrend::analysis {

TopicAssignment assign_column(const std::vector<std::string>& doc_ids, const std::vector<double>& column,
                              std::size_t topic_id, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw usage_error("InvalidArgument", "assignment mass must be in (0, 1]");
  if (doc_ids.size() != column.size()) throw usage_error("InvalidArgument", "ids and proportions differ in length");

  std::vector<std::size_t> order(column.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (column[a] != column[b]) return column[a] > column[b];
    return doc_ids[a] < doc_ids[b];
  });
  double total = 0.0;
  for (double p : column) total += p;

  TopicAssignment out;
  out.topic_id = topic_id;
  if (total <= 0.0) return out;
  const double target = mass * total - 1e-12 * total;
  double running = 0.0;
  for (std::size_t i : order) {
    out.docs.emplace_back(doc_ids[i], column[i]);
    running += column[i];
    if (running >= target) break;
  }
  out.mass_covered = running / total;
  return out;
}

TopicAssignment assign_documents(const model::FittedModel& model, std::size_t topic_id, double mass) {
  if (topic_id >= model.num_topics()) throw usage_error("InvalidArgument", "topic id out of range");
  std::vector<std::string> ids;
  std::vector<double> column;
  ids.reserve(model.documents.size());
  column.reserve(model.documents.size());
  for (const auto& d : model.documents) {
    ids.push_back(d.id);
    column.push_back(d.theta.at(topic_id));
  }
  return assign_column(ids, column, topic_id, mass);
}

std::vector<TopicAssignment> assign_all(const model::FittedModel& model, double mass) {
  std::vector<TopicAssignment> out;
  for (std::size_t k = 0; k < model.num_topics(); ++k) out.push_back(assign_documents(model, k, mass));
  return out;
}

std::vector<std::string> unassigned_documents(const model::FittedModel& model,
                                              const std::vector<TopicAssignment>& assignments) {
  std::unordered_set<std::string> seen;
  for (const auto& a : assignments) {
    for (const auto& [id, p] : a.docs) seen.insert(id);
  }
  std::vector<std::string> out;
  for (const auto& d : model.documents) {
    if (!seen.contains(d.id)) out.push_back(d.id);
  }
  return out;
}

std::size_t empty_topic_count(const std::vector<TopicAssignment>& assignments) {
  return static_cast<std::size_t>(
      std::count_if(assignments.begin(), assignments.end(), [](const auto& a) { return a.docs.empty(); }));
}

}  // namespace topictrend::analysis
