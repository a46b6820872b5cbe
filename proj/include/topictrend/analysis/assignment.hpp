#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topictrend/model/fitted_model.hpp"

namespace topictrend::analysis {

struct TopicAssignment {
  std::size_t topic_id = 0;
  // (doc_id, proportion), proportion descending, ties by doc_id.
  std::vector<std::pair<std::string, double>> docs;
  // Fraction of the topic's total proportion sum covered by `docs`.
  double mass_covered = 0.0;

  bool operator==(const TopicAssignment&) const = default;
};

// Shortest prefix of the documents, sorted by proportion (descending, then
// doc_id), whose proportion sum reaches mass * total. A relative slack of
// 1e-12 absorbs rounding in the running sum. Throws InvalidArgument unless
// 0 < mass <= 1 and ids/column have equal length.
TopicAssignment assign_column(const std::vector<std::string>& doc_ids, const std::vector<double>& column,
                              std::size_t topic_id, double mass = 0.5);

TopicAssignment assign_documents(const model::FittedModel& model, std::size_t topic_id, double mass = 0.5);

std::vector<TopicAssignment> assign_all(const model::FittedModel& model, double mass = 0.5);

// Documents of `model` that appear in no assignment, in model order.
std::vector<std::string> unassigned_documents(const model::FittedModel& model,
                                              const std::vector<TopicAssignment>& assignments);

// Topics whose assignment is empty.
std::size_t empty_topic_count(const std::vector<TopicAssignment>& assignments);

}  // namespace topictrend::analysis
