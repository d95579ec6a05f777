#include "bifuse/types.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace bifuse {

namespace {

void check_dims(const Matrix& design, const Matrix& responses, int task) {
  if (design.rows() != responses.rows()) {
    throw input_error("design for task " + std::to_string(task) + " has " +
                      std::to_string(design.rows()) + " rows but responses have " +
                      std::to_string(responses.rows()));
  }
  if (!design.allFinite()) {
    throw input_error("design for task " + std::to_string(task) +
                      " contains non-finite entries");
  }
}

}  // namespace

TaskDataset::TaskDataset(Matrix design, Matrix responses) {
  if (design.rows() < 1 || design.cols() < 1 || responses.cols() < 1) {
    throw input_error("dataset requires n >= 1, p >= 1, k >= 1");
  }
  check_dims(design, responses, 0);
  if (!responses.allFinite()) {
    throw input_error("responses contain non-finite entries");
  }
  n_ = static_cast<int>(design.rows());
  p_ = static_cast<int>(design.cols());
  k_ = static_cast<int>(responses.cols());
  designs_.push_back(std::move(design));
  responses_ = std::move(responses);
}

TaskDataset::TaskDataset(std::vector<Matrix> designs, Matrix responses) {
  if (designs.empty()) throw input_error("per-task design list is empty");
  if (static_cast<int>(designs.size()) != responses.cols()) {
    throw input_error("need one design per task: got " +
                      std::to_string(designs.size()) + " designs for " +
                      std::to_string(responses.cols()) + " tasks");
  }
  if (designs[0].rows() < 1 || designs[0].cols() < 1) {
    throw input_error("dataset requires n >= 1, p >= 1, k >= 1");
  }
  for (size_t s = 0; s < designs.size(); ++s) {
    check_dims(designs[s], responses, static_cast<int>(s));
    if (designs[s].cols() != designs[0].cols()) {
      throw input_error("all designs must share the same feature count");
    }
  }
  if (!responses.allFinite()) {
    throw input_error("responses contain non-finite entries");
  }
  n_ = static_cast<int>(designs[0].rows());
  p_ = static_cast<int>(designs[0].cols());
  k_ = static_cast<int>(responses.cols());
  designs_ = std::move(designs);
  responses_ = std::move(responses);
}

const Matrix& TaskDataset::shared_design() const {
  if (!has_shared_design()) {
    throw input_error("dataset stores per-task designs, no shared design");
  }
  return designs_[0];
}

void validate_edges(const std::vector<WeightedEdge>& edges, int size,
                    const char* what) {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i < 0 || e.j <= e.i || e.j >= size) {
      throw input_error(std::string(what) + ": edge (" + std::to_string(e.i) +
                        "," + std::to_string(e.j) + ") out of bounds for size " +
                        std::to_string(size));
    }
    if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
      throw input_error(std::string(what) + ": negative or non-finite weight");
    }
    if (e.sign != 1.0 && e.sign != -1.0) {
      throw input_error(std::string(what) + ": edge sign must be -1 or +1");
    }
    if (!seen.insert({e.i, e.j}).second) {
      throw input_error(std::string(what) + ": duplicate edge (" +
                        std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    }
  }
}

std::vector<int> canonicalize_labels(const std::vector<int>& labels) {
  std::vector<int> out(labels.size());
  std::unordered_map<int, int> remap;
  int next = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

int count_clusters(const std::vector<int>& labels) {
  std::set<int> distinct(labels.begin(), labels.end());
  return static_cast<int>(distinct.size());
}

}  // namespace bifuse
