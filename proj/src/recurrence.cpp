#include "mvop/recurrence.hpp"

#include <string>

#include "mvop/errors.hpp"
#include "mvop/mindex.hpp"

namespace mvop {

RecurrenceData::RecurrenceData(int d, int N) : d_(d), N_(0) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (N < 0) throw DomainError("degree must be >= 0");
  for (int n = 1; n <= N; ++n) grow();
}

Eigen::Index RecurrenceData::level_size(int n) const {
  if (n < 0) return 0;
  return static_cast<Eigen::Index>(dims(d_, n).r);
}

std::size_t RecurrenceData::slot(int n, int i) const {
  if (n < 1 || n > N_) throw DomainError("recurrence degree " + std::to_string(n) + " not stored");
  if (i < 0 || i >= d_) throw DomainError("recurrence coordinate out of range");
  return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i);
}

void RecurrenceData::grow() {
  const int n = N_ + 1;
  const Eigen::Index rows = level_size(n - 1), cols = level_size(n);
  for (int i = 0; i < d_; ++i) {
    A_.push_back(Eigen::MatrixXd::Zero(rows, rows));
    B_.push_back(Eigen::MatrixXd::Zero(rows, cols));
  }
  lambda_.emplace_back();
  N_ = n;
}

bool RecurrenceData::has_lambda(int n) const {
  if (n < 1 || n > N_) return false;
  return lambda_[static_cast<std::size_t>(n - 1)].size() == level_size(n);
}

const Eigen::VectorXd& RecurrenceData::lambda(int n) const {
  if (!has_lambda(n)) throw DomainError("Lambda_" + std::to_string(n) + " not available");
  return lambda_[static_cast<std::size_t>(n - 1)];
}

void RecurrenceData::set_lambda(int n, Eigen::VectorXd values) {
  if (n < 1 || n > N_) throw DomainError("recurrence degree " + std::to_string(n) + " not stored");
  if (values.size() != level_size(n)) throw DomainError("Lambda has the wrong length");
  lambda_[static_cast<std::size_t>(n - 1)] = std::move(values);
}

void RecurrenceData::clear_lambda() {
  for (auto& l : lambda_) l.resize(0);
}

bool RecurrenceData::canonical() const {
  for (int n = 1; n <= N_; ++n)
    if (!has_lambda(n)) return false;
  return true;
}

Eigen::MatrixXd RecurrenceData::stacked_gram(int n) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(level_size(n), level_size(n));
  for (int i = 0; i < d_; ++i) g.noalias() += B(n, i).transpose() * B(n, i);
  return g;
}

Eigen::MatrixXd RecurrenceData::stacked(int n) const {
  const Eigen::Index rows = level_size(n - 1);
  Eigen::MatrixXd s(rows * d_, level_size(n));
  for (int i = 0; i < d_; ++i) s.middleRows(i * rows, rows) = B(n, i);
  return s;
}

RecurrenceData RecurrenceData::truncated(int n) const {
  if (n < 0 || n > N_) throw DomainError("truncation degree out of range");
  RecurrenceData out = *this;
  const std::size_t keep = static_cast<std::size_t>(n) * static_cast<std::size_t>(d_);
  out.A_.resize(keep);
  out.B_.resize(keep);
  out.lambda_.resize(static_cast<std::size_t>(n));
  out.N_ = n;
  return out;
}

bool RecurrenceData::all_finite() const {
  for (const auto& m : A_)
    if (!m.allFinite()) return false;
  for (const auto& m : B_)
    if (!m.allFinite()) return false;
  return true;
}

}  // namespace mvop
