/**
 * Copyright 2026 The MediaTCP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mediatcp/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mediatcp/errors.hpp"

namespace mediatcp {

std::optional<double> jain_index(std::span<const double> q) {
  if (q.empty()) return std::nullopt;
  double sum = 0.0;
  double sq = 0.0;
  for (double v : q) {
    if (v < 0.0) throw DomainError("jain_index: negative quality entry");
    sum += v;
    sq += v * v;
  }
  if (sq == 0.0) return std::nullopt;
  return std::min(1.0, sum * sum / (static_cast<double>(q.size()) * sq));
}

double quality_delta(std::span<const double> prev_metrics, std::span<const double> next_metrics,
                     std::span<const double> q, std::span<const int> n) {
  double delta = 0.0;
  const std::size_t m_count = std::min({prev_metrics.size(), next_metrics.size(), q.size(), n.size()});
  for (std::size_t m = 0; m < m_count; ++m) {
    if (prev_metrics[m] * next_metrics[m] >= 0.0) continue;
    double amount = q[m] * n[m];
    delta += (next_metrics[m] > 0.0) ? amount : -amount;
  }
  return delta;
}

bool lemma2_condition(std::span<const double> q, std::span<const double> dq) {
  double sq = 0.0, s = 0.0, sd = 0.0, sqd = 0.0;
  const std::size_t v = std::min(q.size(), dq.size());
  for (std::size_t i = 0; i < v; ++i) {
    sq += q[i] * q[i];
    s += q[i];
    sd += dq[i];
    sqd += q[i] * dq[i];
  }
  double lhs = sq * sd;
  double rhs = s * sqd;
  return lhs >= rhs - 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

ConvergenceReport check_theorem4_conditions(const std::vector<ClassSet> &users,
                                         std::span<const MetricSamples> samples, double tol) {
  if (users.size() < 2) throw ConfigError("convergence check needs at least two users");
  ConvergenceReport report;

  const ClassSet &ref = users.front();
  for (std::size_t u = 1; u < users.size(); ++u) {
    if (users[u].size() != ref.size()) {
      report.shared_q.pass = false;
      std::ostringstream os;
      os << "users 0 and " << u << " have " << ref.size() << " and " << users[u].size()
         << " classes";
      report.shared_q.counterexamples.push_back(os.str());
      continue;
    }
    for (std::size_t m = 0; m < ref.size(); ++m) {
      if (std::abs(users[u].spec(m).q - ref.spec(m).q) > tol) {
        report.shared_q.pass = false;
        std::ostringstream os;
        os << "class " << m + 1 << ": user 0 q=" << ref.spec(m).q << ", user " << u
           << " q=" << users[u].spec(m).q;
        report.shared_q.counterexamples.push_back(os.str());
      }
    }
  }

  for (std::size_t a = 0; a < users.size(); ++a) {
    for (std::size_t b = 0; b < users.size(); ++b) {
      const ClassSet &ua = users[a];
      const ClassSet &ub = users[b];
      for (std::size_t m = 0; m < ua.size(); ++m) {
        for (std::size_t k = 0; k < ub.size(); ++k) {
          if (m == k) continue;
          if (ua.spec(m).q + tol < ub.spec(k).q) continue;
          if (ua.spec(m).n0 >= ub.spec(k).n0) continue;
          report.size_order.pass = false;
          if (report.size_order.counterexamples.size() < 20) {
            std::ostringstream os;
            os << "user " << a << " class " << m + 1 << " (q=" << ua.spec(m).q
               << ", n=" << ua.spec(m).n0 << ") vs user " << b << " class " << k + 1
               << " (q=" << ub.spec(k).q << ", n=" << ub.spec(k).n0 << ")";
            report.size_order.counterexamples.push_back(os.str());
          }
        }
      }
    }
  }

  for (const MetricSamples &s : samples) {
    for (std::size_t i = 1; i < s.metrics.size() && i < s.windows.size(); ++i) {
      if (s.metrics[i] <= s.metrics[i - 1] + tol) continue;
      report.metric_trend.pass = false;
      if (report.metric_trend.counterexamples.size() < 20) {
        std::ostringstream os;
        os << "user " << s.user << " class " << s.cls + 1 << ": metric rises from "
           << s.metrics[i - 1] << " at W=" << s.windows[i - 1] << " to " << s.metrics[i]
           << " at W=" << s.windows[i];
        report.metric_trend.counterexamples.push_back(os.str());
      }
    }
  }
  return report;
}

}  // namespace mediatcp
