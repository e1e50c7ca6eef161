#pragma once

#include <string>

namespace sumeval {

struct MetricScore {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

}  // namespace sumeval
