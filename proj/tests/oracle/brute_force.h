#ifndef COLLUSION_TESTS_ORACLE_BRUTE_FORCE_H_
#define COLLUSION_TESTS_ORACLE_BRUTE_FORCE_H_

#include <vector>

// Literal transcriptions of the four lower-bound algorithms over raw index
// tuples. Deliberately shares no code with the library: no packed codes, no
// count tables, every probability recomputed by scanning the samples.
namespace oracle {

struct Row {
  std::vector<int> x;
  int y = 0;
};

struct Instance {
  std::vector<int> dims;   // categories per feature
  int labels = 2;
  std::vector<int> fixed;  // per feature: forced category, or -1
  std::vector<Row> data;   // D^(n)
  long N = 0;
  long N_test = 0;
  double delta = 0.05;
  double epsilon = 0.0;
};

std::vector<int> G(const Instance& in, const std::vector<int>& x);

// All of X, then the distinct images under g.
std::vector<std::vector<int>> AllFeatures(const std::vector<int>& dims);
std::vector<std::vector<int>> SignalSet(const Instance& in);

double R(double delta_tilde, long k);

double FeatureLabel(const Instance& in, int y_star);
double FeatureOnly(const Instance& in, int y_star);
// `estimation` and `rest` partition in.data.
double Unplanting(const Instance& in, const std::vector<Row>& estimation,
                  const std::vector<Row>& rest, int y_star);
double Erasing(const Instance& in);

}  // namespace oracle

#endif  // COLLUSION_TESTS_ORACLE_BRUTE_FORCE_H_
