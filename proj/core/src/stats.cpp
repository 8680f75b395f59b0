#include "nilprob/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

namespace nilprob::stats {

std::pair<double, double> clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                          double confidence) {
  if (trials == 0 || successes > trials) throw InvalidArgument("clopper_pearson: need 0 <= successes <= trials, trials > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("clopper_pearson: confidence in (0, 1)");
  const double alpha = 1.0 - confidence;
  const auto x = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  const double lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
  const double hi = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
  return {lo, hi};
}

NormValue conjugacy_norm(const AlgebraGroup& g, const groups::GroupElement& x) {
  const auto size = static_cast<double>(g.class_size(x));
  return {std::log(size) / std::log(static_cast<double>(g.p())), "p"};
}

NormValue conjugacy_norm(const TableGroup& g, groups::Index x) {
  return {std::log(static_cast<double>(g.class_size(x))), "e"};
}

std::vector<groups::Index> hereditary_covering_set(const TableGroup& g, std::uint64_t n,
                                                   std::span<const groups::Index> S,
                                                   std::span<const groups::Index> subgroup) {
  std::vector<groups::Index> H(subgroup.begin(), subgroup.end());
  std::sort(H.begin(), H.end());
  std::vector<groups::Index> out;
  for (auto s : S) {
    const auto s_inv = g.inv(s);
    for (auto h : H) {
      if (g.class_size(g.mul(h, s_inv)) <= n) {
        out.push_back(h);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace nilprob::stats
