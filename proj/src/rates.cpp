#include "zrplab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zrplab/errors.hpp"

namespace zrplab {

RateFunction::RateFunction(Kind kind, double cap, std::vector<double> table, double lipschitz)
    : kind_(kind), cap_(cap), table_(std::move(table)), lipschitz_bound_(lipschitz) {}

RateFunction RateFunction::constant_rate() {
  return RateFunction(Kind::Constant, 1.0, {}, 1.0);
}

RateFunction RateFunction::linear() {
  return RateFunction(Kind::Linear, 0.0, {}, 1.0);
}

RateFunction RateFunction::capped(double cap) {
  if (!(cap >= 1.0)) throw Error("capped rate requires cap >= 1");
  return RateFunction(Kind::Capped, cap, {}, 1.0);
}

RateFunction RateFunction::tabulated(std::vector<double> table, double lipschitz_bound) {
  if (table.size() < 2) throw Error("tabulated rate needs entries for k = 0 and k = 1");
  double lip = lipschitz_bound;
  if (lip < 0.0) {
    lip = 0.0;
    for (std::size_t k = 0; k + 1 < table.size(); ++k)
      lip = std::max(lip, std::abs(table[k + 1] - table[k]));
  }
  return RateFunction(Kind::Tabulated, 0.0, std::move(table), lip);
}

double RateFunction::operator()(int k) const {
  if (k < 0) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return k >= 1 ? 1.0 : 0.0;
    case Kind::Linear:
      return static_cast<double>(k);
    case Kind::Capped:
      return k >= 1 ? std::min(static_cast<double>(k), cap_) : 0.0;
    case Kind::Tabulated:
      if (static_cast<std::size_t>(k) >= table_.size())
        throw TruncationTooSmall("tabulated rate queried at occupancy " + std::to_string(k) +
                                 " beyond table of size " + std::to_string(table_.size()));
      return table_[static_cast<std::size_t>(k)];
  }
  return 0.0;
}

double RateFunction::limit_rate() const {
  switch (kind_) {
    case Kind::Constant:
      return 1.0;
    case Kind::Linear:
      return std::numeric_limits<double>::infinity();
    case Kind::Capped:
      return cap_;
    case Kind::Tabulated:
      return table_.back();  // monotone tables attain their sup at the end
  }
  return 0.0;
}

int RateFunction::max_tabulated() const {
  if (kind_ == Kind::Tabulated) return static_cast<int>(table_.size()) - 1;
  return std::numeric_limits<int>::max();
}

std::string RateFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "constant";
      break;
    case Kind::Linear:
      os << "linear";
      break;
    case Kind::Capped:
      os << "capped:" << cap_;
      break;
    case Kind::Tabulated:
      os << "table:";
      for (std::size_t k = 0; k < table_.size(); ++k) {
        if (k) os << ',';
        os << table_[k];
      }
      break;
  }
  return os.str();
}

RateFunction validate_rate_function(const RateFunction& rate) {
  const int k_max = std::min(rate.max_tabulated(), 512);
  if (rate(0) != 0.0)
    throw RateValidationError(RateValidationError::Code::NonZeroAtOrigin, 0,
                              "g(0) must be 0");
  for (int k = 1; k <= k_max; ++k) {
    if (!(rate(k) > 0.0))
      throw RateValidationError(RateValidationError::Code::NotPositive, k,
                                "g(" + std::to_string(k) + ") must be positive");
  }
  for (int k = 1; k <= k_max; ++k) {
    if (rate(k) < rate(k - 1))
      throw RateValidationError(RateValidationError::Code::NotMonotone, k,
                                "g decreases at k = " + std::to_string(k));
  }
  for (int k = 0; k < k_max; ++k) {
    if (std::abs(rate(k + 1) - rate(k)) > rate.lipschitz_bound() + 1e-12)
      throw RateValidationError(RateValidationError::Code::LipschitzViolated, k + 1,
                                "|g(k+1)-g(k)| exceeds the Lipschitz bound at k = " +
                                    std::to_string(k + 1));
  }
  return rate;
}

}  // namespace zrplab
