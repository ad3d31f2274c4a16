#include <cmath>
#include <stdexcept>

#include "mdet/criteria.hpp"

namespace mdet {

LogMomentSequence::LogMomentSequence(Parity parity, std::vector<int> orders,
                                     std::vector<double> log_moments, std::string source)
    : parity_(parity),
      orders_(std::move(orders)),
      log_moments_(std::move(log_moments)),
      source_(std::move(source)) {
    if (orders_.size() != log_moments_.size()) {
        throw std::invalid_argument("orders and moments differ in length");
    }
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const int expected = parity_ == Parity::AllK ? int(i) + 1 : 2 * (int(i) + 1);
        if (orders_[i] != expected) throw std::invalid_argument("moment orders are not contiguous");
        if (!std::isfinite(log_moments_[i])) throw std::invalid_argument("ln m_k must be finite");
    }
}

LogMomentSequence LogMomentSequence::from_function(const std::function<double(int)>& log_moment,
                                                   int horizon, Parity parity, std::string source) {
    std::vector<int> orders;
    std::vector<double> values;
    for (int i = 1; i <= horizon; ++i) {
        const int k = parity == Parity::AllK ? i : 2 * i;
        orders.push_back(k);
        values.push_back(log_moment(k));
    }
    return {parity, std::move(orders), std::move(values), std::move(source)};
}

LogMomentSequence LogMomentSequence::analytic(const DistributionSpec& d, int horizon, Parity parity) {
    if (d.real_valued()) parity = Parity::EvenOnly;
    return from_function([&](int k) { return log_moment(d, k).log_value; }, horizon, parity,
                         "analytic " + d.describe());
}

LogMomentSequence LogMomentSequence::product(const ProductSpec& p, int horizon) {
    const Parity parity = p.support_class() == SupportClass::Stieltjes ? Parity::AllK : Parity::EvenOnly;
    auto seq = analytic(p.factors().front(), horizon, parity);
    for (std::size_t i = 1; i < p.size(); ++i) seq = seq + analytic(p.factors()[i], horizon, parity);
    seq.source_ = p.size() == 1 ? seq.source_ : "product-composed " + p.describe();
    return seq;
}

double LogMomentSequence::at(int k) const {
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        if (orders_[i] == k) return log_moments_[i];
    }
    throw std::out_of_range("moment order not stored in sequence");
}

LogMomentSequence LogMomentSequence::operator+(const LogMomentSequence& other) const {
    if (other.parity_ != parity_ || other.orders_.size() != orders_.size()) {
        throw std::invalid_argument("sequences differ in parity or horizon");
    }
    std::vector<double> sum(log_moments_.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = log_moments_[i] + other.log_moments_[i];
    return {parity_, orders_, std::move(sum), source_ + " + " + other.source_};
}

}  // namespace mdet
