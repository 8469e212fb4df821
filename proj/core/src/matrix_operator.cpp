#include "krylov/matrix_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krylov {

MatrixOperator::MatrixOperator(std::shared_ptr<const Rep> rep, Eigen::Index dim,
                               GramOrientation orientation, double sign)
    : rep_(std::move(rep)), dim_(dim), orientation_(orientation), sign_(sign) {}

MatrixOperator MatrixOperator::diagonal(const Eigen::VectorXd& entries) {
  if (entries.size() < 1) throw std::invalid_argument("empty diagonal operator");
  if (!entries.allFinite()) throw std::invalid_argument("non-finite diagonal entry");
  return MatrixOperator(std::make_shared<const Rep>(Diagonal{entries}),
                        entries.size(), GramOrientation::automatic, 1.0);
}

MatrixOperator MatrixOperator::diagonal(const Spectrum& s) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) d(static_cast<Eigen::Index>(i)) = s[i];
  return diagonal(d);
}

MatrixOperator MatrixOperator::dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("dense operator must be square and nonempty");
  }
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw std::invalid_argument("dense operator is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const Eigen::Index n = sym.rows();
  return MatrixOperator(std::make_shared<const Rep>(Dense{std::move(sym)}), n,
                        GramOrientation::automatic, 1.0);
}

MatrixOperator MatrixOperator::gram(const Eigen::MatrixXd& c,
                                    GramOrientation orientation) {
  if (c.rows() < 1 || c.cols() < 1) throw std::invalid_argument("empty Gram factor");
  if (!c.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  if (orientation == GramOrientation::automatic) {
    orientation = c.rows() <= c.cols() ? GramOrientation::outer : GramOrientation::inner;
  }
  const Eigen::Index n = orientation == GramOrientation::outer ? c.rows() : c.cols();
  return MatrixOperator(std::make_shared<const Rep>(Gram{c}), n, orientation, 1.0);
}

OperatorKind MatrixOperator::kind() const noexcept {
  switch (rep_->index()) {
    case 0: return OperatorKind::diagonal;
    case 1: return OperatorKind::dense;
    default: return OperatorKind::gram;
  }
}

Eigen::MatrixXd MatrixOperator::apply(
    const Eigen::Ref<const Eigen::MatrixXd>& block) const {
  if (block.rows() != dim_) {
    throw std::invalid_argument("operator/block dimension mismatch");
  }
  Eigen::MatrixXd out;
  if (const auto* d = std::get_if<Diagonal>(rep_.get())) {
    out = d->d.asDiagonal() * block;
  } else if (const auto* a = std::get_if<Dense>(rep_.get())) {
    out.noalias() = a->a.selfadjointView<Eigen::Lower>() * block;
  } else {
    const auto& c = std::get<Gram>(*rep_).c;
    if (orientation_ == GramOrientation::outer) {
      const Eigen::MatrixXd t = c.transpose() * block;
      out.noalias() = c * t;
    } else {
      const Eigen::MatrixXd t = c * block;
      out.noalias() = c.transpose() * t;
    }
  }
  if (sign_ < 0.0) out = -out;
  return out;
}

MatrixOperator MatrixOperator::negated() const {
  return MatrixOperator(rep_, dim_, orientation_, -sign_);
}

Eigen::MatrixXd MatrixOperator::to_dense() const {
  return apply(Eigen::MatrixXd::Identity(dim_, dim_));
}

}  // namespace krylov
