#pragma once

#include <memory>
#include <variant>

#include <Eigen/Core>

#include "krylov/spectrum.hpp"

namespace krylov {

enum class OperatorKind { diagonal, dense, gram };

/// Which square of a rectangular C a Gram operator represents.
enum class GramOrientation {
  automatic,  // C C^T when rows <= cols, else C^T C
  outer,      // C C^T
  inner,      // C^T C
};

/// Symmetric linear operator that can only be applied to column blocks.
///
/// Cheap to copy: the underlying data is shared and never mutated.
class MatrixOperator {
 public:
  static MatrixOperator diagonal(const Eigen::VectorXd& entries);
  static MatrixOperator diagonal(const Spectrum& s);

  /// Symmetrizes (A + A^T)/2. Throws std::invalid_argument if A is not
  /// square or ||A - A^T||_max > 1e-10 * max(1, ||A||_max).
  static MatrixOperator dense(const Eigen::MatrixXd& a);

  /// C C^T or C^T C applied as two rectangular products; the square is
  /// never formed.
  static MatrixOperator gram(const Eigen::MatrixXd& c,
                             GramOrientation orientation = GramOrientation::automatic);

  Eigen::Index dim() const noexcept { return dim_; }
  OperatorKind kind() const noexcept;
  /// Resolved orientation for gram operators; `automatic` otherwise.
  GramOrientation orientation() const noexcept { return orientation_; }
  bool is_negated() const noexcept { return sign_ < 0.0; }

  /// Returns A * block for an n x k block.
  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& block) const;

  /// The operator -A sharing the same storage.
  MatrixOperator negated() const;

  /// Dense n x n copy; intended for tests and small reference checks.
  Eigen::MatrixXd to_dense() const;

 private:
  struct Diagonal { Eigen::VectorXd d; };
  struct Dense { Eigen::MatrixXd a; };
  struct Gram { Eigen::MatrixXd c; };
  using Rep = std::variant<Diagonal, Dense, Gram>;

  MatrixOperator(std::shared_ptr<const Rep> rep, Eigen::Index dim,
                 GramOrientation orientation, double sign);

  std::shared_ptr<const Rep> rep_;
  Eigen::Index dim_ = 0;
  GramOrientation orientation_ = GramOrientation::automatic;
  double sign_ = 1.0;
};

}  // namespace krylov
