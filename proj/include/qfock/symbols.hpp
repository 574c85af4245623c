#pragma once

#include "qfock/types.hpp"

#include <map>
#include <string>

namespace qfock {

/// One-particle operator, dense or diagonal.  Grid projections and their
/// combinations stay diagonal; the large-scale application path relies on
/// that.
struct OneParticleOp {
  bool diagonal = false;
  Matrix dense;
  Vector diag;

  static OneParticleOp from_dense(Matrix m) {
    OneParticleOp o;
    o.dense = std::move(m);
    return o;
  }
  static OneParticleOp from_diag(Vector v) {
    OneParticleOp o;
    o.diagonal = true;
    o.diag = std::move(v);
    return o;
  }

  Index dim() const { return diagonal ? diag.size() : dense.rows(); }
  Matrix as_matrix() const {
    return diagonal ? Matrix(diag.asDiagonal()) : dense;
  }
  Vector apply(const Vector& v, bool adjoint) const {
    if (diagonal)
      return adjoint ? Vector(diag.conjugate().cwiseProduct(v))
                     : Vector(diag.cwiseProduct(v));
    return adjoint ? Vector(dense.adjoint() * v) : Vector(dense * v);
  }
  OneParticleOp adjoint() const {
    return diagonal ? from_diag(diag.conjugate()) : from_dense(dense.adjoint());
  }
};

/// Registry resolving generator ids to one-particle vectors and operators.
/// Rewrites create derived entries (T phi, T^H phi, T^H) on demand with
/// deterministic names, so identical runs build identical tables.
class SymbolTable {
 public:
  explicit SymbolTable(int d) : d_(d) {}
  int dim() const { return d_; }

  void set_vector(const std::string& id, Vector v);
  void set_operator(const std::string& id, OneParticleOp op);

  const Vector& vector(const std::string& id) const;
  const OneParticleOp& op(const std::string& id) const;
  bool has_vector(const std::string& id) const { return vectors_.count(id) > 0; }
  bool has_op(const std::string& id) const { return ops_.count(id) > 0; }

  /// <a, b>, conjugate-linear in the first argument.
  Complex vec_inner(const std::string& a, const std::string& b) const;

  /// Registers (if needed) and names T phi, or T^H phi when `adjoint`.
  std::string apply_op_to_vector(const std::string& op_id,
                                 const std::string& vec_id, bool adjoint);

  /// Registers (if needed) and names T^H.
  std::string adjoint_op(const std::string& op_id);

  const std::map<std::string, Vector>& vectors() const { return vectors_; }
  const std::map<std::string, OneParticleOp>& operators() const { return ops_; }

 private:
  int d_;
  std::map<std::string, Vector> vectors_;
  std::map<std::string, OneParticleOp> ops_;
};

}  // namespace qfock
