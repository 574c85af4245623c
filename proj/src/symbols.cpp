#include "qfock/symbols.hpp"

namespace qfock {

void SymbolTable::set_vector(const std::string& id, Vector v) {
  if (v.size() != d_)
    throw std::invalid_argument("symbol '" + id + "': vector dimension mismatch");
  vectors_[id] = std::move(v);
}

void SymbolTable::set_operator(const std::string& id, OneParticleOp op) {
  if (op.dim() != d_)
    throw std::invalid_argument("symbol '" + id + "': operator dimension mismatch");
  ops_[id] = std::move(op);
}

const Vector& SymbolTable::vector(const std::string& id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end())
    throw std::invalid_argument("unresolved vector symbol '" + id + "'");
  return it->second;
}

const OneParticleOp& SymbolTable::op(const std::string& id) const {
  auto it = ops_.find(id);
  if (it == ops_.end())
    throw std::invalid_argument("unresolved operator symbol '" + id + "'");
  return it->second;
}

Complex SymbolTable::vec_inner(const std::string& a, const std::string& b) const {
  return vector(a).dot(vector(b));
}

std::string SymbolTable::apply_op_to_vector(const std::string& op_id,
                                            const std::string& vec_id,
                                            bool adjoint) {
  std::string name = op_id + (adjoint ? "^H" : "") + "." + vec_id;
  if (!has_vector(name)) {
    Vector v = op(op_id).apply(vector(vec_id), adjoint);
    vectors_[name] = std::move(v);
  }
  return name;
}

std::string SymbolTable::adjoint_op(const std::string& op_id) {
  // T^H^H collapses back to T
  if (op_id.size() > 2 && op_id.compare(op_id.size() - 2, 2, "^H") == 0)
    return op_id.substr(0, op_id.size() - 2);
  std::string name = op_id + "^H";
  if (!has_op(name)) ops_[name] = op(op_id).adjoint();
  return name;
}

}  // namespace qfock
